#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <type_traits>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rggclust/quadrature.hpp"

namespace rggclust {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class DensityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Uniform {};

/// f(x) = exp(kappa * cos(2 pi x - mu)) / I0(kappa). `mu` is the phase as it
/// appears inside the cosine; the mode sits at x = mu / (2 pi).
struct VonMises {
  double kappa{0.0};
  double mu{0.0};
};

/// f(x) = 1 + sum_k cos[k-1] cos(2 pi k x) + sin[k-1] sin(2 pi k x).
struct FourierSeries {
  std::vector<double> cos;
  std::vector<double> sin;
};

using DensityKind = std::variant<Uniform, VonMises, FourierSeries>;

/// (1/2pi) * integral_0^{2pi} exp(kappa cos t) dt, by periodic quadrature.
inline double normalizer_I0(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DensityError("normalizer_I0: kappa must be finite and >= 0");
  }
  if (kappa == 0.0) return 1.0;
  // Scaled integrand exp(kappa (cos - 1)) keeps the sum O(1) for large kappa.
  const auto scaled = integrate_periodic(
      [kappa](double x) { return std::exp(kappa * (std::cos(kTwoPi * x) - 1.0)); },
      {.initial_panels = 64, .max_panels = std::size_t{1} << 20, .abs_tol = 1e-15});
  return scaled.value * std::exp(kappa);
}

/// A smooth, strictly positive period-1 probability density on [0,1).
/// Immutable after construction; derivatives are analytic.
class CircularDensity {
 public:
  static CircularDensity uniform() { return CircularDensity(Uniform{}); }
  static CircularDensity von_mises(double kappa, double mu) {
    return CircularDensity(VonMises{kappa, mu});
  }
  static CircularDensity fourier(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
    return CircularDensity(FourierSeries{std::move(cos_coeffs), std::move(sin_coeffs)});
  }

  explicit CircularDensity(DensityKind kind) : kind_(std::move(kind)) { validate_and_cache(); }

  const DensityKind& kind() const noexcept { return kind_; }
  bool is_uniform() const noexcept { return std::holds_alternative<Uniform>(kind_); }
  double sup() const noexcept { return sup_; }
  double inf() const noexcept { return inf_; }
  /// I0(kappa) for von Mises, 1 otherwise.
  double normalizer() const noexcept { return normalizer_; }

  /// f, f' or f'' at x; x is any real (the density is periodic).
  double eval(double x, int order = 0) const {
    if (order < 0 || order > 2) {
      throw DensityError("CircularDensity::eval: order must be 0, 1 or 2, got " +
                         std::to_string(order));
    }
    double d[3];
    derivatives(x, d);
    return d[order];
  }

  double operator()(double x) const {
    if (const auto* vm = std::get_if<VonMises>(&kind_)) {
      return std::exp(vm->kappa * (std::cos(kTwoPi * x - vm->mu) - 1.0)) / scaled_normalizer_;
    }
    if (is_uniform()) return 1.0;
    double d[3];
    derivatives(x, d);
    return d[0];
  }

  /// Writes f, f', f'' at x into out[0..2].
  void derivatives(double x, double out[3]) const {
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Uniform>) {
            out[0] = 1.0;
            out[1] = 0.0;
            out[2] = 0.0;
          } else if constexpr (std::is_same_v<K, VonMises>) {
            const double theta = kTwoPi * x - k.mu;
            const double s = std::sin(theta);
            const double c = std::cos(theta);
            const double f = std::exp(k.kappa * (c - 1.0)) / scaled_normalizer_;
            const double ks = kTwoPi * k.kappa * s;
            out[0] = f;
            out[1] = -f * ks;
            out[2] = f * (ks * ks - kTwoPi * kTwoPi * k.kappa * c);
          } else {
            double f = 1.0, fp = 0.0, fpp = 0.0;
            const std::size_t order = std::max(k.cos.size(), k.sin.size());
            for (std::size_t j = 1; j <= order; ++j) {
              const double a = j <= k.cos.size() ? k.cos[j - 1] : 0.0;
              const double b = j <= k.sin.size() ? k.sin[j - 1] : 0.0;
              const double w = kTwoPi * static_cast<double>(j);
              const double c = std::cos(w * x);
              const double s = std::sin(w * x);
              f += a * c + b * s;
              fp += w * (-a * s + b * c);
              fpp += -w * w * (a * c + b * s);
            }
            out[0] = f;
            out[1] = fp;
            out[2] = fpp;
          }
        },
        kind_);
  }

 private:
  void validate_and_cache() {
    if (auto* vm = std::get_if<VonMises>(&kind_)) {
      if (!std::isfinite(vm->kappa) || vm->kappa < 0.0) {
        throw DensityError("von_mises: kappa must be finite and >= 0");
      }
      if (vm->kappa > 500.0) throw DensityError("von_mises: kappa > 500 is not supported");
      if (!std::isfinite(vm->mu)) throw DensityError("von_mises: mu must be finite");
      normalizer_ = normalizer_I0(vm->kappa);
      scaled_normalizer_ = normalizer_ * std::exp(-vm->kappa);
      sup_ = 1.0 / scaled_normalizer_;
      inf_ = std::exp(-2.0 * vm->kappa) / scaled_normalizer_;
    } else if (auto* fs = std::get_if<FourierSeries>(&kind_)) {
      double slope_bound = 0.0;
      for (std::size_t j = 1; j <= std::max(fs->cos.size(), fs->sin.size()); ++j) {
        const double a = j <= fs->cos.size() ? fs->cos[j - 1] : 0.0;
        const double b = j <= fs->sin.size() ? fs->sin[j - 1] : 0.0;
        if (!std::isfinite(a) || !std::isfinite(b)) {
          throw DensityError("fourier: coefficients must be finite");
        }
        slope_bound += kTwoPi * static_cast<double>(j) * (std::abs(a) + std::abs(b));
      }
      // Grid extrema widened by the Lipschitz bound over half a grid cell.
      constexpr int kGrid = 10000;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int i = 0; i < kGrid; ++i) {
        const double v = eval(static_cast<double>(i) / kGrid, 0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double slack = slope_bound * 0.5 / kGrid;
      inf_ = lo - slack;
      sup_ = hi + slack;
      if (!(inf_ > 0.0)) {
        throw DensityError("fourier: density is not bounded away from zero (lower bound " +
                           std::to_string(inf_) + ")");
      }
    }
  }

  DensityKind kind_;
  double sup_{1.0};
  double inf_{1.0};
  double normalizer_{1.0};
  double scaled_normalizer_{1.0};
};

// E[g(X)] for X ~ f is the integral of g f over the circle.
struct DensityMoments {
  double e_f2{0.0};         // int f^3         = E[f^2(X)]
  double e_fp2{0.0};        // int f'^2 f      = E[f'(X)^2]
  double e_ffpp{0.0};       // int f^2 f''     = E[f(X) f''(X)]
  double e_fp2_2ffpp{0.0};  // int (f'^2 + 2 f f'') f
};

struct AsymptoticConstants {
  double a_f{0.0};
  double b_f{0.0};
  double c_f{0.0};
  double sigma1_sq{0.0};
  DensityMoments moments;
};

namespace detail {

inline PeriodicQuadratureOptions moment_quadrature(double scale) {
  // Absolute 1e-12 for O(1) integrals, relative for very large ones.
  return {.initial_panels = 64,
          .max_panels = std::size_t{1} << 20,
          .abs_tol = std::max(1e-12, 1e-13 * std::abs(scale))};
}

template <typename G>
double expect(const CircularDensity& f, G&& g) {
  auto integrand = [&](double x) {
    double d[3];
    f.derivatives(x, d);
    return g(d[0], d[1], d[2]) * d[0];
  };
  // Coarse pass sets the scale for the convergence threshold.
  const double scale = periodic_trapezoid(integrand, 64);
  return integrate_periodic(integrand, moment_quadrature(scale)).value;
}

}  // namespace detail

inline DensityMoments moments(const CircularDensity& f) {
  DensityMoments m;
  if (f.is_uniform()) {
    m.e_f2 = 1.0;
    return m;
  }
  m.e_f2 = detail::expect(f, [](double v, double, double) { return v * v; });
  m.e_fp2 = detail::expect(f, [](double, double d1, double) { return d1 * d1; });
  m.e_ffpp = detail::expect(f, [](double v, double, double d2) { return v * d2; });
  m.e_fp2_2ffpp =
      detail::expect(f, [](double v, double d1, double d2) { return d1 * d1 + 2.0 * v * d2; });
  return m;
}

/// Density-level factor -3 c_f f^2 - 2 f f'' - f'^2 of the first projection
/// of the clustering kernel (multiply by r^4/4 for the projection itself).
inline double h1_leading(const CircularDensity& f, double x, double c_f) {
  double d[3];
  f.derivatives(x, d);
  return -3.0 * c_f * d[0] * d[0] - 2.0 * d[0] * d[2] - d[1] * d[1];
}

inline AsymptoticConstants constants(const CircularDensity& f) {
  AsymptoticConstants c;
  c.moments = moments(f);
  if (f.is_uniform()) return c;
  const auto& m = c.moments;
  c.a_f = 5.0 * m.e_fp2_2ffpp / (12.0 * m.e_f2);
  c.b_f = 4.0 * m.e_ffpp / (3.0 * m.e_f2);
  c.c_f = m.e_fp2 / m.e_f2;
  const double cf = c.c_f;
  c.sigma1_sq = detail::expect(f, [cf](double v, double d1, double d2) {
    const double t = -3.0 * cf * v * v - 2.0 * v * d2 - d1 * d1;
    return t * t;
  });
  return c;
}

// ---------------------------------------------------------------------------
// JSON density specs:
//   {"kind":"uniform"}
//   {"kind":"von_mises","kappa":K,"mu":M}
//   {"kind":"fourier","cos":[...],"sin":[...]}
// Unknown keys are rejected.

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw DensityError(where + ": unknown key \"" + key + "\"");
  }
}

}  // namespace detail

inline CircularDensity density_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DensityError("density spec must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw DensityError("density spec requires a string \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  try {
    if (kind == "uniform") {
      detail::reject_unknown_keys(j, {"kind"}, "uniform density");
      return CircularDensity::uniform();
    }
    if (kind == "von_mises") {
      detail::reject_unknown_keys(j, {"kind", "kappa", "mu"}, "von_mises density");
      return CircularDensity::von_mises(j.at("kappa").get<double>(), j.value("mu", 0.0));
    }
    if (kind == "fourier") {
      detail::reject_unknown_keys(j, {"kind", "cos", "sin"}, "fourier density");
      return CircularDensity::fourier(j.value("cos", std::vector<double>{}),
                                      j.value("sin", std::vector<double>{}));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DensityError("density spec: " + std::string(e.what()));
  }
  throw DensityError("unknown density kind \"" + kind + "\"");
}

inline nlohmann::json density_to_json(const CircularDensity& f) {
  return std::visit(
      [](const auto& k) -> nlohmann::json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Uniform>) {
          return {{"kind", "uniform"}};
        } else if constexpr (std::is_same_v<K, VonMises>) {
          return {{"kind", "von_mises"}, {"kappa", k.kappa}, {"mu", k.mu}};
        } else {
          return {{"kind", "fourier"}, {"cos", k.cos}, {"sin", k.sin}};
        }
      },
      f.kind());
}

}  // namespace rggclust
