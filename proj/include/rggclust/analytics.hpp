#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rggclust/density.hpp"
#include "rggclust/geometry.hpp"
#include "rggclust/parallel.hpp"
#include "rggclust/quadrature.hpp"
#include "rggclust/rng.hpp"
#include "rggclust/sampler.hpp"

namespace rggclust {

// ---------------------------------------------------------------------------
// Exact subgraph probabilities. Every quantity is an integral of the periodic
// density over arcs; inner arcs use composite Gauss-Legendre, the outer
// average over X_1 uses the periodic trapezoid rule.

/// Mass of f on the arc [lo, hi] (periodic extension, hi - lo <= 1).
inline double arc_mass(const CircularDensity& f, double lo, double hi) {
  if (f.is_uniform()) return hi - lo;
  return gauss_legendre([&f](double y) { return f(y); }, lo, hi);
}

/// P(A_12 = 1 | X_1 = x1) = mass of f on [x1 - r, x1 + r].
inline double edge_probability_given(const CircularDensity& f, double r, double x1) {
  if (!(r >= 0.0 && r <= 0.5)) throw std::invalid_argument("edge_probability_given: r out of range");
  return arc_mass(f, x1 - r, x1 + r);
}

/// P(A_12 A_13 A_23 = 1 | X_1 = x1), split by which side of x1 the vertex X_2 lies:
///   int_{x1-r}^{x1} f(y) F[x1-r, y+r] dy + int_{x1}^{x1+r} f(y) F[y-r, x1+r] dy.
inline double triangle_probability_given(const CircularDensity& f, double r, double x1) {
  if (r == 0.0) return 0.0;
  const double left = gauss_legendre(
      [&](double y) { return f(y) * arc_mass(f, x1 - r, y + r); }, x1 - r, x1);
  const double right = gauss_legendre(
      [&](double y) { return f(y) * arc_mass(f, y - r, x1 + r); }, x1, x1 + r);
  return left + right;
}

/// E[A_12 A_23 | X_1 = x1] = int_{x1-r}^{x1+r} f(y) P(edge | y) dy.
inline double path_through_neighbor_given(const CircularDensity& f, double r, double x1) {
  if (r == 0.0) return 0.0;
  return gauss_legendre([&](double y) { return f(y) * edge_probability_given(f, r, y); }, x1 - r,
                        x1 + r);
}

namespace detail {

// E_f[g(X)] where g(x) is O(scale); integrates g/scale so the absolute
// convergence threshold acts relative to the quantity's size.
template <typename G>
double expect_scaled(const CircularDensity& f, double scale, G&& g,
                     const PeriodicQuadratureOptions& opt = {}) {
  auto integrand = [&](double x) { return g(x) / scale * f(x); };
  return integrate_periodic(integrand, opt).value * scale;
}

inline void require_triangle_radius(double r, const char* where) {
  if (!(r >= 0.0 && r <= 0.25)) {
    throw std::invalid_argument(std::string(where) + ": requires 0 <= r <= 0.25");
  }
}

}  // namespace detail

/// E[A_12 A_13] = int (P(edge | x))^2 f(x) dx.
inline double exact_twopath_probability(const CircularDensity& f, double r) {
  if (!(r >= 0.0 && r <= 0.5)) throw std::invalid_argument("exact_twopath_probability: bad r");
  if (r == 0.0) return 0.0;
  if (f.is_uniform()) return 4.0 * r * r;
  return detail::expect_scaled(f, r * r, [&](double x) {
    const double e = edge_probability_given(f, r, x);
    return e * e;
  });
}

/// E[A_12 A_13 A_23] by nested quadrature; r <= 1/4 so every arc sits in one period.
inline double exact_triangle_probability(const CircularDensity& f, double r) {
  detail::require_triangle_radius(r, "exact_triangle_probability");
  if (r == 0.0) return 0.0;
  return detail::expect_scaled(f, r * r,
                               [&](double x) { return triangle_probability_given(f, r, x); });
}

// Leading expansions in r.
inline double edge_probability_expansion(const CircularDensity& f, double r, double x1) {
  return 2.0 * r * f.eval(x1, 0) + f.eval(x1, 2) * r * r * r / 3.0;
}
inline double twopath_probability_expansion(const DensityMoments& m, double r) {
  return 4.0 * r * r * m.e_f2 + 4.0 * std::pow(r, 4) / 3.0 * m.e_ffpp;
}
inline double triangle_probability_expansion(const DensityMoments& m, double r) {
  return 3.0 * r * r * m.e_f2 + 5.0 * std::pow(r, 4) / 12.0 * m.e_fp2_2ffpp;
}
inline double mu_n_expansion(const AsymptoticConstants& c, double r) {
  return (3.0 + r * r * c.a_f) / (4.0 + r * r * c.b_f);
}

struct MuN {
  double exact{0.0};
  double expansion{0.0};
};

/// mu_n = E[triangle] / E[2-path] both exactly and from the r^2 expansion.
inline MuN mu_n(const CircularDensity& f, const AsymptoticConstants& c, double r) {
  if (!(r > 0.0 && r <= 0.25)) throw std::invalid_argument("mu_n: requires 0 < r <= 0.25");
  return {exact_triangle_probability(f, r) / exact_twopath_probability(f, r),
          mu_n_expansion(c, r)};
}

/// E[h_1(X)^2] at finite r, with h_1(x) = E[h(X_1,X_2,X_3) | X_1 = x].
/// Diagnostic companion to the leading-order r^8 sigma_1^2 / 16.
inline double projection_h1_variance(const CircularDensity& f, double r, double mu) {
  detail::require_triangle_radius(r, "projection_h1_variance");
  const double scale = std::pow(r, 8);
  // h_1 is a difference of O(r^2) terms, so h_1^2 / r^8 carries rounding noise
  // of order 1e-16 / r^2; a fixed 1e-12 stopping rule would chase that noise.
  PeriodicQuadratureOptions opt;
  opt.abs_tol = std::max(1e-12, 1e-13 / (r * r));
  return detail::expect_scaled(f, scale, [&](double x) {
    const double e = edge_probability_given(f, r, x);
    const double h1 = triangle_probability_given(f, r, x) -
                      mu / 3.0 * (e * e + 2.0 * path_through_neighbor_given(f, r, x));
    return h1 * h1;
  }, opt);
}

// ---------------------------------------------------------------------------
// Regimes and standardization.

enum class Regime { DenseI, IntermediateII, SparseIII, Degenerate, Ambiguous };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::DenseI: return "DenseI";
    case Regime::IntermediateII: return "IntermediateII";
    case Regime::SparseIII: return "SparseIII";
    case Regime::Degenerate: return "Degenerate";
    case Regime::Ambiguous: return "Ambiguous";
  }
  return "?";
}

inline Regime regime_from_string(const std::string& s) {
  if (s == "DenseI" || s == "I" || s == "dense") return Regime::DenseI;
  if (s == "IntermediateII" || s == "II" || s == "intermediate") return Regime::IntermediateII;
  if (s == "SparseIII" || s == "III" || s == "sparse") return Regime::SparseIII;
  throw std::invalid_argument("unknown regime \"" + s + "\"");
}

struct RegimeThresholds {
  double dense_min_nr5{10.0};
  double intermediate_min_nr{10.0};
  double intermediate_max_nr5{0.1};
  double sparse_max_nr{0.1};
  double sparse_min_n3r2{10.0};
};

struct RegimeDiagnostics {
  Regime regime{Regime::Ambiguous};
  double n_r5{0.0};
  double n_r{0.0};
  double n3_r2{0.0};
};

inline RegimeDiagnostics classify_regime(std::size_t n, double r, const CircularDensity& f,
                                         const AsymptoticConstants& c,
                                         const RegimeThresholds& t = {}) {
  const double nd = static_cast<double>(n);
  RegimeDiagnostics d{Regime::Ambiguous, nd * std::pow(r, 5), nd * r, nd * nd * nd * r * r};
  if (d.n3_r2 < t.sparse_min_n3r2) {
    d.regime = Regime::Degenerate;
  } else if (d.n_r5 >= t.dense_min_nr5 && c.sigma1_sq > 0.0 && !f.is_uniform()) {
    d.regime = Regime::DenseI;
  } else if (d.n_r >= t.intermediate_min_nr && (d.n_r5 <= t.intermediate_max_nr5 || f.is_uniform())) {
    d.regime = Regime::IntermediateII;
  } else if (d.n_r <= t.sparse_max_nr) {
    d.regime = Regime::SparseIII;
  }
  return d;
}

/// Leading-order full-kernel variance E[h^2] ~ (3 r^2 / 8) E[f^2].
inline double sigma3n_sq_leading(double r, double e_f2) { return 3.0 * r * r / 8.0 * e_f2; }

struct StandardizationInputs {
  double e_f2{1.0};
  double sigma1_sq{0.0};
  std::optional<double> sigma2n_sq;
};

/// Multiplier s such that z = s (C_n - mu_n).
inline double clt_scaling(Regime regime, std::size_t n, double r, const StandardizationInputs& in) {
  const double nd = static_cast<double>(n);
  switch (regime) {
    case Regime::DenseI:
      if (!(in.sigma1_sq > 0.0)) {
        throw std::domain_error("Case I standardization requires sigma_1^2 > 0");
      }
      return 16.0 * std::sqrt(nd) * in.e_f2 / (3.0 * r * r * std::sqrt(in.sigma1_sq));
    case Regime::IntermediateII:
      if (!in.sigma2n_sq || !(*in.sigma2n_sq > 0.0)) {
        throw std::domain_error("Case II standardization requires a positive sigma_2n^2 estimate");
      }
      return 2.0 * std::sqrt(2.0) * nd * r * r * in.e_f2 / (3.0 * std::sqrt(*in.sigma2n_sq));
    case Regime::SparseIII:
      return 8.0 * nd * std::sqrt(nd) * r * std::sqrt(in.e_f2) / 3.0;
    default:
      throw std::domain_error(std::string("no CLT standardization for regime ") + to_string(regime));
  }
}

inline double standardize(double clustering, double mu, Regime regime, std::size_t n, double r,
                          const StandardizationInputs& in) {
  return clt_scaling(regime, n, r, in) * (clustering - mu);
}

// Normalizations of U_n = sum over ordered distinct triples of h, the
// numerator of C_n - mu_n. Dividing the 2-path normalizer 4 n^3 r^2 E[f^2]
// by each of them reproduces clt_scaling.
inline double twopath_normalizer(double n, double r, double e_f2) { return 4.0 * n * n * n * r * r * e_f2; }
/// U_n ~ 3 n^2 sum_i h_1(X_i), sd(h_1) = r^4 sigma_1 / 4.
inline double ustat_sd_case_I(double n, double r, double sigma1) {
  return 3.0 * n * n * (std::sqrt(n) * std::pow(r, 4) * sigma1 / 4.0);
}
/// U_n ~ 3 n sum_{i != j} h_2, with sd 2 n sigma_2n / sqrt 2.
inline double ustat_sd_case_II(double n, double sigma2n) {
  return 3.0 * n * (2.0 * n * sigma2n / std::sqrt(2.0));
}
/// sd(U_n) = sqrt(6) n^{3/2} sigma_3n.
inline double ustat_sd_case_III(double n, double r, double e_f2) {
  return std::sqrt(6.0) * std::pow(n, 1.5) * std::sqrt(sigma3n_sq_leading(r, e_f2));
}

// ---------------------------------------------------------------------------
// Kernel and the second-projection variance.

struct KernelValue {
  double value{0.0};
  int triangle{0};
  int path_12_13{0};  // A12 A13
  int path_12_23{0};  // A12 A23
  int path_13_23{0};  // A13 A23
};

/// h = A12 A13 A23 - (mu/3)(A12 A13 + A12 A23 + A13 A23). Positions are any reals.
inline KernelValue kernel_h(double x1, double x2, double x3, double r, double mu) {
  const double a = wrap_unit(x1), b = wrap_unit(x2), c = wrap_unit(x3);
  const int a12 = circle_distance(a, b) <= r;
  const int a13 = circle_distance(a, c) <= r;
  const int a23 = circle_distance(b, c) <= r;
  KernelValue k;
  k.triangle = a12 & a13 & a23;
  k.path_12_13 = a12 & a13;
  k.path_12_23 = a12 & a23;
  k.path_13_23 = a13 & a23;
  k.value = k.triangle - mu / 3.0 * (k.path_12_13 + k.path_12_23 + k.path_13_23);
  return k;
}

struct McEstimate {
  double estimate{0.0};
  double standard_error{0.0};
  std::size_t samples{0};
};

inline constexpr std::size_t kSigma2nShards = 64;

/// sigma_2n^2 = E[h(X1,X2,X3) h(X1,X2,X4)] by localized importance sampling.
/// A nonzero product forces X2, X3, X4 into [X1 - 2r, X1 + 2r], so they are
/// drawn from f restricted to that arc and weighted by the arc mass cubed.
/// Work is split into fixed shards with their own child streams, so the
/// result is independent of `threads`.
inline McEstimate sigma2n_sq_mc(const CircularDensity& f, double r, double mu, std::size_t m,
                                const RngStream& stream, unsigned threads = 1) {
  if (!(r > 0.0 && r <= 0.1)) throw std::invalid_argument("sigma2n_sq_mc: requires 0 < r <= 0.1");
  if (m < 100000) throw std::invalid_argument("sigma2n_sq_mc: requires at least 1e5 samples");
  struct Partial {
    double sum{0.0};
    double sum_sq{0.0};
  };
  // Accumulate w / (4r)^3 to keep terms O(1).
  const double unit = 64.0 * r * r * r;
  std::vector<Partial> partial(kSigma2nShards);
  parallel_for(kSigma2nShards, threads, [&](std::size_t shard) {
    RngStream rng = stream.child(shard);
    const std::size_t begin = shard * m / kSigma2nShards;
    const std::size_t end = (shard + 1) * m / kSigma2nShards;
    Partial p;
    for (std::size_t s = begin; s < end; ++s) {
      const double x1 = draw_position(f, rng);
      const double lo = x1 - 2.0 * r, hi = x1 + 2.0 * r;
      const double x2 = draw_on_arc(f, lo, hi, rng);
      const double x3 = draw_on_arc(f, lo, hi, rng);
      const double x4 = draw_on_arc(f, lo, hi, rng);
      const double hh = kernel_h(x1, x2, x3, r, mu).value * kernel_h(x1, x2, x4, r, mu).value;
      double v = 0.0;
      if (hh != 0.0) {
        const double mass = arc_mass(f, lo, hi);
        v = hh * (mass * mass * mass) / unit;
      }
      p.sum += v;
      p.sum_sq += v * v;
    }
    partial[shard] = p;
  });
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double md = static_cast<double>(m);
  const double mean = sum / md;
  const double var = std::max(0.0, (sum_sq - md * mean * mean) / (md - 1.0));
  return {mean * unit, std::sqrt(var / md) * unit, m};
}

// ---------------------------------------------------------------------------

/// Everything an experiment needs for centering and scaling at (f, r).
struct RegimeConstants {
  double mu_n_exact{0.0};
  double mu_n_expansion{0.0};
  double sigma3n_sq_leading{0.0};
  double sigma1_sq{0.0};
  std::optional<McEstimate> sigma2n_sq;
};

}  // namespace rggclust
