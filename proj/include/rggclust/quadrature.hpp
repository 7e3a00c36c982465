#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rggclust {

// Thrown when an integrand produces NaN/Inf or the panel cap is hit.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PeriodicQuadratureOptions {
  std::size_t initial_panels{64};
  std::size_t max_panels{std::size_t{1} << 20};
  double abs_tol{1e-12};
};

struct QuadratureResult {
  double value{0.0};
  std::size_t panels{0};
  double last_change{0.0};
};

/// Uniform-grid rule over one period [0,1). For period-1 integrands the
/// trapezoid and rectangle rules coincide.
template <typename F>
double periodic_trapezoid(F&& integrand, std::size_t panels) {
  if (panels == 0) throw std::invalid_argument("periodic_trapezoid: panels must be positive");
  const double h = 1.0 / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double v = integrand(static_cast<double>(i) * h);
    if (!std::isfinite(v)) {
      throw QuadratureError("periodic_trapezoid: non-finite integrand sample at x=" +
                            std::to_string(static_cast<double>(i) * h));
    }
    sum += v;
  }
  return sum * h;
}

/// Integrates a smooth period-1 function over [0,1), doubling the panel
/// count until two successive values agree to `abs_tol`. Each doubling
/// reuses the previous samples, so only the new midpoints are evaluated.
template <typename F>
QuadratureResult integrate_periodic(F&& integrand, const PeriodicQuadratureOptions& opt = {}) {
  if (opt.initial_panels < 8) {
    throw std::invalid_argument("integrate_periodic: at least 8 panels required");
  }
  std::size_t panels = opt.initial_panels;
  double sum = periodic_trapezoid(integrand, panels) * static_cast<double>(panels);
  double value = sum / static_cast<double>(panels);
  while (panels < opt.max_panels) {
    const double h = 1.0 / static_cast<double>(panels);
    double mid = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
      const double x = (static_cast<double>(i) + 0.5) * h;
      const double v = integrand(x);
      if (!std::isfinite(v)) {
        throw QuadratureError("integrate_periodic: non-finite integrand sample at x=" +
                              std::to_string(x));
      }
      mid += v;
    }
    sum += mid;
    panels *= 2;
    const double next = sum / static_cast<double>(panels);
    const double change = std::abs(next - value);
    value = next;
    if (change <= opt.abs_tol) return {value, panels, change};
  }
  throw QuadratureError("integrate_periodic: no convergence within " +
                        std::to_string(opt.max_panels) + " panels");
}

namespace detail {

// 16-point Gauss-Legendre rule on [-1,1] (positive half; symmetric).
inline constexpr std::array<double, 8> kGaussNodes16{
    0.0950125098376374401853193, 0.2816035507792589132304605, 0.4580167776572273863424194,
    0.6178762444026437484466718, 0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr std::array<double, 8> kGaussWeights16{
    0.1894506104550684962853967, 0.1826034150449235888667637, 0.1691565193950025381893121,
    0.1495959888165767320815017, 0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

}  // namespace detail

/// Composite 16-point Gauss-Legendre over [a, b] with panels no wider than
/// `max_panel_width`. Used for arc integrals of the (analytic) density.
template <typename F>
double gauss_legendre(F&& integrand, double a, double b, double max_panel_width = 1.0 / 64.0) {
  if (a == b) return 0.0;
  const double length = b - a;
  const auto panels =
      static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(length) / max_panel_width)));
  const double h = length / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double center = a + (static_cast<double>(p) + 0.5) * h;
    const double half = 0.5 * h;
    double s = 0.0;
    for (std::size_t k = 0; k < detail::kGaussNodes16.size(); ++k) {
      const double dx = half * detail::kGaussNodes16[k];
      s += detail::kGaussWeights16[k] * (integrand(center - dx) + integrand(center + dx));
    }
    total += s * half;
  }
  return total;
}

}  // namespace rggclust
