#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "rggclust/quadrature.hpp"

namespace rggclust {
namespace {

TEST(PeriodicQuadrature, ConstantIsExact) {
  EXPECT_DOUBLE_EQ(periodic_trapezoid([](double) { return 1.0; }, 16), 1.0);
}

TEST(PeriodicQuadrature, TrigPolynomialExactOnceResolved) {
  auto cos2 = [](double x) {
    const double c = std::cos(2.0 * std::numbers::pi * x);
    return c * c;
  };
  EXPECT_NEAR(periodic_trapezoid(cos2, 64), 0.5, 1e-15);
  EXPECT_NEAR(integrate_periodic(cos2).value, 0.5, 1e-15);
}

TEST(PeriodicQuadrature, SpectralConvergenceForAnalyticIntegrand) {
  // exp(cos 2 pi x) averages to I0(1).
  auto g = [](double x) { return std::exp(std::cos(2.0 * std::numbers::pi * x)); };
  const auto res = integrate_periodic(g);
  EXPECT_NEAR(res.value, 1.2660658777520084, 1e-14);
  EXPECT_LE(res.last_change, 1e-12);
  EXPECT_LE(res.panels, 256u);
}

TEST(PeriodicQuadrature, RejectsNonFiniteSamples) {
  auto bad = [](double x) { return x == 0.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0; };
  EXPECT_THROW(integrate_periodic(bad), QuadratureError);
  EXPECT_THROW(periodic_trapezoid(bad, 8), QuadratureError);
}

TEST(PeriodicQuadrature, RequiresEightPanels) {
  EXPECT_THROW(integrate_periodic([](double) { return 1.0; }, {.initial_panels = 4}),
               std::invalid_argument);
}

TEST(GaussLegendre, PolynomialsAreExact) {
  // 16 nodes integrate degree 31 exactly on each panel.
  auto p = [](double x) { return std::pow(x, 9) - 3.0 * x * x + 1.0; };
  const double exact = (std::pow(0.7, 10) - std::pow(-0.2, 10)) / 10.0 -
                       (std::pow(0.7, 3) - std::pow(-0.2, 3)) + 0.9;
  EXPECT_NEAR(gauss_legendre(p, -0.2, 0.7), exact, 1e-15);
  EXPECT_EQ(gauss_legendre(p, 0.3, 0.3), 0.0);
}

TEST(GaussLegendre, WeightsSumToTwo) {
  double s = 0.0;
  for (double w : detail::kGaussWeights16) s += 2.0 * w;
  EXPECT_NEAR(s, 2.0, 1e-15);
}

}  // namespace
}  // namespace rggclust
