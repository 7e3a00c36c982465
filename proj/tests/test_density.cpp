#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "rggclust/density.hpp"

namespace rggclust {
namespace {

constexpr double kPi = std::numbers::pi;

// Power series I0(k) = sum_m (k/2)^{2m} / (m!)^2; independent of the quadrature path.
double bessel_i0_series(double kappa) {
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 200; ++m) {
    term *= (kappa / 2.0) * (kappa / 2.0) / (static_cast<double>(m) * m);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// Brute-force midpoint average of g(f, f', f'') f over a fine grid, with the
// von Mises derivatives written out independently of the library.
template <typename G>
double fine_grid_vm(double kappa, double mu, G g, int cells = 1000000) {
  const double i0 = bessel_i0_series(kappa);
  double sum = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double x = (i + 0.5) / cells;
    const double t = 2 * kPi * x - mu;
    const double f = std::exp(kappa * std::cos(t)) / i0;
    const double fp = -2 * kPi * kappa * std::sin(t) * f;
    const double fpp = (4 * kPi * kPi * kappa * kappa * std::sin(t) * std::sin(t) -
                        4 * kPi * kPi * kappa * std::cos(t)) * f;
    sum += g(f, fp, fpp) * f;
  }
  return sum / cells;
}

TEST(Normalizer, MatchesPowerSeries) {
  EXPECT_EQ(normalizer_I0(0.0), 1.0);
  for (double k : {0.1, 0.5, 1.0, 5.0, 20.0}) {
    EXPECT_NEAR(normalizer_I0(k) / bessel_i0_series(k), 1.0, 1e-12) << "kappa=" << k;
  }
  EXPECT_NEAR(normalizer_I0(1.0), 1.26606587, 1e-8);
  EXPECT_NEAR(normalizer_I0(5.0), 27.2398, 1e-4);
}

TEST(Normalizer, RejectsNegativeKappa) {
  EXPECT_THROW(normalizer_I0(-0.1), DensityError);
}

TEST(Eval, Uniform) {
  const auto f = CircularDensity::uniform();
  EXPECT_EQ(f.eval(0.37, 0), 1.0);
  EXPECT_EQ(f.eval(0.37, 1), 0.0);
  EXPECT_EQ(f.eval(0.37, 2), 0.0);
}

TEST(Eval, VonMisesAtMode) {
  const auto f = CircularDensity::von_mises(1.0, 0.0);
  EXPECT_NEAR(f.eval(0.0, 0), std::exp(1.0) / bessel_i0_series(1.0), 1e-14);
  EXPECT_NEAR(f.eval(0.0, 0), 2.1470303214281006, 1e-12);
  EXPECT_NEAR(f.eval(0.0, 1), 0.0, 1e-14);
}

TEST(Eval, RejectsInvalidOrder) {
  const auto f = CircularDensity::von_mises(1.0, 0.0);
  EXPECT_THROW(f.eval(0.1, 3), DensityError);
  EXPECT_THROW(f.eval(0.1, -1), DensityError);
}

TEST(Eval, DerivativesAgreeWithCentralDifferences) {
  const CircularDensity densities[] = {CircularDensity::von_mises(2.0, 0.7),
                                       CircularDensity::fourier({0.2, -0.1}, {0.05, 0.0, 0.03})};
  for (const auto& f : densities) {
    for (double x : {0.0, 0.13, 0.5, 0.91}) {
      const double h = 1e-5;
      const double d1 = (f.eval(x + h) - f.eval(x - h)) / (2 * h);
      const double d2 = (f.eval(x + h) - 2 * f.eval(x) + f.eval(x - h)) / (h * h);
      EXPECT_NEAR(f.eval(x, 1), d1, 1e-6 * (1 + std::abs(d1)));
      EXPECT_NEAR(f.eval(x, 2), d2, 1e-3 * (1 + std::abs(d2)));
    }
  }
}

TEST(CircularDensityInvariants, NormalizedPeriodicPositive) {
  const CircularDensity densities[] = {CircularDensity::uniform(),
                                       CircularDensity::von_mises(0.5, 0.2),
                                       CircularDensity::von_mises(5.0, 3.0),
                                       CircularDensity::fourier({0.3}, {0.2, 0.1})};
  for (const auto& f : densities) {
    EXPECT_NEAR(integrate_periodic([&](double x) { return f(x); }).value, 1.0, 1e-12);
    for (double x : {0.0, 0.25, 0.6}) {
      for (int k = 0; k <= 2; ++k) {
        EXPECT_NEAR(f.eval(x, k), f.eval(x + 1.0, k), 1e-9 * (1 + std::abs(f.eval(x, k))));
      }
    }
    EXPECT_GT(f.inf(), 0.0);
    EXPECT_GE(f.sup(), f.inf());
  }
}

TEST(CircularDensityInvariants, FourierMustStayPositive) {
  EXPECT_THROW(CircularDensity::fourier({1.5}, {}), DensityError);
  EXPECT_THROW(CircularDensity::fourier({0.8}, {0.8}), DensityError);
  EXPECT_NO_THROW(CircularDensity::fourier({0.6}, {0.3}));
}

TEST(CircularDensityInvariants, VonMisesBoundsAreExact) {
  const auto f = CircularDensity::von_mises(1.0, 0.4);
  EXPECT_NEAR(f.sup(), std::exp(1.0) / bessel_i0_series(1.0), 1e-13);
  EXPECT_NEAR(f.inf(), std::exp(-1.0) / bessel_i0_series(1.0), 1e-13);
}

TEST(Moments, Uniform) {
  const auto m = moments(CircularDensity::uniform());
  EXPECT_EQ(m.e_f2, 1.0);
  EXPECT_EQ(m.e_fp2, 0.0);
  EXPECT_EQ(m.e_ffpp, 0.0);
  EXPECT_EQ(m.e_fp2_2ffpp, 0.0);
}

TEST(Moments, FourierCubicMoment) {
  // (1 + a cos)^3 integrates to 1 + 3a^2/2.
  EXPECT_NEAR(moments(CircularDensity::fourier({0.2}, {})).e_f2, 1.06, 1e-13);
}

TEST(Moments, SmallKappaDerivativeMoment) {
  const double kappa = 0.1;
  const auto m = moments(CircularDensity::von_mises(kappa, 0.0));
  const double leading = 2 * kPi * kPi * kappa * kappa;
  EXPECT_NEAR(leading, 0.19739, 1e-5);
  EXPECT_NEAR(m.e_fp2 / leading, 1.0, 0.02);
  EXPECT_NEAR(m.e_fp2, fine_grid_vm(kappa, 0.0, [](double, double d1, double) { return d1 * d1; }),
              1e-10);
}

TEST(Moments, CubicMomentMatchesFineGrid) {
  const auto m = moments(CircularDensity::von_mises(1.0, 0.0));
  EXPECT_NEAR(m.e_f2, fine_grid_vm(1.0, 0.0, [](double f, double, double) { return f * f; }),
              1e-10);
}

TEST(Moments, IntegrationByPartsIdentity) {
  // int f^2 f'' = -2 int f f'^2 under periodicity.
  for (double k : {0.1, 1.0, 5.0}) {
    const auto f = CircularDensity::von_mises(k, 0.3);
    const auto m = moments(f);
    const double rhs = -2.0 * integrate_periodic([&](double x) {
                                return f.eval(x) * std::pow(f.eval(x, 1), 2);
                              }).value;
    EXPECT_NEAR(m.e_ffpp, rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(Constants, UniformIsDegenerate) {
  const auto c = constants(CircularDensity::uniform());
  EXPECT_EQ(c.a_f, 0.0);
  EXPECT_EQ(c.b_f, 0.0);
  EXPECT_EQ(c.c_f, 0.0);
  EXPECT_EQ(c.sigma1_sq, 0.0);
}

TEST(Constants, PublishedSigma1Squared) {
  EXPECT_NEAR(constants(CircularDensity::von_mises(1.0, 0.1)).sigma1_sq / 13924.35, 1.0, 0.005);
  EXPECT_NEAR(constants(CircularDensity::von_mises(5.0, 0.5)).sigma1_sq / 13646828.67, 1.0, 0.005);
}

TEST(Constants, DefinitionalRelations) {
  const auto c = constants(CircularDensity::fourier({0.25, 0.1}, {0.05}));
  EXPECT_EQ(c.c_f, c.moments.e_fp2 / c.moments.e_f2);
  EXPECT_GE(c.sigma1_sq, 0.0);
}

TEST(Constants, LinearIdentityAcrossDensities) {
  const CircularDensity densities[] = {
      CircularDensity::uniform(), CircularDensity::von_mises(0.1, 0.0),
      CircularDensity::von_mises(1.0, 0.1), CircularDensity::von_mises(5.0, 0.5),
      CircularDensity::fourier({0.3, 0.1}, {0.2})};
  for (const auto& f : densities) {
    const auto c = constants(f);
    EXPECT_NEAR(3 * c.b_f - 4 * c.a_f, -3 * c.c_f, 1e-9 * std::max(1.0, std::abs(c.c_f)));
  }
}

TEST(Constants, LocationInvariance) {
  for (double k : {0.1, 0.5, 1.0, 5.0}) {
    const auto a = constants(CircularDensity::von_mises(k, 0.1));
    const auto b = constants(CircularDensity::von_mises(k, 2.9));
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)); };
    EXPECT_TRUE(close(a.a_f, b.a_f));
    EXPECT_TRUE(close(a.b_f, b.b_f));
    EXPECT_TRUE(close(a.c_f, b.c_f));
    EXPECT_TRUE(close(a.sigma1_sq, b.sigma1_sq));
    EXPECT_TRUE(close(a.moments.e_f2, b.moments.e_f2));
  }
}

TEST(Constants, Sigma1GrowsWithConcentration) {
  double prev = 0.0;
  for (double k : {0.1, 0.5, 1.0, 5.0}) {
    const double s = constants(CircularDensity::von_mises(k, 0.1)).sigma1_sq;
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(Constants, H1LeadingSmallKappa) {
  const double kappa = 0.01;
  const auto f = CircularDensity::von_mises(kappa, 0.0);
  const auto c = constants(f);
  for (double x : {0.0, 0.1, 0.3}) {
    const double approx = 8 * kPi * kPi * kappa * std::cos(2 * kPi * x);
    EXPECT_NEAR(h1_leading(f, x, c.c_f), approx, 0.03 * std::abs(8 * kPi * kPi * kappa));
  }
  EXPECT_EQ(h1_leading(CircularDensity::uniform(), 0.4, 0.0), 0.0);
  const double s = integrate_periodic([&](double x) {
                     return std::pow(h1_leading(f, x, c.c_f), 2) * f(x);
                   }).value;
  EXPECT_NEAR(s, c.sigma1_sq, 1e-12 * s);
}

TEST(DensityQuadrature, MomentsConvergedUnderDoubling) {
  const auto f = CircularDensity::von_mises(1.0, 0.0);
  auto g = [&](double x) { return std::pow(f.eval(x, 1), 2) * f(x); };
  const auto res = integrate_periodic(g);
  EXPECT_LT(res.last_change, 1e-12);
  EXPECT_NEAR(periodic_trapezoid(g, res.panels * 2), res.value, 1e-12);
}

TEST(DensityJson, RoundTripAndRejection) {
  using nlohmann::json;
  const auto vm = density_from_json(json::parse(R"({"kind":"von_mises","kappa":1.5,"mu":0.2})"));
  EXPECT_EQ(density_to_json(vm), json::parse(R"({"kind":"von_mises","kappa":1.5,"mu":0.2})"));
  const auto fs = density_from_json(json::parse(R"({"kind":"fourier","cos":[0.2],"sin":[0.1]})"));
  EXPECT_NEAR(fs.eval(0.0), 1.2, 1e-15);
  EXPECT_TRUE(density_from_json(json::parse(R"({"kind":"uniform"})")).is_uniform());
  EXPECT_THROW(density_from_json(json::parse(R"({"kind":"von_mises","kapa":1})")), DensityError);
  EXPECT_THROW(density_from_json(json::parse(R"({"kind":"cauchy"})")), DensityError);
  EXPECT_THROW(density_from_json(json::parse(R"({"kind":"von_mises","kappa":"x"})")), DensityError);
  EXPECT_THROW(density_from_json(json::parse(R"([1,2])")), DensityError);
}

}  // namespace
}  // namespace rggclust
