#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/tools/minima.hpp>
#include <gtest/gtest.h>

#include <homolevel/polarity.hpp>

#include "oracles.hpp"

using namespace homolevel;

namespace {

constexpr double pi = std::numbers::pi;

Phf quartic_sum() {
  return Phf::polynomial(HomoPoly::from_coefficients(MonomialBasis::pure(2, 4), std::vector<double>{1, 0, 0, 0, 1}));
}

double quartic_conjugate(double u1, double u2) {
  return 3.0 * (std::pow(std::abs(u1), 4.0 / 3.0) + std::pow(std::abs(u2), 4.0 / 3.0)) / std::pow(4.0, 4.0 / 3.0);
}

// |x|^3 for x > 0, +inf otherwise
Phf half_line_cubic() {
  return Phf::custom(1, 3.0, [](std::span<const double> x) {
    return x[0] > 0.0 ? x[0] * x[0] * x[0] : (x[0] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  });
}

} // namespace

TEST(RadialSup, ClosedFormMatchesOneDimensionalMaximisation) {
  for (double d : {1.5, 2.0, 3.0, 4.0})
    for (double a : {0.3, 1.0, 2.5})
      for (double b : {0.2, 1.0, 4.0}) {
        auto neg = [&](double r) { return -(r * a - std::pow(r, d) * b); };
        const auto m = boost::math::tools::brent_find_minima(neg, 0.0, 1000.0, 52);
        EXPECT_NEAR(radial_sup(a, b, d), -m.second, 1e-12 * (1.0 - m.second));
      }
}

TEST(RadialSup, EdgeCases) {
  EXPECT_EQ(radial_sup(-1.0, 1.0, 2.0), 0.0);
  EXPECT_EQ(radial_sup(0.0, 1.0, 2.0), 0.0);
  EXPECT_EQ(radial_sup(1.0, std::numeric_limits<double>::infinity(), 2.0), 0.0);
  EXPECT_TRUE(std::isinf(radial_sup(1.0, 0.0, 2.0)));
}

TEST(Conjugate, QuarticSumOnTheAxis) {
  const auto tab = conjugate_phf(quartic_sum(), 4.0);
  const std::array<double, 2> e1{1.0, 0.0};
  EXPECT_NEAR(tab(e1), 3.0 / std::pow(4.0, 4.0 / 3.0), 1e-12);
  EXPECT_NEAR(tab(e1), 0.472470, 1e-6);
}

TEST(Conjugate, QuarticSumMatchesClosedFormOnTheGrid) {
  const auto tab = conjugate_phf(quartic_sum(), 4.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < tab.sphere_grid().size(); ++i) {
    const auto& u = tab.sphere_grid()[i];
    worst = std::max(worst, std::abs(tab.values()[i] - quartic_conjugate(u[0], u[1])));
  }
  EXPECT_LE(worst, 1e-10);
  // off-grid directions through the q-homogeneous extension
  for (double phi : {0.1234, 1.0, 2.71828, 5.5}) {
    const std::array<double, 2> u{1.7 * std::cos(phi), 1.7 * std::sin(phi)};
    EXPECT_NEAR(tab(u), quartic_conjugate(u[0], u[1]), 1e-10);
  }
}

TEST(Conjugate, HalfSquaredNormIsSelfConjugate) {
  const auto g2 = Phf::polynomial(HomoPoly::norm_power(2, 1) * 0.5);
  const auto tab = conjugate_phf(g2, 2.0);
  const std::array<double, 2> e2{0.0, 1.0}, u{0.3, -1.1};
  EXPECT_NEAR(tab(e2), 0.5, 1e-12);
  EXPECT_NEAR(tab(u), 0.5 * (0.09 + 1.21), 1e-12);

  const auto g3 = Phf::polynomial(HomoPoly::norm_power(3, 1) * 0.5);
  const auto tab3 = conjugate_phf(g3, 2.0, 24);
  const std::array<double, 3> v{0.2, -0.7, 0.4};
  EXPECT_NEAR(tab3(v), 0.5 * (0.04 + 0.49 + 0.16), 1e-10);
}

TEST(Conjugate, AnisotropicThreeDimensional) {
  // g = x^4 + y^4 + z^4 is separable: g* = 3 sum |u_i|^{4/3} / 4^{4/3}
  const auto g = Phf::polynomial(HomoPoly::from_coefficients(MonomialBasis::pure(3, 4), [] {
    const auto B = MonomialBasis::pure(3, 4);
    std::vector<double> c(B.size(), 0.0);
    for (std::size_t i = 0; i < B.size(); ++i)
      for (int j = 0; j < 3; ++j)
        if (B[i][j] == 4) c[i] = 1.0;
    return c;
  }()));
  const auto tab = conjugate_phf(g, 4.0, 32);
  const std::array<double, 3> v{0.5, -0.3, 0.8};
  double expect = 0.0;
  for (double x : v) expect += std::pow(std::abs(x), 4.0 / 3.0);
  EXPECT_NEAR(tab(v), 3.0 * expect / std::pow(4.0, 4.0 / 3.0), 1e-9);
}

TEST(Conjugate, ExtendedValueHalfLineCubic) {
  const auto tab = conjugate_phf(half_line_cubic(), 3.0);
  const std::array<double, 1> plus{1.0}, minus{-1.0}, two{2.0};
  EXPECT_NEAR(tab(plus), 2.0 / (3.0 * std::sqrt(3.0)), 1e-14);
  EXPECT_NEAR(tab(plus), 0.384900, 1e-6);
  EXPECT_EQ(tab(minus), 0.0);
  EXPECT_NEAR(tab(two), std::pow(2.0, 1.5) * 2.0 / (3.0 * std::sqrt(3.0)), 1e-13);
  EXPECT_EQ(tab.infinite_directions(), 0u);
}

TEST(Conjugate, DegreeRelationIsExact) {
  const auto tab = conjugate_phf(quartic_sum(), 4.0);
  EXPECT_EQ(tab.degree_q(), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(1.0 / tab.degree_d() + 1.0 / tab.degree_q(), 1.0);
  EXPECT_EQ(tab.phf().degree(), tab.degree_q());
}

TEST(Conjugate, YoungFenchelInequality) {
  const auto g = quartic_sum();
  const auto tab = conjugate_phf(g, 4.0);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 10000; ++t) {
    const std::array<double, 2> x{U(gen), U(gen)}, u{U(gen), U(gen)};
    worst = std::max(worst, u[0] * x[0] + u[1] * x[1] - g(x) - tab(u));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(Conjugate, QHomogeneity) {
  const auto tab = conjugate_phf(quartic_sum(), 4.0);
  for (double lam : {0.3, 2.0, 7.5}) {
    const std::array<double, 2> u{0.6, -0.45}, lu{lam * 0.6, lam * -0.45};
    EXPECT_NEAR(tab(lu), std::pow(lam, 4.0 / 3.0) * tab(u), 1e-6 * tab(lu));
  }
}

TEST(Conjugate, RejectsBadInputs) {
  EXPECT_THROW(conjugate_phf(Phf::norm_power(2, 1.0), 1.0), InputError);
  EXPECT_THROW(conjugate_phf(quartic_sum(), 2.0), InputError);
  // positive but not convex: x^4 + y^4 - 1.9 x^2 y^2
  const auto bad = Phf::polynomial(HomoPoly::from_coefficients(MonomialBasis::pure(2, 4), std::vector<double>{1, 0, -1.9, 0, 1}));
  try {
    conjugate_phf(bad, 4.0);
    FAIL() << "expected a convexity failure";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.kind(), Failure::convexity_check);
  }
}

TEST(PolarVolume, UnitDiskIsSelfPolar) {
  const auto r = polar_volume(Phf::polynomial(HomoPoly::norm_power(2, 1) * 0.5), 2.0);
  EXPECT_NEAR(r.volume, pi, 1e-10);
  EXPECT_EQ(r.infinite_directions, 0u);
}

TEST(PolarVolume, QuarticSumAgreesWithSupportFunctionOracle) {
  const auto r = polar_volume(quartic_sum(), 4.0);
  const oracle::SupportPolar sp([](double x, double y) { return x * x * x * x + y * y * y * y; }, 4.0, 4096);
  const auto mc = sp.mc_area(200000, 2024);
  EXPECT_LE(std::abs(r.volume - mc.value), 3.0 * mc.std_error) << r.volume << " vs " << mc.value << " +- " << mc.std_error;
  // the polar of {x^4 + y^4 <= 1/4} is {|x|^{4/3} + |y|^{4/3} <= 4^{1/3}};
  // g* is only C^1 across the axes, so the azimuthal rule converges algebraically
  const double exact = oracle::superellipse_area(4.0 / 3.0, std::cbrt(4.0));
  EXPECT_NEAR(r.volume, exact, 1e-4 * exact);
  QuadratureConfig fine;
  fine.nodes = 4096;
  EXPECT_NEAR(polar_volume(quartic_sum(), 4.0, fine).volume, exact, 1e-7 * exact);
}

TEST(PolarVolume, AxisRadiusIsCubeRootOfFourNotItsInverse) {
  const oracle::SupportPolar sp([](double x, double y) { return x * x * x * x + y * y * y * y; }, 4.0, 4096);
  const double t = sp.polar_radius(0.0);
  EXPECT_NEAR(std::pow(t, 4.0 / 3.0), std::cbrt(4.0), 1e-9);
  EXPECT_GT(std::abs(std::pow(t, 4.0 / 3.0) - 1.0 / std::cbrt(4.0)), 0.5);
}

TEST(PolarVolume, BipolarInclusion) {
  // boundary of G° from the conjugate: u = theta (1/(q g*(theta)))^{1/q}
  const auto g = quartic_sum();
  const auto tab = conjugate_phf(g, 4.0);
  const double q = tab.degree_q();
  std::vector<std::array<double, 2>> polar_boundary;
  for (int i = 0; i < 2048; ++i) {
    const double phi = 2 * pi * i / 2048;
    const std::array<double, 2> th{std::cos(phi), std::sin(phi)};
    const double r = std::pow(1.0 / (q * tab(th)), 1.0 / q);
    polar_boundary.push_back({r * th[0], r * th[1]});
  }
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int checked = 0;
  double worst = -1.0;
  while (checked < 1000) {
    const std::array<double, 2> x{U(gen), U(gen)};
    if (g(x) > 0.25) continue;
    ++checked;
    for (const auto& u : polar_boundary) worst = std::max(worst, u[0] * x[0] + u[1] * x[1]);
  }
  EXPECT_LE(worst, 1.0 + 1e-9);
}
