#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wu/metrics.hpp"

using namespace wu;

namespace {

constexpr MetricKind kGamma = MetricKind::caratheodory;
constexpr MetricKind kAzukawa = MetricKind::azukawa;
constexpr MetricKind kKappa = MetricKind::kobayashi;

// Universal covering of the punctured disc.
Complex covering(Complex lambda) { return std::exp((lambda + 1.0) / (lambda - 1.0)); }

double covering_oracle(double r, double x) {
  const double w = std::log(r);
  const double lambda = (w + 1.0) / (w - 1.0);
  const double h = 1e-6;
  const double dp = std::abs((covering(lambda + h) - covering(lambda - h)) / (2.0 * h));
  return x / (dp * (1.0 - lambda * lambda));
}

CVector random_point_in(std::mt19937_64& rng, const MultiIndex& alpha) {
  std::uniform_real_distribution<double> mod(0.05, 3.0);
  std::uniform_real_distribution<double> arg(-3.0, 3.0);
  for (;;) {
    CVector a(alpha.dim());
    for (auto& c : a) c = std::polar(mod(rng), arg(rng));
    if (elem_reinhardt_contains(alpha, 0.0, a)) return a;
  }
}

CVector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  CVector x(n);
  for (auto& c : x) c = {d(rng), d(rng)};
  return x;
}

}  // namespace

TEST(GammaDisc, Examples) {
  EXPECT_DOUBLE_EQ(gamma_disc(0.0, 1.0).value, 1.0);
  EXPECT_DOUBLE_EQ(gamma_disc(0.5, 1.0).value, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(gamma_disc(Complex{0.3, 0.4}, 0.0).value, 0.0);
  EXPECT_THROW(gamma_disc(1.0, 1.0), DomainError);
  EXPECT_THROW(gamma_disc(Complex{0.0, -1.5}, 1.0), DomainError);
}

TEST(KappaPuncturedDisc, CoveringMapOracle) {
  EXPECT_NEAR(kappa_punctured_disc(std::exp(-1.0), 1.0).value, std::numbers::e / 2.0, 1e-14);
  EXPECT_NEAR(covering_oracle(std::exp(-1.0), 1.0), std::numbers::e / 2.0, 1e-8);
  for (double r : {0.01, 0.1, 0.3, 0.5, 0.8, 0.95}) {
    EXPECT_NEAR(kappa_punctured_disc(r, 1.0).value / covering_oracle(r, 1.0), 1.0, 1e-7) << r;
  }
  EXPECT_EQ(kappa_punctured_disc(0.5, 0.0).value, 0.0);
  EXPECT_THROW(kappa_punctured_disc(0.0, 1.0), DomainError);
  EXPECT_THROW(kappa_punctured_disc(1.0, 1.0), DomainError);
}

TEST(KappaPuncturedDisc, BlowsUpAtTheBoundary) {
  double prev = kappa_punctured_disc(0.9, 1.0).value;
  for (double r : {0.99, 0.999, 0.9999, 0.99999}) {
    const double v = kappa_punctured_disc(r, 1.0).value;
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_GT(prev, 1e4);
}

TEST(PhiR, Examples) {
  const std::vector<std::int64_t> a11 = {1, 1};
  const Complex x2{0.7, -0.2};
  EXPECT_NEAR(std::abs(phi_r(a11, {0.5, 0.0}, {Complex{3.0, 1.0}, x2}, 1) - x2 / 2.0), 0.0, 1e-15);
  const Complex x{0.4, 1.1};
  EXPECT_NEAR(std::abs(phi_r(std::vector<std::int64_t>{2}, {0.0}, {x}, 2) - x * x), 0.0, 1e-15);
  EXPECT_NEAR(phi_r(a11, {0.5, 1.0 / 3.0}, {1.0, 1.0}, 1).real(), 5.0 / 6.0, 1e-15);
  EXPECT_THROW(phi_r(MultiIndex::from({1.5, 1.0}), {0.5, 0.5}, {1.0, 1.0}, 1), UnsupportedError);
}

TEST(PhiR, MatchesFiniteTaylorExpansion) {
  // (a + hX)^alpha = sum_r h^r Phi_r(a)(X); compare against a direct evaluation.
  const std::vector<std::int64_t> alpha = {2, -1, 3};
  const CVector a = {Complex{0.3, 0.2}, Complex{-0.5, 0.4}, Complex{0.1, 0.0}};
  const CVector x = {Complex{1.0, -0.5}, Complex{0.2, 0.3}, Complex{-0.4, 0.9}};
  const double h = 1e-2;
  auto mono = [&](const CVector& z) {
    Complex v = 1.0;
    for (std::size_t j = 0; j < 3; ++j) v *= std::pow(z[j], static_cast<double>(alpha[j]));
    return v;
  };
  CVector shifted(3);
  for (std::size_t j = 0; j < 3; ++j) shifted[j] = a[j] + h * x[j];
  Complex series = mono(a);
  for (int r = 1; r <= 12; ++r) series += std::pow(h, r) * phi_r(alpha, a, x, r);
  EXPECT_NEAR(std::abs(series - mono(shifted)), 0.0, 1e-12);
}

TEST(MultiIndexType, RationalDetection) {
  EXPECT_TRUE(MultiIndex::from({1.0, 1.0}).rational());
  EXPECT_TRUE(MultiIndex::from({0.3, 0.7}).rational());
  EXPECT_TRUE(MultiIndex::from({-2.0, 3.0}).rational());
  EXPECT_FALSE(MultiIndex::from({-std::numbers::sqrt2, 1.0}).rational());
  EXPECT_FALSE(MultiIndex::from({1.0, std::numbers::pi}).rational());
  EXPECT_TRUE(MultiIndex::from({1.0, 0.5}, true).rational());
  EXPECT_FALSE(MultiIndex::from({1.0, 2.0}, false).rational());
  EXPECT_THROW(MultiIndex::from({1.0, 0.0}), DomainError);
}

TEST(MultiIndexType, IntegerFormAndCounts) {
  const auto m = MultiIndex::from({-0.5, 0.75, 1.5});
  EXPECT_EQ(m.integer_form(), (std::vector<std::int64_t>{-2, 3, 6}));
  EXPECT_EQ(m.negative_count(), 1u);
  EXPECT_DOUBLE_EQ(*m.min_positive(), 0.75);
  EXPECT_FALSE(MultiIndex::from({-1.0, -2.0}).min_positive().has_value());
}

TEST(ElemReinhardt, Examples) {
  const auto a11 = MultiIndex::from({1.0, 1.0});
  EXPECT_NEAR(elem_reinhardt_metric(kGamma, a11, 0.0, {0.5, 0.5}, {1.0, 0.0}).value, 8.0 / 15.0,
              1e-15);
  EXPECT_NEAR(elem_reinhardt_metric(kKappa, a11, 0.0, {0.5, 0.0}, {0.0, 1.0}).value, 0.5, 1e-15);
  EXPECT_NEAR(elem_reinhardt_metric(kAzukawa, a11, 0.0, {0.5, 0.0}, {0.0, 1.0}).value, 0.5, 1e-15);
  const auto irr = MultiIndex::from({-std::numbers::sqrt2, 1.0});
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_point_in(rng, irr);
    const auto x = random_vector(rng, 2);
    for (int k = 1; k <= 3; ++k) {
      EXPECT_EQ(elem_reinhardt_metric(kGamma, irr, 0.0, a, x, k).value, 0.0);
    }
  }
}

TEST(ElemReinhardt, Errors) {
  const auto a11 = MultiIndex::from({1.0, 1.0});
  EXPECT_THROW(elem_reinhardt_metric(kGamma, a11, 0.0, {1.5, 1.0}, {1.0, 0.0}), DomainError);
  const auto neg = MultiIndex::from({-1.0, 2.0});
  EXPECT_THROW(elem_reinhardt_metric(kKappa, neg, 0.0, {0.0, 0.5}, {1.0, 0.0}), DomainError);
  EXPECT_THROW(elem_reinhardt_metric(kGamma, neg, 0.0, {2.0, 0.5}, {1.0, 0.0}, 2),
               UnsupportedError);
}

TEST(ElemReinhardt, BranchInfo) {
  const auto v = elem_reinhardt_metric(kKappa, MultiIndex::from({-1.0, 2.0, 1.0}), 0.0,
                                       {2.0, 0.0, 0.3}, {1.0, 1.0, 1.0});
  ASSERT_TRUE(v.branch.has_value());
  EXPECT_EQ(v.branch->case_number, 1);
  EXPECT_EQ(v.branch->s, 2u);
  EXPECT_DOUBLE_EQ(v.branch->r, 2.0);
  EXPECT_EQ(elem_reinhardt_metric(kKappa, MultiIndex::from({-1.0, -std::numbers::sqrt2}), 0.0,
                                  {2.0, 3.0}, {1.0, 1.0})
                .branch->case_number,
            4);
}

TEST(ElemReinhardt, DivisibilityFormula) {
  // D = {|z_1 z_2^2| < 1} at (1/2, 0): r = 2, Phi_2(a)(X) = X_2^2 / 2.
  const auto alpha = MultiIndex::from({1.0, 2.0});
  const CVector a = {0.5, 0.0};
  const CVector x = {Complex{0.3, 0.1}, Complex{0.6, -0.8}};
  EXPECT_EQ(elem_reinhardt_metric(kGamma, alpha, 0.0, a, x, 1).value, 0.0);
  EXPECT_EQ(elem_reinhardt_metric(kGamma, alpha, 0.0, a, x, 3).value, 0.0);
  const double expected = 1.0 / std::numbers::sqrt2;
  EXPECT_NEAR(elem_reinhardt_metric(kGamma, alpha, 0.0, a, x, 2).value, expected, 1e-15);
  EXPECT_NEAR(elem_reinhardt_metric(kGamma, alpha, 0.0, a, x, 4).value, expected, 1e-15);
  EXPECT_NEAR(elem_reinhardt_metric(kAzukawa, alpha, 0.0, a, x).value, expected, 1e-15);
  EXPECT_NEAR(elem_reinhardt_metric(kKappa, alpha, 0.0, a, x).value, expected, 1e-15);
}

TEST(ElemReinhardt, PunctureCases) {
  // D = {|z_1|^-1 |z_2|^-1 < 1} = {|z_1 z_2| > 1}: rational with l = n.
  const auto alpha = MultiIndex::from({-1.0, -1.0});
  const CVector a = {2.0, 1.0};
  const CVector x = {1.0, 0.0};
  // |a^alpha| = 1/2, |sum alpha_j X_j/a_j| = 1/2.
  const double k = elem_reinhardt_metric(kKappa, alpha, 0.0, a, x).value;
  EXPECT_NEAR(k, kappa_punctured_disc(0.5, 0.25).value, 1e-15);
  const double g = elem_reinhardt_metric(kGamma, alpha, 0.0, a, x).value;
  EXPECT_NEAR(g, gamma_disc(0.5, 0.25).value, 1e-15);
  EXPECT_EQ(elem_reinhardt_metric(kAzukawa, alpha, 0.0, a, x).value, g);
  EXPECT_EQ(elem_reinhardt_metric(kGamma, alpha, 0.0, a, x, 5).value, g);
  const auto irr = MultiIndex::from({-1.0, -std::numbers::sqrt2});
  EXPECT_EQ(elem_reinhardt_metric(kAzukawa, irr, 0.0, a, x).value, 0.0);
  EXPECT_GT(elem_reinhardt_metric(kKappa, irr, 0.0, a, x).value, 0.0);
}

TEST(ElemReinhardt, NormalizationInvariance) {
  std::mt19937_64 rng(42);
  const auto base = MultiIndex::from({1.0, 2.0});
  const double c = std::log(3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_point_in(rng, base);
    const auto x = random_vector(rng, 2);
    // z_1 -> 3 z_1 maps D_{alpha,0} onto D_{alpha,log 3}.
    const CVector a3 = {3.0 * a[0], a[1]};
    const CVector x3 = {3.0 * x[0], x[1]};
    for (auto kind : {kGamma, kAzukawa, kKappa}) {
      const double v0 = elem_reinhardt_metric(kind, base, 0.0, a, x).value;
      EXPECT_NEAR(elem_reinhardt_metric(kind, base, c, a3, x3).value, v0, 1e-12 * (1.0 + v0));
      // Same set for a positive multiple of alpha.
      const auto twice = MultiIndex::from({2.5, 5.0});
      EXPECT_NEAR(elem_reinhardt_metric(kind, twice, 0.0, a, x).value, v0, 1e-12 * (1.0 + v0));
      // Coordinate swap.
      const auto swapped = MultiIndex::from({2.0, 1.0});
      EXPECT_NEAR(elem_reinhardt_metric(kind, swapped, 0.0, {a[1], a[0]}, {x[1], x[0]}).value, v0,
                  1e-12 * (1.0 + v0));
    }
  }
  const auto irr = MultiIndex::from({std::numbers::sqrt2, 1.0});
  const auto irr2 = MultiIndex::from({2.0 * std::numbers::sqrt2, 2.0});
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_point_in(rng, irr);
    const auto x = random_vector(rng, 2);
    const double v = elem_reinhardt_metric(kKappa, irr, 0.0, a, x).value;
    EXPECT_NEAR(elem_reinhardt_metric(kKappa, irr2, 0.0, a, x).value, v, 1e-12 * (1.0 + v));
  }
}

TEST(ElemReinhardt, Homogeneity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  const std::vector<MultiIndex> alphas = {
      MultiIndex::from({1.0, 1.0}), MultiIndex::from({-1.0, 2.0}),
      MultiIndex::from({std::numbers::sqrt2, 1.0}), MultiIndex::from({-1.0, -3.0}),
      MultiIndex::from({1.0, 2.0, 3.0})};
  for (const auto& alpha : alphas) {
    for (int trial = 0; trial < 20; ++trial) {
      auto a = random_point_in(rng, alpha);
      if (trial % 3 == 0 && alpha[alpha.dim() - 1] > 0.0) a.back() = 0.0;
      const auto x = random_vector(rng, alpha.dim());
      const Complex lambda{d(rng), d(rng)};
      CVector lx(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) lx[j] = lambda * x[j];
      for (auto kind : {kGamma, kAzukawa, kKappa}) {
        const double v = elem_reinhardt_metric(kind, alpha, 0.0, a, x).value;
        const double w = elem_reinhardt_metric(kind, alpha, 0.0, a, lx).value;
        EXPECT_NEAR(w, std::abs(lambda) * v, 1e-12 * (1.0 + w));
      }
    }
  }
}

TEST(ElemReinhardt, SandwichInRationalCase) {
  std::mt19937_64 rng(31);
  const std::vector<MultiIndex> alphas = {MultiIndex::from({1.0, 1.0}),
                                          MultiIndex::from({2.0, 3.0}),
                                          MultiIndex::from({-1.0, 2.0}),
                                          MultiIndex::from({1.0, 4.0, 2.0})};
  for (const auto& alpha : alphas) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = random_point_in(rng, alpha);
      const auto x = random_vector(rng, alpha.dim());
      const double g = elem_reinhardt_metric(kGamma, alpha, 0.0, a, x).value;
      const double az = elem_reinhardt_metric(kAzukawa, alpha, 0.0, a, x).value;
      const double k = elem_reinhardt_metric(kKappa, alpha, 0.0, a, x).value;
      EXPECT_LE(g, az * (1.0 + 1e-12) + 1e-15);
      EXPECT_LE(az, k * (1.0 + 1e-12) + 1e-15);
    }
  }
}

TEST(ElemReinhardt, KappaEqualsGammaWhenSmallestExponentIsOne) {
  std::mt19937_64 rng(77);
  const auto alpha = MultiIndex::from({1.0, 3.0});
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_point_in(rng, alpha);
    const auto x = random_vector(rng, 2);
    const double g = elem_reinhardt_metric(kGamma, alpha, 0.0, a, x).value;
    EXPECT_NEAR(elem_reinhardt_metric(kKappa, alpha, 0.0, a, x).value, g, 1e-12 * (1.0 + g));
  }
}

TEST(ElemReinhardt, DiscAsOneDimensionalCase) {
  const auto alpha = MultiIndex::from({1.0});
  for (double r : {0.0, 0.2, 0.7}) {
    const double expected = gamma_disc(r, 1.0).value;
    for (auto kind : {kGamma, kAzukawa, kKappa}) {
      EXPECT_NEAR(elem_reinhardt_metric(kind, alpha, 0.0, {r}, {1.0}).value, expected, 1e-15);
    }
  }
}

TEST(G2Bounds, GammaLower) {
  EXPECT_DOUBLE_EQ(g2_gamma_lower(0.5, {1.0, 0.0}).value, 4.0 / 3.0);
  EXPECT_NEAR(g2_gamma_lower(0.1, {1.0, 1.0}).value, 10.0 / 9.0, 1e-15);
  EXPECT_NEAR(g2_gamma_lower(1e-9, {0.0, 1.0}).value, 0.0, 1e-8);
  EXPECT_THROW(g2_gamma_lower(1.0, {1.0, 0.0}), DomainError);
}

TEST(G2Bounds, GammaLowerIsTheContractionPullback) {
  // gamma_D(F(x,0); F'(x,0)X) with F = z_1(1 + z_2), on Reinhardt-symmetric X.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  for (double x : {0.1, 0.3, 0.7}) {
    for (int trial = 0; trial < 20; ++trial) {
      const double x1 = d(rng), x2 = d(rng);
      const double pulled = gamma_disc(x, x1 + x * x2).value;
      EXPECT_NEAR(g2_gamma_lower(x, {x1, x2}).value, pulled, 1e-14);
    }
  }
}

TEST(G2Bounds, KappaUpperPoints) {
  const auto [p, q] = g2_kappa_upper_points(0.5);
  EXPECT_EQ(p, (CVector{0.0, 1.0}));
  EXPECT_EQ(q, (CVector{0.75, 0.0}));
  const auto [p1, q1] = g2_kappa_upper_points(0.1);
  EXPECT_NEAR(p1[1].real(), 9.0, 1e-14);
  EXPECT_NEAR(q1[0].real(), 0.99, 1e-15);
  const auto [pn, qn] = g2_kappa_upper_points(1.0 - 1e-9);
  EXPECT_LT(std::abs(pn[1]) + std::abs(qn[0]), 1e-8);
}

TEST(G2Bounds, KappaDiscsStayInG2) {
  // lambda -> (x, (1-x)/x lambda) and the Moebius disc in the first coordinate.
  auto in_g2 = [](Complex z1, Complex z2) { return std::abs(z1) * (1.0 + std::abs(z2)) < 1.0; };
  for (double x : {0.05, 0.1, 0.5}) {
    for (int i = 0; i < 200; ++i) {
      const Complex lambda = std::polar(0.999 * (i % 10) / 9.0, 0.1 * i);
      EXPECT_TRUE(in_g2(x, (1.0 - x) / x * lambda));
      EXPECT_TRUE(in_g2((lambda + x) / (1.0 + x * lambda), 0.0));
    }
  }
}

TEST(ProductMetric, Examples) {
  auto mv = [](double v) { return MetricValue{v, kGamma, 1, std::nullopt}; };
  EXPECT_EQ(product_metric({mv(0.5), mv(0.2)}).value, 0.5);
  EXPECT_EQ(product_metric({mv(0.0), mv(0.0)}).value, 0.0);
  EXPECT_EQ(product_metric({gamma_disc(0.0, 1.0), gamma_disc(0.0, 2.0)}).value, 2.0);
  EXPECT_EQ(product_metric({mv(0.2), mv(0.5)}).value, product_metric({mv(0.5), mv(0.2)}).value);
  EXPECT_EQ(product_metric({mv(0.3), mv(0.3)}).value, 0.3);
  EXPECT_THROW(product_metric({}), DomainError);
}
