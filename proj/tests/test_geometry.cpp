#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wu/geometry.hpp"

using namespace wu;

namespace {

CVector random_cvector(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  CVector v(n);
  for (auto& c : v) c = {d(rng), d(rng)};
  return v;
}

}  // namespace

TEST(Psi, SquaredModuli) {
  EXPECT_EQ(psi({1.0, 0.0}).coords, (std::vector<double>{1.0, 0.0}));
  const double x = 0.1;
  const auto p = psi({1.0 - x * x, 0.0});
  EXPECT_NEAR(p[0], 0.9801, 1e-15);
  EXPECT_EQ(p[1], 0.0);
  const auto q = psi({Complex{3.0, 4.0}, 1.0});
  EXPECT_NEAR(q[0], 25.0, 1e-13);
  EXPECT_EQ(q[1], 1.0);
}

TEST(Psi, MultiplicativeUnderCoordinateScaling) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto z = random_cvector(rng, n, 3.0);
    const auto lambda = random_cvector(rng, n, 2.0);
    CVector scaled(n);
    for (std::size_t j = 0; j < n; ++j) scaled[j] = lambda[j] * z[j];
    const auto lhs = psi(scaled);
    const auto base = psi(z);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_NEAR(lhs[j], std::norm(lambda[j]) * base[j], 1e-12 * (1.0 + lhs[j]));
    }
  }
}

TEST(SimplexVolume, ProductOverFactorial) {
  EXPECT_DOUBLE_EQ(simplex_volume(SimplexParams({1.0, 1.0})), 0.5);
  EXPECT_DOUBLE_EQ(simplex_volume(SimplexParams({2.0, 2.0, 2.0})), 8.0 / 6.0);
  EXPECT_DOUBLE_EQ(simplex_volume(SimplexParams({2.0, 8.0})), 8.0);
}

TEST(SimplexVolume, UnboundedSignals) {
  EXPECT_THROW(simplex_volume(SimplexParams({1.0, kInf})), DegenerateError);
}

TEST(SimplexVolume, LinearInEachIntercept) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.1, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a = {d(rng), d(rng), d(rng)};
    const double base = simplex_volume(SimplexParams(a));
    const double lambda = d(rng);
    a[trial % 3] *= lambda;
    EXPECT_NEAR(simplex_volume(SimplexParams(a)), lambda * base, 1e-12 * lambda * base);
  }
}

TEST(FormContains, ClosedBallOnPsiSide) {
  const DiagonalHermitianForm q({2.0, 2.0});
  EXPECT_TRUE(form_contains(q, PsiPoint{{1.0, 1.0}}));
  EXPECT_FALSE(form_contains(q, PsiPoint{{1.1, 1.0}}));
  const DiagonalHermitianForm degenerate({1.0, kInf});
  EXPECT_TRUE(form_contains(degenerate, PsiPoint{{0.5, 1e6}}));
}

TEST(FormContains, AgreesWithSeminormBall) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> axis(0.2, 4.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 4;
    std::vector<double> axes(n);
    for (auto& a : axes) a = axis(rng);
    if (trial % 5 == 0) axes[0] = kInf;
    const DiagonalHermitianForm q(axes);
    const auto x = random_cvector(rng, n, 2.0);
    const double value = q(x);
    if (std::abs(value - 1.0) < 1e-9) continue;
    EXPECT_EQ(form_contains(q, psi(x)), value <= 1.0);
  }
}

TEST(FormSimplexCorrespondence, IdentityOnParameters) {
  EXPECT_EQ(form_to_simplex(DiagonalHermitianForm({2.0, 8.0})).intercepts(),
            (std::vector<double>{2.0, 8.0}));
  const DiagonalHermitianForm with_inf({3.0, kInf});
  EXPECT_EQ(simplex_to_form(form_to_simplex(with_inf)), with_inf);
  // Polydisc with r = (1, 1), n = 2: the Wu ellipsoid has axes (n r_j^2).
  EXPECT_EQ(form_to_simplex(DiagonalHermitianForm({2.0, 2.0})), SimplexParams({2.0, 2.0}));
}

TEST(FormSimplexCorrespondence, RoundTripProperty) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(1e-3, 1e3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(1 + trial % 5);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = (trial + j) % 7 == 0 ? kInf : d(rng);
    const SimplexParams t(a);
    EXPECT_EQ(form_to_simplex(simplex_to_form(t)), t);
  }
}

TEST(DiagonalForm, RejectsNonPositiveAxis) {
  EXPECT_THROW(DiagonalHermitianForm({1.0, 0.0}), DomainError);
  EXPECT_THROW(SimplexParams({-1.0}), DomainError);
}
