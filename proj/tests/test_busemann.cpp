#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wu/busemann.hpp"
#include "wu/domains.hpp"

using namespace wu;

namespace {

Indicatrix union_of_discs() {
  Indicatrix b;
  b.dim = 2;
  b.extents = {AxisExtent::bounded, AxisExtent::bounded};
  b.label = "two_discs";
  b.gauge = [](const CVector& x) {
    const double m1 = std::abs(x[0]), m2 = std::abs(x[1]);
    if (m2 == 0.0) return m1;
    if (m1 == 0.0) return m2;
    return kInf;
  };
  return b;
}

Indicatrix g2_origin() { return indicatrix_at(parse_domain("g2"), {0.0, 0.0}).inner; }

}  // namespace

TEST(Degeneracy, Examples) {
  const auto outer = indicatrix_at(parse_domain("g2"), {0.0, 0.0}).outer;
  const auto r = degeneracy(outer);
  EXPECT_EQ(r.v_axes, (std::vector<std::size_t>{1}));
  EXPECT_EQ(r.m, 1u);
  const auto bounded = indicatrix_at(parse_domain("g2"), {0.3, 0.0}).outer;
  EXPECT_TRUE(degeneracy(bounded).v_axes.empty());
  EXPECT_EQ(degeneracy(bounded).m, 2u);
  for (std::size_t n : {3u, 4u, 5u}) {
    const auto gn = indicatrix_at(parse_domain("gn(" + std::to_string(n) + ")"),
                                  CVector(n, Complex{0.0, 0.0}));
    EXPECT_EQ(degeneracy(gn.inner).v_axes, (std::vector<std::size_t>{1}));
    EXPECT_EQ(degeneracy(gn.inner).m, n - 1);
  }
}

TEST(Degeneracy, Errors) {
  auto b = euclidean_ball(2);
  b.extents[1] = AxisExtent::unknown;
  EXPECT_THROW(degeneracy(b), UnknownBoundednessError);
  auto c = euclidean_ball(2);
  c.symmetry.reinhardt = false;
  EXPECT_THROW(degeneracy(c), UnsupportedError);
}

TEST(Degeneracy, BoundedBallsHaveFullRank) {
  // Euclidean ball inside D x 2D: both bounded, both m = n.
  const auto [ball, poly] = synthetic_rem_one();
  EXPECT_EQ(degeneracy(ball).m, 2u);
  EXPECT_EQ(degeneracy(poly).m, 2u);
}

TEST(Support, Examples) {
  const auto ball = euclidean_ball(3);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 10; ++trial) {
    CVector xi(3);
    for (auto& c : xi) c = {d(rng), d(rng)};
    const double r = norm(xi);
    for (auto& c : xi) c /= r;
    EXPECT_NEAR(support(ball, xi), 1.0, 1e-12);
    auto cloud_only = ball;
    cloud_only.gauge.reset();
    EXPECT_NEAR(support(cloud_only, xi), 1.0, 0.5);  // cloud {e_j} sees max |xi_j| only
    EXPECT_LE(support(cloud_only, xi), 1.0 + 1e-15);
  }
  const auto dxc = indicatrix_at(parse_domain("g2"), {0.0, 0.0}).outer;
  EXPECT_TRUE(std::isinf(support(dxc, {0.0, 1.0})));
  EXPECT_NEAR(support(dxc, {1.0, 0.0}), 1.0, 1e-12);
  const auto poly = polydisc_ball({1.0, 2.0});
  EXPECT_NEAR(support(poly, {1.0, 0.0}), 1.0, 1e-12);
  EXPECT_NEAR(support(poly, {1.0, 1.0}), 3.0, 1e-10);
}

TEST(Support, SublinearAndHomogeneous) {
  const auto b = indicatrix_at(parse_domain("g2"), {0.2, 0.0}).outer;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector p = {{d(rng), d(rng)}, {d(rng), d(rng)}};
    const CVector q = {{d(rng), d(rng)}, {d(rng), d(rng)}};
    const double lambda = 0.1 + std::abs(d(rng)) * 3.0;
    const CVector pq = {p[0] + q[0], p[1] + q[1]};
    const CVector lp = {lambda * p[0], lambda * p[1]};
    EXPECT_LE(support(b, pq), support(b, p) + support(b, q) + 1e-10);
    EXPECT_NEAR(support(b, lp), lambda * support(b, p), 1e-10 * (1.0 + lambda));
  }
}

TEST(Support, FramedSlab) {
  // kappa-ball of {|z_1 z_2| < 1} at (1/2, 1/2): {|2X_1 + 2X_2| < c}, unbounded
  // across the slab, bounded against the normal direction.
  const auto b = metric_indicatrix(MetricKind::kobayashi, MultiIndex::from({1.0, 1.0}), 0.0,
                                   {0.5, 0.5});
  EXPECT_TRUE(std::isinf(support(b, {1.0, 0.0})));
  const double normal = support(b, {1.0, 1.0});
  EXPECT_TRUE(std::isfinite(normal));
  // sup of Re(X_1 + X_2) over {eta < 1} is 1 / eta(a; (1/2, 1/2)).
  const double eta = b.eval({0.5, 0.5});
  EXPECT_NEAR(normal, 1.0 / eta, 1e-10);
}

TEST(Convexify, ConvexBallIsUnchanged) {
  const auto ball = euclidean_ball(2);
  const auto hull = convexify(ball);
  EXPECT_TRUE(hull.convex);
  for (const CVector& x : {CVector{1.0, 0.0}, CVector{0.3, Complex{0.0, 0.4}}}) {
    EXPECT_EQ(hull.eval(x), ball.eval(x));
  }
}

TEST(Convexify, G2HullIsDiscTimesPlane) {
  const auto hull = convexify(g2_origin());
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const CVector x = {d(rng), d(rng)};
    EXPECT_NEAR(hull.eval(x), std::abs(x[0]), 1e-10);
  }
}

TEST(Convexify, UnionOfDiscsGivesL1Ball) {
  const auto hull = convexify(union_of_discs());
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const CVector x = {d(rng), d(rng)};
    EXPECT_NEAR(hull.eval(x), std::abs(x[0]) + std::abs(x[1]), 1e-10);
  }
}

TEST(Convexify, HullGaugeIsBelowGauge) {
  const auto b = g2_origin();
  const auto hull = convexify(b);
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector x = {d(rng), d(rng)};
    EXPECT_LE(hull.eval(x), b.eval(x) * (1.0 + 1e-12));
  }
}

TEST(Convexify, IdempotentOnSupports) {
  const auto hull = convexify(union_of_discs(), 48);
  const auto twice = convexify(hull, 48);
  const auto source = union_of_discs();
  for (const CVector& xi : {CVector{1.0, 0.0}, CVector{1.0, 1.0}, CVector{0.3, 0.8}}) {
    const double h = support(hull, xi, 48);
    EXPECT_NEAR(support(twice, xi, 48), h, 1e-10);
    EXPECT_NEAR(support(source, xi), h, 1e-10);
  }
}

TEST(Convexify, CloudIsKeptAndMarked) {
  auto b = union_of_discs();
  b.gauge.reset();
  b.cloud = std::vector<PsiPoint>{PsiPoint{{1.0, 0.0}}, PsiPoint{{0.0, 1.0}}};
  const auto hull = convexify(b);
  EXPECT_TRUE(hull.convex);
  ASSERT_TRUE(hull.cloud.has_value());
  EXPECT_EQ(hull.cloud->size(), 2u);
  auto unbalanced = b;
  unbalanced.symmetry.balanced = false;
  EXPECT_THROW(convexify(unbalanced), UnsupportedError);
}
