#pragma once

// The Wu construction on Reinhardt indicatrices. The minimal-volume complete
// Reinhardt ellipsoid {sum |X_j|^2 / a_j < 1} containing B corresponds under
// Psi to the minimal-volume simplex T_a containing Psi(B), restricted to the
// non-degenerate axes U. W~(a; X) = q_a(X) and W = sqrt(m) W~.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wu/busemann.hpp"
#include "wu/errors.hpp"
#include "wu/geometry.hpp"
#include "wu/indicatrix.hpp"
#include "wu/sampling.hpp"
#include "wu/simplex_program.hpp"

namespace wu {

struct WuOptions {
  std::size_t resolution = 0;  // directions per face of dimension >= 2; 0 means 256 n
  double tolerance = 1e-10;    // log-volume gap of the simplex solver
  double violation_tolerance = 1e-9;
  int max_rounds = 25;
  std::size_t per_face = 3;  // samples refined per face and round
  bool use_cloud = true;
  bool verify_cloud = true;  // check a supplied cloud against the gauge
};

struct WuResult {
  DiagonalHermitianForm w_tilde;  // in frame coordinates, inf on V axes
  std::size_t m = 0;
  std::vector<std::size_t> v_axes;
  std::optional<LinearFrame> frame;
  double gap = 0.0;
  double max_violation = 0.0;  // largest level of a checked boundary point
  std::size_t certificate_points = 0;
  int rounds = 0;
  bool sampled = false;  // certificates came from gauge sampling

  SimplexParams simplex() const { return form_to_simplex(w_tilde); }

  double w_tilde_at(const CVector& x) const { return w_tilde(frame ? frame->apply(x) : x); }
  double w_at(const CVector& x) const { return std::sqrt(static_cast<double>(m)) * w_tilde_at(x); }

  /// The form of W = sqrt(m) W~: axes a_j / m.
  DiagonalHermitianForm w() const {
    std::vector<double> axes = w_tilde.axes();
    for (auto& a : axes) a = m == 0 ? kInf : a / static_cast<double>(m);
    return DiagonalHermitianForm(axes);
  }
};

namespace detail {

struct BoundaryPoint {
  PsiPoint psi;
  double level = 0.0;
};

// Psi-image of the boundary point d / G(d), projected to the U axes.
inline std::optional<PsiPoint> boundary_psi(const Indicatrix& b, const std::vector<bool>& on_u,
                                            const sampling::Direction& d) {
  const double g = (*b.gauge)(as_complex(d));
  const std::size_t n = b.dim;
  bool touches_u = false;
  for (std::size_t j = 0; j < n; ++j) touches_u = touches_u || (on_u[j] && d[j] > 0.0);
  if (!touches_u || std::isinf(g)) return std::nullopt;
  if (!(g > 0.0)) {
    throw DegenerateError("ball of '" + b.label +
                          "' contains a ray off the degenerate axes; boundedness metadata is wrong");
  }
  PsiPoint p{std::vector<double>(n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    if (on_u[j]) p.coords[j] = d[j] * d[j] / (g * g);
  }
  return p;
}

}  // namespace detail

inline WuResult wu_metric(const Indicatrix& b, const WuOptions& opt = {}) {
  const auto report = degeneracy(b);
  const std::size_t n = b.dim;
  WuResult res;
  res.m = report.m;
  res.v_axes = report.v_axes;
  res.frame = b.frame;
  if (report.m == 0) {
    res.w_tilde = DiagonalHermitianForm(std::vector<double>(n, kInf));
    return res;
  }
  std::vector<bool> on_u(n, false);
  for (std::size_t j : report.u_axes) on_u[j] = true;

  const bool cloud = opt.use_cloud && b.has_cloud();
  const bool sample = b.gauge && (!cloud || opt.verify_cloud);
  if (!cloud && !b.gauge) throw UnsupportedError("wu_metric: indicatrix has neither gauge nor cloud");

  SimplexProgram prog;
  prog.dim = n;
  prog.tolerance = opt.tolerance;
  prog.dropped.insert(report.v_axes.begin(), report.v_axes.end());
  if (cloud) {
    for (const auto& p : *b.cloud) {
      PsiPoint q{p.coords};
      for (std::size_t j = 0; j < n; ++j) {
        if (!on_u[j]) q.coords[j] = 0.0;
      }
      prog.points.push_back(std::move(q));
    }
  }

  std::vector<std::size_t> all_axes(n);
  for (std::size_t j = 0; j < n; ++j) all_axes[j] = j;
  const auto fs = sampling::faces(all_axes);
  const std::size_t resolution = opt.resolution ? opt.resolution : 256 * n;

  std::vector<sampling::FaceSample> samples;
  std::vector<std::optional<PsiPoint>> sample_psi;
  if (sample) {
    res.sampled = !cloud;
    samples = sampling::sample_faces(fs, n, resolution, [](const sampling::Direction&) { return 0.0; });
    sample_psi.reserve(samples.size());
    for (const auto& s : samples) sample_psi.push_back(detail::boundary_psi(b, on_u, s.direction));
    if (!cloud) {
      for (const auto& p : sample_psi) {
        if (p) prog.points.push_back(*p);
      }
    }
  }

  SimplexSolution sol = solve_min_vol_simplex(prog);
  res.rounds = 1;
  while (sample) {
    const SimplexParams& t = sol.simplex;
    auto level_of = [&](const sampling::Direction& d) {
      const auto p = detail::boundary_psi(b, on_u, d);
      return p ? t.level(*p) : 0.0;
    };
    for (std::size_t i = 0; i < samples.size(); ++i) {
      samples[i].value = sample_psi[i] ? t.level(*sample_psi[i]) : 0.0;
    }
    const auto top = sampling::refine_top(fs, n, samples, resolution, opt.per_face, level_of);
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, s.value);
    std::size_t added = 0;
    for (const auto& s : top) {
      worst = std::max(worst, s.value);
      if (s.value > 1.0 + opt.violation_tolerance) {
        prog.points.push_back(*detail::boundary_psi(b, on_u, s.direction));
        ++added;
      }
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].value > 1.0 + opt.violation_tolerance) {
        prog.points.push_back(*sample_psi[i]);
        ++added;
      }
    }
    res.max_violation = worst;
    if (added == 0) break;
    if (res.rounds >= opt.max_rounds) {
      throw SolverError("wu_metric: boundary refinement did not settle (max level " +
                            std::to_string(worst) + ")",
                        sol.gap);
    }
    sol = solve_min_vol_simplex(prog);
    ++res.rounds;
  }
  if (!sample) {
    for (const auto& p : prog.points) res.max_violation = std::max(res.max_violation, sol.simplex.level(p));
  }
  res.gap = sol.gap;
  res.certificate_points = sol.active.size();
  res.w_tilde = simplex_to_form(sol.simplex);
  return res;
}

/// Wu data of a product ball from the factors: W^2 = W_L^2 + W_R^2 and m adds.
inline WuResult wu_product(const WuResult& left, const WuResult& right) {
  WuResult out;
  out.m = left.m + right.m;
  const double m = static_cast<double>(out.m);
  std::vector<double> axes;
  auto append = [&](const WuResult& part) {
    for (double a : part.w_tilde.axes()) {
      axes.push_back(part.m == 0 || std::isinf(a) ? kInf : a * m / static_cast<double>(part.m));
    }
  };
  append(left);
  append(right);
  out.w_tilde = DiagonalHermitianForm(axes);
  out.v_axes = left.v_axes;
  for (std::size_t j : right.v_axes) out.v_axes.push_back(left.w_tilde.dim() + j);
  if (left.frame || right.frame) {
    out.frame = LinearFrame::direct_sum(
        left.frame ? *left.frame : LinearFrame::identity(left.w_tilde.dim()),
        right.frame ? *right.frame : LinearFrame::identity(right.w_tilde.dim()));
  }
  out.gap = std::max(left.gap, right.gap);
  out.max_violation = std::max(left.max_violation, right.max_violation);
  out.certificate_points = left.certificate_points + right.certificate_points;
  out.rounds = std::max(left.rounds, right.rounds);
  out.sampled = left.sampled || right.sampled;
  return out;
}

// ---------------------------------------------------------------------------
// Volume-ratio certificates for the failure of upper semicontinuity

struct ContradictionReport {
  std::size_t n = 2;
  double x = 0.0;
  double t = 0.0;
  SimplexParams constrained;  // minimal simplex with the fixed intercept
  SimplexParams comparison;
  double volume_constrained = 0.0;
  double volume_comparison = 0.0;
  double ratio = 0.0;
  double closed_form = 0.0;      // ratio for the closed-form constrained simplex
  std::optional<double> limit;   // x -> 0 limit of the closed form
  bool certified = false;        // ratio > 1
  std::string verdict;
};

/// G_2 at (x, 0): T_{a,b} with a = t^2 fixed must contain ((1-x^2)^2, 0) and
/// (0, ((1-x)/x)^2); the comparison triangle is T_(1, x^-2).
inline ContradictionReport certify_contradiction_g2(double x, double t) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("certify_contradiction_g2: need 0 < x < 1");
  if (!(t > 1.0)) throw DomainError("certify_contradiction_g2: need t > 1");
  const double mu = std::pow(1.0 - x * x, 2);
  const double nu = std::pow((1.0 - x) / x, 2);
  SimplexProgram prog;
  prog.dim = 2;
  prog.points = {PsiPoint{{mu, 0.0}}, PsiPoint{{0.0, nu}}};
  prog.fixed[0] = t * t;
  ContradictionReport r;
  r.n = 2;
  r.x = x;
  r.t = t;
  r.constrained = min_vol_simplex(prog);
  r.comparison = SimplexParams({1.0, 1.0 / (x * x)});
  r.volume_constrained = simplex_volume(r.constrained);
  r.volume_comparison = simplex_volume(r.comparison);
  r.ratio = r.volume_constrained / r.volume_comparison;
  r.closed_form = t * t * (1.0 - x) * (1.0 - x);
  r.certified = r.ratio > 1.0;
  r.verdict = r.certified ? "certified" : "inconclusive";
  return r;
}

/// G_n at (x, 0, ..., 0): c with c_1 = t fixed containing (mu, 0, 1, ..., 1)
/// and (0, nu, 1, ..., 1), against T = (n/2, n/(2x^2), n, ..., n).
inline ContradictionReport certify_contradiction_gn(std::size_t n, double x, double t) {
  if (n < 3) throw DomainError("certify_contradiction_gn: need n >= 3");
  if (!(x > 0.0 && x < 1.0)) throw DomainError("certify_contradiction_gn: need 0 < x < 1");
  const double nd = static_cast<double>(n);
  if (!(t > nd / 2.0)) {
    throw DomainError("certify_contradiction_gn: need t > n/2 for the monotonicity step");
  }
  const double mu = std::pow(1.0 - x * x, 2);
  const double nu = std::pow(1.0 / x - 1.0, 2);
  SimplexProgram prog;
  prog.dim = n;
  std::vector<double> p(n, 1.0), q(n, 1.0);
  p[0] = mu;
  p[1] = 0.0;
  q[0] = 0.0;
  q[1] = nu;
  prog.points = {PsiPoint{p}, PsiPoint{q}};
  prog.fixed[0] = t;
  ContradictionReport r;
  r.n = n;
  r.x = x;
  r.t = t;
  r.constrained = min_vol_simplex(prog);
  std::vector<double> cmp(n, nd);
  cmp[0] = nd / 2.0;
  cmp[1] = nd / (2.0 * x * x);
  r.comparison = SimplexParams(cmp);
  r.volume_constrained = simplex_volume(r.constrained);
  r.volume_comparison = simplex_volume(r.comparison);
  r.ratio = r.volume_constrained / r.volume_comparison;
  const double k = nd - 2.0;
  r.closed_form = 4.0 * x * x * nu * std::pow(k, k) * std::pow(t, nd) /
                  (mu * std::pow(nd, nd) * std::pow(t - mu, k));
  r.limit = 4.0 * std::pow(k, k) * std::pow(t, nd) / (std::pow(nd, nd) * std::pow(t - 1.0, k));
  r.certified = r.ratio > 1.0;
  r.verdict = r.certified ? "certified" : "inconclusive";
  return r;
}

}  // namespace wu
