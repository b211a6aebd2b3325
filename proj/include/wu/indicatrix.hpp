#pragma once

// Unit balls B_eta(a) = {X : eta(a; X) < 1} of pseudometrics at a point.
// An indicatrix is given by its gauge X -> eta(a; X), by a cloud of
// Psi-points in its closure, or both. Coordinates may be a linear frame Y = L X
// in which the ball is Reinhardt.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wu/errors.hpp"
#include "wu/frame.hpp"
#include "wu/geometry.hpp"

namespace wu {

struct Symmetry {
  bool balanced = true;
  bool reinhardt = true;
  bool complete_reinhardt = false;
};

/// Whether the convex hull of the ball is bounded along a coordinate axis.
enum class AxisExtent { bounded, unbounded, unknown };

struct Indicatrix {
  using Gauge = std::function<double(const CVector&)>;

  std::size_t dim = 0;
  Symmetry symmetry;
  std::optional<Gauge> gauge;              // eta(a; .) in frame coordinates, may be inf
  std::optional<std::vector<PsiPoint>> cloud;  // Psi-points of the closed ball
  std::vector<AxisExtent> extents;
  std::optional<LinearFrame> frame;
  bool convex = false;
  std::string label;

  /// eta(a; X) for X in the original coordinates.
  double eval(const CVector& x) const {
    if (!gauge) throw UnsupportedError("indicatrix '" + label + "' has no gauge");
    return (*gauge)(frame ? frame->apply(x) : x);
  }

  /// 1 / eta(a; d): the radius of the ball along d (frame coordinates).
  double radius(const CVector& d) const {
    if (!gauge) throw UnsupportedError("indicatrix '" + label + "' has no gauge");
    const double g = (*gauge)(d);
    return g == 0.0 ? kInf : 1.0 / g;
  }

  bool has_cloud() const { return cloud && !cloud->empty(); }
};

namespace detail {

inline void check_dims(const Indicatrix& b) {
  if (b.extents.size() != b.dim) throw DomainError("indicatrix: extents do not match dimension");
  if (b.cloud) {
    for (const auto& p : *b.cloud) {
      if (p.dim() != b.dim) throw DomainError("indicatrix: cloud point dimension mismatch");
      for (double u : p.coords) {
        if (u < 0.0) throw DomainError("indicatrix: negative Psi coordinate");
      }
    }
  }
}

}  // namespace detail

/// Product ball B_1 x B_2: the gauge of eta_{D1 x D2} is the max of the factor
/// gauges, and the Psi-cloud is the cartesian product.
inline Indicatrix product(const Indicatrix& a, const Indicatrix& b) {
  detail::check_dims(a);
  detail::check_dims(b);
  Indicatrix out;
  out.dim = a.dim + b.dim;
  out.symmetry.balanced = a.symmetry.balanced && b.symmetry.balanced;
  out.symmetry.reinhardt = a.symmetry.reinhardt && b.symmetry.reinhardt;
  out.symmetry.complete_reinhardt =
      a.symmetry.complete_reinhardt && b.symmetry.complete_reinhardt;
  out.extents = a.extents;
  out.extents.insert(out.extents.end(), b.extents.begin(), b.extents.end());
  out.convex = a.convex && b.convex;
  out.label = a.label + "*" + b.label;
  if (a.frame || b.frame) {
    out.frame = LinearFrame::direct_sum(a.frame ? *a.frame : LinearFrame::identity(a.dim),
                                        b.frame ? *b.frame : LinearFrame::identity(b.dim));
  }
  if (a.gauge && b.gauge) {
    const std::size_t n = a.dim;
    out.gauge = [ga = *a.gauge, gb = *b.gauge, n](const CVector& y) {
      const CVector left(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
      const CVector right(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
      return std::max(ga(left), gb(right));
    };
  }
  if (a.has_cloud() && b.has_cloud()) {
    std::vector<PsiPoint> pts;
    for (const auto& p : *a.cloud) {
      for (const auto& q : *b.cloud) {
        PsiPoint r{p.coords};
        r.coords.insert(r.coords.end(), q.coords.begin(), q.coords.end());
        pts.push_back(std::move(r));
      }
    }
    out.cloud = std::move(pts);
  }
  return out;
}

/// B = unit ball of the polydisc gauge max_j |X_j| / rho_j.
inline Indicatrix polydisc_ball(std::vector<double> rho) {
  for (double r : rho) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("polydisc radius must be positive");
  }
  Indicatrix b;
  b.dim = rho.size();
  b.symmetry.complete_reinhardt = true;
  b.extents.assign(b.dim, AxisExtent::bounded);
  b.convex = true;
  b.label = "polydisc";
  std::vector<double> corner(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) corner[j] = rho[j] * rho[j];
  b.cloud = std::vector<PsiPoint>{PsiPoint{corner}};
  b.gauge = [rho](const CVector& x) {
    double g = 0.0;
    for (std::size_t j = 0; j < rho.size(); ++j) g = std::max(g, std::abs(x[j]) / rho[j]);
    return g;
  };
  return b;
}

/// B = r times the unit Euclidean ball; Psi(B) is the simplex with vertices r^2 e_j.
inline Indicatrix euclidean_ball(std::size_t n, double r = 1.0) {
  if (!(r > 0.0)) throw DomainError("ball radius must be positive");
  Indicatrix b;
  b.dim = n;
  b.symmetry.complete_reinhardt = true;
  b.extents.assign(n, AxisExtent::bounded);
  b.convex = true;
  b.label = "ball";
  std::vector<PsiPoint> pts;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> u(n, 0.0);
    u[j] = r * r;
    pts.push_back(PsiPoint{u});
  }
  b.cloud = std::move(pts);
  b.gauge = [r](const CVector& x) { return norm(x) / r; };
  return b;
}

}  // namespace wu
