#pragma once

// Busemann convexification eta -> eta-hat (ball -> convex hull), the
// degenerate subspace V (axes along which the hull is unbounded), U and
// m = dim U. Only Reinhardt balls are handled, so V is spanned by axes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "wu/errors.hpp"
#include "wu/indicatrix.hpp"
#include "wu/sampling.hpp"

namespace wu {

struct DegeneracyReport {
  std::vector<std::size_t> v_axes;
  std::vector<std::size_t> u_axes;
  std::size_t m = 0;
};

inline constexpr std::size_t kDefaultSupportResolution = 256;

namespace detail {

inline void require_balanced_reinhardt(const Indicatrix& b, const char* what) {
  if (!b.symmetry.balanced) throw UnsupportedError(std::string(what) + ": ball is not balanced");
  if (!b.symmetry.reinhardt) throw UnsupportedError(std::string(what) + ": ball is not Reinhardt");
  check_dims(b);
}

inline CVector as_complex(const sampling::Direction& d) { return CVector(d.begin(), d.end()); }

}  // namespace detail

inline DegeneracyReport degeneracy(const Indicatrix& b) {
  detail::require_balanced_reinhardt(b, "degeneracy");
  DegeneracyReport r;
  for (std::size_t j = 0; j < b.dim; ++j) {
    switch (b.extents[j]) {
      case AxisExtent::bounded: r.u_axes.push_back(j); break;
      case AxisExtent::unbounded: r.v_axes.push_back(j); break;
      case AxisExtent::unknown:
        throw UnknownBoundednessError("axis " + std::to_string(j) + " of '" + b.label +
                                      "' has no boundedness certificate; supply a bound");
    }
  }
  r.m = r.u_axes.size();
  return r;
}

/// h(z) = sup over the ball of sum_j |Y_j| z_j for z >= 0 (frame coordinates).
inline double reinhardt_support(const Indicatrix& b, const std::vector<double>& z,
                                std::size_t resolution = kDefaultSupportResolution) {
  detail::require_balanced_reinhardt(b, "support");
  if (z.size() != b.dim) throw DomainError("support: dimension mismatch");
  for (std::size_t j = 0; j < b.dim; ++j) {
    if (z[j] > 0.0 && b.extents[j] == AxisExtent::unbounded) return kInf;
  }
  if (std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; })) return 0.0;
  if (b.gauge) {
    std::vector<std::size_t> axes(b.dim);
    for (std::size_t j = 0; j < b.dim; ++j) axes[j] = j;
    bool infinite = false;
    auto f = [&](const sampling::Direction& d) {
      double pair = 0.0;
      for (std::size_t j = 0; j < b.dim; ++j) pair += d[j] * z[j];
      if (pair == 0.0) return 0.0;
      const double g = (*b.gauge)(detail::as_complex(d));
      if (g == 0.0) {
        infinite = true;
        return kInf;
      }
      return pair / g;
    };
    const auto best = sampling::maximize_on_sphere(axes, b.dim, f, resolution);
    return infinite ? kInf : best.value;
  }
  if (!b.has_cloud()) throw UnsupportedError("support: indicatrix has neither gauge nor cloud");
  double h = 0.0;
  for (const auto& p : *b.cloud) {
    double s = 0.0;
    for (std::size_t j = 0; j < b.dim; ++j) s += std::sqrt(p[j]) * z[j];
    h = std::max(h, s);
  }
  return h;
}

/// sup over the ball of Re <X, direction>; infinite iff the direction pairs
/// with a recession axis.
inline double support(const Indicatrix& b, const CVector& direction,
                      std::size_t resolution = kDefaultSupportResolution) {
  if (direction.size() != b.dim) throw DomainError("support: dimension mismatch");
  const CVector xi = b.frame ? b.frame->apply_dual(direction) : direction;
  std::vector<double> z(b.dim);
  for (std::size_t j = 0; j < b.dim; ++j) z[j] = std::abs(xi[j]);
  return reinhardt_support(b, z, resolution);
}

/// Ball of the Busemann pseudometric: the convex hull. Gauges become
/// eta-hat(Y) = sup_{z >= 0 on U} sum |Y_j| z_j / h(z); clouds are kept as is
/// and marked convex, since a set and its hull have the same minimal ellipsoid.
inline Indicatrix convexify(const Indicatrix& b,
                            std::size_t resolution = kDefaultSupportResolution) {
  if (!b.symmetry.balanced) throw UnsupportedError("convexify: ball is not balanced");
  if (b.convex) return b;
  detail::require_balanced_reinhardt(b, "convexify");
  Indicatrix out = b;
  out.convex = true;
  out.label = "conv(" + b.label + ")";
  if (b.gauge) {
    const auto report = degeneracy(b);
    auto source = std::make_shared<const Indicatrix>(b);
    out.gauge = [source, u = report.u_axes, resolution](const CVector& y) {
      if (u.empty()) return 0.0;
      const std::size_t n = source->dim;
      bool any = false;
      for (std::size_t j : u) any = any || std::abs(y[j]) > 0.0;
      if (!any) return 0.0;
      auto f = [&](const sampling::Direction& z) {
        double pair = 0.0;
        for (std::size_t j : u) pair += std::abs(y[j]) * z[j];
        if (pair == 0.0) return 0.0;
        return pair / reinhardt_support(*source, z, resolution);
      };
      return sampling::maximize_on_sphere(u, n, f, resolution).value;
    };
  }
  return out;
}

}  // namespace wu
