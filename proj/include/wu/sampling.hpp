#pragma once

// Deterministic direction sampling on the positive orthant of the unit
// sphere, face by face, and local maximization over a face. Used to extract
// Psi-certificates from gauges (Reinhardt reduction: only moduli matter).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "wu/errors.hpp"

namespace wu::sampling {

using Direction = std::vector<double>;
using Objective = std::function<double(const Direction&)>;

inline constexpr double kQuarter = std::numbers::pi / 2.0;

/// Nonempty subsets of `axes`, in a fixed order (by bitmask).
inline std::vector<std::vector<std::size_t>> faces(const std::vector<std::size_t>& axes) {
  if (axes.size() > 20) throw UnsupportedError("too many axes for face enumeration");
  std::vector<std::vector<std::size_t>> out;
  const std::size_t count = std::size_t{1} << axes.size();
  for (std::size_t mask = 1; mask < count; ++mask) {
    std::vector<std::size_t> f;
    for (std::size_t q = 0; q < axes.size(); ++q) {
      if (mask & (std::size_t{1} << q)) f.push_back(axes[q]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

/// Hyperspherical angles in [0, pi/2]^(k-1) -> unit vector of R^n supported on `face`.
inline Direction embed(const std::vector<std::size_t>& face, const std::vector<double>& theta,
                       std::size_t n) {
  Direction d(n, 0.0);
  double tail = 1.0;
  for (std::size_t i = 0; i + 1 < face.size(); ++i) {
    const double t = std::clamp(theta[i], 0.0, kQuarter);
    d[face[i]] = tail * std::cos(t);
    tail *= std::sin(t);
  }
  d[face.back()] = tail;
  return d;
}

/// `count` angle vectors filling (0, pi/2)^dims: a midpoint grid for one
/// angle, the additive recurrence with generalized golden ratio otherwise.
inline std::vector<std::vector<double>> angle_samples(std::size_t dims, std::size_t count) {
  if (dims == 0) return {std::vector<double>{}};
  std::vector<std::vector<double>> out;
  out.reserve(count);
  if (dims == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back({(static_cast<double>(i) + 0.5) / static_cast<double>(count) * kQuarter});
    }
    return out;
  }
  double phi = 2.0;
  for (int it = 0; it < 60; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(dims + 1));
  std::vector<double> step(dims);
  for (std::size_t q = 0; q < dims; ++q) step[q] = std::pow(1.0 / phi, static_cast<double>(q + 1));
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> a(dims);
    for (std::size_t q = 0; q < dims; ++q) {
      const double v = 0.5 + step[q] * static_cast<double>(i + 1);
      a[q] = (v - std::floor(v)) * kQuarter;
    }
    out.push_back(std::move(a));
  }
  return out;
}

/// Typical spacing between neighbouring samples of angle_samples.
inline double angle_spacing(std::size_t dims, std::size_t count) {
  if (dims == 0 || count == 0) return 0.0;
  return kQuarter / std::pow(static_cast<double>(count), 1.0 / static_cast<double>(dims));
}

/// Golden-section search for a maximum of f on [lo, hi].
inline std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                                    double lo, double hi, double xtol = 1e-13) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > xtol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

/// Nelder-Mead maximization from x0 with initial simplex edge `step`.
inline std::pair<std::vector<double>, double> nelder_mead_max(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    double step, int max_iter = 2000, double ftol = 1e-15) {
  const std::size_t k = x0.size();
  std::vector<std::vector<double>> simplex(k + 1, x0);
  for (std::size_t q = 0; q < k; ++q) simplex[q + 1][q] += step;
  std::vector<double> val(k + 1);
  for (std::size_t i = 0; i <= k; ++i) val[i] = f(simplex[i]);
  std::vector<std::size_t> order(k + 1);
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i <= k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] > val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[k - 1];
    if (std::abs(val[best] - val[worst]) <= ftol * (1.0 + std::abs(val[best]))) {
      double size = 0.0;
      for (std::size_t q = 0; q < k; ++q) size = std::max(size, std::abs(simplex[worst][q] - simplex[best][q]));
      if (size < 1e-12) break;
    }
    std::vector<double> centroid(k, 0.0);
    for (std::size_t i = 0; i <= k; ++i) {
      if (i == worst) continue;
      for (std::size_t q = 0; q < k; ++q) centroid[q] += simplex[i][q] / static_cast<double>(k);
    }
    auto along = [&](double t) {
      std::vector<double> p(k);
      for (std::size_t q = 0; q < k; ++q) p[q] = centroid[q] + t * (simplex[worst][q] - centroid[q]);
      return p;
    };
    auto reflected = along(-1.0);
    const double fr = f(reflected);
    if (fr > val[best]) {
      auto expanded = along(-2.0);
      const double fe = f(expanded);
      if (fe > fr) {
        simplex[worst] = std::move(expanded);
        val[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        val[worst] = fr;
      }
    } else if (fr > val[second]) {
      simplex[worst] = std::move(reflected);
      val[worst] = fr;
    } else {
      auto contracted = along(0.5);
      const double fc = f(contracted);
      if (fc > val[worst]) {
        simplex[worst] = std::move(contracted);
        val[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= k; ++i) {
          if (i == best) continue;
          for (std::size_t q = 0; q < k; ++q) {
            simplex[i][q] = simplex[best][q] + 0.5 * (simplex[i][q] - simplex[best][q]);
          }
          val[i] = f(simplex[i]);
        }
      }
    }
  }
  const auto it = std::max_element(val.begin(), val.end());
  return {simplex[static_cast<std::size_t>(it - val.begin())], *it};
}

struct FaceSample {
  std::size_t face = 0;  // index into faces(axes)
  std::vector<double> angles;
  Direction direction;
  double value = 0.0;
};

/// Evaluates f at `resolution` directions in the interior of every face
/// (a single direction on one-dimensional faces).
inline std::vector<FaceSample> sample_faces(const std::vector<std::vector<std::size_t>>& fs,
                                            std::size_t n, std::size_t resolution,
                                            const Objective& f) {
  std::vector<FaceSample> out;
  for (std::size_t fi = 0; fi < fs.size(); ++fi) {
    const std::size_t dims = fs[fi].size() - 1;
    for (auto& a : angle_samples(dims, dims == 0 ? 1 : resolution)) {
      FaceSample s;
      s.face = fi;
      s.direction = embed(fs[fi], a, n);
      s.angles = std::move(a);
      s.value = f(s.direction);
      out.push_back(std::move(s));
    }
  }
  return out;
}

/// Local maximization of f over a face, starting from a sample.
inline FaceSample refine(const std::vector<std::vector<std::size_t>>& fs, std::size_t n,
                         const FaceSample& start, double spacing, const Objective& f) {
  const auto& face = fs[start.face];
  const std::size_t dims = face.size() - 1;
  FaceSample out = start;
  if (dims == 0) return out;
  auto on_angles = [&](const std::vector<double>& a) { return f(embed(face, a, n)); };
  if (dims == 1) {
    const double lo = std::max(0.0, start.angles[0] - spacing);
    const double hi = std::min(kQuarter, start.angles[0] + spacing);
    const auto [x, v] = golden_section_max([&](double t) { return on_angles({t}); }, lo, hi);
    if (v > out.value) {
      out.angles = {x};
      out.value = v;
    }
  } else {
    const auto [x, v] = nelder_mead_max(on_angles, start.angles, 0.5 * spacing);
    if (v > out.value) {
      out.angles = x;
      for (auto& t : out.angles) t = std::clamp(t, 0.0, kQuarter);
      out.value = v;
    }
  }
  out.direction = embed(face, out.angles, n);
  return out;
}

/// The `per_face` best samples of each face, refined, sorted by value.
inline std::vector<FaceSample> refine_top(const std::vector<std::vector<std::size_t>>& fs,
                                          std::size_t n, const std::vector<FaceSample>& samples,
                                          std::size_t resolution, std::size_t per_face,
                                          const Objective& f) {
  std::vector<std::vector<const FaceSample*>> by_face(fs.size());
  for (const auto& s : samples) by_face[s.face].push_back(&s);
  std::vector<FaceSample> out;
  for (std::size_t fi = 0; fi < fs.size(); ++fi) {
    auto& list = by_face[fi];
    const std::size_t keep = std::min(per_face, list.size());
    std::partial_sort(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(keep), list.end(),
                      [](const FaceSample* a, const FaceSample* b) { return a->value > b->value; });
    const double spacing = angle_spacing(fs[fi].size() - 1, resolution);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(refine(fs, n, *list[i], spacing, f));
  }
  std::sort(out.begin(), out.end(),
            [](const FaceSample& a, const FaceSample& b) { return a.value > b.value; });
  return out;
}

/// sup of f over the positive orthant of the unit sphere spanned by `axes`.
inline FaceSample maximize_on_sphere(const std::vector<std::size_t>& axes, std::size_t n,
                                     const Objective& f, std::size_t resolution,
                                     std::size_t per_face = 3) {
  const auto fs = faces(axes);
  const auto samples = sample_faces(fs, n, resolution, f);
  auto top = refine_top(fs, n, samples, resolution, per_face, f);
  if (top.empty()) throw DomainError("maximize_on_sphere: no axes");
  return top.front();
}

}  // namespace wu::sampling
