#pragma once

// Exhaustive grid oracle for the minimal-volume simplex, n <= 3 free axes.
// Test-only: it shares no code path with the barrier solver. The grid runs
// over log-intercepts of all free axes but the last; the last intercept is
// the smallest one that still contains every point.

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "wu/errors.hpp"
#include "wu/geometry.hpp"
#include "wu/simplex_program.hpp"

namespace wu {

struct GridBox {
  std::vector<double> lower;  // per free axis, in intercept units
  std::vector<double> upper;
};

inline SimplexParams min_vol_simplex_bruteforce(const SimplexProgram& prog, double resolution,
                                                std::optional<GridBox> box = std::nullopt) {
  const std::size_t n = prog.dim;
  std::vector<std::size_t> free_axes;
  for (std::size_t j = 0; j < n; ++j) {
    if (!prog.fixed.count(j) && !prog.dropped.count(j)) free_axes.push_back(j);
  }
  const std::size_t k = free_axes.size();
  if (k > 3) throw UnsupportedError("brute-force oracle supports at most 3 free axes");
  if (!(resolution > 0.0)) throw DomainError("grid resolution must be positive");

  struct Row {
    std::vector<double> u;
    double room;
  };
  std::vector<Row> rows;
  for (const auto& p : prog.points) {
    Row r{std::vector<double>(k), 1.0};
    for (const auto& [j, a] : prog.fixed) r.room -= p[j] / a;
    bool any = false;
    for (std::size_t q = 0; q < k; ++q) {
      r.u[q] = p[free_axes[q]];
      any = any || r.u[q] > 0.0;
    }
    if (r.room < 0.0 || (any && r.room <= 0.0)) throw InfeasibleError("oracle: infeasible");
    if (any) rows.push_back(std::move(r));
  }

  std::vector<double> intercepts(n, kInf);
  for (const auto& [j, a] : prog.fixed) intercepts[j] = a;
  if (k == 0) return SimplexParams(intercepts);

  std::vector<double> single(k, 0.0);
  for (const auto& r : rows) {
    for (std::size_t q = 0; q < k; ++q) single[q] = std::max(single[q], r.u[q] / r.room);
  }
  for (double v : single) {
    if (!(v > 0.0)) throw DegenerateError("oracle: zero extent");
  }
  if (!box) {
    box = GridBox{single, single};
    for (auto& v : box->upper) v *= static_cast<double>(k);
  }

  // Smallest last intercept containing all rows, given the leading ones.
  auto last_intercept = [&](const std::vector<double>& lead) {
    double best = 0.0;
    for (const auto& r : rows) {
      double rest = r.room;
      for (std::size_t q = 0; q + 1 < k; ++q) rest -= r.u[q] / lead[q];
      const double tail = r.u[k - 1];
      if (tail == 0.0) {
        if (rest < 0.0) return kInf;
        continue;
      }
      if (rest <= 0.0) return kInf;
      best = std::max(best, tail / rest);
    }
    return best;
  };

  std::vector<double> lead(k - 1), best_lead(k - 1);
  double best_volume = kInf, best_last = kInf;
  auto consider = [&]() {
    const double last = last_intercept(lead);
    if (!std::isfinite(last)) return;
    double v = last;
    for (double a : lead) v *= a;
    if (v < best_volume) {
      best_volume = v;
      best_last = last;
      best_lead = lead;
    }
  };
  auto steps = [&](std::size_t q) {
    const double lo = std::log(box->lower[q]);
    const double hi = std::log(box->upper[q]);
    return std::pair{lo, static_cast<std::size_t>(std::ceil((hi - lo) / resolution))};
  };

  if (k == 1) {
    consider();
  } else if (k == 2) {
    const auto [lo, cnt] = steps(0);
    for (std::size_t i = 0; i <= cnt; ++i) {
      lead[0] = std::exp(lo + resolution * static_cast<double>(i));
      consider();
    }
  } else {
    const auto [lo0, cnt0] = steps(0);
    const auto [lo1, cnt1] = steps(1);
    for (std::size_t i = 0; i <= cnt0; ++i) {
      lead[0] = std::exp(lo0 + resolution * static_cast<double>(i));
      for (std::size_t m = 0; m <= cnt1; ++m) {
        lead[1] = std::exp(lo1 + resolution * static_cast<double>(m));
        consider();
      }
    }
  }
  if (!std::isfinite(best_volume)) throw InfeasibleError("oracle: no feasible grid point");
  for (std::size_t q = 0; q + 1 < k; ++q) intercepts[free_axes[q]] = best_lead[q];
  intercepts[free_axes[k - 1]] = best_last;
  return SimplexParams(intercepts);
}

}  // namespace wu
