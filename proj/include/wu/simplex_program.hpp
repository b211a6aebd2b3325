#pragma once

// Minimal-volume simplex T_a containing a finite set of Psi-points.
//
// With b_j = 1/a_j the problem is the concave program
//
//     maximize  sum_j log b_j   s.t.  <u_i, b> <= 1 - sum_{fixed j} u_ij / a_j
//
// which is the axis-aligned analogue of the minimum-volume enclosing
// ellipsoid. It is solved by a primal log-barrier path-following method with
// damped Newton centering, then Newton on the KKT system of the active set.
// Every iterate yields a dual point whose objective bounds the optimum, so
// the returned gap is a certificate on the log-volume.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "wu/errors.hpp"
#include "wu/geometry.hpp"

namespace wu {

struct SimplexProgram {
  std::size_t dim = 0;
  std::vector<PsiPoint> points;
  /// axis -> intercept that is held fixed (b_j = a_j in the constrained proofs).
  std::map<std::size_t, double> fixed;
  /// Degenerate axes, returned as infinite intercepts.
  std::set<std::size_t> dropped;
  /// Target bound on the log-volume duality gap.
  double tolerance = 1e-10;
};

struct SimplexSolution {
  SimplexParams simplex;
  /// One multiplier per input point; zero for points that carry no constraint.
  std::vector<double> multipliers;
  /// Indices of points whose multiplier is numerically positive.
  std::vector<std::size_t> active;
  double gap = 0.0;
  int newton_steps = 0;
};

namespace detail {

// Solves M x = g for a small symmetric positive definite M (row-major).
inline std::vector<double> cholesky_solve(std::vector<double> m, std::vector<double> g,
                                          std::size_t k) {
  for (std::size_t j = 0; j < k; ++j) {
    double d = m[j * k + j];
    for (std::size_t p = 0; p < j; ++p) d -= m[j * k + p] * m[j * k + p];
    if (!(d > 0.0)) throw SolverError("Newton system lost positive definiteness", kInf);
    d = std::sqrt(d);
    m[j * k + j] = d;
    for (std::size_t i = j + 1; i < k; ++i) {
      double v = m[i * k + j];
      for (std::size_t p = 0; p < j; ++p) v -= m[i * k + p] * m[j * k + p];
      m[i * k + j] = v / d;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    double v = g[i];
    for (std::size_t p = 0; p < i; ++p) v -= m[i * k + p] * g[p];
    g[i] = v / m[i * k + i];
  }
  for (std::size_t ii = k; ii-- > 0;) {
    double v = g[ii];
    for (std::size_t p = ii + 1; p < k; ++p) v -= m[p * k + ii] * g[p];
    g[ii] = v / m[ii * k + ii];
  }
  return g;
}

struct BarrierState {
  std::vector<double> y;
  std::vector<double> lambda;
  double mu = 1.0;
  double gap = kInf;
  int steps = 0;
};

inline double row_dot(const std::vector<double>& w, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) s += w[j] * y[j];
  return s;
}

// maximize sum log y_j  s.t.  W y <= 1, starting from a strictly feasible y.
inline void barrier_solve(const std::vector<std::vector<double>>& rows, BarrierState& st,
                          double gap_tol) {
  const std::size_t k = st.y.size();
  const std::size_t n_rows = rows.size();
  std::vector<double> s(n_rows);
  auto refresh_slack = [&](const std::vector<double>& y) {
    for (std::size_t i = 0; i < n_rows; ++i) s[i] = 1.0 - row_dot(rows[i], y);
  };

  constexpr int kMaxOuter = 40;
  constexpr int kMaxCentering = 100;
  BarrierState best = st;
  for (int outer = 0; outer < kMaxOuter; ++outer) {
    for (int it = 0; it < kMaxCentering; ++it) {
      refresh_slack(st.y);
      std::vector<double> grad(k), hess(k * k, 0.0);
      for (std::size_t j = 0; j < k; ++j) {
        grad[j] = 1.0 / st.y[j];
        hess[j * k + j] = 1.0 / (st.y[j] * st.y[j]);
      }
      for (std::size_t i = 0; i < n_rows; ++i) {
        const double inv = 1.0 / s[i];
        const double c = st.mu * inv * inv;
        for (std::size_t p = 0; p < k; ++p) {
          grad[p] -= st.mu * rows[i][p] * inv;
          if (rows[i][p] == 0.0) continue;
          for (std::size_t q = 0; q < k; ++q) hess[p * k + q] += c * rows[i][p] * rows[i][q];
        }
      }
      const auto step = cholesky_solve(hess, grad, k);
      double dec = 0.0;
      for (std::size_t j = 0; j < k; ++j) dec += grad[j] * step[j];
      // Decrement of the self-concordant function phi / mu.
      const double lam = std::sqrt(std::max(dec, 0.0) / st.mu);
      if (lam * lam < 1e-14) break;
      double t = lam > 0.25 ? 1.0 / (1.0 + lam) : 1.0;
      std::vector<double> trial(k);
      for (;;) {
        for (std::size_t j = 0; j < k; ++j) trial[j] = st.y[j] + t * step[j];
        bool ok = std::all_of(trial.begin(), trial.end(), [](double v) { return v > 0.0; });
        for (std::size_t i = 0; ok && i < n_rows; ++i) ok = row_dot(rows[i], trial) < 1.0;
        if (ok) break;
        t *= 0.5;
        if (t < 1e-30) break;
      }
      if (t < 1e-30) break;
      st.y = trial;
      ++st.steps;
    }

    refresh_slack(st.y);
    st.lambda.assign(n_rows, 0.0);
    double lambda_sum = 0.0;
    std::vector<double> weights(k, 0.0);
    for (std::size_t i = 0; i < n_rows; ++i) {
      st.lambda[i] = st.mu / std::max(s[i], 1e-300);
      lambda_sum += st.lambda[i];
      for (std::size_t j = 0; j < k; ++j) weights[j] += st.lambda[i] * rows[i][j];
    }
    double dual = lambda_sum - static_cast<double>(k);
    double primal = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      dual -= std::log(weights[j]);
      primal += std::log(st.y[j]);
    }
    st.gap = std::max(dual - primal, 0.0);
    // Once rounding in the slacks dominates, further path steps only lose
    // accuracy; keep the best certified iterate.
    if (st.gap >= best.gap && outer > 0) {
      st = std::move(best);
      return;
    }
    best = st;
    if (st.gap <= gap_tol) return;
    st.mu *= 0.1;
  }
}

// Lawson-Hanson nonnegative least squares: min |sum_a lambda_a c_a - g|,
// lambda >= 0, for a few columns c_a in R^k. Returns nothing if a subproblem
// is singular.
inline std::optional<std::vector<double>> nnls(const std::vector<const std::vector<double>*>& cols,
                                               const std::vector<double>& g) {
  const std::size_t k = g.size(), m = cols.size();
  std::vector<double> x(m, 0.0);
  std::vector<char> passive(m, 0);
  auto residual = [&](const std::vector<double>& v) {
    std::vector<double> r = g;
    for (std::size_t a = 0; a < m; ++a) {
      if (v[a] == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) r[j] -= v[a] * (*cols[a])[j];
    }
    return r;
  };
  // Least squares on the passive columns via the normal equations.
  auto solve_passive = [&]() -> std::optional<std::vector<double>> {
    std::vector<std::size_t> idx;
    for (std::size_t a = 0; a < m; ++a) {
      if (passive[a]) idx.push_back(a);
    }
    const std::size_t p = idx.size();
    std::vector<double> gram(p * p), rhs(p);
    for (std::size_t u = 0; u < p; ++u) {
      rhs[u] = row_dot(*cols[idx[u]], g);
      for (std::size_t v = 0; v < p; ++v) gram[u * p + v] = row_dot(*cols[idx[u]], *cols[idx[v]]);
    }
    std::vector<double> z;
    try {
      z = cholesky_solve(gram, rhs, p);
    } catch (const SolverError&) {
      return std::nullopt;
    }
    std::vector<double> full(m, 0.0);
    for (std::size_t u = 0; u < p; ++u) full[idx[u]] = z[u];
    return full;
  };
  const int max_outer = static_cast<int>(3 * m + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    const auto r = residual(x);
    std::size_t best = m;
    double best_w = 1e-14;
    std::size_t passive_count = 0;
    for (std::size_t a = 0; a < m; ++a) {
      if (passive[a]) {
        ++passive_count;
        continue;
      }
      const double w = row_dot(*cols[a], r);
      if (w > best_w) {
        best_w = w;
        best = a;
      }
    }
    if (best == m || passive_count >= k) break;
    passive[best] = 1;
    for (int inner = 0; inner <= static_cast<int>(m); ++inner) {
      auto z = solve_passive();
      if (!z) return std::nullopt;
      bool positive = true;
      for (std::size_t a = 0; a < m; ++a) {
        if (passive[a] && !((*z)[a] > 0.0)) positive = false;
      }
      if (positive) {
        x = std::move(*z);
        break;
      }
      double alpha = 1.0;
      for (std::size_t a = 0; a < m; ++a) {
        if (passive[a] && !((*z)[a] > 0.0)) alpha = std::min(alpha, x[a] / (x[a] - (*z)[a]));
      }
      for (std::size_t a = 0; a < m; ++a) {
        if (!passive[a]) continue;
        x[a] += alpha * ((*z)[a] - x[a]);
        if (x[a] <= 1e-300) {
          x[a] = 0.0;
          passive[a] = 0;
        }
      }
    }
  }
  return x;
}

// Newton's method on the KKT system restricted to an active set:
//   y_j * sum_{i in A} lambda_i w_ij = 1,   <w_i, y> = 1  (i in A).
// The set is the support of a nonnegative fit of sum lambda_i w_i = 1/y over
// the nearly tight rows, which also picks a basis at degenerate vertices.
// Returns false when the system is singular or the result is not a valid
// primal/dual pair, in which case the barrier iterate is kept.
inline bool polish_active_set(const std::vector<std::vector<double>>& rows, BarrierState& st) {
  const std::size_t k = st.y.size();
  std::vector<std::size_t> near;
  std::vector<const std::vector<double>*> cols;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (1.0 - row_dot(rows[i], st.y) <= 1e-5) {
      near.push_back(i);
      cols.push_back(&rows[i]);
    }
  }
  if (near.empty()) return false;
  std::vector<double> g(k);
  for (std::size_t j = 0; j < k; ++j) g[j] = 1.0 / st.y[j];
  const auto fit = nnls(cols, g);
  if (!fit) return false;
  std::vector<std::size_t> act;
  std::vector<double> lam0;
  for (std::size_t a = 0; a < near.size(); ++a) {
    if ((*fit)[a] > 0.0) {
      act.push_back(near[a]);
      lam0.push_back((*fit)[a]);
    }
  }
  std::vector<double> y = st.y;
  std::vector<double> lam = lam0;
  // Newton on the KKT system for the current set; false if singular or stalled.
  auto newton = [&]() {
    const std::size_t m = act.size();
    if (m == 0) return false;
    const std::size_t dim = k + m;
    auto residual = [&](std::vector<double>& f) {
      f.assign(dim, 0.0);
      for (std::size_t j = 0; j < k; ++j) {
        double w = 0.0;
        for (std::size_t a = 0; a < m; ++a) w += lam[a] * rows[act[a]][j];
        f[j] = y[j] * w - 1.0;
      }
      for (std::size_t a = 0; a < m; ++a) f[k + a] = row_dot(rows[act[a]], y) - 1.0;
      double r = 0.0;
      for (double v : f) r = std::max(r, std::abs(v));
      return r;
    };

    std::vector<double> f;
    double res = residual(f);
    for (int it = 0; it < 30 && res > 1e-15; ++it) {
      std::vector<double> jac(dim * dim, 0.0);
      for (std::size_t j = 0; j < k; ++j) {
        double w = 0.0;
        for (std::size_t a = 0; a < m; ++a) w += lam[a] * rows[act[a]][j];
        jac[j * dim + j] = w;
        for (std::size_t a = 0; a < m; ++a) jac[j * dim + k + a] = y[j] * rows[act[a]][j];
      }
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t j = 0; j < k; ++j) jac[(k + a) * dim + j] = rows[act[a]][j];
      }
      // Gaussian elimination with partial pivoting on [J | -f].
      std::vector<double> rhs(dim);
      for (std::size_t r = 0; r < dim; ++r) rhs[r] = -f[r];
      for (std::size_t c = 0; c < dim; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < dim; ++r) {
          if (std::abs(jac[r * dim + c]) > std::abs(jac[piv * dim + c])) piv = r;
        }
        if (std::abs(jac[piv * dim + c]) < 1e-13) return false;
        if (piv != c) {
          for (std::size_t q = 0; q < dim; ++q) std::swap(jac[c * dim + q], jac[piv * dim + q]);
          std::swap(rhs[c], rhs[piv]);
        }
        for (std::size_t r = c + 1; r < dim; ++r) {
          const double factor = jac[r * dim + c] / jac[c * dim + c];
          if (factor == 0.0) continue;
          for (std::size_t q = c; q < dim; ++q) jac[r * dim + q] -= factor * jac[c * dim + q];
          rhs[r] -= factor * rhs[c];
        }
      }
      for (std::size_t r = dim; r-- > 0;) {
        double v = rhs[r];
        for (std::size_t q = r + 1; q < dim; ++q) v -= jac[r * dim + q] * rhs[q];
        rhs[r] = v / jac[r * dim + r];
      }
      for (std::size_t j = 0; j < k; ++j) y[j] += rhs[j];
      for (std::size_t a = 0; a < m; ++a) lam[a] += rhs[k + a];
      res = residual(f);
    }
    if (res > 1e-12) return false;
    if (std::any_of(y.begin(), y.end(), [](double v) { return !(v > 0.0); })) return false;
    return true;
  };
  // Active-set corrections: a degenerate vertex can make the first support
  // wrong, so drop negative multipliers and admit violated rows.
  bool settled = false;
  for (std::size_t pass = 0; pass < 3 * k + 5 && !settled; ++pass) {
    if (!newton()) return false;
    const auto neg = std::min_element(lam.begin(), lam.end());
    if (*neg < 0.0) {
      const auto at = neg - lam.begin();
      act.erase(act.begin() + at);
      lam.erase(neg);
      continue;
    }
    std::size_t arg = rows.size();
    double top = 1.0 + 1e-13;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double v = row_dot(rows[i], y);
      if (v > top) {
        top = v;
        arg = i;
      }
    }
    if (arg < rows.size() && std::find(act.begin(), act.end(), arg) == act.end()) {
      act.push_back(arg);
      lam.push_back(0.0);
      continue;
    }
    settled = arg == rows.size();
  }
  if (!settled) return false;
  const std::size_t m = act.size();

  // Pull the point back inside if rounding left an active row marginally above 1.
  double worst = 0.0;
  for (const auto& row : rows) worst = std::max(worst, row_dot(row, y));
  if (worst > 1.0 + 1e-13) return false;
  if (worst > 1.0) {
    for (auto& v : y) v /= worst;
  }

  std::vector<double> weights(k, 0.0);
  double lambda_sum = 0.0;
  std::vector<double> full(rows.size(), 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    full[act[a]] = lam[a];
    lambda_sum += lam[a];
    for (std::size_t j = 0; j < k; ++j) weights[j] += lam[a] * rows[act[a]][j];
  }
  double gap = lambda_sum - static_cast<double>(k);
  for (std::size_t j = 0; j < k; ++j) gap -= std::log(weights[j]) + std::log(y[j]);
  gap = std::max(gap, 0.0);
  if (gap > st.gap) return false;
  st.y = std::move(y);
  st.lambda = std::move(full);
  st.gap = gap;
  return true;
}

}  // namespace detail

/// Solves the program and returns the optimal simplex with its certificate.
inline SimplexSolution solve_min_vol_simplex(const SimplexProgram& prog) {
  const std::size_t n = prog.dim;
  if (n == 0) throw DomainError("simplex program needs dimension >= 1");
  for (const auto& [j, a] : prog.fixed) {
    if (j >= n) throw DomainError("fixed intercept index out of range");
    if (!(a > 0.0)) throw DomainError("fixed intercept must be positive");
    if (prog.dropped.count(j)) throw DomainError("axis both fixed and dropped");
  }
  for (std::size_t j : prog.dropped) {
    if (j >= n) throw DomainError("dropped axis index out of range");
  }

  std::vector<std::size_t> free_axes;
  for (std::size_t j = 0; j < n; ++j) {
    if (!prog.fixed.count(j) && !prog.dropped.count(j)) free_axes.push_back(j);
  }
  const std::size_t k = free_axes.size();

  // Normalized rows: free part of u_i divided by the room left by fixed axes.
  std::vector<double> room(prog.points.size(), 1.0);
  std::vector<std::vector<double>> raw(prog.points.size());
  for (std::size_t i = 0; i < prog.points.size(); ++i) {
    const auto& u = prog.points[i];
    if (u.dim() != n) throw DomainError("point dimension does not match program");
    for (std::size_t j = 0; j < n; ++j) {
      if (prog.dropped.count(j)) continue;
      if (!std::isfinite(u[j])) throw DegenerateError("degenerate: drop axis first");
      if (u[j] < 0.0) throw DomainError("Psi-point coordinates must be nonnegative");
    }
    for (const auto& [j, a] : prog.fixed) {
      if (std::isfinite(a)) room[i] -= u[j] / a;
    }
    raw[i].resize(k);
    for (std::size_t p = 0; p < k; ++p) raw[i][p] = u[free_axes[p]];
  }

  std::vector<double> axis_scale(k, 0.0);
  std::vector<std::size_t> row_source;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const bool carries =
        std::any_of(raw[i].begin(), raw[i].end(), [](double v) { return v > 0.0; });
    if (room[i] < -1e-14 || (carries && room[i] <= 0.0)) {
      std::ostringstream msg;
      msg << "fixed intercepts exclude point " << i << " (room " << room[i] << ")";
      throw InfeasibleError(msg.str());
    }
    if (!carries) continue;
    row_source.push_back(i);
    for (std::size_t p = 0; p < k; ++p) {
      axis_scale[p] = std::max(axis_scale[p], raw[i][p] / room[i]);
    }
  }
  for (std::size_t p = 0; p < k; ++p) {
    if (!(axis_scale[p] > 0.0)) {
      std::ostringstream msg;
      msg << "degenerate: points have zero extent along axis " << free_axes[p];
      throw DegenerateError(msg.str());
    }
  }

  SimplexSolution sol;
  sol.multipliers.assign(prog.points.size(), 0.0);
  std::vector<double> intercepts(n, kInf);
  for (const auto& [j, a] : prog.fixed) intercepts[j] = a;
  if (k == 0) {
    sol.simplex = SimplexParams(intercepts);
    return sol;
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(row_source.size());
  for (std::size_t i : row_source) {
    std::vector<double> w(k);
    for (std::size_t p = 0; p < k; ++p) w[p] = raw[i][p] / (room[i] * axis_scale[p]);
    rows.push_back(std::move(w));
  }

  // Cutting planes: solve on a working set seeded with the extreme row of
  // each axis, then admit the most violated rows until every row holds.
  // Dense boundary samples are mostly redundant or degenerate, so the working
  // set stays small and the active-set polish stays well posed.
  std::vector<char> in_set(rows.size(), 0);
  std::vector<std::size_t> work;
  auto admit = [&](std::size_t r) {
    if (!in_set[r]) {
      in_set[r] = 1;
      work.push_back(r);
    }
  };
  for (std::size_t p = 0; p < k; ++p) {
    std::size_t arg = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r][p] > rows[arg][p]) arg = r;
    }
    admit(arg);
  }
  constexpr int kMaxRounds = 200;
  constexpr double kSatisfied = 1e-12;
  const std::size_t batch = std::max<std::size_t>(2 * k, 8);
  detail::BarrierState st;
  for (int round = 0;; ++round) {
    std::vector<std::vector<double>> sub;
    sub.reserve(work.size());
    for (std::size_t r : work) sub.push_back(rows[r]);
    detail::BarrierState fine;
    // Entries of the scaled rows are at most 1, so this start is strictly feasible.
    fine.y.assign(k, 0.5 / static_cast<double>(k));
    detail::barrier_solve(sub, fine, std::max(prog.tolerance, 1e-9));
    detail::polish_active_set(sub, fine);
    std::vector<std::pair<double, std::size_t>> violated;
    double worst = 1.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double v = detail::row_dot(rows[r], fine.y);
      worst = std::max(worst, v);
      if (!in_set[r] && v > 1.0 + kSatisfied) violated.emplace_back(v, r);
    }
    if (violated.empty()) {
      // Rows within rounding of the boundary: shrink y onto the feasible set.
      if (worst > 1.0) {
        for (auto& v : fine.y) v /= worst;
        fine.gap += static_cast<double>(k) * std::log(worst);
      }
      std::vector<double> lambda(rows.size(), 0.0);
      for (std::size_t q = 0; q < work.size(); ++q) lambda[work[q]] = fine.lambda[q];
      fine.lambda = std::move(lambda);
      st = std::move(fine);
      break;
    }
    if (round == kMaxRounds) throw SolverError("cutting-plane refinement did not settle", fine.gap);
    const std::size_t take = std::min(batch, violated.size());
    std::partial_sort(violated.begin(), violated.begin() + static_cast<std::ptrdiff_t>(take),
                      violated.end(), std::greater<>());
    for (std::size_t q = 0; q < take; ++q) admit(violated[q].second);
  }
  if (st.gap > prog.tolerance) {
    std::ostringstream msg;
    msg << "simplex program stopped at gap " << st.gap;
    throw SolverError(msg.str(), st.gap);
  }

  for (std::size_t p = 0; p < k; ++p) intercepts[free_axes[p]] = axis_scale[p] / st.y[p];
  sol.simplex = SimplexParams(intercepts);
  sol.gap = st.gap;
  sol.newton_steps = st.steps;
  double lmax = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    sol.multipliers[row_source[r]] = st.lambda[r];
    lmax = std::max(lmax, st.lambda[r]);
  }
  for (std::size_t i = 0; i < sol.multipliers.size(); ++i) {
    if (sol.multipliers[i] > 1e-6 * lmax) sol.active.push_back(i);
  }
  return sol;
}

inline SimplexParams min_vol_simplex(const SimplexProgram& prog) {
  return solve_min_vol_simplex(prog).simplex;
}

}  // namespace wu
