#pragma once

// Basic objects shared by every module: complex vectors, diagonal Hermitian
// forms, the simplexes T_a in the positive orthant and the map
// Psi(z) = (|z_1|^2, ..., |z_n|^2) that links the two.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "wu/errors.hpp"

namespace wu {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Absolute + relative comparison tolerance.
struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-12;

  double slack(double reference) const { return abs + rel * std::abs(reference); }
  bool equal(double a, double b) const {
    if (a == b) return true;
    return std::abs(a - b) <= slack(std::max(std::abs(a), std::abs(b)));
  }
};

inline double norm(const CVector& x) {
  double s = 0.0;
  for (const auto& c : x) s += std::norm(c);
  return std::sqrt(s);
}

inline CVector real_vector(const std::vector<double>& v) {
  return CVector(v.begin(), v.end());
}

inline CVector unit_vector(std::size_t n, std::size_t j) {
  CVector e(n, Complex{0.0, 0.0});
  e.at(j) = 1.0;
  return e;
}

/// Point of the positive orthant, typically the image Psi(z).
struct PsiPoint {
  std::vector<double> coords;

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t j) const { return coords[j]; }
};

/// q(X) = (sum_{a_j < inf} |X_j|^2 / a_j)^(1/2). An infinite axis is a
/// direction on which q vanishes.
class DiagonalHermitianForm {
 public:
  DiagonalHermitianForm() = default;
  explicit DiagonalHermitianForm(std::vector<double> axes) : axes_(std::move(axes)) {
    for (double a : axes_) {
      if (!(a > 0.0)) throw DomainError("diagonal form axis must lie in (0, inf]");
    }
  }

  std::size_t dim() const { return axes_.size(); }
  const std::vector<double>& axes() const { return axes_; }
  double axis(std::size_t j) const { return axes_.at(j); }

  bool is_norm() const {
    return std::all_of(axes_.begin(), axes_.end(), [](double a) { return std::isfinite(a); });
  }

  double operator()(const CVector& x) const {
    if (x.size() != axes_.size()) throw DomainError("dimension mismatch in form evaluation");
    double s = 0.0;
    for (std::size_t j = 0; j < axes_.size(); ++j) {
      if (std::isfinite(axes_[j])) s += std::norm(x[j]) / axes_[j];
    }
    return std::sqrt(s);
  }

  friend bool operator==(const DiagonalHermitianForm&, const DiagonalHermitianForm&) = default;

 private:
  std::vector<double> axes_;
};

/// T_a = {u in R^n_+ : sum u_j / a_j < 1}; infinite intercepts drop out of
/// the sum.
class SimplexParams {
 public:
  SimplexParams() = default;
  explicit SimplexParams(std::vector<double> intercepts) : intercepts_(std::move(intercepts)) {
    for (double a : intercepts_) {
      if (!(a > 0.0)) throw DomainError("simplex intercept must lie in (0, inf]");
    }
  }

  std::size_t dim() const { return intercepts_.size(); }
  const std::vector<double>& intercepts() const { return intercepts_; }
  double intercept(std::size_t j) const { return intercepts_.at(j); }

  bool bounded() const {
    return std::all_of(intercepts_.begin(), intercepts_.end(),
                       [](double a) { return std::isfinite(a); });
  }

  /// sum_j u_j / a_j over finite intercepts.
  double level(const PsiPoint& u) const {
    if (u.dim() != dim()) throw DomainError("dimension mismatch in simplex level");
    double s = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (std::isfinite(intercepts_[j])) s += u[j] / intercepts_[j];
    }
    return s;
  }

  friend bool operator==(const SimplexParams&, const SimplexParams&) = default;

 private:
  std::vector<double> intercepts_;
};

inline PsiPoint psi(const CVector& z) {
  PsiPoint p;
  p.coords.reserve(z.size());
  for (const auto& c : z) p.coords.push_back(std::norm(c));
  return p;
}

/// vol T_a = prod a_j / n!.
inline double simplex_volume(const SimplexParams& t) {
  if (!t.bounded()) throw DegenerateError("unbounded simplex has no finite volume");
  double v = 1.0;
  for (std::size_t j = 0; j < t.dim(); ++j) v *= t.intercept(j) / static_cast<double>(j + 1);
  return v;
}

/// Closed containment of Psi-points in the ball of q: sum p_j / a_j <= 1.
inline bool form_contains(const DiagonalHermitianForm& q, const PsiPoint& p,
                          const Tolerance& tol = {0.0, 0.0}) {
  if (p.dim() != q.dim()) throw DomainError("dimension mismatch in form_contains");
  double s = 0.0;
  for (std::size_t j = 0; j < q.dim(); ++j) {
    if (std::isfinite(q.axis(j))) s += p[j] / q.axis(j);
  }
  return s <= 1.0 + tol.slack(1.0);
}

inline SimplexParams form_to_simplex(const DiagonalHermitianForm& q) {
  return SimplexParams(q.axes());
}

inline DiagonalHermitianForm simplex_to_form(const SimplexParams& t) {
  return DiagonalHermitianForm(t.intercepts());
}

}  // namespace wu
