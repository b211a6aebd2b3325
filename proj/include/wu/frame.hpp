#pragma once

// Invertible linear coordinate changes Y = L X. An indicatrix that is
// Reinhardt only after such a change (a slab {|l(X)| < c}) carries its frame;
// the Wu construction commutes with linear isomorphisms, so everything
// downstream works in Y.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "wu/errors.hpp"
#include "wu/geometry.hpp"

namespace wu {

class LinearFrame {
 public:
  using Matrix = std::vector<CVector>;  // row-major, n x n

  LinearFrame(Matrix forward, Matrix inverse)
      : forward_(std::move(forward)), inverse_(std::move(inverse)) {
    if (forward_.size() != inverse_.size()) throw DomainError("frame: size mismatch");
  }

  static LinearFrame identity(std::size_t n) {
    Matrix id(n, CVector(n, Complex{0.0, 0.0}));
    for (std::size_t j = 0; j < n; ++j) id[j][j] = 1.0;
    return {id, id};
  }

  /// Y_1 = sum c_j X_j and Y_k = X_k for the remaining coordinates, pivoting
  /// on the largest |c_p|.
  static LinearFrame from_functional(const CVector& c) {
    const std::size_t n = c.size();
    std::size_t p = 0;
    for (std::size_t j = 1; j < n; ++j) {
      if (std::abs(c[j]) > std::abs(c[p])) p = j;
    }
    if (!(std::abs(c[p]) > 0.0)) throw DegenerateError("frame: zero functional");
    Matrix fwd(n, CVector(n, Complex{0.0, 0.0}));
    Matrix inv(n, CVector(n, Complex{0.0, 0.0}));
    fwd[0] = c;
    std::size_t row = 1;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == p) continue;
      fwd[row][k] = 1.0;
      inv[k][row] = 1.0;
      ++row;
    }
    // X_p = (Y_1 - sum_{k != p} c_k Y_{row(k)}) / c_p
    inv[p][0] = 1.0 / c[p];
    row = 1;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == p) continue;
      inv[p][row] = -c[k] / c[p];
      ++row;
    }
    return {fwd, inv};
  }

  /// Block-diagonal frame on the concatenated space.
  static LinearFrame direct_sum(const LinearFrame& a, const LinearFrame& b) {
    const std::size_t n = a.dim(), m = b.dim();
    Matrix fwd(n + m, CVector(n + m, Complex{0.0, 0.0}));
    Matrix inv = fwd;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        fwd[i][j] = a.forward_[i][j];
        inv[i][j] = a.inverse_[i][j];
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        fwd[n + i][n + j] = b.forward_[i][j];
        inv[n + i][n + j] = b.inverse_[i][j];
      }
    }
    return {fwd, inv};
  }

  std::size_t dim() const { return forward_.size(); }

  CVector apply(const CVector& x) const { return multiply(forward_, x); }
  CVector unapply(const CVector& y) const { return multiply(inverse_, y); }

  /// xi -> L^{-H} xi, the action on dual vectors.
  CVector apply_dual(const CVector& xi) const {
    const std::size_t n = dim();
    CVector out(n, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out[i] += std::conj(inverse_[j][i]) * xi[j];
    }
    return out;
  }

  const Matrix& forward() const { return forward_; }
  const Matrix& inverse() const { return inverse_; }

 private:
  static CVector multiply(const Matrix& m, const CVector& x) {
    if (x.size() != m.size()) throw DomainError("frame: dimension mismatch");
    CVector out(m.size(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) out[i] += m[i][j] * x[j];
    }
    return out;
  }

  Matrix forward_;
  Matrix inverse_;
};

}  // namespace wu
