#pragma once

// Closed-form invariant pseudometrics on model domains: the unit disc, the
// punctured disc, elementary Reinhardt domains
//
//     D_{alpha,C} = { z : |z^alpha| < e^C, z_j != 0 whenever alpha_j < 0 },
//
// and the bounds used for G_2 = {|z_1|(1 + |z_2|) < 1}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wu/errors.hpp"
#include "wu/geometry.hpp"

namespace wu {

enum class MetricKind { caratheodory, azukawa, kobayashi };

inline std::string to_string(MetricKind k) {
  switch (k) {
    case MetricKind::caratheodory: return "gamma";
    case MetricKind::azukawa: return "azukawa";
    case MetricKind::kobayashi: return "kappa";
  }
  return "?";
}

/// Shape of X -> eta(a; X) on an elementary Reinhardt domain: identically
/// zero, a function of one linear form (s = n), or of the moduli |X_j| of the
/// zero coordinates of a (s < n).
enum class MetricShape { zero, slab, monomial };

/// Which closed-form branch produced a value on an elementary Reinhardt domain.
struct BranchInfo {
  int case_number = 0;  // 1..4
  std::size_t s = 0;    // number of nonzero coordinates of the base point
  double r = 1.0;
  MetricShape shape = MetricShape::zero;
  std::string normalization;
};

struct MetricValue {
  double value = 0.0;
  MetricKind kind = MetricKind::caratheodory;
  int order = 1;  // k of gamma^(k)
  std::optional<BranchInfo> branch;
};

// ---------------------------------------------------------------------------
// Disc and punctured disc

/// gamma_D(z; X) = |X| / (1 - |z|^2), the normalization of every contractible family.
inline MetricValue gamma_disc(Complex z, Complex x) {
  const double r2 = std::norm(z);
  if (!(r2 < 1.0)) throw DomainError("gamma_disc: base point outside the unit disc");
  return {std::abs(x) / (1.0 - r2), MetricKind::caratheodory, 1, std::nullopt};
}

/// kappa on D \ {0}: pullback of gamma_D through the universal covering
/// lambda -> exp((lambda + 1) / (lambda - 1)), which gives |X| / (2|z| log(1/|z|)).
inline MetricValue kappa_punctured_disc(Complex z, Complex x) {
  const double r = std::abs(z);
  if (!(r > 0.0 && r < 1.0)) throw DomainError("kappa_punctured_disc: need 0 < |z| < 1");
  return {std::abs(x) / (2.0 * r * std::log(1.0 / r)), MetricKind::kobayashi, 1, std::nullopt};
}

/// eta_{D1 x D2} = max of the factor values (product property).
inline MetricValue product_metric(const std::vector<MetricValue>& values) {
  if (values.empty()) throw DomainError("product_metric: no factors");
  MetricValue out = values.front();
  out.branch.reset();
  for (const auto& v : values) out.value = std::max(out.value, v.value);
  return out;
}

// ---------------------------------------------------------------------------
// Multi-indices

namespace detail {

// Best rational approximation p/q of x with q <= max_den (continued fractions).
inline std::optional<std::pair<std::int64_t, std::int64_t>> rational_approx(double x,
                                                                           std::int64_t max_den,
                                                                           double rel_tol) {
  const double sign = x < 0 ? -1.0 : 1.0;
  double v = std::abs(x);
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rem = v;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(rem);
    if (fl > 9e15) break;
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(v - static_cast<double>(p1) / static_cast<double>(q1)) <=
        rel_tol * std::max(1.0, v)) {
      return std::pair{static_cast<std::int64_t>(sign) * p1, q1};
    }
    const double frac = rem - fl;
    if (frac <= 0.0) break;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

inline Complex ipow(Complex base, std::int64_t e) {
  if (e < 0) return 1.0 / ipow(base, -e);
  Complex out = 1.0;
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

}  // namespace detail

inline constexpr std::int64_t kRationalDenominatorBound = 1'000'000;

/// alpha in (R \ {0})^n together with its rational/irrational type.
class MultiIndex {
 public:
  /// Rational type is detected from alpha_j / alpha_1 unless declared.
  static MultiIndex from(std::vector<double> alpha, std::optional<bool> rational = std::nullopt) {
    if (alpha.empty()) throw DomainError("multi-index must be nonempty");
    for (double a : alpha) {
      if (!(a != 0.0) || !std::isfinite(a)) throw DomainError("multi-index entries must be nonzero");
    }
    MultiIndex m;
    m.alpha_ = std::move(alpha);
    if (rational) {
      m.rational_ = *rational;
    } else {
      m.rational_ = true;
      for (double a : m.alpha_) {
        if (!detail::rational_approx(a / m.alpha_.front(), kRationalDenominatorBound, 1e-13)) {
          m.rational_ = false;
          break;
        }
      }
    }
    return m;
  }

  std::size_t dim() const { return alpha_.size(); }
  const std::vector<double>& alpha() const { return alpha_; }
  double operator[](std::size_t j) const { return alpha_[j]; }
  bool rational() const { return rational_; }

  /// l: number of negative entries.
  std::size_t negative_count() const {
    return static_cast<std::size_t>(
        std::count_if(alpha_.begin(), alpha_.end(), [](double a) { return a < 0.0; }));
  }

  /// t_l: smallest positive entry, when there is one.
  std::optional<double> min_positive() const {
    std::optional<double> t;
    for (double a : alpha_) {
      if (a > 0.0 && (!t || a < *t)) t = a;
    }
    return t;
  }

  /// Relatively prime integer multiple with the same signs (rational type only).
  std::vector<std::int64_t> integer_form() const {
    if (!rational_) throw UnsupportedError("irrational multi-index has no integer form");
    std::vector<std::int64_t> num(alpha_.size()), den(alpha_.size());
    std::int64_t lcm = 1;
    for (std::size_t j = 0; j < alpha_.size(); ++j) {
      auto pq = detail::rational_approx(alpha_[j] / alpha_.front(), kRationalDenominatorBound, 1e-13);
      if (!pq) throw UnsupportedError("declared rational multi-index is not commensurable");
      num[j] = pq->first;
      den[j] = pq->second;
      lcm = std::lcm(lcm, den[j]);
      if (lcm > (std::int64_t{1} << 40)) throw UnsupportedError("integer form overflows");
    }
    std::int64_t g = 0;
    std::vector<std::int64_t> out(alpha_.size());
    for (std::size_t j = 0; j < alpha_.size(); ++j) {
      out[j] = num[j] * (lcm / den[j]);
      g = std::gcd(g, out[j] < 0 ? -out[j] : out[j]);
    }
    const std::int64_t sign = alpha_.front() < 0 ? -1 : 1;
    for (auto& v : out) v = sign * v / g;
    return out;
  }

 private:
  std::vector<double> alpha_;
  bool rational_ = true;
};

/// Degree-r Taylor term of z -> z^alpha at a, evaluated on X:
/// sum_{|beta| = r} D^beta Phi(a) X^beta / beta!.
inline Complex phi_r(const std::vector<std::int64_t>& alpha, const CVector& a, const CVector& x,
                     int r) {
  const std::size_t n = alpha.size();
  if (a.size() != n || x.size() != n) throw DomainError("phi_r: dimension mismatch");
  if (r < 1) throw DomainError("phi_r: order must be >= 1");
  const auto deg = static_cast<std::size_t>(r);
  std::vector<Complex> poly(deg + 1, Complex{0.0, 0.0});
  poly[0] = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[j] == Complex{0.0, 0.0} && alpha[j] < 0) {
      throw DomainError("phi_r: zero coordinate with negative exponent");
    }
    // (a_j + X_j)^alpha_j truncated at degree r (generalized binomial series).
    std::vector<Complex> factor(deg + 1, Complex{0.0, 0.0});
    double binom = 1.0;
    for (std::size_t t = 0; t <= deg; ++t) {
      if (t > 0) binom *= (static_cast<double>(alpha[j]) - static_cast<double>(t - 1)) /
                          static_cast<double>(t);
      if (binom == 0.0) break;
      const std::int64_t e = alpha[j] - static_cast<std::int64_t>(t);
      Complex base_power;
      if (a[j] == Complex{0.0, 0.0}) {
        if (e != 0) continue;
        base_power = 1.0;
      } else {
        base_power = detail::ipow(a[j], e);
      }
      factor[t] = binom * base_power * detail::ipow(x[j], static_cast<std::int64_t>(t));
    }
    std::vector<Complex> next(deg + 1, Complex{0.0, 0.0});
    for (std::size_t p = 0; p <= deg; ++p) {
      if (poly[p] == Complex{0.0, 0.0}) continue;
      for (std::size_t q = 0; p + q <= deg; ++q) next[p + q] += poly[p] * factor[q];
    }
    poly = std::move(next);
  }
  return poly[deg];
}

inline Complex phi_r(const MultiIndex& alpha, const CVector& a, const CVector& x, int r) {
  for (double v : alpha.alpha()) {
    if (v != std::round(v)) throw UnsupportedError("phi_r: multi-index is not integral");
  }
  std::vector<std::int64_t> ia(alpha.dim());
  for (std::size_t j = 0; j < alpha.dim(); ++j) ia[j] = static_cast<std::int64_t>(alpha[j]);
  return phi_r(ia, a, x, r);
}

// ---------------------------------------------------------------------------
// Elementary Reinhardt domains

inline bool elem_reinhardt_contains(const MultiIndex& alpha, double big_c, const CVector& z) {
  if (z.size() != alpha.dim()) throw DomainError("dimension mismatch");
  double log_mod = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double m = std::abs(z[j]);
    if (m == 0.0) {
      if (alpha[j] < 0.0) return false;
      return true;  // a zero coordinate with positive exponent forces |z^alpha| = 0
    }
    log_mod += alpha[j] * std::log(m);
  }
  return log_mod < big_c;
}

/// The base point after normalization, with s nonzero leading coordinates.
struct ElemReinhardtPoint {
  CVector a;
  std::size_t s = 0;
  double r = 1.0;  // alpha_{s+1} + ... + alpha_n if s < n, else 1
};

/// Coordinate change bringing (alpha, C, a) to the normal form assumed by the
/// closed formulas: C = 0, negative exponents first, zero coordinates last,
/// alpha relatively prime integers (rational type) or t_l = 1 (irrational,
/// l < n). The change is biholomorphic and linear, so metrics are evaluated
/// after mapping both the point and the vector.
struct Normalization {
  MultiIndex alpha;                         // normalized multi-index
  std::vector<std::int64_t> integer_alpha;  // rational type only
  std::vector<std::size_t> perm;            // normalized j <- original perm[j]
  double alpha_scale = 1.0;                 // alpha_norm = alpha_scale * alpha[perm]
  std::size_t scaled_coordinate = 0;        // original index absorbing C
  double coordinate_factor = 1.0;
  ElemReinhardtPoint point;

  CVector map_vector(const CVector& v) const {
    CVector out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
      out[j] = v[perm[j]];
      if (perm[j] == scaled_coordinate) out[j] *= coordinate_factor;
    }
    return out;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "perm=";
    for (std::size_t j = 0; j < perm.size(); ++j) os << (j ? ":" : "") << perm[j];
    os << " alpha_scale=" << alpha_scale << " z" << scaled_coordinate << "*=" << coordinate_factor;
    return os.str();
  }
};

inline Normalization normalize(const MultiIndex& alpha, double big_c, const CVector& a) {
  const std::size_t n = alpha.dim();
  if (a.size() != n) throw DomainError("base point dimension does not match multi-index");
  if (!elem_reinhardt_contains(alpha, big_c, a)) {
    throw DomainError("base point lies outside the elementary Reinhardt domain");
  }
  Normalization nz;
  nz.scaled_coordinate = 0;
  nz.coordinate_factor = std::exp(-big_c / alpha[0]);

  // Negative exponents, then positive with nonzero coordinate, then zeros.
  auto group = [&](std::size_t j) {
    if (alpha[j] < 0.0) return 0;
    return a[j] != Complex{0.0, 0.0} ? 1 : 2;
  };
  nz.perm.resize(n);
  std::iota(nz.perm.begin(), nz.perm.end(), std::size_t{0});
  std::stable_sort(nz.perm.begin(), nz.perm.end(),
                   [&](std::size_t p, std::size_t q) { return group(p) < group(q); });

  std::vector<double> permuted(n);
  for (std::size_t j = 0; j < n; ++j) permuted[j] = alpha[nz.perm[j]];
  const auto base = MultiIndex::from(permuted, alpha.rational());
  if (base.rational()) {
    nz.integer_alpha = base.integer_form();
    nz.alpha_scale = static_cast<double>(nz.integer_alpha.front()) / permuted.front();
    std::vector<double> as_real(nz.integer_alpha.begin(), nz.integer_alpha.end());
    nz.alpha = MultiIndex::from(as_real, true);
  } else {
    const auto t = base.min_positive();
    nz.alpha_scale = t ? 1.0 / *t : 1.0;
    for (auto& v : permuted) v *= nz.alpha_scale;
    nz.alpha = MultiIndex::from(permuted, false);
  }

  nz.point.a = nz.map_vector(a);
  nz.point.s = static_cast<std::size_t>(std::count_if(
      nz.point.a.begin(), nz.point.a.end(), [](Complex c) { return c != Complex{0.0, 0.0}; }));
  if (nz.point.s < n) {
    double r = 0.0;
    for (std::size_t j = nz.point.s; j < n; ++j) r += nz.alpha[j];
    nz.point.r = r;
  }
  return nz;
}

namespace detail {

inline double gamma_disc_abs(double w, double y) { return y / (1.0 - w * w); }

inline double kappa_punctured_abs(double w, double y) {
  return y / (2.0 * w * std::log(1.0 / w));
}

}  // namespace detail

/// eta_{D_{alpha,C}}(a; X) for eta = gamma^(k), A or kappa, dispatched on the
/// four rational/irrational x (l < n)/(l = n) cases and on s = n / s < n.
inline MetricValue elem_reinhardt_metric(MetricKind kind, const MultiIndex& alpha, double big_c,
                                         const CVector& a, const CVector& x, int order = 1) {
  if (x.size() != alpha.dim()) throw DomainError("vector dimension does not match multi-index");
  if (order < 1) throw DomainError("order k of gamma^(k) must be >= 1");
  if (kind != MetricKind::caratheodory) order = 1;
  const Normalization nz = normalize(alpha, big_c, a);
  const std::size_t n = alpha.dim();
  const std::size_t l = nz.alpha.negative_count();
  const std::size_t s = nz.point.s;
  const double r = nz.point.r;
  const bool rational = nz.alpha.rational();
  const CVector& p = nz.point.a;
  const CVector v = nz.map_vector(x);

  BranchInfo info;
  info.case_number = l < n ? (rational ? 1 : 2) : (rational ? 3 : 4);
  info.s = s;
  info.r = r;
  info.normalization = nz.describe();

  // |a^alpha| over the nonzero coordinates (zero when s < n).
  double log_w = 0.0;
  for (std::size_t j = 0; j < s; ++j) log_w += nz.alpha[j] * std::log(std::abs(p[j]));
  const double w = s < n ? 0.0 : std::exp(log_w);
  // |sum alpha_j X_j / a_j| (s = n only).
  auto linear_part = [&]() {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += nz.alpha[j] * v[j] / p[j];
    return std::abs(sum);
  };
  // (|a_1|^alpha_1 ... |a_s|^alpha_s |X_{s+1}|^alpha_{s+1} ... |X_n|^alpha_n)^(1/r).
  auto monomial_part = [&]() {
    double lg = log_w;
    for (std::size_t j = s; j < n; ++j) {
      const double m = std::abs(v[j]);
      if (m == 0.0) return 0.0;
      lg += nz.alpha[j] * std::log(m);
    }
    return std::exp(lg / r);
  };
  auto taylor_term = [&](int deg) { return std::abs(phi_r(nz.integer_alpha, p, v, deg)); };
  auto int_r = [&]() {
    const double rr = std::round(r);
    if (std::abs(rr - r) > 1e-9 || rr < 1) throw DomainError("non-integral r in rational case");
    return static_cast<int>(rr);
  };

  const MetricShape varying = s == n ? MetricShape::slab : MetricShape::monomial;
  double value = 0.0;
  switch (info.case_number) {
    case 1: {
      if (kind == MetricKind::caratheodory) {
        if (l == 0) {
          const int rr = int_r();
          if (order % rr == 0) {
            value = std::pow(detail::gamma_disc_abs(w, taylor_term(rr)), 1.0 / rr);
            info.shape = varying;
          }
        } else if (order == 1) {
          value = detail::gamma_disc_abs(w, taylor_term(1));
          if (s == n || int_r() == 1) info.shape = varying;
        } else {
          throw UnsupportedError(
              "gamma^(k) for k >= 2 on rational domains with negative exponents has no closed form "
              "here");
        }
      } else if (kind == MetricKind::azukawa) {
        const int rr = int_r();
        value = std::pow(detail::gamma_disc_abs(w, taylor_term(rr)), 1.0 / rr);
        info.shape = varying;
      } else if (s == n) {
        info.shape = varying;
        const double t = *nz.alpha.min_positive();
        const double wt = std::pow(w, 1.0 / t);
        value = detail::gamma_disc_abs(wt, wt * linear_part() / t);
      } else {
        value = monomial_part();
        info.shape = varying;
      }
      break;
    }
    case 2: {
      if (kind == MetricKind::caratheodory) {
        value = 0.0;
      } else if (kind == MetricKind::azukawa) {
        value = s == n ? 0.0 : monomial_part();
        if (s < n) info.shape = varying;
      } else {
        value = s == n ? detail::gamma_disc_abs(w, w * linear_part()) : monomial_part();
        info.shape = varying;
      }
      break;
    }
    case 3: {
      info.shape = MetricShape::slab;
      if (kind == MetricKind::kobayashi) {
        value = detail::kappa_punctured_abs(w, w * linear_part());
      } else {
        value = detail::gamma_disc_abs(w, taylor_term(1));
      }
      break;
    }
    case 4: {
      if (kind == MetricKind::kobayashi) info.shape = MetricShape::slab;
      value = kind == MetricKind::kobayashi ? detail::kappa_punctured_abs(w, w * linear_part())
                                            : 0.0;
      break;
    }
    default: break;
  }
  return {value, kind, order, info};
}

// ---------------------------------------------------------------------------
// G_2 bounds at the points (x, 0)

/// Lower bound for every contractible family on G_2 at (x, 0), from the
/// contraction F(z) = z_1 (1 + z_2) into the disc after Reinhardt symmetrization.
inline MetricValue g2_gamma_lower(double x, const CVector& v) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("g2_gamma_lower: need 0 < x < 1");
  if (v.size() != 2) throw DomainError("g2_gamma_lower: vector must lie in C^2");
  return {(std::abs(v[0]) + x * std::abs(v[1])) / (1.0 - x * x), MetricKind::caratheodory, 1,
          std::nullopt};
}

/// Two vectors in the closed kappa-indicatrix of G_2 at (x, 0): the image
/// directions of the discs lambda -> (x, (1-x)/x lambda) and the Moebius disc
/// lambda -> ((lambda + x)/(1 + x lambda), 0).
inline std::pair<CVector, CVector> g2_kappa_upper_points(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("g2_kappa_upper_points: need 0 < x < 1");
  return {CVector{0.0, (1.0 - x) / x}, CVector{1.0 - x * x, 0.0}};
}

}  // namespace wu
