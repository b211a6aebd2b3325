#pragma once

// Model domains and their indicatrices at the base points where they are
// known: polydiscs (anywhere), elementary Reinhardt domains (anywhere, via
// the closed forms), G_2 = {|z_1|(1 + |z_2|) < 1} on the axis z_2 = 0,
// G_n = G_2 x D^(n-2), the truncations D_m = G_n cap Psi^-1(T_m) at the
// origin, products, and two synthetic families.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wu/busemann.hpp"
#include "wu/errors.hpp"
#include "wu/frame.hpp"
#include "wu/geometry.hpp"
#include "wu/indicatrix.hpp"
#include "wu/metrics.hpp"

namespace wu {

struct PolydiscSpec {
  std::vector<double> radii;
};
struct ElemReinhardtSpec {
  std::vector<double> alpha;
  double big_c = 0.0;
  std::optional<bool> rational;  // declared type; detected when empty
};
struct G2Spec {};
struct GnSpec {
  std::size_t n = 3;
};
struct TruncatedGnSpec {
  std::size_t n = 3;
  double m = 1.0;
};
struct SyntheticSpec {
  std::string name;  // rem_one | rem_two
};
struct DomainSpec;
struct ProductSpec {
  std::vector<DomainSpec> factors;
};

struct DomainSpec {
  std::variant<PolydiscSpec, ElemReinhardtSpec, G2Spec, GnSpec, TruncatedGnSpec, SyntheticSpec,
               ProductSpec>
      v;
};

/// Inner ball (kappa side, certified points) and outer ball (gamma side bound).
struct SandwichIndicatrix {
  Indicatrix inner;
  Indicatrix outer;
};

// ---------------------------------------------------------------------------
// Gauges

/// Minkowski functional of G_2 (a balanced domain): the root h of
/// h^2 - |X_1| h - |X_1| |X_2| = 0.
inline double g2_gauge(double x1, double x2) {
  return 0.5 * (x1 + std::sqrt(x1 * x1 + 4.0 * x1 * x2));
}

/// Intercepts of T_m = T_(n/2, mn/2, n, ..., n).
inline std::vector<double> truncation_simplex(std::size_t n, double m) {
  const double nd = static_cast<double>(n);
  std::vector<double> b(n, nd);
  b[0] = nd / 2.0;
  b[1] = m * nd / 2.0;
  return b;
}

// ---------------------------------------------------------------------------
// Parameters and membership

namespace detail {

inline void validate(const DomainSpec& spec);

struct Validator {
  void operator()(const PolydiscSpec& p) const {
    if (p.radii.empty()) throw DomainError("polydisc needs at least one radius");
    for (double r : p.radii) {
      if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("polydisc radii must be positive");
    }
  }
  void operator()(const ElemReinhardtSpec& e) const {
    (void)MultiIndex::from(e.alpha, e.rational);
    if (!std::isfinite(e.big_c)) throw DomainError("elem_reinhardt: C must be finite");
  }
  void operator()(const G2Spec&) const {}
  void operator()(const GnSpec& g) const {
    if (g.n < 2) throw DomainError("gn needs n >= 2");
  }
  void operator()(const TruncatedGnSpec& t) const {
    if (t.n < 2) throw DomainError("truncated_gn needs n >= 2");
    if (!(t.m >= 1.0) || !std::isfinite(t.m)) throw DomainError("truncated_gn needs m >= 1");
  }
  void operator()(const SyntheticSpec& s) const {
    if (s.name != "rem_one" && s.name != "rem_two") {
      throw DomainError("unknown synthetic family '" + s.name + "' (rem_one, rem_two)");
    }
  }
  void operator()(const ProductSpec& p) const {
    if (p.factors.empty()) throw DomainError("empty product");
    for (const auto& f : p.factors) validate(f);
  }
};

inline void validate(const DomainSpec& spec) { std::visit(Validator{}, spec.v); }

}  // namespace detail

inline std::size_t dimension(const DomainSpec& spec) {
  struct V {
    std::size_t operator()(const PolydiscSpec& p) const { return p.radii.size(); }
    std::size_t operator()(const ElemReinhardtSpec& e) const { return e.alpha.size(); }
    std::size_t operator()(const G2Spec&) const { return 2; }
    std::size_t operator()(const GnSpec& g) const { return g.n; }
    std::size_t operator()(const TruncatedGnSpec& t) const { return t.n; }
    std::size_t operator()(const SyntheticSpec& s) const { return s.name == "rem_two" ? 3 : 2; }
    std::size_t operator()(const ProductSpec& p) const {
      std::size_t n = 0;
      for (const auto& f : p.factors) n += dimension(f);
      return n;
    }
  };
  return std::visit(V{}, spec.v);
}

inline bool membership(const DomainSpec& spec, const CVector& z) {
  detail::validate(spec);
  if (z.size() != dimension(spec)) throw DomainError("membership: dimension mismatch");
  struct V {
    const CVector& z;
    bool g2(std::size_t i) const { return std::abs(z[i]) * (1.0 + std::abs(z[i + 1])) < 1.0; }
    bool discs(std::size_t from) const {
      for (std::size_t j = from; j < z.size(); ++j) {
        if (!(std::abs(z[j]) < 1.0)) return false;
      }
      return true;
    }
    bool operator()(const PolydiscSpec& p) const {
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (!(std::abs(z[j]) < p.radii[j])) return false;
      }
      return true;
    }
    bool operator()(const ElemReinhardtSpec& e) const {
      return elem_reinhardt_contains(MultiIndex::from(e.alpha, e.rational), e.big_c, z);
    }
    bool operator()(const G2Spec&) const { return g2(0); }
    bool operator()(const GnSpec&) const { return g2(0) && discs(2); }
    bool operator()(const TruncatedGnSpec& t) const {
      if (!(g2(0) && discs(2))) return false;
      const auto b = truncation_simplex(t.n, t.m);
      double level = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) level += std::norm(z[j]) / b[j];
      return level < 1.0;
    }
    bool operator()(const SyntheticSpec&) const { return norm(z) < 1.0; }
    bool operator()(const ProductSpec& p) const {
      std::size_t off = 0;
      for (const auto& f : p.factors) {
        const std::size_t k = dimension(f);
        const CVector part(z.begin() + static_cast<std::ptrdiff_t>(off),
                           z.begin() + static_cast<std::ptrdiff_t>(off + k));
        if (!membership(f, part)) return false;
        off += k;
      }
      return true;
    }
  };
  return std::visit(V{z}, spec.v);
}

// ---------------------------------------------------------------------------
// Indicatrices

/// Ball of eta_{D_alpha,C}(a; .) from the closed forms. A slab {|l(X)| < c}
/// is returned in the frame Y_1 = l(X); a ball depending on the moduli of the
/// zero coordinates of a is Reinhardt as is.
inline Indicatrix metric_indicatrix(MetricKind kind, const MultiIndex& alpha, double big_c,
                                    const CVector& a, int order = 1) {
  const std::size_t n = alpha.dim();
  const auto probe = elem_reinhardt_metric(kind, alpha, big_c, a, CVector(n, Complex{1.0, 0.0}), order);
  Indicatrix b;
  b.dim = n;
  b.label = "elem_reinhardt:" + to_string(kind);
  b.symmetry.balanced = true;
  b.symmetry.reinhardt = true;
  switch (probe.branch->shape) {
    case MetricShape::zero: {
      b.extents.assign(n, AxisExtent::unbounded);
      b.convex = true;
      b.gauge = [](const CVector&) { return 0.0; };
      break;
    }
    case MetricShape::slab: {
      CVector c(n);
      for (std::size_t j = 0; j < n; ++j) c[j] = alpha[j] / a[j];
      const auto frame = LinearFrame::from_functional(c);
      b.frame = frame;
      b.extents.assign(n, AxisExtent::unbounded);
      b.extents[0] = AxisExtent::bounded;
      b.convex = true;
      b.gauge = [=](const CVector& y) {
        return elem_reinhardt_metric(kind, alpha, big_c, a, frame.unapply(y), order).value;
      };
      break;
    }
    case MetricShape::monomial: {
      std::size_t zeros = 0;
      for (const auto& c : a) zeros += c == Complex{0.0, 0.0} ? 1 : 0;
      b.extents.assign(n, AxisExtent::unbounded);
      for (std::size_t j = 0; j < n; ++j) {
        if (a[j] == Complex{0.0, 0.0} && zeros == 1) b.extents[j] = AxisExtent::bounded;
      }
      b.convex = zeros == 1;
      b.gauge = [=](const CVector& x) {
        return elem_reinhardt_metric(kind, alpha, big_c, a, x, order).value;
      };
      break;
    }
  }
  return b;
}

namespace detail {

inline Indicatrix delta_c_delta(std::size_t n, std::size_t free_axis) {
  Indicatrix b;
  b.dim = n;
  b.symmetry.complete_reinhardt = true;
  b.extents.assign(n, AxisExtent::bounded);
  b.extents[free_axis] = AxisExtent::unbounded;
  b.convex = true;
  b.label = "disc_with_free_axis";
  std::vector<double> u(n, 1.0);
  u[free_axis] = 0.0;
  b.cloud = std::vector<PsiPoint>{PsiPoint{u}};
  b.gauge = [free_axis](const CVector& x) {
    double g = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != free_axis) g = std::max(g, std::abs(x[j]));
    }
    return g;
  };
  return b;
}

inline SandwichIndicatrix g2_at(const CVector& a) {
  if (a.size() != 2 || a[1] != Complex{0.0, 0.0} || !(std::abs(a[0]) < 1.0)) {
    throw UnsupportedError("g2: indicatrices are available at (x, 0) with |x| < 1 only");
  }
  const double x = std::abs(a[0]);
  SandwichIndicatrix s;
  if (x == 0.0) {
    // B_kappa(0) = G_2, B_gamma(0) = conv G_2 = D x C.
    Indicatrix& in = s.inner;
    in.dim = 2;
    in.symmetry.complete_reinhardt = true;
    in.extents = {AxisExtent::bounded, AxisExtent::unbounded};
    in.label = "G2";
    in.cloud = std::vector<PsiPoint>{PsiPoint{{1.0, 0.0}}};
    in.gauge = [](const CVector& v) { return g2_gauge(std::abs(v[0]), std::abs(v[1])); };
    s.outer = delta_c_delta(2, 1);
    s.outer.label = "conv(G2)";
    return s;
  }
  // Outer: contraction F = z_1 (1 + z_2) after Reinhardt symmetrization.
  const double c = 1.0 - x * x;
  Indicatrix& out = s.outer;
  out.dim = 2;
  out.symmetry.complete_reinhardt = true;
  out.extents = {AxisExtent::bounded, AxisExtent::bounded};
  out.convex = true;
  out.label = "g2_gamma_bound";
  out.cloud = std::vector<PsiPoint>{PsiPoint{{c * c, 0.0}}, PsiPoint{{0.0, c * c / (x * x)}}};
  out.gauge = [x, c](const CVector& v) { return (std::abs(v[0]) + x * std::abs(v[1])) / c; };
  // Inner: the discs spanned by (1 - x^2, 0) and (0, (1 - x)/x).
  const auto [p, q] = g2_kappa_upper_points(x);
  const double r1 = std::abs(q[0]), r2 = std::abs(p[1]);
  Indicatrix& in = s.inner;
  in.dim = 2;
  in.symmetry.complete_reinhardt = false;
  in.extents = {AxisExtent::bounded, AxisExtent::bounded};
  in.label = "g2_kappa_discs";
  in.cloud = std::vector<PsiPoint>{PsiPoint{{r1 * r1, 0.0}}, PsiPoint{{0.0, r2 * r2}}};
  in.gauge = [r1, r2](const CVector& v) {
    const double m1 = std::abs(v[0]), m2 = std::abs(v[1]);
    if (m2 == 0.0) return m1 / r1;
    if (m1 == 0.0) return m2 / r2;
    return kInf;
  };
  return s;
}

inline SandwichIndicatrix truncated_at(const TruncatedGnSpec& t, const CVector& a) {
  for (const auto& c : a) {
    if (c != Complex{0.0, 0.0}) throw UnsupportedError("truncated_gn: indicatrices at the origin only");
  }
  const std::size_t n = t.n;
  const auto b = truncation_simplex(n, t.m);
  Indicatrix in;
  in.dim = n;
  in.symmetry.complete_reinhardt = true;
  in.extents.assign(n, AxisExtent::bounded);
  in.label = "D_m";
  std::vector<double> p(n, 1.0), q(n, 1.0);
  p[1] = 0.0;
  q[0] = 0.0;
  q[1] = t.m;
  in.cloud = std::vector<PsiPoint>{PsiPoint{p}, PsiPoint{q}};
  in.gauge = [b](const CVector& v) {
    double g = g2_gauge(std::abs(v[0]), std::abs(v[1]));
    double level = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j >= 2) g = std::max(g, std::abs(v[j]));
      level += std::norm(v[j]) / b[j];
    }
    return std::max(g, std::sqrt(level));
  };
  SandwichIndicatrix s{in, convexify(in)};
  return s;
}

}  // namespace detail

/// (ball at z != z_0, ball at z_0): the Euclidean ball and D x 2D.
inline std::pair<Indicatrix, Indicatrix> synthetic_rem_one() {
  auto far = euclidean_ball(2);
  far.label = "rem_one:ball";
  auto at = polydisc_ball({1.0, 2.0});
  at.label = "rem_one:D x 2D";
  return {far, at};
}

/// (ball at z_k, ball at z_0): D x C x D, whose middle axis degenerates, and D^3.
inline std::pair<Indicatrix, Indicatrix> synthetic_rem_two() {
  auto far = detail::delta_c_delta(3, 1);
  far.label = "rem_two:D x C x D";
  auto at = polydisc_ball({1.0, 1.0, 1.0});
  at.label = "rem_two:D^3";
  return {far, at};
}

inline SandwichIndicatrix indicatrix_at(const DomainSpec& spec, const CVector& a) {
  detail::validate(spec);
  if (a.size() != dimension(spec)) throw DomainError("indicatrix_at: dimension mismatch");
  if (!membership(spec, a)) throw DomainError("indicatrix_at: base point outside the domain");
  struct V {
    const CVector& a;
    SandwichIndicatrix operator()(const PolydiscSpec& p) const {
      std::vector<double> rho(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) {
        rho[j] = (p.radii[j] * p.radii[j] - std::norm(a[j])) / p.radii[j];
      }
      auto b = polydisc_ball(rho);
      return {b, b};
    }
    SandwichIndicatrix operator()(const ElemReinhardtSpec& e) const {
      const auto alpha = MultiIndex::from(e.alpha, e.rational);
      return {metric_indicatrix(MetricKind::kobayashi, alpha, e.big_c, a),
              metric_indicatrix(MetricKind::caratheodory, alpha, e.big_c, a)};
    }
    SandwichIndicatrix operator()(const G2Spec&) const { return detail::g2_at(a); }
    SandwichIndicatrix operator()(const GnSpec& g) const {
      const auto head = detail::g2_at({a[0], a[1]});
      if (g.n == 2) return head;
      std::vector<double> rho;
      for (std::size_t j = 2; j < a.size(); ++j) rho.push_back(1.0 - std::norm(a[j]));
      const auto tail = polydisc_ball(rho);
      auto in = product(head.inner, tail);
      auto out = product(head.outer, tail);
      in.label = "Gn:" + head.inner.label;
      out.label = "Gn:" + head.outer.label;
      return {in, out};
    }
    SandwichIndicatrix operator()(const TruncatedGnSpec& t) const { return detail::truncated_at(t, a); }
    SandwichIndicatrix operator()(const SyntheticSpec& s) const {
      const bool at_z0 = norm(a) == 0.0;
      const auto pair = s.name == "rem_one" ? synthetic_rem_one() : synthetic_rem_two();
      const auto& b = at_z0 ? pair.second : pair.first;
      return {b, b};
    }
    SandwichIndicatrix operator()(const ProductSpec& p) const {
      std::optional<SandwichIndicatrix> acc;
      std::size_t off = 0;
      for (const auto& f : p.factors) {
        const std::size_t k = dimension(f);
        const CVector part(a.begin() + static_cast<std::ptrdiff_t>(off),
                           a.begin() + static_cast<std::ptrdiff_t>(off + k));
        auto s = indicatrix_at(f, part);
        acc = acc ? SandwichIndicatrix{product(acc->inner, s.inner), product(acc->outer, s.outer)}
                  : std::move(s);
        off += k;
      }
      return *acc;
    }
  };
  return std::visit(V{a}, spec.v);
}

// ---------------------------------------------------------------------------
// Text form: polydisc(1,2), g2, gn(3), truncated_gn(3,4),
// elem_reinhardt(1,1;0) or elem_reinhardt(1,1.414;0;irrational),
// synthetic(rem_one), and products A*B.

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(std::string_view s) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size()) {
    throw DomainError("not a number: '" + t + "'");
  }
  return v;
}

inline std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    out.push_back(parse_number(s.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::size_t parse_count(std::string_view s) {
  const double v = parse_number(s);
  if (!(v >= 1.0) || v != std::floor(v)) throw DomainError("expected a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

inline std::string to_string(const DomainSpec& spec) {
  struct V {
    std::string operator()(const PolydiscSpec& p) const { return "polydisc(" + detail::join(p.radii) + ")"; }
    std::string operator()(const ElemReinhardtSpec& e) const {
      std::string s = "elem_reinhardt(" + detail::join(e.alpha) + ";" + detail::format_number(e.big_c);
      if (e.rational) s += *e.rational ? ";rational" : ";irrational";
      return s + ")";
    }
    std::string operator()(const G2Spec&) const { return "g2"; }
    std::string operator()(const GnSpec& g) const { return "gn(" + std::to_string(g.n) + ")"; }
    std::string operator()(const TruncatedGnSpec& t) const {
      return "truncated_gn(" + std::to_string(t.n) + "," + detail::format_number(t.m) + ")";
    }
    std::string operator()(const SyntheticSpec& s) const { return "synthetic(" + s.name + ")"; }
    std::string operator()(const ProductSpec& p) const {
      std::string s;
      for (std::size_t i = 0; i < p.factors.size(); ++i) s += (i ? "*" : "") + to_string(p.factors[i]);
      return s;
    }
  };
  return std::visit(V{}, spec.v);
}

inline DomainSpec parse_domain(std::string_view text) {
  const std::string s = detail::trim(text);
  // Split products at depth 0.
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth < 0) throw DomainError("unbalanced parentheses in '" + s + "'");
    if (s[i] == '*' && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  if (depth != 0) throw DomainError("unbalanced parentheses in '" + s + "'");
  parts.push_back(s.substr(start));
  if (parts.size() > 1) {
    ProductSpec p;
    for (const auto& part : parts) p.factors.push_back(parse_domain(part));
    DomainSpec d{p};
    detail::validate(d);
    return d;
  }
  const auto open = s.find('(');
  const std::string name = detail::trim(s.substr(0, open));
  std::string args;
  if (open != std::string::npos) {
    if (s.back() != ')') throw DomainError("missing ')' in '" + s + "'");
    args = s.substr(open + 1, s.size() - open - 2);
  }
  auto need_args = [&](bool want) {
    if (want == args.empty()) {
      throw DomainError(name + (want ? " needs arguments" : " takes no arguments"));
    }
  };
  DomainSpec d;
  if (name == "polydisc") {
    need_args(true);
    d.v = PolydiscSpec{detail::parse_list(args)};
  } else if (name == "g2") {
    need_args(false);
    d.v = G2Spec{};
  } else if (name == "gn") {
    need_args(true);
    d.v = GnSpec{detail::parse_count(args)};
  } else if (name == "truncated_gn") {
    need_args(true);
    const auto v = detail::parse_list(args);
    if (v.size() != 2) throw DomainError("truncated_gn(n,m) takes two arguments");
    d.v = TruncatedGnSpec{detail::parse_count(detail::format_number(v[0])), v[1]};
  } else if (name == "elem_reinhardt") {
    need_args(true);
    ElemReinhardtSpec e;
    const auto semi = args.find(';');
    e.alpha = detail::parse_list(args.substr(0, semi));
    if (semi != std::string::npos) {
      const std::string rest = args.substr(semi + 1);
      const auto semi2 = rest.find(';');
      e.big_c = detail::parse_number(rest.substr(0, semi2));
      if (semi2 != std::string::npos) {
        const std::string type = detail::trim(rest.substr(semi2 + 1));
        if (type == "rational") e.rational = true;
        else if (type == "irrational") e.rational = false;
        else throw DomainError("elem_reinhardt type must be 'rational' or 'irrational'");
      }
    }
    d.v = e;
  } else if (name == "synthetic") {
    need_args(true);
    d.v = SyntheticSpec{detail::trim(args)};
  } else {
    throw DomainError("unknown domain '" + name +
                      "' (polydisc, g2, gn, truncated_gn, elem_reinhardt, synthetic)");
  }
  detail::validate(d);
  return d;
}

}  // namespace wu
