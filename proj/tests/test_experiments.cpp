#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "wu/config.hpp"
#include "wu/experiments.hpp"

using namespace wu;

TEST(Config, SectionsOverlayGlobals) {
  const auto c = Config::from_string("tol = 1e-9  # global\n\n[gn_usc]\nn = 4\ntol = 1e-7\n[g2_usc]\nt=1.2\n");
  EXPECT_TRUE(c.has_section("gn_usc"));
  EXPECT_FALSE(c.has_section("monotone"));
  const auto s = c.section("gn_usc");
  EXPECT_EQ(s.at("n").value, "4");
  EXPECT_EQ(s.at("tol").value, "1e-7");
  EXPECT_EQ(s.at("tol").line, 5);
  EXPECT_EQ(c.section("monotone").at("tol").value, "1e-9");
  EXPECT_EQ(c.sections().size(), 2u);
}

TEST(Config, ErrorsCarryLineAndField) {
  auto line_of = [](const std::string& text) {
    try {
      Config::from_string(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("[a]\nb\n"), 2);
  EXPECT_EQ(line_of("\n\n[a\n"), 3);
  EXPECT_EQ(line_of("[ ]\n"), 1);
  EXPECT_EQ(line_of("= 3\n"), 1);
  EXPECT_EQ(line_of("[a]\nx = 1\nx = 2\n"), 3);
  EXPECT_THROW(Config::load("/nonexistent/wu.cfg"), ConfigError);

  ExperimentConfig cfg;
  const auto c = Config::from_string("[g2_usc]\nt = 1.2\nx_grid = 0.1, oops\n");
  try {
    apply_config(cfg, c.section("g2_usc"));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.field(), "x_grid");
  }
}

TEST(Formatting, SeventeenDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, std::sqrt(2.0), 1e-300, -2.5e17, 0.0}) {
    EXPECT_EQ(std::stod(detail::format_double(v)), v);
  }
  EXPECT_EQ(detail::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(detail::format_double(1.0), "1");
}

TEST(Formatting, ComplexParsing) {
  EXPECT_EQ(detail::parse_complex("1.5"), Complex(1.5, 0.0));
  EXPECT_EQ(detail::parse_complex("-2i"), Complex(0.0, -2.0));
  EXPECT_EQ(detail::parse_complex("i"), Complex(0.0, 1.0));
  EXPECT_EQ(detail::parse_complex("0.3+0.4i"), Complex(0.3, 0.4));
  EXPECT_EQ(detail::parse_complex("1e-3-2e-1i"), Complex(1e-3, -0.2));
  EXPECT_EQ(detail::parse_complex("-1-i"), Complex(-1.0, -1.0));
  EXPECT_THROW(detail::parse_complex(""), DomainError);
  EXPECT_THROW(detail::parse_complex("1+xi"), DomainError);
  const auto v = detail::parse_cvector("1, -0.5+0.2i");
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[1], Complex(-0.5, 0.2));
  for (Complex z : {Complex(0.3, -0.7), Complex(-1.0, 0.0), Complex(0.0, 2.0)}) {
    EXPECT_EQ(detail::parse_complex(detail::format_complex(z)), z);
  }
}

TEST(Csv, HeaderColumnsAndQuoting) {
  ResultRow r{"eval", {}, 1e-10, false};
  r.set("domain", "polydisc(1,2)").set("value", 0.5);
  std::ostringstream os;
  write_csv(os, {"domain", "missing", "value"}, {r});
  EXPECT_EQ(os.str(),
            "experiment,domain,missing,value,tolerance,pass\n"
            "eval,\"polydisc(1,2)\",,0.5,1e-10,false\n");
}

TEST(Experiments, CatalogNamesResolve) {
  EXPECT_EQ(experiment_catalog().size(), 8u);
  for (const auto& e : experiment_catalog()) {
    ASSERT_TRUE(find_experiment(e.name).has_value());
    EXPECT_EQ(*find_experiment(e.name), e.id);
  }
  EXPECT_FALSE(find_experiment("nope").has_value());
}

TEST(Experiments, DefaultsPassAndAreDeterministic) {
  for (const auto& e : experiment_catalog()) {
    ExperimentConfig cfg;
    cfg.id = e.id;
    const auto r1 = run_experiment(cfg);
    EXPECT_TRUE(r1.pass()) << e.name;
    EXPECT_FALSE(r1.rows.empty()) << e.name;
    std::ostringstream a, b;
    write_csv(a, e.columns, r1.rows);
    write_csv(b, e.columns, run_experiment(cfg).rows);
    EXPECT_EQ(a.str(), b.str()) << e.name;
    for (const auto& row : r1.rows) EXPECT_GT(row.tolerance, 0.0) << e.name;
  }
}

TEST(Experiments, ParameterValidation) {
  ExperimentConfig cfg;
  cfg.id = ExperimentId::g2_usc;
  cfg.n = 3;
  EXPECT_THROW(run_experiment(cfg), ConfigError);
  cfg.n.reset();
  cfg.t = 0.9;
  EXPECT_THROW(run_experiment(cfg), ConfigError);
  cfg.t.reset();
  cfg.x_grid = std::vector<double>{0.1, 1.5};
  EXPECT_THROW(run_experiment(cfg), ConfigError);

  ExperimentConfig p;
  p.id = ExperimentId::polydisc_formula;
  p.n = 2;
  p.radii = std::vector<double>{1.0, 2.0, 3.0};
  EXPECT_THROW(run_experiment(p), ConfigError);
  p.radii = std::vector<double>{1.0, -2.0};
  EXPECT_THROW(run_experiment(p), ConfigError);

  ExperimentConfig g;
  g.id = ExperimentId::gn_usc;
  g.n = 2;
  EXPECT_THROW(run_experiment(g), ConfigError);
}

TEST(Experiments, GnShortGridDoesNotCertify) {
  // At t = 1.6 the certificate needs x below 0.01.
  ExperimentConfig cfg;
  cfg.id = ExperimentId::gn_usc;
  cfg.x_grid = std::vector<double>{0.1, 0.05, 0.01};
  const auto r = run_experiment(cfg);
  EXPECT_FALSE(r.pass());
  const auto& last = r.rows[r.rows.size() - 2];
  EXPECT_EQ(last.get("certified"), "false");
  EXPECT_NEAR(std::stod(last.get("ratio")), 0.99110, 1e-5);
}

TEST(Experiments, GnLimitAndMonotoneValues) {
  ExperimentConfig cfg;
  cfg.id = ExperimentId::gn_usc;
  const auto r = run_experiment(cfg);
  EXPECT_NEAR(std::stod(r.rows.back().get("limit")), 1.011358, 1e-6);

  ExperimentConfig m;
  m.id = ExperimentId::monotone;
  m.n = 4;
  m.m_list = std::vector<double>{2.0, 8.0};
  const auto mr = run_experiment(m);
  EXPECT_TRUE(mr.pass());
  EXPECT_NEAR(std::stod(mr.rows[0].get("w_tilde")), std::sqrt(0.5), 1e-10);
  EXPECT_NEAR(std::stod(mr.rows.back().get("w_tilde")), 1.0 / std::sqrt(3.0), 1e-10);
}

TEST(Experiments, ElemReinhardtCustomRows) {
  ExperimentConfig cfg;
  cfg.id = ExperimentId::elem_reinhardt_table;
  cfg.alpha = std::vector<double>{1.0, 2.0};
  cfg.resolution = 256;
  const auto r = run_experiment(cfg);
  EXPECT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(r.pass());
  cfg.a = CVector{2.0, 0.9};
  EXPECT_THROW(run_experiment(cfg), ConfigError);
}

TEST(Eval, ClosedFormsAndWu) {
  EvalRequest g;
  g.domain = parse_domain("elem_reinhardt(1,1;0)");
  g.kind = "gamma";
  g.a = {0.5, 0.5};
  g.x = {1.0, 0.0};
  EXPECT_NEAR(std::stod(eval_metric(g).get("value")), 8.0 / 15.0, 1e-14);

  EvalRequest k = g;
  k.kind = "kappa";
  k.a = {0.5, 0.0};
  k.x = {0.0, 1.0};
  const auto kr = eval_metric(k);
  EXPECT_NEAR(std::stod(kr.get("value")), 0.5, 1e-14);
  EXPECT_EQ(kr.get("s"), "1");
  EXPECT_FALSE(kr.get("case").empty());

  EvalRequest w;
  w.domain = parse_domain("polydisc(1,2)");
  w.kind = "wu";
  w.a = {0.0, 0.0};
  w.x = {1.0, 0.0};
  const auto wr = eval_metric(w);
  EXPECT_NEAR(std::stod(wr.get("w_tilde")), 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_EQ(wr.get("m"), "2");

  EvalRequest p = w;
  p.kind = "kappa";
  p.a = {0.5, 1.0};
  p.x = {1.0, 1.0};
  // max(1/(1 - 1/4), (1/2)/(1 - 1/4))
  EXPECT_NEAR(std::stod(eval_metric(p).get("value")), 4.0 / 3.0, 1e-14);
}

TEST(Eval, Errors) {
  EvalRequest r;
  r.domain = parse_domain("g2");
  r.kind = "gamma";
  r.a = {0.0, 0.0};
  r.x = {1.0, 0.0};
  EXPECT_THROW(eval_metric(r), UnsupportedError);
  r.kind = "nope";
  EXPECT_THROW(eval_metric(r), DomainError);
  r.kind = "wu";
  r.x = {1.0};
  EXPECT_THROW(eval_metric(r), DomainError);
  r.domain = parse_domain("polydisc(1)");
  r.kind = "kappa";
  r.a = {1.5};
  EXPECT_THROW(eval_metric(r), DomainError);
}
