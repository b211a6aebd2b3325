// wu_cli: runs the Wu-metric experiments and single metric evaluations.
//
// Exit codes: 0 every row passes, 1 an asserted relation fails, 2 usage or
// configuration error, 3 a solver did not converge.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wu/config.hpp"
#include "wu/experiments.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

// Raw flag text; parsed with the library parsers so flags and config files
// accept the same syntax.
struct Flags {
  std::optional<std::string> n, x, x_grid, t, m_list, alpha, big_c, radii, a, X, resolution, tol;
  std::string out, config;
  std::string domain;
  std::optional<std::string> kind;
  std::optional<int> order;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--resolution", f.resolution, "directions sampled per face for sampled indicatrices");
  app->add_option("--tol", f.tol, "tolerance of the asserted relations");
  app->add_option("--out", f.out, "write CSV here instead of standard output");
  app->add_option("--config", f.config, "key = value file; [name] sections per experiment, flags win");
  app->add_option("--alpha", f.alpha, "multi-index, comma separated (e.g. 1,1.5)");
  app->add_option("--big-c", f.big_c, "constant C of the elementary Reinhardt domain");
  app->add_option("--a", f.a, "base point, comma separated complex entries (0.5, 0.3+0.1i, -2i)");
  app->add_option("--X", f.X, "tangent vector, same format as --a");
}

std::string columns_help() {
  std::ostringstream os;
  os << "Experiments and CSV columns (each row also has experiment first, tolerance and pass last):\n";
  for (const auto& e : wu::experiment_catalog()) {
    os << "  " << e.name << "\n    ";
    for (std::size_t i = 0; i < e.columns.size(); ++i) os << (i ? "," : "") << e.columns[i];
    os << "\n    parameters: ";
    for (std::size_t i = 0; i < e.parameters.size(); ++i) os << (i ? ", " : "") << e.parameters[i];
    os << '\n';
  }
  os << "  eval\n    ";
  const auto& ec = wu::eval_columns();
  for (std::size_t i = 0; i < ec.size(); ++i) os << (i ? "," : "") << ec[i];
  os << '\n';
  return os.str();
}

// Flags become config entries at line 0 so one parser handles both.
wu::Config::Section flag_section(const Flags& f) {
  wu::Config::Section s;
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) s[key] = wu::ConfigEntry{*v, 0};
  };
  put("n", f.n);
  put("x_grid", f.x_grid);
  put("t", f.t);
  put("m_list", f.m_list);
  put("alpha", f.alpha);
  put("big_c", f.big_c);
  put("radii", f.radii);
  put("a", f.a);
  put("X", f.X);
  put("resolution", f.resolution);
  put("tol", f.tol);
  if (f.x) {
    if (f.x_grid) throw wu::ConfigError("--x and --x-grid are exclusive", 0, "x");
    s["x_grid"] = wu::ConfigEntry{*f.x, 0};
  }
  return s;
}

std::optional<wu::Config> load_config(const Flags& f) {
  if (f.config.empty()) return std::nullopt;
  return wu::Config::load(f.config);
}

// Rethrows config errors with the file name and line.
void apply_section(wu::ExperimentConfig& cfg, const wu::Config::Section& section, const std::string& source) {
  try {
    wu::apply_config(cfg, section);
  } catch (const wu::ConfigError& e) {
    if (e.line() == 0) throw wu::ConfigError(std::string("flag ") + e.what(), 0, e.field());
    throw wu::ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.what(), e.line(), e.field());
  }
}

void emit(const std::string& out, const std::vector<std::string>& columns,
          const std::vector<wu::ResultRow>& rows) {
  if (out.empty()) {
    wu::write_csv(std::cout, columns, rows);
    std::cout.flush();
    return;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw wu::ConfigError("cannot open output file '" + out + "'", 0, "out");
  wu::write_csv(os, columns, rows);
  if (!os) throw wu::ConfigError("failed writing '" + out + "'", 0, "out");
}

int run(const std::string& name, const Flags& f) {
  const auto id = wu::find_experiment(name);
  if (!id) throw wu::ConfigError("unknown experiment '" + name + "' (see 'wu_cli list')");
  wu::ExperimentConfig cfg;
  cfg.id = *id;
  if (const auto file = load_config(f)) {
    auto section = file->section(name);
    apply_section(cfg, section, file->source());
  }
  apply_section(cfg, flag_section(f), "");
  const auto result = wu::run_experiment(cfg);
  const auto& info = wu::experiment_info(*id);
  emit(f.out.empty() ? cfg.out : f.out, info.columns, result.rows);

  std::size_t passed = 0;
  for (const auto& r : result.rows) passed += r.pass ? 1 : 0;
  std::cerr << name << ": " << passed << "/" << result.rows.size() << " rows pass, "
            << (result.pass() ? "PASS" : "FAIL") << '\n';
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    if (!result.rows[i].pass) {
      const auto c = result.rows[i].get("case");
      std::cerr << "  row " << i + 1 << (c.empty() ? "" : " (" + c + ")") << " fails its relation\n";
    }
  }
  return result.pass() ? kExitPass : kExitFail;
}

int eval(const Flags& f) {
  // Config section [eval] supplies defaults for domain, kind, order and the
  // shared keys; flags win.
  std::string domain = f.domain;
  std::optional<std::string> kind = f.kind;
  std::optional<int> order = f.order;
  wu::Config::Section section;
  std::string source;
  if (const auto file = load_config(f)) {
    source = file->source();
    section = file->section("eval");
    for (const char* key : {"domain", "kind", "order"}) {
      const auto it = section.find(key);
      if (it == section.end()) continue;
      const std::string k = key;
      if (k == "domain" && domain.empty()) domain = it->second.value;
      if (k == "kind" && !kind) kind = it->second.value;
      if (k == "order" && !order) order = static_cast<int>(wu::detail::parse_count(it->second.value));
      section.erase(it);
    }
  }
  for (const auto& [k, v] : flag_section(f)) section[k] = v;

  wu::ExperimentConfig cfg;
  apply_section(cfg, section, source);
  wu::EvalRequest req;
  if (!domain.empty()) {
    if (cfg.alpha) throw wu::ConfigError("--domain and --alpha are exclusive", 0, "alpha");
    req.domain = wu::parse_domain(domain);
  } else if (cfg.alpha) {
    req.domain = wu::DomainSpec{wu::ElemReinhardtSpec{*cfg.alpha, cfg.big_c.value_or(0.0), std::nullopt}};
  } else if (cfg.radii) {
    req.domain = wu::DomainSpec{wu::PolydiscSpec{*cfg.radii}};
  } else {
    throw wu::ConfigError("eval needs --domain, --alpha or --radii", 0, "domain");
  }
  const std::size_t n = wu::dimension(req.domain);
  req.kind = kind.value_or("kappa");
  req.a = cfg.a.value_or(wu::CVector(n, wu::Complex{0.0, 0.0}));
  if (!cfg.x) throw wu::ConfigError("eval needs --X", 0, "X");
  req.x = *cfg.x;
  req.order = order.value_or(1);
  if (cfg.resolution) req.options.resolution = *cfg.resolution;
  if (cfg.tol) req.options.tolerance = *cfg.tol;

  const auto row = wu::eval_metric(req);
  emit(f.out.empty() ? cfg.out : f.out, wu::eval_columns(), {row});
  std::cerr << "eval: " << row.get("kind") << " on " << row.get("domain") << " = " << row.get("value") << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wu pseudometrics of Reinhardt indicatrices: experiments and metric evaluation"};
  app.require_subcommand(1);
  app.footer(columns_help() +
             "Exit codes: 0 all rows pass, 1 a relation fails, 2 usage or configuration error, "
             "3 solver did not converge.");

  Flags f;
  std::string experiment;

  auto* run_cmd = app.add_subcommand("run", "run one experiment and write its CSV");
  run_cmd->add_option("experiment", experiment, "experiment name (see 'list')")->required();
  run_cmd->add_option("--n", f.n, "complex dimension");
  run_cmd->add_option("--x", f.x, "single base point x on the first axis");
  run_cmd->add_option("--x-grid", f.x_grid, "base points x, comma separated");
  run_cmd->add_option("--t", f.t, "scaling parameter of the certificate");
  run_cmd->add_option("--m-list", f.m_list, "truncation levels m, comma separated");
  run_cmd->add_option("--radii", f.radii, "polydisc radii, comma separated");
  add_common(run_cmd, f);
  run_cmd->footer(columns_help());

  auto* eval_cmd = app.add_subcommand("eval", "evaluate one metric at (a, X) with branch diagnostics");
  eval_cmd->add_option("--domain", f.domain,
                       "domain: polydisc(r1,..), elem_reinhardt(alpha..;C[;rational|irrational]), g2, "
                       "gn(n), truncated_gn(n,m), synthetic(rem_one|rem_two), products with '*'");
  eval_cmd->add_option("--kind", f.kind, "gamma, azukawa, kappa (default), wu (inner ball) or wu_outer");
  eval_cmd->add_option("--order", f.order, "order k of the generalized Caratheodory metric");
  eval_cmd->add_option("--radii", f.radii, "shorthand for --domain polydisc(radii)");
  add_common(eval_cmd, f);

  auto* list_cmd = app.add_subcommand("list", "list experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& e : wu::experiment_catalog()) std::cout << e.name << "\t" << e.summary << '\n';
      return kExitPass;
    }
    if (run_cmd->parsed()) return run(experiment, f);
    return eval(f);
  } catch (const wu::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const wu::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const wu::UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kExitUsage;
  } catch (const wu::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << " (gap " << e.gap() << ")\n";
    return kExitSolver;
  } catch (const wu::InfeasibleError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const wu::DegenerateError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const wu::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
