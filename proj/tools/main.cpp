// Command-line front-end: experiments, single solves and single selections on
// the five-gaussian benchmark.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "regchoice/config.hpp"
#include "regchoice/errors.hpp"
#include "regchoice/experiment.hpp"
#include "regchoice/model_problem.hpp"
#include "regchoice/param_select.hpp"

namespace {

using namespace regchoice;

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;
constexpr int kIoExit = 4;

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> keys;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
};

ExperimentConfig resolve_config(const GlobalOptions& g, ExperimentConfig base = {}) {
  ExperimentConfig cfg = g.config_path.empty() ? base : load_config(g.config_path, base);
  for (const std::string& s : g.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("--set expects key=value, got '{}'", s));
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [key, value] : g.keys) apply_setting(cfg, key, value);
  if (g.seed) apply_setting(cfg, "model.seed", std::to_string(*g.seed));
  if (g.out_dir) apply_setting(cfg, "output.dir", *g.out_dir);
  if (g.format) apply_setting(cfg, "output.format", *g.format);
  return cfg;
}

ExperimentConfig paper_config() {
  ExperimentConfig cfg;
  cfg.rules = {Rule::Nvac, Rule::OptScan};
  cfg.outputs = {"table1", "table2", "fig1", "fig2", "fig3", "fig4", "selections"};
  return cfg;
}

int run_and_emit(const ExperimentConfig& cfg) {
  const ExperimentReport report = run_experiment(cfg);
  for (const auto& path : emit_report(report, cfg)) fmt::print("wrote {}\n", path.string());
  return 0;
}

ModelInstance instance_for(const ExperimentConfig& cfg, std::optional<double> delta) {
  ModelSpec spec = cfg.model;
  spec.delta = delta.value_or(cfg.deltas.front());
  return build_instance(spec);
}

double relative_error(const GridFunction& y, const GridFunction& exact) {
  return l2_norm(GridFunction(y.values - exact.values, exact.rule)) / l2_norm(exact);
}

void write_table(const ExperimentConfig& cfg, const std::string& name, const Table& table) {
  std::filesystem::create_directories(cfg.out_dir);
  const bool csv = cfg.format == OutputFormat::Csv;
  const auto path = cfg.out_dir / (name + (csv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << (csv ? to_csv(table) : to_json(table));
  if (!out.flush()) throw IoError(fmt::format("failed writing '{}'", path.string()));
  fmt::print("wrote {}\n", path.string());
}

Table solution_table(const ModelInstance& inst, const GridFunction& y) {
  Table t{{"s", "y_exact", "y"}, {}};
  for (int i = 0; i < y.rule.size(); ++i) {
    t.rows.push_back({y.rule.grid().node(i), inst.exact_solution.values[i], y.values[i]});
  }
  return t;
}

int cmd_solve(const ExperimentConfig& cfg, double alpha, std::optional<double> delta) {
  const ModelInstance inst = instance_for(cfg, delta);
  const RegularizedSolution sol = solve_regularized(inst.noisy_system, alpha, cfg.search.precision);
  fmt::print("alpha       {:.6g}\n", sol.alpha);
  fmt::print("lg_alpha    {:.6f}\n", std::log10(sol.alpha));
  fmt::print("norm_y      {:.10g}\n", sol.norm_y);
  fmt::print("residual    {:.10g}\n", sol.residual_norm);
  fmt::print("rel_error   {:.10g}\n", relative_error(sol.y, inst.exact_solution));
  write_table(cfg, "solution", solution_table(inst, sol.y));
  return 0;
}

int cmd_select(const ExperimentConfig& cfg, const std::string& rule_name, std::optional<double> beta,
               std::optional<double> delta) {
  const Rule rule = parse_rule(rule_name);
  const ModelInstance inst = instance_for(cfg, delta);
  const DataErrorEstimates& e = inst.errors;
  const bool measured = cfg.error_source == ErrorSource::Measured;
  const double Delta = measured ? *e.Delta_measured : e.Delta_upper;
  const double Theta = measured ? *e.Theta_measured : e.Theta_upper;
  const double b = beta.value_or(cfg.betas.front());
  const double norm_A = hs_norm(inst.noisy_op);

  AlphaSelection sel = [&] {
    switch (rule) {
      case Rule::Nvac: {
        const NvacConfig nc{cfg.q, b, Delta, Theta, cfg.search};
        AlphaSelection s = solve_nvac(inst.noisy_system, nc);
        s.bounds = compute_bounds(inst.noisy_system, nc, norm_A, l2_norm(inst.noisy_f),
                                  *e.f_error, e.theta);
        return s;
      }
      case Rule::Kojdecki:
        return solve_kojdecki(inst.noisy_system, cfg.q, b, *e.f_error, e.theta, norm_A, cfg.search);
      case Rule::Gdp:
        return solve_gdp(inst.noisy_op, inst.noisy_f, inst.noisy_system, *e.f_error, e.theta,
                         cfg.gdp_mu, cfg.search);
      case Rule::OptScan:
        break;
    }
    return scan_alpha_opt(inst.noisy_system, inst.exact_solution, cfg.lg_lo, cfg.lg_hi,
                          cfg.lg_step, cfg.search.precision);
  }();

  fmt::print("rule        {}\n", to_string(sel.rule));
  fmt::print("delta       {}\n", inst.spec.delta);
  fmt::print("alpha       {:.6g}\n", sel.alpha);
  fmt::print("lg_alpha    {:.6f}\n", std::log10(sel.alpha));
  fmt::print("rel_error   {:.10g}\n", relative_error(sel.solution.y, inst.exact_solution));
  fmt::print("degenerate  {}\n", sel.degenerate);
  if (sel.bounds) {
    fmt::print("alpha0      {:.6g}\n", sel.bounds->alpha0);
    fmt::print("data_bound  {:.6g}\n", sel.bounds->data_bound);
    fmt::print("cond12      {}\n", sel.bounds->cond12_ok);
    fmt::print("cond17      {}\n", sel.bounds->cond17_ok);
  }
  Table trace{{"alpha", "lhs", "rhs"}, {}};
  for (const TraceSample& s : sel.trace) trace.rows.push_back({s.alpha, s.lhs, s.rhs});
  write_table(cfg, "trace", trace);
  write_table(cfg, "solution", solution_table(inst, sel.solution.y));
  return 0;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const StageFailure& e) {
    fmt::print(stderr, "error: stage '{}': {}\n", e.stage(), e.what());
    return e.exit_code();
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: config: {}\n", e.what());
    return kConfigExit;
  } catch (const IoError& e) {
    fmt::print(stderr, "error: io: {}\n", e.what());
    return kIoExit;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(stderr, "error: io: {}\n", e.what());
    return kIoExit;
  } catch (const InvalidArgument& e) {
    fmt::print(stderr, "error: config: {}\n", e.what());
    return kConfigExit;
  } catch (const Error& e) {
    fmt::print(stderr, "error: numerical: {}\n", e.what());
    return kNumericalExit;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularisation-parameter choice for first-kind integral equations"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "Config file (key = value lines)");
  app.add_option("--set", g.sets, "Override one config key, key=value (repeatable)");
  app.add_option("--seed", g.seed, "Noise seed (model.seed)");
  app.add_option("--out-dir", g.out_dir, "Output directory (output.dir)");
  app.add_option("--format", g.format, "Output format (output.format)")
      ->check(CLI::IsMember({"csv", "json"}));
  auto* keys = app.add_option_group("config keys", "Every config key is also a flag");
  for (const std::string& key : config_keys()) {
    keys->add_option_function<std::string>(
        "--" + key, [&g, key](const std::string& v) { g.keys[key] = v; },
        fmt::format("Set {} (default: {})", key, setting_value(ExperimentConfig{}, key)))
        ->expected(0, 1)
        ->default_str("");
  }

  auto* run = app.add_subcommand("run", "Run the experiment described by the config");
  auto* paper = app.add_subcommand("reproduce-paper", "Emit every table and figure series");

  auto* solve = app.add_subcommand("solve", "Solve the regularised equation for one alpha");
  double alpha = 0.0;
  std::optional<double> solve_delta;
  solve->add_option("--alpha", alpha, "Regularisation parameter")->required();
  solve->add_option("--delta", solve_delta, "Noise level (default: first model.delta)");

  auto* select = app.add_subcommand("select", "Choose alpha with one rule");
  std::string rule = "nvac";
  std::optional<double> select_beta, select_delta;
  select->add_option("--rule", rule, "nvac | kojdecki | gdp | opt-scan")
      ->check(CLI::IsMember({"nvac", "kojdecki", "gdp", "opt-scan"}));
  select->add_option("--beta", select_beta, "Rule constant (default: first nvac.beta)");
  select->add_option("--delta", select_delta, "Noise level (default: first model.delta)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  return guarded([&] {
    if (*paper) return run_and_emit(resolve_config(g, paper_config()));
    const ExperimentConfig cfg = resolve_config(g);
    cfg.validate();
    if (*run) return run_and_emit(cfg);
    if (*solve) return cmd_solve(cfg, alpha, solve_delta);
    return cmd_select(cfg, rule, select_beta, select_delta);
  });
}
