#include "regchoice/experiment.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "regchoice/error_bounds.hpp"
#include "regchoice/model_problem.hpp"

namespace regchoice {
namespace {

template <typename Fn>
auto stage(std::string_view name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageFailure&) {
    throw;
  } catch (const ConfigError& e) {
    throw StageFailure(std::string(name), StageFailure::Kind::Config, e.what());
  } catch (const InvalidArgument& e) {
    throw StageFailure(std::string(name), StageFailure::Kind::Config, e.what());
  } catch (const IoError& e) {
    throw StageFailure(std::string(name), StageFailure::Kind::Io, e.what());
  } catch (const Error& e) {
    throw StageFailure(std::string(name), StageFailure::Kind::Numerical, e.what());
  }
}

double relative_error(const GridFunction& y, const GridFunction& exact) {
  return l2_norm(GridFunction(y.values - exact.values, exact.rule)) / l2_norm(exact);
}

std::string beta_label(double beta) { return fmt::format("beta_{}", beta); }

struct RowResult {
  double delta;
  ModelInstance inst;
  double Delta;
  double Theta;
  std::optional<AlphaSelection> opt;
  std::vector<std::optional<AlphaSelection>> nvac;
};

class Runner {
 public:
  explicit Runner(const ExperimentConfig& cfg) : cfg_(cfg) {}

  ExperimentReport run() {
    stage("config", [&] {
      cfg_.validate();
      return 0;
    });
    ExperimentReport report;
    for (double delta : cfg_.deltas) rows_.push_back(run_row(delta, report));
    report.norms = base_norms(rows_.front().inst);

    const bool table2 = cfg_.wants(Rule::Nvac) || cfg_.wants(Rule::OptScan);
    for (const RowResult& row : rows_) {
      report.table1.push_back(table1_row(row, report.norms));
      if (table2) report.table2.push_back(table2_row(row));
    }
    if (cfg_.wants_output("fig1")) report.figures["fig1"] = fig1(rows_.front().inst);
    if (cfg_.wants_output("fig2")) report.figures["fig2"] = stage("fig2", [&] { return fig2(); });
    if (cfg_.wants_output("fig3")) report.figures["fig3"] = stage("fig3", [&] { return fig3(); });
    if (cfg_.wants_output("fig4")) report.figures["fig4"] = stage("fig4", [&] { return fig4(); });
    return report;
  }

 private:
  RowResult run_row(double delta, ExperimentReport& report) {
    ModelSpec spec = cfg_.model;
    spec.delta = delta;
    const std::string label = fmt::format("delta={}", delta);
    ModelInstance inst = stage("model " + label, [&] { return build_instance(spec); });

    const DataErrorEstimates& e = inst.errors;
    const bool measured = cfg_.error_source == ErrorSource::Measured;
    const double Delta = measured ? *e.Delta_measured : e.Delta_upper;
    const double Theta = measured ? *e.Theta_measured : e.Theta_upper;
    RowResult row{delta, std::move(inst), Delta, Theta, std::nullopt, {}};
    const ModelInstance& in = row.inst;
    const double norm_A = hs_norm(in.noisy_op);
    const double norm_f = l2_norm(in.noisy_f);
    const double f_error = *e.f_error;

    if (cfg_.wants(Rule::OptScan)) {
      row.opt = stage("opt-scan " + label, [&] { return scan(in); });
      report.selections.push_back({delta, Rule::OptScan, std::nullopt, row.opt->alpha,
                                   relative_error(row.opt->solution.y, in.exact_solution), false,
                                   std::nullopt});
    }
    for (double beta : cfg_.betas) {
      if (cfg_.wants(Rule::Nvac)) {
        AlphaSelection sel = stage("nvac " + label, [&] {
          AlphaSelection s = solve_nvac(in.noisy_system, nvac_config(beta, Delta, Theta));
          s.bounds = compute_bounds(in.noisy_system, nvac_config(beta, Delta, Theta), norm_A,
                                    norm_f, f_error, e.theta);
          return s;
        });
        report.selections.push_back({delta, Rule::Nvac, beta, sel.alpha,
                                     relative_error(sel.solution.y, in.exact_solution),
                                     sel.degenerate, sel.bounds});
        row.nvac.push_back(std::move(sel));
      } else {
        row.nvac.push_back(std::nullopt);
      }
      if (cfg_.wants(Rule::Kojdecki)) {
        AlphaSelection sel = stage("kojdecki " + label, [&] {
          return solve_kojdecki(in.noisy_system, cfg_.q, beta, f_error, e.theta, norm_A,
                                cfg_.search);
        });
        report.selections.push_back({delta, Rule::Kojdecki, beta, sel.alpha,
                                     relative_error(sel.solution.y, in.exact_solution),
                                     sel.degenerate, std::nullopt});
      }
    }
    if (cfg_.wants(Rule::Gdp)) {
      AlphaSelection sel = stage("gdp " + label, [&] {
        return solve_gdp(in.noisy_op, in.noisy_f, in.noisy_system, f_error, e.theta, cfg_.gdp_mu,
                         cfg_.search);
      });
      report.selections.push_back({delta, Rule::Gdp, std::nullopt, sel.alpha,
                                   relative_error(sel.solution.y, in.exact_solution),
                                   sel.degenerate, std::nullopt});
    }
    return row;
  }

  NvacConfig nvac_config(double beta, double Delta, double Theta) const {
    return NvacConfig{cfg_.q, beta, Delta, Theta, cfg_.search};
  }

  AlphaSelection scan(const ModelInstance& in) const {
    return scan_alpha_opt(in.noisy_system, in.exact_solution, cfg_.lg_lo, cfg_.lg_hi,
                          cfg_.lg_step, cfg_.search.precision);
  }

  static BaseNorms base_norms(const ModelInstance& in) {
    return BaseNorms{l2_norm(in.exact_solution), l2_norm(in.exact_f), hs_norm(in.exact_op),
                     in.exact_system.norm_F(), in.exact_system.norm_R()};
  }

  static Table1Row table1_row(const RowResult& row, const BaseNorms& norms) {
    const DataErrorEstimates& e = row.inst.errors;
    return Table1Row{row.delta,
                     row.delta / norms.norm_f,
                     *e.Delta_measured,
                     *e.Delta_measured / norms.norm_F,
                     e.Delta_upper,
                     e.theta,
                     *e.Theta_measured,
                     e.Theta_upper};
  }

  Table2Row table2_row(const RowResult& row) const {
    Table2Row t{row.delta, std::nullopt, std::nullopt, {}, {}};
    if (row.opt) {
      t.lg_alpha_opt = std::log10(row.opt->alpha);
      t.err_opt = relative_error(row.opt->solution.y, row.inst.exact_solution);
    }
    for (const auto& sel : row.nvac) {
      if (sel) {
        t.lg_alpha_n.push_back(std::log10(sel->alpha));
        t.err_n.push_back(relative_error(sel->solution.y, row.inst.exact_solution));
      } else {
        t.lg_alpha_n.push_back(std::nullopt);
        t.err_n.push_back(std::nullopt);
      }
    }
    return t;
  }

  static Table fig1(const ModelInstance& in) {
    Table t{{"s", "y_exact", "x", "f", "t", "F"}, {}};
    const int n = in.exact_solution.rule.size();
    const int l = in.exact_f.rule.size();
    for (int i = 0; i < std::max(n, l); ++i) {
      std::vector<Cell> r(6);
      if (i < n) {
        const double s = in.exact_solution.rule.grid().node(i);
        r[0] = s;
        r[1] = in.exact_solution.values[i];
        r[4] = s;
        r[5] = in.exact_system.F()[i];
      }
      if (i < l) {
        r[2] = in.exact_f.rule.grid().node(i);
        r[3] = in.exact_f.values[i];
      }
      t.rows.push_back(std::move(r));
    }
    return t;
  }

  Table fig2() {
    std::vector<std::string> labels;
    std::vector<AlphaSelection> curves;
    if (cfg_.fig2_cases.empty()) {
      for (RowResult& row : rows_) {
        if (!row.opt) row.opt = scan(row.inst);
        labels.push_back(fmt::format("rel_error_delta_{}_r_{}", row.delta, cfg_.model.r_used));
        curves.push_back(*row.opt);
      }
    } else {
      for (const CurveCase& c : cfg_.fig2_cases) {
        ModelSpec spec = cfg_.model;
        spec.delta = c.delta;
        spec.r_used = c.r_used;
        labels.push_back(fmt::format("rel_error_delta_{}_r_{}", c.delta, c.r_used));
        curves.push_back(scan(build_instance(spec)));
      }
    }
    Table t{{"lg_alpha"}, {}};
    t.columns.insert(t.columns.end(), labels.begin(), labels.end());
    const std::size_t points = curves.front().trace.size();
    for (std::size_t k = 0; k < points; ++k) {
      std::vector<Cell> r{std::log10(curves.front().trace[k].alpha)};
      for (const AlphaSelection& c : curves) r.emplace_back(c.trace[k].lhs);
      t.rows.push_back(std::move(r));
    }
    return t;
  }

  RowResult& focus_row() {
    for (RowResult& row : rows_) {
      if (row.delta == cfg_.figure_delta) return row;
    }
    throw ConfigError(fmt::format("figures.delta = {} is not one of model.delta", cfg_.figure_delta));
  }

  Table fig3() {
    const RowResult& row = focus_row();
    Table t{{"lg_alpha", "lg_psi"}, {}};
    for (double beta : cfg_.betas) t.columns.push_back("lg_xi_" + beta_label(beta));
    for (double lg : lg_alpha_grid(cfg_.lg_lo, cfg_.lg_hi, cfg_.lg_step)) {
      const RegularizedSolution sol =
          solve_regularized(row.inst.noisy_system, std::pow(10.0, lg), cfg_.search.precision);
      std::vector<Cell> r{lg, std::log10(psi(sol, cfg_.q))};
      for (double beta : cfg_.betas) r.emplace_back(std::log10(xi(sol, beta, row.Delta, row.Theta)));
      t.rows.push_back(std::move(r));
    }
    return t;
  }

  Table fig4() {
    RowResult& row = focus_row();
    const ModelInstance& in = row.inst;
    if (!row.opt) row.opt = scan(in);
    std::vector<AlphaSelection> nvac;
    for (std::size_t k = 0; k < cfg_.betas.size(); ++k) {
      if (k < row.nvac.size() && row.nvac[k]) {
        nvac.push_back(*row.nvac[k]);
      } else {
        nvac.push_back(solve_nvac(in.noisy_system, nvac_config(cfg_.betas[k], row.Delta, row.Theta)));
      }
    }
    Table t{{"s", "y_exact", "y_opt"}, {}};
    for (double beta : cfg_.betas) t.columns.push_back("y_n_" + beta_label(beta));
    for (int i = 0; i < in.exact_solution.rule.size(); ++i) {
      std::vector<Cell> r{in.exact_solution.rule.grid().node(i), in.exact_solution.values[i],
                          row.opt->solution.y.values[i]};
      for (const AlphaSelection& s : nvac) r.emplace_back(s.solution.y.values[i]);
      t.rows.push_back(std::move(r));
    }
    return t;
  }

  const ExperimentConfig& cfg_;
  std::vector<RowResult> rows_;
};

Cell opt_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

}  // namespace

StageFailure::StageFailure(const std::string& stage, Kind kind, const std::string& detail)
    : Error(fmt::format("[{}] {}", stage, detail)), stage_(stage), kind_(kind) {}

int StageFailure::exit_code() const {
  switch (kind_) {
    case Kind::Config:
      return 2;
    case Kind::Numerical:
      return 3;
    case Kind::Io:
      return 4;
  }
  return 1;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) { return Runner(cfg).run(); }

Table artifact_table(const ExperimentReport& report, const ExperimentConfig& cfg,
                     std::string_view name) {
  if (name == "table1") {
    Table t{{"delta", "delta_rel", "Delta_measured", "Delta_rel", "Delta_upper", "theta",
             "Theta_measured", "Theta_upper"},
            {}};
    for (const Table1Row& r : report.table1) {
      t.rows.push_back({r.delta, r.delta_rel, r.Delta_measured, r.Delta_rel, r.Delta_upper, r.theta,
                        r.Theta_measured, r.Theta_upper});
    }
    return t;
  }
  if (name == "table2") {
    Table t{{"delta", "lg_alpha_opt", "err_opt"}, {}};
    for (double beta : cfg.betas) t.columns.push_back("lg_alpha_n_" + beta_label(beta));
    for (double beta : cfg.betas) t.columns.push_back("err_n_" + beta_label(beta));
    for (const Table2Row& r : report.table2) {
      std::vector<Cell> row{r.delta, opt_cell(r.lg_alpha_opt), opt_cell(r.err_opt)};
      for (const auto& v : r.lg_alpha_n) row.push_back(opt_cell(v));
      for (const auto& v : r.err_n) row.push_back(opt_cell(v));
      t.rows.push_back(std::move(row));
    }
    return t;
  }
  if (name == "selections") {
    Table t{{"delta", "rule", "beta", "alpha", "lg_alpha", "rel_error", "degenerate", "alpha0",
             "data_bound", "c1_bound", "c2_bound", "cond12", "cond17"},
            {}};
    for (const SelectionSummary& s : report.selections) {
      std::vector<Cell> row{s.delta, std::string(to_string(s.rule)), opt_cell(s.beta), s.alpha,
                            std::log10(s.alpha), s.rel_error,
                            std::string(s.degenerate ? "true" : "false")};
      if (s.bounds) {
        const BoundsReport& b = *s.bounds;
        row.insert(row.end(), {b.alpha0, b.data_bound, b.c1_bound, opt_cell(b.c2_bound),
                               std::string(b.cond12_ok ? "true" : "false"),
                               std::string(b.cond17_ok ? "true" : "false")});
      } else {
        row.resize(t.columns.size());
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  }
  if (const auto it = report.figures.find(std::string(name)); it != report.figures.end()) {
    return it->second;
  }
  throw InvalidArgument(fmt::format("artifact '{}' is not part of this report", name));
}

}  // namespace regchoice
