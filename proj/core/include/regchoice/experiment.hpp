#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "regchoice/config.hpp"
#include "regchoice/errors.hpp"
#include "regchoice/param_select.hpp"

namespace regchoice {

/// Norms of the exact benchmark objects (independent of noise and r_used).
struct BaseNorms {
  double norm_y = 0.0;
  double norm_f = 0.0;
  double norm_A = 0.0;
  double norm_F = 0.0;
  double norm_R = 0.0;
};

struct SelectionSummary {
  double delta;
  Rule rule;
  std::optional<double> beta;
  double alpha;
  double rel_error;
  bool degenerate;
  std::optional<BoundsReport> bounds;
};

struct Table1Row {
  double delta;
  double delta_rel;  ///< delta / ||f||
  double Delta_measured;
  double Delta_rel;  ///< Delta_measured / ||F||
  double Delta_upper;
  double theta;
  double Theta_measured;
  double Theta_upper;
};

struct Table2Row {
  double delta;
  std::optional<double> lg_alpha_opt;
  std::optional<double> err_opt;
  std::vector<std::optional<double>> lg_alpha_n;  ///< one per configured beta
  std::vector<std::optional<double>> err_n;
};

using Cell = std::variant<std::monostate, double, std::string>;

/// Column-labelled table; the unit of emission for every artifact.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ExperimentReport {
  BaseNorms norms;
  std::vector<Table1Row> table1;
  std::vector<Table2Row> table2;
  std::vector<SelectionSummary> selections;
  /// Figure series keyed by artifact name ("fig1" ... "fig4"); only requested ones.
  std::map<std::string, Table> figures;
};

/// Error raised by run_experiment / emit_report, tagged with the failing stage.
class StageFailure : public Error {
 public:
  enum class Kind { Config, Numerical, Io };

  StageFailure(const std::string& stage, Kind kind, const std::string& detail);

  const std::string& stage() const { return stage_; }
  Kind kind() const { return kind_; }

  /// 2 config, 3 numerical, 4 I/O.
  int exit_code() const;

 private:
  std::string stage_;
  Kind kind_;
};

/// Builds every model instance, runs the requested rules and assembles the
/// tables and figure series. Deterministic for a fixed config.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Tabular form of one artifact of the report.
Table artifact_table(const ExperimentReport& report, const ExperimentConfig& cfg,
                     std::string_view name);

/// Writes one file per requested artifact plus `config.txt` (the canonical
/// config echo) into cfg.out_dir. Returns the written paths.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const ExperimentConfig& cfg);

/// Serialisation used by emit_report.
std::string to_csv(const Table& table);
std::string to_json(const Table& table);

}  // namespace regchoice
