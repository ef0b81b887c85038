#pragma once

// Experiment configuration: a flat `key = value` text format with dotted keys.
//
//   # comment
//   model.delta   = 0.0001, 0.15, 0.5
//   nvac.beta     = 1, 0.1
//   rules         = nvac, opt-scan
//
// List values are comma separated. Every key has a default; the defaults
// reproduce the five-gaussian benchmark setup, so an empty file is valid.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "regchoice/model_problem.hpp"
#include "regchoice/param_select.hpp"

namespace regchoice {

enum class OutputFormat { Csv, Json };

/// Which Delta/Theta feed the selection rules in model mode.
enum class ErrorSource { Measured, Upper };

/// One curve of the error-vs-alpha figure.
struct CurveCase {
  double delta;
  double r_used;
};

struct ExperimentConfig {
  ModelSpec model;  ///< model.delta is replaced by each entry of `deltas`
  std::vector<double> deltas{1e-4, 0.15, 0.5};
  double q = 0.0;
  std::vector<double> betas{1.0, 0.1};
  ErrorSource error_source = ErrorSource::Measured;
  RootSearch search{.precision = Precision::Single};
  double gdp_mu = 0.0;
  std::vector<Rule> rules{Rule::Nvac, Rule::OptScan};
  double lg_lo = -11.0;
  double lg_hi = -2.0;
  double lg_step = 0.05;
  std::vector<std::string> outputs{"table1", "table2", "fig1", "fig2", "fig3", "fig4",
                                   "selections"};
  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::Csv;
  double figure_delta = 0.15;
  /// Empty means: one curve per entry of `deltas` at model.r_used.
  std::vector<CurveCase> fig2_cases{{1e-4, 59.92}, {0.15, 60.0}, {0.5, 65.0}};

  /// Throws ConfigError.
  void validate() const;

  bool wants(Rule rule) const;
  bool wants_output(std::string_view name) const;
};

/// Names of all recognised keys, in echo order.
const std::vector<std::string>& config_keys();

/// Applies one `key = value` assignment. Throws ConfigError on an unknown key
/// or an unparsable value.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Parses a config text on top of `base`.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});

/// Throws IoError if the file cannot be read, ConfigError if it cannot be parsed.
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Canonical text form; parse_config(to_config_text(c)) reproduces c exactly.
std::string to_config_text(const ExperimentConfig& cfg);

/// Value of a single key in canonical text form.
std::string setting_value(const ExperimentConfig& cfg, std::string_view key);

}  // namespace regchoice
