#include "regchoice/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "regchoice/errors.hpp"

namespace regchoice {
namespace {

const std::vector<std::string> kKnownOutputs{"table1", "table2", "fig1", "fig2",
                                             "fig3",   "fig4",   "selections"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
  }
  return out;
}

template <typename Int>
Int to_integer(std::string_view key, std::string_view v) {
  v = trim(v);
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
  }
  return out;
}

std::vector<double> to_doubles(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (std::string_view item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

std::string join_doubles(const std::vector<double>& v) { return fmt::format("{}", fmt::join(v, ", ")); }

struct Setting {
  std::string key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Setting real(std::string key, double ExperimentConfig::*field) {
  return {key, [key, field](ExperimentConfig& c, std::string_view v) { c.*field = to_double(key, v); },
          [field](const ExperimentConfig& c) { return fmt::format("{}", c.*field); }};
}

Setting model_real(std::string key, double ModelSpec::*field) {
  return {key,
          [key, field](ExperimentConfig& c, std::string_view v) { c.model.*field = to_double(key, v); },
          [field](const ExperimentConfig& c) { return fmt::format("{}", c.model.*field); }};
}

Setting model_int(std::string key, int ModelSpec::*field) {
  return {key,
          [key, field](ExperimentConfig& c, std::string_view v) {
            c.model.*field = to_integer<int>(key, v);
          },
          [field](const ExperimentConfig& c) { return fmt::format("{}", c.model.*field); }};
}

Setting search_real(std::string key, double RootSearch::*field) {
  return {key,
          [key, field](ExperimentConfig& c, std::string_view v) { c.search.*field = to_double(key, v); },
          [field](const ExperimentConfig& c) { return fmt::format("{}", c.search.*field); }};
}

const std::vector<Setting>& settings() {
  static const std::vector<Setting> table = [] {
    std::vector<Setting> s;
    s.push_back(model_real("model.r_exact", &ModelSpec::r_exact));
    s.push_back(model_real("model.r_used", &ModelSpec::r_used));
    s.push_back({"model.delta",
                 [](ExperimentConfig& c, std::string_view v) { c.deltas = to_doubles("model.delta", v); },
                 [](const ExperimentConfig& c) { return join_doubles(c.deltas); }});
    s.push_back({"model.seed",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.model.seed = to_integer<std::uint64_t>("model.seed", v);
                 },
                 [](const ExperimentConfig& c) { return fmt::format("{}", c.model.seed); }});
    s.push_back(model_real("model.a", &ModelSpec::a));
    s.push_back(model_real("model.b", &ModelSpec::b));
    s.push_back(model_real("model.c", &ModelSpec::c));
    s.push_back(model_real("model.d", &ModelSpec::d));
    s.push_back(model_int("model.l", &ModelSpec::l));
    s.push_back(model_int("model.n", &ModelSpec::n));
    s.push_back(model_real("model.tau", &ModelSpec::tau));
    s.push_back(real("nvac.q", &ExperimentConfig::q));
    s.push_back({"nvac.beta",
                 [](ExperimentConfig& c, std::string_view v) { c.betas = to_doubles("nvac.beta", v); },
                 [](const ExperimentConfig& c) { return join_doubles(c.betas); }});
    s.push_back({"nvac.errors",
                 [](ExperimentConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "measured") {
                     c.error_source = ErrorSource::Measured;
                   } else if (v == "upper") {
                     c.error_source = ErrorSource::Upper;
                   } else {
                     throw ConfigError(fmt::format("nvac.errors: expected measured|upper, got '{}'", v));
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(c.error_source == ErrorSource::Measured ? "measured" : "upper");
                 }});
    s.push_back(search_real("nvac.alpha_min_factor", &RootSearch::alpha_min_factor));
    s.push_back(search_real("nvac.alpha_max_factor", &RootSearch::alpha_max_factor));
    s.push_back(search_real("nvac.root_tol_lg", &RootSearch::root_tol_lg));
    s.push_back({"solver.precision",
                 [](ExperimentConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "single") {
                     c.search.precision = Precision::Single;
                   } else if (v == "double") {
                     c.search.precision = Precision::Double;
                   } else {
                     throw ConfigError(fmt::format("solver.precision: expected single|double, got '{}'", v));
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(c.search.precision == Precision::Single ? "single" : "double");
                 }});
    s.push_back(real("gdp.mu", &ExperimentConfig::gdp_mu));
    s.push_back({"rules",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.rules.clear();
                   for (std::string_view item : split_list(v)) {
                     try {
                       const Rule r = parse_rule(item);
                       if (!c.wants(r)) c.rules.push_back(r);
                     } catch (const InvalidArgument& e) {
                       throw ConfigError(fmt::format("rules: {}", e.what()));
                     }
                   }
                 },
                 [](const ExperimentConfig& c) {
                   std::vector<std::string_view> names;
                   for (Rule r : c.rules) names.push_back(to_string(r));
                   return fmt::format("{}", fmt::join(names, ", "));
                 }});
    s.push_back(real("scan.lg_lo", &ExperimentConfig::lg_lo));
    s.push_back(real("scan.lg_hi", &ExperimentConfig::lg_hi));
    s.push_back(real("scan.lg_step", &ExperimentConfig::lg_step));
    s.push_back({"outputs",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.outputs.clear();
                   for (std::string_view item : split_list(v)) {
                     if (std::find(kKnownOutputs.begin(), kKnownOutputs.end(), item) ==
                         kKnownOutputs.end()) {
                       throw ConfigError(fmt::format("outputs: unknown artifact '{}'", item));
                     }
                     c.outputs.emplace_back(item);
                   }
                 },
                 [](const ExperimentConfig& c) { return fmt::format("{}", fmt::join(c.outputs, ", ")); }});
    s.push_back({"output.dir",
                 [](ExperimentConfig& c, std::string_view v) { c.out_dir = std::string(trim(v)); },
                 [](const ExperimentConfig& c) { return c.out_dir.string(); }});
    s.push_back({"output.format",
                 [](ExperimentConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "csv") {
                     c.format = OutputFormat::Csv;
                   } else if (v == "json") {
                     c.format = OutputFormat::Json;
                   } else {
                     throw ConfigError(fmt::format("output.format: expected csv|json, got '{}'", v));
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(c.format == OutputFormat::Csv ? "csv" : "json");
                 }});
    s.push_back(real("figures.delta", &ExperimentConfig::figure_delta));
    s.push_back({"fig2.cases",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.fig2_cases.clear();
                   for (std::string_view item : split_list(v)) {
                     const auto colon = item.find(':');
                     if (colon == std::string_view::npos) {
                       throw ConfigError(
                           fmt::format("fig2.cases: expected delta:r_used, got '{}'", item));
                     }
                     c.fig2_cases.push_back({to_double("fig2.cases", item.substr(0, colon)),
                                             to_double("fig2.cases", item.substr(colon + 1))});
                   }
                 },
                 [](const ExperimentConfig& c) {
                   std::vector<std::string> items;
                   for (const CurveCase& k : c.fig2_cases) {
                     items.push_back(fmt::format("{}:{}", k.delta, k.r_used));
                   }
                   return fmt::format("{}", fmt::join(items, ", "));
                 }});
    return s;
  }();
  return table;
}

const Setting& find_setting(std::string_view key) {
  for (const Setting& s : settings()) {
    if (s.key == key) return s;
  }
  throw ConfigError(fmt::format("unknown config key '{}'", key));
}

}  // namespace

bool ExperimentConfig::wants(Rule rule) const {
  return std::find(rules.begin(), rules.end(), rule) != rules.end();
}

bool ExperimentConfig::wants_output(std::string_view name) const {
  return std::find(outputs.begin(), outputs.end(), name) != outputs.end();
}

void ExperimentConfig::validate() const {
  try {
    if (deltas.empty()) throw ConfigError("model.delta: at least one noise level is required");
    for (double d : deltas) {
      ModelSpec spec = model;
      spec.delta = d;
      spec.validate();
    }
    if (betas.empty()) throw ConfigError("nvac.beta: at least one beta is required");
    for (double b : betas) {
      if (!(b > 0.0)) throw ConfigError(fmt::format("nvac.beta: {} is not positive", b));
    }
    if (!(q >= 0.0)) throw ConfigError(fmt::format("nvac.q: {} is negative", q));
    if (!(gdp_mu >= 0.0)) throw ConfigError(fmt::format("gdp.mu: {} is negative", gdp_mu));
    search.validate();
    if (!(lg_lo < lg_hi)) throw ConfigError("scan.lg_lo must be below scan.lg_hi");
    if (!(lg_step > 0.0)) throw ConfigError("scan.lg_step must be positive");
    if ((wants_output("fig3") || wants_output("fig4")) &&
        std::find(deltas.begin(), deltas.end(), figure_delta) == deltas.end()) {
      throw ConfigError(fmt::format("figures.delta = {} is not one of model.delta", figure_delta));
    }
    for (const CurveCase& c : fig2_cases) {
      if (!(c.delta >= 0.0) || !(c.r_used > 0.0)) {
        throw ConfigError(fmt::format("fig2.cases: invalid case {}:{}", c.delta, c.r_used));
      }
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Setting& s : settings()) k.push_back(s.key);
    return k;
  }();
  return keys;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  find_setting(trim(key)).set(cfg, value);
}

std::string setting_value(const ExperimentConfig& cfg, std::string_view key) {
  return find_setting(key).get(cfg);
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
      }
      try {
        apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("line {}: {}", line_no, e.what()));
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read config file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string to_config_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const Setting& s : settings()) {
    out += fmt::format("{} = {}\n", s.key, s.get(cfg));
  }
  return out;
}

}  // namespace regchoice
