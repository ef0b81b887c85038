#include <cmath>
#include <fstream>
#include <system_error>

#include <fmt/format.h>

#include "json.hpp"
#include "regchoice/experiment.hpp"

namespace regchoice {
namespace {

std::string format_cell(const Cell& cell) {
  if (const double* v = std::get_if<double>(&cell)) return fmt::format("{:.12g}", *v);
  if (const std::string* s = std::get_if<std::string>(&cell)) return *s;
  return {};
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  if (const double* v = std::get_if<double>(&cell)) {
    if (!std::isfinite(*v)) return nullptr;
    return *v;
  }
  if (const std::string* s = std::get_if<std::string>(&cell)) return *s;
  return nullptr;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json doc;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const Cell& c : row) r.push_back(json_cell(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(1) + "\n";
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const ExperimentConfig& cfg) {
  try {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) {
      throw IoError(
          fmt::format("cannot create output directory '{}': {}", cfg.out_dir.string(), ec.message()));
    }
    std::vector<std::filesystem::path> written;
    const bool csv = cfg.format == OutputFormat::Csv;
    for (const std::string& name : cfg.outputs) {
      const Table table = artifact_table(report, cfg, name);
      const auto path = cfg.out_dir / (name + (csv ? ".csv" : ".json"));
      write_file(path, csv ? to_csv(table) : to_json(table));
      written.push_back(path);
    }
    const auto echo = cfg.out_dir / "config.txt";
    write_file(echo, to_config_text(cfg));
    written.push_back(echo);
    return written;
  } catch (const IoError& e) {
    throw StageFailure("emit", StageFailure::Kind::Io, e.what());
  } catch (const InvalidArgument& e) {
    throw StageFailure("emit", StageFailure::Kind::Config, e.what());
  }
}

}  // namespace regchoice
