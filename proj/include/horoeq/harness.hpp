#pragma once

// Experiment runner: executes a config across its n schedule, writes CSV and
// JSON reports plus a manifest, and renders log-log error plots.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "horoeq/config.hpp"

namespace horoeq::harness {

struct Table {
  std::string stem;  // file name without extension
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  nlohmann::json meta = nlohmann::json::object();  // copied into the JSON report
};

struct Report {
  ExperimentKind kind = ExperimentKind::Equidist;
  std::vector<Table> tables;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> failures;  // hard invariant violations
  std::vector<std::pair<u64, double>> wall_clock;
};

struct RunManifest {
  std::string config_hash;
  std::string tool_version = HOROEQ_VERSION;
  std::string kind;
  std::string name;
  std::vector<std::pair<u64, double>> wall_clock;  // seconds per n
  std::vector<std::filesystem::path> outputs;
  bool all_pass = true;
  std::vector<std::string> failures;
  Report report;  // in memory only

  nlohmann::json to_json() const;
};

// Runs the experiment without touching the file system.
Report execute(const ExperimentConfig& config);

// execute() plus CSV/JSON reports and <name>.manifest.json in output_dir.
// Throws ConfigInvalid, ResourceExhausted (n > kMaxModulus) or Io.
RunManifest run(const ExperimentConfig& config);

ExperimentConfig default_config(ExperimentKind kind);

// %.17g, shared by every numeric CSV cell.
std::string format_number(double x);
std::string csv_cell(const nlohmann::json& v);
std::string render_csv(const Table& table);
nlohmann::json render_json(const Table& table, const ExperimentConfig& config, const Report& report);

struct PlotCurve {
  std::string label;
  std::vector<u64> n_values;
  std::vector<double> errors;
  double floor = 1e-15;
};

// Reads equidist reports (JSON, or CSV with n and abs_error columns).
std::vector<PlotCurve> load_curves(const std::vector<std::filesystem::path>& reports);
std::string render_plot(const std::vector<PlotCurve>& curves);
// Throws NoData when there is nothing to draw.
std::filesystem::path emit_plot(const std::vector<std::filesystem::path>& reports, const std::filesystem::path& out);

}  // namespace horoeq::harness
