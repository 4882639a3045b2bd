// horoeq: runs equidistribution experiments from JSON configs.
//
//   horoeq equidist --config configs/examples/equidist_kernel.json --threads 4
//   horoeq plot out/equidist.json --out out/equidist.svg
//
// Exit status: 0 when every hard check passes, 1 when one fails, 2 on error.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"

#include "horoeq/harness.hpp"

namespace {

using namespace horoeq;
using namespace horoeq::harness;

struct RunOptions {
  std::string config;
  std::string out;
  unsigned threads = 0;
  std::string format;
};

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("HOROEQ_OUT_DIR"); env && *env) return env;
  return "out";
}

int run_experiment(std::optional<ExperimentKind> kind, const RunOptions& opt, CLI::App& sub) {
  ExperimentConfig cfg = opt.config.empty() ? default_config(*kind) : load_config(opt.config);
  if (kind && cfg.kind != *kind) {
    throw Error(Errc::ConfigInvalid, "config kind '" + std::string(kind_name(cfg.kind)) + "' does not match subcommand '" +
                                         kind_name(*kind) + "'");
  }
  if (!opt.out.empty()) {
    cfg.output_dir = opt.out;
  } else if (!cfg.source.contains("output")) {
    cfg.output_dir = default_out_dir();
  }
  if (sub.count("--threads")) cfg.threads = opt.threads;
  if (opt.format == "csv") cfg.format = OutputFormat::Csv;
  if (opt.format == "json") cfg.format = OutputFormat::Json;

  const RunManifest m = run(cfg);
  std::cout << kind_name(cfg.kind) << " '" << cfg.name << "' config " << m.config_hash << "\n";
  for (const auto& p : m.outputs) std::cout << "  wrote " << p.string() << "\n";
  for (const auto& f : m.failures) std::cout << "  FAIL " << f << "\n";
  std::cout << (m.all_pass ? "all checks passed" : std::to_string(m.failures.size()) + " check(s) failed") << "\n";
  return m.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective equidistribution experiments on rational horocycle points"};
  app.set_version_flag("--version", std::string(HOROEQ_VERSION));
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, ExperimentKind>> kinds = {
      {"generate", ExperimentKind::Generate},         {"equidist", ExperimentKind::Equidist},
      {"kloosterman", ExperimentKind::Kloosterman},   {"invariance", ExperimentKind::Invariance},
      {"cardinality", ExperimentKind::Cardinality},   {"discrepancy", ExperimentKind::Discrepancy},
      {"cusp-mass", ExperimentKind::CuspMass},        {"projection", ExperimentKind::Projection},
      {"intersection", ExperimentKind::Intersection}, {"weyl", ExperimentKind::Weyl},
      {"mixing", ExperimentKind::Mixing},
  };

  RunOptions opt;
  std::map<CLI::App*, std::optional<ExperimentKind>> experiment_cmds;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON experiment config");
    sub->add_option("--out", opt.out, "output directory (default: $HOROEQ_OUT_DIR or ./out)");
    sub->add_option("--threads", opt.threads, "worker threads, 0 = hardware concurrency");
    sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"csv", "json", "both"}));
  };
  for (const auto& [name, kind] : kinds) {
    CLI::App* sub = app.add_subcommand(name, std::string("run a ") + kind_name(kind) + " experiment");
    add_common(sub);
    experiment_cmds[sub] = kind;
  }
  CLI::App* run_cmd = app.add_subcommand("run", "run any config, dispatching on its kind");
  add_common(run_cmd);
  run_cmd->get_option("--config")->required();
  experiment_cmds[run_cmd] = std::nullopt;

  std::vector<std::string> plot_inputs;
  std::string plot_out;
  CLI::App* plot_cmd = app.add_subcommand("plot", "log-log error plot from equidist reports");
  plot_cmd->add_option("reports", plot_inputs, "report files (.json or .csv)")->required();
  plot_cmd->add_option("--out", plot_out, "SVG path (default: <out dir>/plot.svg)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot_cmd->parsed()) {
      std::vector<std::filesystem::path> paths(plot_inputs.begin(), plot_inputs.end());
      const auto out = plot_out.empty() ? default_out_dir() / "plot.svg" : std::filesystem::path(plot_out);
      std::cout << "wrote " << emit_plot(paths, out).string() << "\n";
      return 0;
    }
    for (auto& [sub, kind] : experiment_cmds) {
      if (sub->parsed()) return run_experiment(kind, opt, *sub);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
