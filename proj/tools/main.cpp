#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "qbnet/commands.hpp"

namespace {

int thread_count_from_env() {
  const char* raw = std::getenv("QBNET_THREADS");
  if (raw == nullptr) return 1;
  const int value = std::atoi(raw);
  return value >= 1 ? value : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qbnet: measurement-induced Boolean dynamics of open qubit networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string format_name = "csv";
  std::optional<std::uint64_t> seed_override;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config) {
      cmd->add_option("--config", config_path, "experiment config file")->required();
    }
    cmd->add_option("--out", out_dir, "output directory (default: current)");
    cmd->add_option("--format", format_name, "matrix output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", seed_override, "override the config seed (simulate)");
  };

  CLI::App* transition = app.add_subcommand("transition", "exact transition matrix");
  add_common(transition, true);
  CLI::App* classes = app.add_subcommand("classes", "communication-class analysis");
  add_common(classes, true);
  CLI::App* stationary = app.add_subcommand("stationary", "stationary distribution");
  add_common(stationary, true);
  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo trajectories");
  add_common(simulate, true);
  CLI::App* scan = app.add_subcommand("scan-tau", "structure scan over a tau grid");
  add_common(scan, true);
  CLI::App* verify = app.add_subcommand("verify-paper", "reproduce the documented example");

  CLI11_PARSE(app, argc, argv);

  const qbnet::OutputFormat format =
      format_name == "json" ? qbnet::OutputFormat::kJson : qbnet::OutputFormat::kCsv;

  try {
    if (verify->parsed()) {
      return qbnet::cmd_verify_paper(std::cout) ? 0 : 1;
    }
    const qbnet::ExperimentConfig cfg = qbnet::parse_config(config_path);
    if (transition->parsed()) {
      qbnet::cmd_transition(cfg, out_dir, format);
    } else if (classes->parsed()) {
      qbnet::cmd_classes(cfg, out_dir, format);
    } else if (stationary->parsed()) {
      qbnet::cmd_stationary(cfg, out_dir, format);
    } else if (simulate->parsed()) {
      qbnet::cmd_simulate(cfg, out_dir, format, seed_override, thread_count_from_env());
    } else if (scan->parsed()) {
      qbnet::cmd_scan_tau(cfg, out_dir, format);
    }
  } catch (const qbnet::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "numerical error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
