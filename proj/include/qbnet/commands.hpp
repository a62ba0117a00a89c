#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "qbnet/config.hpp"
#include "qbnet/simulate.hpp"

namespace qbnet {

enum class OutputFormat { kCsv, kJson };

/// Everything the chain-level commands need, assembled once per invocation.
struct AssembledModel {
  int n = 0;
  HermitianBasis basis;
  RealGenerator generator;
  ThetaMatrix theta;
  std::vector<ComplexMatrix> projectors;
  std::optional<InteractionGraph> graph;  // consensus models only
};

AssembledModel assemble_model(const ExperimentConfig& cfg);

// The exact transition matrix for the configured model (swap networks go
// through the Laplacian route, everything else through the realified
// generator).
TransitionMatrix exact_transition(const AssembledModel& model, double tau);

void cmd_transition(const ExperimentConfig& cfg, const std::string& out_dir,
                    OutputFormat format);
void cmd_classes(const ExperimentConfig& cfg, const std::string& out_dir, OutputFormat format);
void cmd_stationary(const ExperimentConfig& cfg, const std::string& out_dir,
                    OutputFormat format);
void cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir, OutputFormat format,
                  std::optional<std::uint64_t> seed_override, int threads);
void cmd_scan_tau(const ExperimentConfig& cfg, const std::string& out_dir, OutputFormat format);

// Reproduces the documented three-qubit path-network example end to end and
// prints one pass/fail line per check. path_weight12 perturbs the first edge
// (the class checks are weight-independent; the matrix check is not).
bool cmd_verify_paper(std::ostream& out, double path_weight12 = 1.0);

}  // namespace qbnet
