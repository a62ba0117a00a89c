#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbnet/consensus.hpp"

namespace qbnet {

enum class ModelKind { kConsensus, kAmplitudeDamping, kDepolarizing, kLindbladFiles };

struct SimulationBlock {
  int steps = 1000;
  int trajectories = 1;
  std::uint64_t seed = 1;
  std::string initial;  // bit string; empty means all zeros
};

/// Parsed experiment description. Flat key/value format with an optional
/// [simulation] section; see the bundled configs for the full key list.
struct ExperimentConfig {
  int n = 0;
  ModelKind model = ModelKind::kConsensus;
  std::vector<WeightedEdge> edges;              // model = consensus
  double gamma = 1.0;                           // per-qubit rate for the presets
  std::string hamiltonian_path;                 // model = lindblad
  std::vector<std::string> dissipator_paths;    // model = lindblad
  double theta = 0.0;                           // measurement polar angle (radians)
  double phi = 0.0;                             // measurement azimuthal angle (radians)
  std::optional<double> tau;                    // measurement period
  std::vector<double> tau_grid;                 // scan-tau grid
  std::optional<double> epsilon;                // support threshold override
  SimulationBlock simulation;
};

// Parses the config file; error messages carry "path:line: field ..." so the
// offending key is always named.
ExperimentConfig parse_config(const std::string& path);

}  // namespace qbnet
