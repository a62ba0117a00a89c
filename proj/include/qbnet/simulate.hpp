#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qbnet/chain.hpp"

namespace qbnet {

/// One hybrid-dynamics experiment: evolve for tau, project, record the bits,
/// collapse, repeat. Exactly one of initial_state / initial_coordinates is
/// set; coordinates describe a density operator to be measured at t = 0.
struct TrajectoryConfig {
  RealGenerator generator;
  ThetaMatrix theta;
  double tau = 0.0;
  int steps = 1;
  std::optional<BooleanState> initial_state;
  std::optional<CoordinateVector> initial_coordinates;
  std::uint64_t seed = 0;
};

TrajectoryConfig make_trajectory_config(RealGenerator generator, ThetaMatrix theta, double tau,
                                        int steps, BooleanState initial, std::uint64_t seed);
TrajectoryConfig make_trajectory_config(RealGenerator generator, ThetaMatrix theta, double tau,
                                        int steps, const DensityOp& initial,
                                        const HermitianBasis& basis, std::uint64_t seed);

/// Outcome sequence x(0), ..., x(steps).
struct TrajectoryRecord {
  std::vector<BooleanState> outcomes;
};

// Per-trajectory seed stream: splitmix64(base ^ golden * (index + 1));
// injective in the index for a fixed base.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Deterministic for a fixed config: the sampler draws uniforms from the top
// 53 bits of an mt19937_64 stream seeded with cfg.seed.
TrajectoryRecord run_trajectory(const TrajectoryConfig& cfg);

// Independent trajectories with seeds derive_seed(seed_stream_base, i);
// result order is index order regardless of the thread count.
std::vector<TrajectoryRecord> batch_run(const TrajectoryConfig& cfg, int trajectories,
                                        std::uint64_t seed_stream_base, int threads = 1);

/// Row-normalized transition counts; rows never visited are flagged
/// undefined and left at zero rather than fabricated.
struct EmpiricalTransition {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  RealMatrix frequency;
  std::vector<std::int64_t> row_visits;
  std::vector<bool> row_defined;
};

EmpiricalTransition empirical_transition(const std::vector<TrajectoryRecord>& records, int n);

}  // namespace qbnet
