#include "qbnet/simulate.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace qbnet {

namespace {

void check_config(const TrajectoryConfig& cfg) {
  if (cfg.steps < 1) throw ValidationError("trajectory needs at least one step");
  if (cfg.tau < 0.0) throw ValidationError("measurement period tau must be nonnegative");
  if (cfg.generator.w.rows() != cfg.theta.theta.rows()) {
    throw ValidationError("generator and measurement dimensions differ");
  }
  if (cfg.initial_state.has_value() == cfg.initial_coordinates.has_value()) {
    throw ValidationError("exactly one of initial_state / initial_coordinates must be set");
  }
  if (cfg.initial_state && cfg.initial_state->size() != cfg.theta.n) {
    throw ValidationError("initial state length does not match qubit count");
  }
  if (cfg.initial_coordinates && cfg.initial_coordinates->size() != cfg.theta.theta.rows()) {
    throw ValidationError("initial coordinate length does not match generator");
  }
}

class OutcomeSampler {
 public:
  explicit OutcomeSampler(std::uint64_t seed) : rng_(seed) {}

  // Uniform in [0, 1) from the top 53 bits; identical on every platform.
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  int sample(const RealVector& probabilities) {
    const double u = uniform();
    double acc = 0.0;
    for (int j = 0; j < probabilities.size(); ++j) {
      acc += probabilities(j);
      if (u < acc) return j;
    }
    return static_cast<int>(probabilities.size()) - 1;
  }

 private:
  std::mt19937_64 rng_;
};

// Clamp dust in [kEntryFloor, 0) to zero and renormalize; anything worse is a
// hard error (same policy as the exact chain).
RealVector checked_probabilities(RealVector p) {
  const double min_entry = p.minCoeff();
  if (min_entry < kEntryFloor) {
    std::ostringstream msg;
    msg << "outcome probability " << min_entry << " below floor " << kEntryFloor;
    throw NumericalError(msg.str());
  }
  const double sum_dev = std::abs(p.sum() - 1.0);
  if (sum_dev > 1e-6) {
    std::ostringstream msg;
    msg << "outcome probabilities sum to 1 off by " << sum_dev;
    throw NumericalError(msg.str());
  }
  p = p.cwiseMax(0.0);
  return p / p.sum();
}

}  // namespace

TrajectoryConfig make_trajectory_config(RealGenerator generator, ThetaMatrix theta, double tau,
                                        int steps, BooleanState initial, std::uint64_t seed) {
  TrajectoryConfig cfg{std::move(generator), std::move(theta), tau, steps,
                       std::move(initial),   std::nullopt,     seed};
  check_config(cfg);
  return cfg;
}

TrajectoryConfig make_trajectory_config(RealGenerator generator, ThetaMatrix theta, double tau,
                                        int steps, const DensityOp& initial,
                                        const HermitianBasis& basis, std::uint64_t seed) {
  TrajectoryConfig cfg{std::move(generator),
                       std::move(theta),
                       tau,
                       steps,
                       std::nullopt,
                       to_coordinates(initial.matrix(), basis),
                       seed};
  check_config(cfg);
  return cfg;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over base ^ golden*(index+1); bijective in the mixed
  // word, hence injective in the index for fixed base.
  std::uint64_t z = base ^ (0x9E3779B97F4A7C15ULL * (index + 1));
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrajectoryRecord run_trajectory(const TrajectoryConfig& cfg) {
  check_config(cfg);
  const int dim = cfg.theta.dim();
  const RealMatrix exp_w_tau = matrix_exp(cfg.generator.w * cfg.tau);

  OutcomeSampler sampler(cfg.seed);
  TrajectoryRecord record;
  record.outcomes.reserve(cfg.steps + 1);

  int current;
  if (cfg.initial_state) {
    current = state_index(*cfg.initial_state);
  } else {
    const RealVector p0 =
        checked_probabilities(cfg.theta.theta.transpose() * (*cfg.initial_coordinates));
    current = sampler.sample(p0);
  }
  record.outcomes.push_back(state_from_index(current, cfg.theta.n));

  // One outcome distribution per post-measurement state; filled on first use.
  std::vector<std::optional<RealVector>> outcome_probs(dim);
  for (int step = 0; step < cfg.steps; ++step) {
    if (!outcome_probs[current]) {
      const RealVector propagated = exp_w_tau * cfg.theta.theta.col(current);
      outcome_probs[current] = checked_probabilities(cfg.theta.theta.transpose() * propagated);
    }
    current = sampler.sample(*outcome_probs[current]);
    record.outcomes.push_back(state_from_index(current, cfg.theta.n));
  }
  return record;
}

std::vector<TrajectoryRecord> batch_run(const TrajectoryConfig& cfg, int trajectories,
                                        std::uint64_t seed_stream_base, int threads) {
  check_config(cfg);
  if (trajectories < 1) throw ValidationError("at least one trajectory required");
  if (threads < 1) threads = 1;
  threads = std::min(threads, trajectories);

  std::vector<TrajectoryRecord> records(trajectories);
  auto worker = [&](int first, int stride) {
    for (int i = first; i < trajectories; i += stride) {
      TrajectoryConfig local = cfg;
      local.seed = derive_seed(seed_stream_base, static_cast<std::uint64_t>(i));
      records[i] = run_trajectory(local);
    }
  };
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& t : pool) t.join();
  }
  return records;
}

EmpiricalTransition empirical_transition(const std::vector<TrajectoryRecord>& records, int n) {
  if (records.empty()) throw ValidationError("no trajectory records");
  const int dim = 1 << n;
  EmpiricalTransition result;
  result.counts.setZero(dim, dim);
  for (const auto& record : records) {
    for (size_t t = 0; t + 1 < record.outcomes.size(); ++t) {
      if (record.outcomes[t].size() != n) {
        throw ValidationError("record state length does not match qubit count");
      }
      ++result.counts(state_index(record.outcomes[t]), state_index(record.outcomes[t + 1]));
    }
  }
  result.frequency.setZero(dim, dim);
  result.row_visits.assign(dim, 0);
  result.row_defined.assign(dim, false);
  for (int i = 0; i < dim; ++i) {
    const std::int64_t visits = result.counts.row(i).sum();
    result.row_visits[i] = visits;
    if (visits > 0) {
      result.row_defined[i] = true;
      result.frequency.row(i) =
          result.counts.row(i).cast<double>() / static_cast<double>(visits);
    }
  }
  return result;
}

}  // namespace qbnet
