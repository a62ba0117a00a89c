// Acceptance suite: end-to-end checks of the induced-chain pipeline at fixed
// tolerances. Each criterion prints one pass/fail line; the process exits
// nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qbnet/commands.hpp"
#include "qbnet/consensus.hpp"
#include "qbnet/io.hpp"
#include "qbnet/simulate.hpp"

#include "../unit/test_helpers.hpp"

using namespace qbnet;
using namespace qbnet::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "    violated: " << what << "\n";
    }
  }
  void note(const std::string& line) { detail << "    " << line << "\n"; }
};

int g_failures = 0;

void criterion(int id, const std::string& name, double time_limit_s,
               const std::function<void(Outcome&)>& body) {
  Outcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(outcome);
  } catch (const std::exception& err) {
    outcome.pass = false;
    outcome.detail << "    exception: " << err.what() << "\n";
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds >= time_limit_s) {
    outcome.pass = false;
    outcome.detail << "    runtime " << seconds << " s exceeded the " << time_limit_s
                   << " s budget\n";
  }
  if (!outcome.pass) ++g_failures;
  std::cout << (outcome.pass ? "PASS" : "FAIL") << "  [" << std::setw(2) << id << "] " << name
            << "  (" << std::fixed << std::setprecision(2) << seconds << " s)\n"
            << std::defaultfloat << std::setprecision(6) << outcome.detail.str();
}

LindbladModel per_qubit_amplitude_damping(int n, double gamma) {
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = std::sqrt(gamma);
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  std::vector<ComplexMatrix> vs;
  for (int q = 0; q < n; ++q) {
    ComplexMatrix acc = ComplexMatrix::Identity(1, 1);
    for (int p = 0; p < n; ++p) acc = tensor_product(acc, p == q ? lower : i2);
    vs.push_back(acc);
  }
  return LindbladModel(ComplexMatrix::Zero(1 << n, 1 << n), std::move(vs));
}

LindbladModel per_qubit_depolarizing(int n, double gamma) {
  ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  std::vector<ComplexMatrix> vs;
  for (int q = 0; q < n; ++q) {
    for (const auto& pauli : {x, y, z}) {
      ComplexMatrix acc = ComplexMatrix::Identity(1, 1);
      for (int p = 0; p < n; ++p) acc = tensor_product(acc, p == q ? pauli : i2);
      vs.push_back(std::sqrt(gamma / 4.0) * acc);
    }
  }
  return LindbladModel(ComplexMatrix::Zero(1 << n, 1 << n), std::move(vs));
}

ThetaMatrix theta_for(const HermitianBasis& basis, int n, double th, double ph) {
  return theta_matrix(network_projectors(qubit_basis_from_angles(th, ph), n), basis);
}

const InteractionGraph kPath3(3, {{1, 2, 1.0}, {2, 3, 1.0}});

// The worked example printed to three decimals.
const double kPrinted[8][8] = {
    {1, 0, 0, 0, 0, 0, 0, 0},         {0, 0.525, 0.317, 0, 0.158, 0, 0, 0},
    {0, 0.317, 0.366, 0, 0.317, 0, 0, 0}, {0, 0, 0, 0.525, 0, 0.317, 0.158, 0},
    {0, 0.158, 0.317, 0, 0.525, 0, 0, 0}, {0, 0, 0, 0.317, 0, 0.366, 0.317, 0},
    {0, 0, 0, 0.158, 0, 0.317, 0.525, 0}, {0, 0, 0, 0, 0, 0, 0, 1}};

// Exact entries from the spectral form of the 3-node path heat kernel
// (eigenvalues 0, 1, 3): within each Hamming class the chain is that kernel.
RealMatrix worked_example_exact() {
  const double e1 = std::exp(-1.0), e3 = std::exp(-3.0);
  const double end_diag = 1.0 / 3.0 + e1 / 2.0 + e3 / 6.0;
  const double end_mid = 1.0 / 3.0 - e3 / 3.0;
  const double mid_diag = 1.0 / 3.0 + 2.0 * e3 / 3.0;
  const double end_far = 1.0 / 3.0 - e1 / 2.0 + e3 / 6.0;
  RealMatrix p = RealMatrix::Zero(8, 8);
  p(0, 0) = p(7, 7) = 1.0;
  // weight-1 orbit path: 001 - 010 - 100 (indices 1, 2, 4)
  const int w1[3] = {1, 2, 4};
  // weight-2 orbit path: 011 - 101 - 110 (indices 3, 5, 6)
  const int w2[3] = {3, 5, 6};
  for (const auto* orbit : {w1, w2}) {
    p(orbit[0], orbit[0]) = p(orbit[2], orbit[2]) = end_diag;
    p(orbit[1], orbit[1]) = mid_diag;
    p(orbit[0], orbit[1]) = p(orbit[1], orbit[0]) = end_mid;
    p(orbit[1], orbit[2]) = p(orbit[2], orbit[1]) = end_mid;
    p(orbit[0], orbit[2]) = p(orbit[2], orbit[0]) = end_far;
  }
  return p;
}

}  // namespace

int main() {
  std::cout << "acceptance suite\n================\n";

  criterion(1, "worked-example transition matrix reproduction", 1.0, [](Outcome& o) {
    const TransitionMatrix p = consensus_transition(kPath3, 1.0);
    double dev_printed = 0.0;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) dev_printed = std::max(dev_printed, std::abs(p.p(i, j) - kPrinted[i][j]));
    }
    const double dev_exact = (p.p - worked_example_exact()).cwiseAbs().maxCoeff();
    o.note("max |P - printed reference| = " + std::to_string(dev_printed) +
           " (gate 1e-3, one ulp of the 3-decimal print; the print truncates the");
    o.note("diagonal entries, so 5.7e-4 is the best any correct pipeline can do and the");
    o.note("nominal half-ulp gate of 5e-4 is unattainable against the printed values)");
    o.note("max |P - exact spectral oracle|  = " + std::to_string(dev_exact) + " (gate 1e-9)");
    o.require(dev_printed <= 1e-3, "printed-reference agreement within one print ulp");
    o.require(dev_exact <= 1e-9, "exact closed-form agreement within 1e-9");
  });

  criterion(2, "worked-example communication structure", 1.0, [](Outcome& o) {
    const MarkovStructure s = markov_structure(consensus_transition(kPath3, 1.0));
    const std::vector<std::vector<int>> want = {{0}, {1, 2, 4}, {3, 5, 6}, {7}};
    o.require(s.classes == want, "classes {000} {001,010,100} {011,101,110} {111}");
    o.require(s.absorbing == std::vector<int>{0, 7}, "absorbing states {000, 111}");
  });

  criterion(3, "weight-partition sweep over random connected networks", 120.0, [](Outcome& o) {
    std::mt19937_64 rng(2024);
    for (int n = 2; n <= 4; ++n) {
      const ClassPrediction predicted = predicted_classes(n);
      std::vector<std::vector<int>> want = predicted.classes;
      std::sort(want.begin(), want.end());
      for (int rep = 0; rep < 20; ++rep) {
        const InteractionGraph g = random_connected_graph(n, rng);
        for (double tau : {0.1, 1.0, 10.0}) {
          const MarkovStructure s = markov_structure(consensus_transition(g, tau));
          std::vector<std::vector<int>> detected = s.classes;
          std::sort(detected.begin(), detected.end());
          if (detected != want) {
            o.require(false, "class partition at n=" + std::to_string(n) +
                                 " rep=" + std::to_string(rep) + " tau=" + std::to_string(tau));
            return;
          }
          o.require(static_cast<int>(s.classes.size()) == n + 1, "class count n+1");
        }
      }
      std::vector<long long> binomials;
      long long c = 1;
      for (int k = 0; k <= n; ++k) {
        binomials.push_back(c);
        c = c * (n - k) / (k + 1);
      }
      o.require(predicted.sizes == binomials, "binomial class sizes at n=" + std::to_string(n));
    }
    o.note("60 graphs x 3 periods: all partitions exact");
  });

  criterion(4, "Laplacian route vs realified route (and basis independence)", 30.0,
            [](Outcome& o) {
    std::vector<InteractionGraph> graphs;
    graphs.emplace_back(1, std::vector<WeightedEdge>{});
    graphs.emplace_back(2, std::vector<WeightedEdge>{{1, 2, 1.3}});
    graphs.emplace_back(3, std::vector<WeightedEdge>{{1, 2, 1.0}, {2, 3, 0.8}});
    graphs.emplace_back(3, std::vector<WeightedEdge>{{1, 2, 0.6}, {2, 3, 1.1}, {1, 3, 1.7}});
    double worst = 0.0;
    for (const auto& g : graphs) {
      const int n = g.node_count();
      const HermitianBasis basis = gell_mann_basis(1 << n);
      const RealGenerator gen = build_generator(consensus_as_lindblad(g), basis);
      for (double tau : {0.3, 1.0, 3.0}) {
        const TransitionMatrix reference = consensus_transition(g, tau);
        for (const auto& [th, ph] : std::vector<std::pair<double, double>>{
                 {0.0, 0.0}, {0.7, 1.1}, {M_PI / 3, M_PI / 5}}) {
          const TransitionMatrix p = transition_matrix(gen, theta_for(basis, n, th, ph), tau);
          worst = std::max(worst, (p.p - reference.p).cwiseAbs().maxCoeff());
        }
      }
    }
    o.note("max deviation over 4 graphs x 3 periods x 3 bases = " + format_double(worst));
    o.require(worst <= 1e-9, "dual-pipeline agreement within 1e-9");
  });

  criterion(5, "realified propagation vs direct Liouvillian exponentiation", 60.0,
            [](Outcome& o) {
    std::mt19937_64 rng(77);
    double worst = 0.0;
    for (int rep = 0; rep < 25; ++rep) {
      const int dim = (rep % 2 == 0) ? 2 : 4;
      const HermitianBasis basis = gell_mann_basis(dim);
      const LindbladModel model = random_model(dim, rng, 1 + rep % 2);
      const RealGenerator gen = build_generator(model, basis);
      const ComplexMatrix rho0 = random_density(dim, rng);
      const double tau = 0.7;
      const ComplexMatrix via_coords =
          from_coordinates(propagate(gen, to_coordinates(rho0, basis), tau), basis);
      const ComplexMatrix l = liouvillian(model.hamiltonian, model.dissipators);
      const ComplexMatrix direct =
          unvec(expm_taylor<ComplexMatrix>(l * tau) * vec(rho0), dim);
      worst = std::max(worst, (via_coords - direct).cwiseAbs().maxCoeff());
    }
    o.note("max deviation over 25 random models = " + format_double(worst));
    o.require(worst <= 1e-9, "coordinate route within 1e-9 of the direct route");
  });

  criterion(6, "large-period regimes: unique absorbing state vs ergodicity", 30.0,
            [](Outcome& o) {
    const LindbladModel damping = per_qubit_amplitude_damping(2, 1.0);
    const HermitianBasis basis = gell_mann_basis(4);
    const RealGenerator gen = build_generator(damping, basis);
    const std::vector<double> grid = {0.5, 1.0, 2.0, 4.0, 8.0};

    const TauScanResult computational = tau_scan(gen, theta_for(basis, 2, 0.0, 0.0), grid);
    o.require(computational.first_unique_absorbing_tau.has_value(),
              "absorbing regime reached on the grid");
    const MarkovStructure& last = computational.points.back().structure;
    o.require(last.absorbing == std::vector<int>{0}, "unique absorbing state is 00");
    if (computational.first_unique_absorbing_tau) {
      o.note("unique absorbing state from tau = " +
             format_double(*computational.first_unique_absorbing_tau));
    }

    const TauScanResult rotated = tau_scan(gen, theta_for(basis, 2, M_PI / 3, 0.0), grid);
    o.require(rotated.first_ergodic_tau.has_value(), "ergodic regime reached on the grid");
    o.require(rotated.points.back().structure.irreducible &&
                  rotated.points.back().structure.aperiodic,
              "irreducible + aperiodic at the largest grid period");
    if (rotated.first_ergodic_tau) {
      o.note("ergodic from tau = " + format_double(*rotated.first_ergodic_tau));
    }
  });

  criterion(7, "rank-one limit of relaxing presets", 10.0, [](Outcome& o) {
    double worst = 0.0;
    for (int n : {1, 2}) {
      for (int preset = 0; preset < 2; ++preset) {
        const LindbladModel model =
            preset == 0 ? per_qubit_amplitude_damping(n, 1.0) : per_qubit_depolarizing(n, 1.0);
        const HermitianBasis basis = gell_mann_basis(1 << n);
        const RealGenerator gen = build_generator(model, basis);
        const SteadyStateReport report = steady_state(gen);
        if (!report.is_relaxing) {
          o.require(false, "preset must be relaxing");
          return;
        }
        const ThetaMatrix theta = theta_for(basis, n, 0.0, 0.0);
        const double tau = 50.0 / std::abs(report.spectral_abscissa_nonzero_modes);
        const TransitionMatrix at_tau = transition_matrix(gen, theta, tau);
        const TransitionMatrix limit = limit_transition(gen, theta);
        worst = std::max(worst, (at_tau.p - limit.p).cwiseAbs().maxCoeff());
      }
    }
    o.note("max |P_tau - limit| over 4 presets = " + format_double(worst));
    o.require(worst <= 1e-6, "limit reached within 1e-6 at tau = 50/|abscissa|");
  });

  criterion(8, "stationary law matches the long-run outcome histogram", 60.0, [](Outcome& o) {
    const LindbladModel model = per_qubit_amplitude_damping(2, 1.0);
    const HermitianBasis basis = gell_mann_basis(4);
    const RealGenerator gen = build_generator(model, basis);
    const ThetaMatrix theta = theta_for(basis, 2, M_PI / 3, 0.0);
    const double tau = 2.0;
    const TransitionMatrix p = transition_matrix(gen, theta, tau);

    const Distribution pi = stationary_distribution(p);
    const double balance = (p.p.transpose() * pi.pi - pi.pi).cwiseAbs().sum();
    o.note("||pi P - pi||_1 = " + format_double(balance));
    o.require(balance <= 1e-10, "fixed-point residual within 1e-10");

    const auto projectors = network_projectors(qubit_basis_from_angles(M_PI / 3, 0.0), 2);
    const DensityOp expected = expected_post_measurement(pi, projectors);
    o.require(expected.dim() == 4, "expected post-measurement state is a valid density");

    const int steps = 100000;
    const TrajectoryConfig cfg = make_trajectory_config(
        gen, theta, tau, steps, BooleanState::from_string("00"), 20240809);
    const TrajectoryRecord record = run_trajectory(cfg);
    RealVector hist = RealVector::Zero(4);
    for (size_t t = 1; t < record.outcomes.size(); ++t) {
      hist(state_index(record.outcomes[t])) += 1.0;
    }
    hist /= static_cast<double>(steps);
    const double tv = 0.5 * (hist - pi.pi).cwiseAbs().sum();
    o.note("total variation(histogram, pi) = " + format_double(tv));
    o.require(tv <= 0.01, "long-run histogram within 0.01 total variation");
  });

  criterion(9, "invariant-subspace and heat-kernel-positivity property suites", 60.0,
            [](Outcome& o) {
    std::mt19937_64 rng(4242);
    double worst_residual = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 2 + rep % 2;
      const InteractionGraph g = random_connected_graph(n, rng);
      for (int i = 0; i < (1 << n); ++i) {
        worst_residual = std::max(
            worst_residual,
            invariant_subspace_residual(state_from_index(i, n), g, {0.5, 1.0, 5.0}));
      }
    }
    o.note("max orbit-span residual over 10 graphs x all states = " +
           format_double(worst_residual));
    o.require(worst_residual <= 1e-8, "invariant-subspace residual within 1e-8");

    double min_entry = 1.0;
    for (int rep = 0; rep < 20; ++rep) {
      const int n = 3 + rep % 4;
      const InteractionGraph g = random_connected_graph(n, rng);
      for (double tau : {0.01, 1.0, 100.0}) {
        min_entry = std::min(min_entry, classical_heat_kernel_positive(g, tau).min_entry);
      }
    }
    o.note("smallest heat-kernel entry over 20 graphs x 3 times = " + format_double(min_entry));
    o.require(min_entry > 0.0, "classical heat kernel strictly positive on connected graphs");
  });

  criterion(10, "Monte-Carlo frequencies converge to the exact chain", 60.0, [](Outcome& o) {
    const TransitionMatrix p = consensus_transition(kPath3, 1.0);
    const HermitianBasis basis = gell_mann_basis(8);
    const RealGenerator gen = build_generator(consensus_as_lindblad(kPath3), basis);
    const ThetaMatrix theta = theta_for(basis, 3, 0.0, 0.0);

    const int steps = 45000;
    std::vector<TrajectoryRecord> records;
    for (int start = 0; start < 8; ++start) {
      const TrajectoryConfig cfg = make_trajectory_config(
          gen, theta, 1.0, steps, state_from_index(start, 3),
          derive_seed(555, static_cast<std::uint64_t>(start)));
      records.push_back(run_trajectory(cfg));
    }
    const EmpiricalTransition empirical = empirical_transition(records, 3);

    std::int64_t min_visits = std::numeric_limits<std::int64_t>::max();
    for (int i = 0; i < 8; ++i) min_visits = std::min(min_visits, empirical.row_visits[i]);
    o.note("minimum row visits = " + std::to_string(min_visits) + " (need 1e4)");
    o.require(min_visits >= 10000, "at least 1e4 visits per state");

    double worst_sigma = 0.0, worst_abs = 0.0;
    bool zeros_exact = true;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        const double prob = p.p(i, j);
        const double freq = empirical.frequency(i, j);
        if (prob == 0.0) {
          zeros_exact &= freq == 0.0;
          continue;
        }
        const double se =
            std::sqrt(prob * (1.0 - prob) / static_cast<double>(empirical.row_visits[i]));
        if (se > 0.0) worst_sigma = std::max(worst_sigma, std::abs(freq - prob) / se);
        worst_abs = std::max(worst_abs, std::abs(freq - prob));
      }
    }
    o.note("worst z-score = " + format_double(worst_sigma) +
           ", worst absolute deviation = " + format_double(worst_abs));
    o.require(zeros_exact, "structurally impossible transitions never observed");
    o.require(worst_sigma <= 3.0, "every entry within 3 binomial standard errors");
    o.require(worst_abs <= 0.02, "every entry within 0.02 absolute");
  });

  std::cout << "================\n"
            << (g_failures == 0 ? "all criteria passed\n"
                                : std::to_string(g_failures) + " criteria failed\n");
  return g_failures == 0 ? 0 : 1;
}
