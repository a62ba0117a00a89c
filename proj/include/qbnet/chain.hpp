#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qbnet/measurement.hpp"

namespace qbnet {

/// Row-stochastic transition matrix of the induced Boolean outcome chain:
/// p(i, j) is the probability of outcome j at the next measurement given
/// outcome i at the current one.
struct TransitionMatrix {
  int n = 0;
  double tau = 0.0;
  RealMatrix p;  // N x N

  int dim() const { return 1 << n; }
};

// Clamp/renormalize policy shared by every transition-matrix producer:
// entries below kEntryFloor or row sums off by more than kRowSumTol are hard
// errors; negative dust is clamped to zero and rows renormalized.
TransitionMatrix validated_transition(int n, double tau, RealMatrix raw);

// Exact one-step transition matrix for measurement period tau:
// [P]_ij = theta_j^T e^{W tau} theta_i. Negative dust down to kEntryFloor is
// clamped and rows renormalized; row-sum deviations beyond kRowSumTol are
// hard errors.
TransitionMatrix transition_matrix(const RealGenerator& gen, const ThetaMatrix& theta,
                                   double tau);

// tau -> infinity limit for relaxing dynamics: every row equals
// (Theta^T theta_star)^T. Throws ValidationError("NotRelaxing...") otherwise.
TransitionMatrix limit_transition(const RealGenerator& gen, const ThetaMatrix& theta);

/// Communication-class decomposition of the support digraph (edge i->j iff
/// p(i,j) > epsilon).
struct MarkovStructure {
  std::vector<std::vector<int>> classes;  // sorted states, classes ordered by least member
  std::vector<int> class_of;              // state -> class id
  std::vector<std::pair<int, int>> class_dag;  // condensation edges (from, to)
  std::vector<bool> class_closed;              // no edges leaving the class
  std::vector<int> absorbing;                  // absorbing states
  std::vector<int> periods;                    // per class, >= 1
  bool irreducible = false;
  bool aperiodic = false;
  double epsilon = 0.0;
  int fragile_entries = 0;  // entries inside [epsilon/10, 10 epsilon]
};

// Default positivity threshold: 1e-10 times the largest entry of P.
MarkovStructure markov_structure(const TransitionMatrix& p);
MarkovStructure markov_structure(const TransitionMatrix& p, double epsilon);

/// Probability vector over chain states.
struct Distribution {
  RealVector pi;
  explicit Distribution(RealVector v);
};

// Unique fixed point pi P = pi for an irreducible aperiodic chain, by power
// iteration (L1 tolerance 1e-12, cap 1e6 iterations) cross-checked against an
// eigensolve. Throws ValidationError("NotErgodic...") when the structure
// precondition fails and NumericalError("NoConvergence...") at the cap.
Distribution stationary_distribution(const TransitionMatrix& p);

// sum_i pi_i M_[i]: the long-run expected post-measurement state.
DensityOp expected_post_measurement(const Distribution& pi,
                                    const std::vector<ComplexMatrix>& projectors);

struct TauScanPoint {
  double tau = 0.0;
  TransitionMatrix transition;
  MarkovStructure structure;
};

struct TauScanResult {
  std::vector<TauScanPoint> points;
  std::optional<double> first_unique_absorbing_tau;
  std::optional<double> first_ergodic_tau;
};

// Per-tau transition + structure over a sorted positive grid, reporting the
// smallest grid tau reaching either large-tau regime (a unique absorbing
// state, or irreducibility + aperiodicity).
TauScanResult tau_scan(const RealGenerator& gen, const ThetaMatrix& theta,
                       const std::vector<double>& tau_grid);

}  // namespace qbnet
