#pragma once

#include <vector>

#include "qbnet/chain.hpp"

namespace qbnet {

/// Undirected weighted edge between qubits j < k (1-based).
struct WeightedEdge {
  int j = 0;
  int k = 0;
  double weight = 1.0;
};

/// Undirected weighted interaction graph over n qubits; no self-loops,
/// strictly positive weights.
class InteractionGraph {
 public:
  InteractionGraph(int n, std::vector<WeightedEdge> edges);

  int node_count() const { return n_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }
  bool connected() const;
  std::vector<std::vector<int>> components() const;  // 0-based node sets

  // Classical weighted Laplacian L(G) = D(G) - A(G), n x n.
  RealMatrix laplacian() const;

 private:
  int n_;
  std::vector<WeightedEdge> edges_;
};

// N x N permutation matrix swapping qubits j and k (1 <= j < k <= n);
// symmetric involution.
ComplexMatrix swap_unitary(int j, int k, int n);

// Permutation matrix of an arbitrary qubit relabeling chi (0-based:
// output bit i = input bit chi[i]).
ComplexMatrix permutation_unitary(const std::vector<int>& chi, int n);

/// L_q(G) = -sum_{jk in E} alpha_jk (U_jk (x) U_jk - I); symmetric PSD,
/// N^2 x N^2, kernel contains vec(I).
struct QuantumLaplacian {
  int n = 0;
  RealMatrix lq;
};

QuantumLaplacian quantum_laplacian(const InteractionGraph& g);

// Swap-network transition matrix P_tau = E_N^T e^{-tau L_q(G)} E_N through the
// symmetric eigendecomposition path; symmetric and doubly stochastic, and
// independent of the single-qubit measurement basis.
TransitionMatrix consensus_transition(const InteractionGraph& g, double tau);

// The same dynamics as a Lindblad model: H = 0, one dissipator
// sqrt(alpha_jk) U_jk per edge. Feeding this through build_generator and
// transition_matrix reproduces consensus_transition.
LindbladModel consensus_as_lindblad(const InteractionGraph& g);

/// Hamming-weight partition of {0,1}^n: n+1 classes, class w holding the
/// C(n, w) states of weight w.
struct ClassPrediction {
  int n = 0;
  std::vector<std::vector<int>> classes;  // 0-based state indices, sorted
  std::vector<long long> sizes;
};

ClassPrediction predicted_classes(int n);

// Projection onto the permutation-symmetric states:
// (1/n!) sum_chi U_chi rho U_chi^dag.
DensityOp projection_consensus(const DensityOp& rho, int n);

struct HeatKernelReport {
  RealMatrix kernel;  // e^{-tau L(G)}
  double min_entry = 0.0;
  bool connected = false;
  std::vector<std::vector<int>> components;
};

// Classical heat kernel e^{-tau L(G)} evaluated by a nonnegative
// (uniformization) series, so connected graphs yield strictly positive
// entries and disconnected ones keep exact zero off-blocks.
HeatKernelReport classical_heat_kernel_positive(const InteractionGraph& g, double tau);

// Evolves |g><g| along the swap network to each s in the grid and returns the
// largest Frobenius distance from the span of the permuted projectors
// {|chi(g)><chi(g)|}.
double invariant_subspace_residual(const BooleanState& g, const InteractionGraph& graph,
                                   const std::vector<double>& s_grid);

}  // namespace qbnet
