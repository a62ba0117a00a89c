#include "qbnet/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qbnet {

InteractionGraph::InteractionGraph(int n, std::vector<WeightedEdge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n_ < 1 || n_ > kMaxQubits) {
    throw ValidationError("graph must have between 1 and " + std::to_string(kMaxQubits) +
                          " nodes, got " + std::to_string(n_));
  }
  std::vector<std::vector<bool>> seen(n_ + 1, std::vector<bool>(n_ + 1, false));
  for (auto& e : edges_) {
    if (e.j < 1 || e.j > n_ || e.k < 1 || e.k > n_) {
      throw ValidationError("edge endpoint out of range: " + std::to_string(e.j) + "-" +
                            std::to_string(e.k));
    }
    if (e.j == e.k) throw ValidationError("self-loop on node " + std::to_string(e.j));
    if (e.j > e.k) std::swap(e.j, e.k);
    if (seen[e.j][e.k]) {
      throw ValidationError("duplicate edge " + std::to_string(e.j) + "-" + std::to_string(e.k));
    }
    seen[e.j][e.k] = true;
    if (!(e.weight > 0.0)) {
      throw ValidationError("edge " + std::to_string(e.j) + "-" + std::to_string(e.k) +
                            " has non-positive weight");
    }
  }
}

std::vector<std::vector<int>> InteractionGraph::components() const {
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : edges_) parent[find(e.j - 1)] = find(e.k - 1);
  std::vector<std::vector<int>> groups(n_);
  for (int v = 0; v < n_; ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<int>> out;
  for (auto& g : groups) {
    if (!g.empty()) out.push_back(std::move(g));
  }
  return out;
}

bool InteractionGraph::connected() const { return components().size() == 1; }

RealMatrix InteractionGraph::laplacian() const {
  RealMatrix l = RealMatrix::Zero(n_, n_);
  for (const auto& e : edges_) {
    const int a = e.j - 1, b = e.k - 1;
    l(a, b) -= e.weight;
    l(b, a) -= e.weight;
    l(a, a) += e.weight;
    l(b, b) += e.weight;
  }
  return l;
}

ComplexMatrix swap_unitary(int j, int k, int n) {
  if (n < 1 || n > kMaxQubits || j < 1 || k < 1 || j > n || k > n || j >= k) {
    throw ValidationError("swap_unitary requires 1 <= j < k <= n");
  }
  const int dim = 1 << n;
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  const int bj = n - j, bk = n - k;  // bit positions, qubit 1 = MSB
  for (int s = 0; s < dim; ++s) {
    const int aj = (s >> bj) & 1, ak = (s >> bk) & 1;
    int t = s & ~((1 << bj) | (1 << bk));
    t |= (ak << bj) | (aj << bk);
    u(t, s) = 1.0;
  }
  return u;
}

ComplexMatrix permutation_unitary(const std::vector<int>& chi, int n) {
  if (static_cast<int>(chi.size()) != n) {
    throw ValidationError("permutation length does not match qubit count");
  }
  std::vector<bool> hit(n, false);
  for (int v : chi) {
    if (v < 0 || v >= n || hit[v]) throw ValidationError("not a permutation of 0..n-1");
    hit[v] = true;
  }
  const int dim = 1 << n;
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    int t = 0;
    for (int i = 0; i < n; ++i) {
      const int bit = (s >> (n - 1 - chi[i])) & 1;
      t |= bit << (n - 1 - i);
    }
    u(t, s) = 1.0;
  }
  return u;
}

QuantumLaplacian quantum_laplacian(const InteractionGraph& g) {
  const int n = g.node_count();
  const int dim = 1 << n;
  const int dim2 = dim * dim;
  RealMatrix lq = RealMatrix::Zero(dim2, dim2);
  for (const auto& e : g.edges()) {
    const RealMatrix u = swap_unitary(e.j, e.k, n).real();
    // U (x) U acts on vec(rho) (column stacking); U is a permutation, so
    // record where each basis column lands and fill entries directly.
    std::vector<int> image(dim, 0);
    for (int c = 0; c < dim; ++c) {
      for (int r = 0; r < dim; ++r) {
        if (u(r, c) != 0.0) image[c] = r;
      }
    }
    for (int c1 = 0; c1 < dim; ++c1) {
      for (int c2 = 0; c2 < dim; ++c2) {
        lq(image[c1] * dim + image[c2], c1 * dim + c2) -= e.weight;
      }
    }
    lq.diagonal().array() += e.weight;
  }

  if ((lq - lq.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw NumericalError("quantum Laplacian is not symmetric");
  }
  // vec(I) must be in the kernel (trace/identity preservation).
  RealVector vec_id = RealVector::Zero(dim2);
  for (int i = 0; i < dim; ++i) vec_id(i * dim + i) = 1.0;
  if ((lq * vec_id).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw NumericalError("quantum Laplacian does not annihilate vec(I)");
  }
  return QuantumLaplacian{n, std::move(lq)};
}

TransitionMatrix consensus_transition(const InteractionGraph& g, double tau) {
  if (tau < 0.0) throw ValidationError("measurement period tau must be nonnegative");
  const QuantumLaplacian lap = quantum_laplacian(g);
  const int dim = 1 << g.node_count();
  const RealMatrix kernel = matrix_exp_symmetric(-tau * lap.lq);
  RealMatrix raw(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) raw(i, j) = kernel(i * dim + i, j * dim + j);
  }
  return validated_transition(g.node_count(), tau, std::move(raw));
}

LindbladModel consensus_as_lindblad(const InteractionGraph& g) {
  const int dim = 1 << g.node_count();
  std::vector<ComplexMatrix> dissipators;
  dissipators.reserve(g.edges().size());
  for (const auto& e : g.edges()) {
    dissipators.push_back(std::sqrt(e.weight) * swap_unitary(e.j, e.k, g.node_count()));
  }
  return LindbladModel(ComplexMatrix::Zero(dim, dim), std::move(dissipators));
}

ClassPrediction predicted_classes(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw ValidationError("qubit count out of range: " + std::to_string(n));
  }
  ClassPrediction prediction;
  prediction.n = n;
  prediction.classes.assign(n + 1, {});
  for (int i = 0; i < (1 << n); ++i) {
    int w = 0;
    for (int b = 0; b < n; ++b) w += (i >> b) & 1;
    prediction.classes[w].push_back(i);
  }
  for (const auto& cls : prediction.classes) {
    prediction.sizes.push_back(static_cast<long long>(cls.size()));
  }
  return prediction;
}

DensityOp projection_consensus(const DensityOp& rho, int n) {
  if (n < 1 || n > kMaxQubits) {
    throw ValidationError("qubit count out of range: " + std::to_string(n));
  }
  if (rho.dim() != (1 << n)) {
    throw ValidationError("density dimension does not match qubit count");
  }
  std::vector<int> chi(n);
  std::iota(chi.begin(), chi.end(), 0);
  ComplexMatrix acc = ComplexMatrix::Zero(rho.dim(), rho.dim());
  long count = 0;
  do {
    const ComplexMatrix u = permutation_unitary(chi, n);
    acc += u * rho.matrix() * u.adjoint();
    ++count;
  } while (std::next_permutation(chi.begin(), chi.end()));
  acc /= static_cast<double>(count);
  return validate_density(acc);
}

HeatKernelReport classical_heat_kernel_positive(const InteractionGraph& g, double tau) {
  if (!(tau > 0.0)) throw ValidationError("heat-kernel time must be positive");
  const int n = g.node_count();
  const RealMatrix l = g.laplacian();

  // Uniformization: e^{-tau L} = e^{-tau c} e^{tau (cI - L)} with cI - L
  // entrywise nonnegative, so every term of the series is nonnegative and no
  // cancellation can fake a zero or negative entry. Scale so tau0 * c <= 1,
  // then square back up; squaring keeps nonnegativity and exact zero blocks.
  const double c = std::max(l.diagonal().maxCoeff(), 0.0);
  int squarings = 0;
  double t0 = tau;
  while (t0 * c > 1.0) {
    t0 /= 2.0;
    ++squarings;
  }
  const RealMatrix m = RealMatrix::Identity(n, n) * c - l;
  RealMatrix kernel = RealMatrix::Identity(n, n);
  RealMatrix term = RealMatrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * m) * (t0 / k);
    kernel += term;
    if (term.maxCoeff() < 1e-18) break;
  }
  kernel *= std::exp(-t0 * c);
  for (int s = 0; s < squarings; ++s) kernel = kernel * kernel;

  HeatKernelReport report;
  report.min_entry = kernel.minCoeff();
  report.kernel = std::move(kernel);
  report.connected = g.connected();
  report.components = g.components();
  if (report.connected && !(report.min_entry > 0.0)) {
    std::ostringstream msg;
    msg << "heat kernel of a connected graph has min entry " << report.min_entry;
    throw NumericalError(msg.str());
  }
  return report;
}

double invariant_subspace_residual(const BooleanState& g, const InteractionGraph& graph,
                                   const std::vector<double>& s_grid) {
  if (g.size() != graph.node_count()) {
    throw ValidationError("state length does not match graph node count");
  }
  const int n = graph.node_count();
  const int dim = 1 << n;
  const QuantumLaplacian lap = quantum_laplacian(graph);

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(lap.lq);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on L_q");

  RealVector vec0 = RealVector::Zero(dim * dim);
  vec0(state_index(g) * dim + state_index(g)) = 1.0;
  const RealVector modes = solver.eigenvectors().transpose() * vec0;

  // The permuted-projector span is the coordinate subspace of the diagonal
  // slots within the Hamming-weight class of g.
  std::vector<int> span_slots;
  for (int i = 0; i < dim; ++i) {
    if (state_from_index(i, n).hamming_weight() == g.hamming_weight()) {
      span_slots.push_back(i * dim + i);
    }
  }

  double worst = 0.0;
  for (double s : s_grid) {
    if (s < 0.0) throw ValidationError("evolution times must be nonnegative");
    const RealVector coeff =
        (-s * solver.eigenvalues().array()).exp().matrix().cwiseProduct(modes);
    RealVector off_span = solver.eigenvectors() * coeff;
    for (int slot : span_slots) off_span(slot) = 0.0;
    worst = std::max(worst, off_span.norm());
  }
  return worst;
}

}  // namespace qbnet
