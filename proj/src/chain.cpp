#include "qbnet/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace qbnet {

TransitionMatrix validated_transition(int n, double tau, RealMatrix raw) {
  const int dim = raw.rows();
  double min_entry = raw.minCoeff();
  if (min_entry < kEntryFloor) {
    std::ostringstream msg;
    msg << "transition entry " << min_entry << " below floor " << kEntryFloor
        << " (generator/basis bug, not numerical wobble)";
    throw NumericalError(msg.str());
  }
  for (int i = 0; i < dim; ++i) {
    const double row_dev = std::abs(raw.row(i).sum() - 1.0);
    if (row_dev > kRowSumTol) {
      std::ostringstream msg;
      msg << "row " << i << " sums to 1 " << (raw.row(i).sum() > 1 ? "+" : "-") << " "
          << row_dev << ", beyond " << kRowSumTol;
      throw NumericalError(msg.str());
    }
  }
  raw = raw.cwiseMax(0.0);
  for (int i = 0; i < dim; ++i) raw.row(i) /= raw.row(i).sum();
  return TransitionMatrix{n, tau, std::move(raw)};
}

TransitionMatrix transition_matrix(const RealGenerator& gen, const ThetaMatrix& theta,
                                   double tau) {
  if (tau < 0.0) throw ValidationError("measurement period tau must be nonnegative");
  if (gen.w.rows() != theta.theta.rows()) {
    throw ValidationError("generator and measurement dimensions differ");
  }
  // P(i -> j) = theta_j^T e^{W tau} theta_i, i.e. the transpose of
  // Theta^T e^{W tau} Theta.
  const RealMatrix propagated = matrix_exp(gen.w * tau) * theta.theta;
  RealMatrix raw = (theta.theta.transpose() * propagated).transpose();
  return validated_transition(theta.n, tau, std::move(raw));
}

TransitionMatrix limit_transition(const RealGenerator& gen, const ThetaMatrix& theta) {
  if (gen.w.rows() != theta.theta.rows()) {
    throw ValidationError("generator and measurement dimensions differ");
  }
  const SteadyStateReport report = steady_state(gen);
  if (!report.is_relaxing || !report.steady_coordinate) {
    std::ostringstream msg;
    msg << "NotRelaxing: kernel dimension " << report.kernel_dimension
        << ", nonzero-mode abscissa " << report.spectral_abscissa_nonzero_modes;
    throw ValidationError(msg.str());
  }
  const RealVector row = theta.theta.transpose() * (*report.steady_coordinate);
  RealMatrix raw(theta.dim(), theta.dim());
  for (int i = 0; i < theta.dim(); ++i) raw.row(i) = row.transpose();
  return validated_transition(theta.n, std::numeric_limits<double>::infinity(), std::move(raw));
}

MarkovStructure markov_structure(const TransitionMatrix& p) {
  return markov_structure(p, 1e-10 * p.p.maxCoeff());
}

namespace {

// Tarjan over the support digraph; N <= 64 so recursion depth is no concern.
class SccFinder {
 public:
  explicit SccFinder(const std::vector<std::vector<int>>& adj)
      : adj_(adj),
        index_(adj.size(), -1),
        lowlink_(adj.size(), 0),
        on_stack_(adj.size(), false) {
    for (size_t v = 0; v < adj.size(); ++v) {
      if (index_[v] < 0) visit(static_cast<int>(v));
    }
  }

  std::vector<std::vector<int>> take() { return std::move(components_); }

 private:
  void visit(int v) {
    index_[v] = lowlink_[v] = counter_++;
    stack_.push_back(v);
    on_stack_[v] = true;
    for (int w : adj_[v]) {
      if (index_[w] < 0) {
        visit(w);
        lowlink_[v] = std::min(lowlink_[v], lowlink_[w]);
      } else if (on_stack_[w]) {
        lowlink_[v] = std::min(lowlink_[v], index_[w]);
      }
    }
    if (lowlink_[v] == index_[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack_.back();
        stack_.pop_back();
        on_stack_[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      components_.push_back(std::move(comp));
    }
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<int> index_, lowlink_;
  std::vector<bool> on_stack_;
  std::vector<int> stack_;
  std::vector<std::vector<int>> components_;
  int counter_ = 0;
};

// Period of one SCC: gcd of (level(u) + 1 - level(v)) over internal edges,
// from a BFS rooted at the least member. 1 for classes without cycles.
int class_period(const std::vector<int>& members, const std::vector<std::vector<int>>& adj,
                 const std::vector<int>& class_of, int cls) {
  std::vector<int> level(adj.size(), -1);
  std::queue<int> queue;
  level[members.front()] = 0;
  queue.push(members.front());
  int g = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (int v : adj[u]) {
      if (class_of[v] != cls) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push(v);
      }
      g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
    }
  }
  return g == 0 ? 1 : g;
}

}  // namespace

MarkovStructure markov_structure(const TransitionMatrix& p, double epsilon) {
  if (epsilon <= 0.0) throw ValidationError("positivity threshold must be positive");
  const int dim = static_cast<int>(p.p.rows());

  MarkovStructure s;
  s.epsilon = epsilon;
  std::vector<std::vector<int>> adj(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double v = p.p(i, j);
      if (v > epsilon) adj[i].push_back(j);
      if (v >= epsilon / 10.0 && v <= 10.0 * epsilon) ++s.fragile_entries;
    }
  }

  std::vector<std::vector<int>> classes = SccFinder(adj).take();
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  s.classes = std::move(classes);
  s.class_of.assign(dim, -1);
  for (size_t c = 0; c < s.classes.size(); ++c) {
    for (int v : s.classes[c]) s.class_of[v] = static_cast<int>(c);
  }

  std::vector<std::vector<bool>> dag_seen(s.classes.size(),
                                          std::vector<bool>(s.classes.size(), false));
  s.class_closed.assign(s.classes.size(), true);
  for (int u = 0; u < dim; ++u) {
    for (int v : adj[u]) {
      const int cu = s.class_of[u];
      const int cv = s.class_of[v];
      if (cu == cv) continue;
      s.class_closed[cu] = false;
      if (!dag_seen[cu][cv]) {
        dag_seen[cu][cv] = true;
        s.class_dag.emplace_back(cu, cv);
      }
    }
  }
  std::sort(s.class_dag.begin(), s.class_dag.end());

  for (size_t c = 0; c < s.classes.size(); ++c) {
    s.periods.push_back(class_period(s.classes[c], adj, s.class_of, static_cast<int>(c)));
  }

  for (int i = 0; i < dim; ++i) {
    bool leaves = false;
    for (int j : adj[i]) {
      if (j != i) leaves = true;
    }
    if (!leaves && p.p(i, i) > 1.0 - epsilon) s.absorbing.push_back(i);
  }

  s.irreducible = s.classes.size() == 1;
  s.aperiodic =
      std::all_of(s.periods.begin(), s.periods.end(), [](int d) { return d == 1; });
  return s;
}

Distribution::Distribution(RealVector v) : pi(std::move(v)) {
  if (pi.size() < 1) throw ValidationError("empty distribution");
  if (pi.minCoeff() < 0.0) {
    throw ValidationError("distribution has a negative entry: " + std::to_string(pi.minCoeff()));
  }
  const double total = pi.sum();
  if (std::abs(total - 1.0) > kTraceTol) {
    throw ValidationError("distribution sums to " + std::to_string(total));
  }
}

Distribution stationary_distribution(const TransitionMatrix& p) {
  const MarkovStructure s = markov_structure(p);
  if (!s.irreducible || !s.aperiodic) {
    std::ostringstream msg;
    msg << "NotErgodic: " << s.classes.size() << " communication classes, "
        << (s.aperiodic ? "aperiodic" : "periodic");
    throw ValidationError(msg.str());
  }

  const int dim = static_cast<int>(p.p.rows());
  RealVector pi = RealVector::Constant(dim, 1.0 / dim);
  constexpr long kMaxIterations = 1000000;
  bool converged = false;
  for (long it = 0; it < kMaxIterations; ++it) {
    RealVector next = p.p.transpose() * pi;
    next /= next.sum();
    const double delta = (next - pi).cwiseAbs().sum();
    pi = std::move(next);
    if (delta <= 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericalError("NoConvergence: power iteration did not reach 1e-12 within 1e6 steps");
  }

  // Cross-check against the left eigenvector for eigenvalue 1.
  Eigen::EigenSolver<RealMatrix> solver(p.p.transpose());
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on P^T");
  int best = 0;
  for (int k = 1; k < dim; ++k) {
    if (std::abs(solver.eigenvalues()(k) - Complex(1.0, 0.0)) <
        std::abs(solver.eigenvalues()(best) - Complex(1.0, 0.0))) {
      best = k;
    }
  }
  Eigen::VectorXcd ev = solver.eigenvectors().col(best);
  if (ev.imag().cwiseAbs().maxCoeff() > 1e-9) {
    throw NumericalError("stationary eigenvector has a complex component");
  }
  RealVector check = ev.real();
  check /= check.sum();
  if ((check - pi).cwiseAbs().maxCoeff() > 1e-9) {
    std::ostringstream msg;
    msg << "stationary cross-check failed: power iteration and eigensolve differ by "
        << (check - pi).cwiseAbs().maxCoeff();
    throw NumericalError(msg.str());
  }
  return Distribution(pi);
}

DensityOp expected_post_measurement(const Distribution& pi,
                                    const std::vector<ComplexMatrix>& projectors) {
  if (static_cast<size_t>(pi.pi.size()) != projectors.size()) {
    throw ValidationError("distribution length does not match projector count");
  }
  ComplexMatrix rho = ComplexMatrix::Zero(projectors[0].rows(), projectors[0].cols());
  for (size_t i = 0; i < projectors.size(); ++i) rho += pi.pi(static_cast<int>(i)) * projectors[i];
  return validate_density(rho);
}

TauScanResult tau_scan(const RealGenerator& gen, const ThetaMatrix& theta,
                       const std::vector<double>& tau_grid) {
  if (tau_grid.empty()) throw ValidationError("tau grid is empty");
  for (size_t k = 0; k < tau_grid.size(); ++k) {
    if (tau_grid[k] <= 0.0) throw ValidationError("tau grid entries must be positive");
    if (k > 0 && tau_grid[k] <= tau_grid[k - 1]) {
      throw ValidationError("tau grid must be strictly increasing");
    }
  }
  TauScanResult result;
  for (double tau : tau_grid) {
    TauScanPoint point;
    point.tau = tau;
    point.transition = transition_matrix(gen, theta, tau);
    point.structure = markov_structure(point.transition);
    if (point.structure.absorbing.size() == 1 && !result.first_unique_absorbing_tau) {
      result.first_unique_absorbing_tau = tau;
    }
    if (point.structure.irreducible && point.structure.aperiodic &&
        !result.first_ergodic_tau) {
      result.first_ergodic_tau = tau;
    }
    result.points.push_back(std::move(point));
  }
  return result;
}

}  // namespace qbnet
