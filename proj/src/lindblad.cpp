#include "qbnet/lindblad.hpp"

#include <cmath>
#include <sstream>

namespace qbnet {

namespace {

struct SparseEntry {
  int row;
  int col;
  Complex val;
};

using SparseOp = std::vector<SparseEntry>;

SparseOp sparsify(const ComplexMatrix& m) {
  SparseOp out;
  for (int j = 0; j < m.cols(); ++j) {
    for (int i = 0; i < m.rows(); ++i) {
      if (m(i, j) != Complex(0.0, 0.0)) out.push_back({i, j, m(i, j)});
    }
  }
  return out;
}

// tr(sigma_m sigma_n) through the sparse entries.
Complex sparse_trace_product(const SparseOp& sm, const SparseOp& sn) {
  Complex acc(0.0, 0.0);
  for (const auto& e : sm) {
    for (const auto& f : sn) {
      if (f.row == e.col && f.col == e.row) acc += e.val * f.val;
    }
  }
  return acc;
}

// tr(A sigma_m sigma_n) with A dense.
Complex trace_a_mn(const ComplexMatrix& a, const SparseOp& sm, const SparseOp& sn) {
  Complex acc(0.0, 0.0);
  for (const auto& e : sm) {
    for (const auto& f : sn) {
      if (f.row == e.col) acc += e.val * f.val * a(f.col, e.row);
    }
  }
  return acc;
}

// tr(A sigma_m B sigma_n) with A, B dense.
Complex trace_a_m_b_n(const ComplexMatrix& a, const ComplexMatrix& b, const SparseOp& sm,
                      const SparseOp& sn) {
  Complex acc(0.0, 0.0);
  for (const auto& e : sm) {
    for (const auto& f : sn) {
      acc += e.val * f.val * a(f.col, e.row) * b(e.col, f.row);
    }
  }
  return acc;
}

double real_checked(Complex z, const char* what) {
  if (std::abs(z.imag()) > kHermitianTol) {
    std::ostringstream msg;
    msg << what << ": imaginary residue " << z.imag() << " exceeds " << kHermitianTol;
    throw NumericalError(msg.str());
  }
  return z.real();
}

}  // namespace

HermitianBasis::HermitianBasis(int dim, std::vector<ComplexMatrix> elements)
    : dim_(dim), elements_(std::move(elements)), identity_slot_(-1) {
  if (dim_ < 2) throw ValidationError("basis dimension must be at least 2");
  const int count = dim_ * dim_;
  if (static_cast<int>(elements_.size()) != count) {
    throw ValidationError("basis must have N^2 elements, got " +
                          std::to_string(elements_.size()));
  }
  std::vector<SparseOp> sparse;
  sparse.reserve(count);
  for (int k = 0; k < count; ++k) {
    const ComplexMatrix& e = elements_[k];
    if (e.rows() != dim_ || e.cols() != dim_) {
      throw ValidationError("basis element " + std::to_string(k) + " has wrong shape");
    }
    if (hermitian_deviation(e) > 1e-12) {
      throw ValidationError("basis element " + std::to_string(k) + " is not Hermitian");
    }
    sparse.push_back(sparsify(e));

    // Identity candidates: constant diagonal, no off-diagonal part.
    bool diag_const = true;
    const Complex c = e(0, 0);
    for (int i = 0; i < dim_ && diag_const; ++i) {
      for (int j = 0; j < dim_ && diag_const; ++j) {
        const Complex want = (i == j) ? c : Complex(0.0, 0.0);
        if (std::abs(e(i, j) - want) > 1e-12) diag_const = false;
      }
    }
    if (diag_const && std::abs(c) > 1e-12) {
      if (identity_slot_ >= 0) {
        throw ValidationError("basis has more than one element proportional to the identity");
      }
      identity_slot_ = k;
    }
  }
  if (identity_slot_ < 0) {
    throw ValidationError("basis has no element proportional to the identity");
  }
  for (int m = 0; m < count; ++m) {
    for (int n = m; n < count; ++n) {
      const Complex g = sparse_trace_product(sparse[m], sparse[n]);
      const double want = (m == n) ? 1.0 : 0.0;
      if (std::abs(g - want) > kHermitianTol) {
        std::ostringstream msg;
        msg << "basis not orthonormal: tr(s_" << m << " s_" << n << ") = " << g;
        throw ValidationError(msg.str());
      }
    }
  }
}

HermitianBasis gell_mann_basis(int dim) {
  if (dim < 2) throw ValidationError("gell_mann_basis requires N >= 2");
  if (dim > kMaxDim) {
    throw ValidationError("dimension " + std::to_string(dim) + " exceeds cap " +
                          std::to_string(kMaxDim));
  }
  const int count = dim * dim;
  std::vector<ComplexMatrix> elems(count, ComplexMatrix::Zero(dim, dim));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
      sym(a, b) = inv_sqrt2;
      sym(b, a) = inv_sqrt2;
      elems[a + b * dim] = sym;

      ComplexMatrix anti = ComplexMatrix::Zero(dim, dim);
      anti(a, b) = Complex(0.0, -inv_sqrt2);
      anti(b, a) = Complex(0.0, inv_sqrt2);
      elems[b + a * dim] = anti;
    }
  }
  for (int d = 0; d + 1 < dim; ++d) {
    const int p = d + 1;  // 1-based p in the diagonal formula
    ComplexMatrix diag = ComplexMatrix::Zero(dim, dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(p) + static_cast<double>(p) * p);
    for (int k = 0; k < p; ++k) diag(k, k) = scale;
    diag(p, p) = -static_cast<double>(p) * scale;
    elems[d * (dim + 1)] = diag;
  }
  elems[count - 1] = ComplexMatrix::Identity(dim, dim) / std::sqrt(static_cast<double>(dim));
  return HermitianBasis(dim, std::move(elems));
}

CoordinateVector to_coordinates(const ComplexMatrix& op, const HermitianBasis& basis) {
  if (op.rows() != basis.dim() || op.cols() != basis.dim()) {
    throw ValidationError("operator dimension does not match basis");
  }
  CoordinateVector r(basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    // tr(op sigma_k) = sum_ij op_ij conj(sigma_ij) for Hermitian sigma.
    const Complex t = op.cwiseProduct(basis.element(k).conjugate()).sum();
    if (std::abs(t.imag()) > kCoordImagTol) {
      std::ostringstream msg;
      msg << "coordinate " << k << " has imaginary part " << t.imag()
          << " (non-Hermitian input or corrupted basis)";
      throw NumericalError(msg.str());
    }
    r(k) = t.real();
  }
  return r;
}

ComplexMatrix from_coordinates(const CoordinateVector& r, const HermitianBasis& basis) {
  if (r.size() != basis.size()) {
    throw ValidationError("coordinate vector length " + std::to_string(r.size()) +
                          " does not match basis size " + std::to_string(basis.size()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (int k = 0; k < basis.size(); ++k) out += r(k) * basis.element(k);
  return out;
}

LindbladModel::LindbladModel(ComplexMatrix h, std::vector<ComplexMatrix> v)
    : hamiltonian(std::move(h)), dissipators(std::move(v)) {
  if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() < 2) {
    throw ValidationError("Hamiltonian must be square with dimension >= 2");
  }
  if (hamiltonian.rows() > kMaxDim) {
    throw ValidationError("model dimension exceeds cap " + std::to_string(kMaxDim));
  }
  if (hermitian_deviation(hamiltonian) > kHermitianTol) {
    throw ValidationError("Hamiltonian is not Hermitian within " + std::to_string(kHermitianTol));
  }
  for (const auto& d : dissipators) {
    if (d.rows() != hamiltonian.rows() || d.cols() != hamiltonian.cols()) {
      throw ValidationError("dissipator dimension does not match Hamiltonian");
    }
  }
}

RealGenerator build_generator(const LindbladModel& model, const HermitianBasis& basis) {
  if (model.dim() != basis.dim()) {
    throw ValidationError("model and basis dimensions differ");
  }
  const int n2 = basis.size();
  std::vector<SparseOp> sparse;
  sparse.reserve(n2);
  for (int k = 0; k < n2; ++k) sparse.push_back(sparsify(basis.element(k)));

  RealGenerator gen;
  gen.dim = basis.dim();
  gen.hamiltonian_part = RealMatrix::Zero(n2, n2);

  const bool have_h = model.hamiltonian.cwiseAbs().maxCoeff() > 0.0;
  if (have_h) {
    const Complex i_unit(0.0, 1.0);
    for (int m = 0; m < n2; ++m) {
      for (int n = 0; n < n2; ++n) {
        const Complex comm = trace_a_mn(model.hamiltonian, sparse[m], sparse[n]) -
                             trace_a_mn(model.hamiltonian, sparse[n], sparse[m]);
        gen.hamiltonian_part(m, n) = real_checked(i_unit * comm, "generator Hamiltonian entry");
      }
    }
  }

  gen.w = gen.hamiltonian_part;
  for (const auto& v : model.dissipators) {
    const ComplexMatrix vdag = v.adjoint();
    const ComplexMatrix k_op = vdag * v;
    RealMatrix d = RealMatrix::Zero(n2, n2);
    for (int m = 0; m < n2; ++m) {
      for (int n = 0; n < n2; ++n) {
        const Complex jump = trace_a_m_b_n(vdag, v, sparse[m], sparse[n]);
        const Complex anti = trace_a_mn(k_op, sparse[m], sparse[n]) +
                             trace_a_mn(k_op, sparse[n], sparse[m]);
        d(m, n) = real_checked(jump - 0.5 * anti, "generator dissipator entry");
      }
    }
    gen.w += d;
    gen.dissipator_parts.push_back(std::move(d));
  }

  const double id_row_max = gen.w.row(basis.identity_slot()).cwiseAbs().maxCoeff();
  if (id_row_max > kHermitianTol) {
    std::ostringstream msg;
    msg << "trace-preservation violated: identity row of W has max entry " << id_row_max;
    throw NumericalError(msg.str());
  }
  return gen;
}

namespace {

// Diagonal Pade approximant e^A ~ (V-U)^{-1}(V+U); U collects odd powers.
void pade_uv(const RealMatrix& a, int degree, RealMatrix& u, RealMatrix& v) {
  const Eigen::Index n = a.rows();
  const RealMatrix id = RealMatrix::Identity(n, n);
  const RealMatrix a2 = a * a;
  switch (degree) {
    case 3: {
      static const double b[] = {120, 60, 12, 1};
      u = a * (b[3] * a2 + b[1] * id);
      v = b[2] * a2 + b[0] * id;
      return;
    }
    case 5: {
      static const double b[] = {30240, 15120, 3360, 420, 30, 1};
      const RealMatrix a4 = a2 * a2;
      u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
      v = b[4] * a4 + b[2] * a2 + b[0] * id;
      return;
    }
    case 7: {
      static const double b[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
      const RealMatrix a4 = a2 * a2;
      const RealMatrix a6 = a4 * a2;
      u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
      v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
      return;
    }
    case 9: {
      static const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                 2162160.,     110880.,     3960.,       90.,        1.};
      const RealMatrix a4 = a2 * a2;
      const RealMatrix a6 = a4 * a2;
      const RealMatrix a8 = a6 * a2;
      u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
      v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
      return;
    }
    default: {
      static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                 1187353796428800.,  129060195264000.,   10559470521600.,
                                 670442572800.,      33522128640.,       1323241920.,
                                 40840800.,          960960.,            16380.,
                                 182.,               1.};
      const RealMatrix a4 = a2 * a2;
      const RealMatrix a6 = a4 * a2;
      u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
               b[1] * id);
      v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
          b[0] * id;
      return;
    }
  }
}

}  // namespace

RealMatrix matrix_exp(const RealMatrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw ValidationError("matrix exponential requires a nonempty square matrix");
  }
  if (!a.allFinite()) throw ValidationError("matrix exponential of non-finite matrix");

  // Degree thresholds on the 1-norm (scaling-and-squaring selection).
  constexpr double kTheta3 = 1.495585217958292e-2;
  constexpr double kTheta5 = 2.539398330063230e-1;
  constexpr double kTheta7 = 9.504178996162932e-1;
  constexpr double kTheta9 = 2.097847961257068;
  constexpr double kTheta13 = 5.371920351148152;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  RealMatrix scaled = a;
  int squarings = 0;
  int degree = 13;
  if (norm1 <= kTheta3) {
    degree = 3;
  } else if (norm1 <= kTheta5) {
    degree = 5;
  } else if (norm1 <= kTheta7) {
    degree = 7;
  } else if (norm1 <= kTheta9) {
    degree = 9;
  } else if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    scaled /= std::ldexp(1.0, squarings);
  }

  RealMatrix u, v;
  pade_uv(scaled, degree, u, v);
  Eigen::PartialPivLU<RealMatrix> lu(v - u);
  RealMatrix result = lu.solve(v + u);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

RealMatrix matrix_exp_symmetric(const RealMatrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw ValidationError("matrix exponential requires a nonempty square matrix");
  }
  if (!a.allFinite()) throw ValidationError("matrix exponential of non-finite matrix");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ValidationError("matrix_exp_symmetric requires a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  return solver.eigenvectors() * solver.eigenvalues().array().exp().matrix().asDiagonal() *
         solver.eigenvectors().transpose();
}

CoordinateVector propagate(const RealGenerator& gen, const CoordinateVector& r, double tau) {
  if (tau < 0.0) throw ValidationError("propagation time must be nonnegative");
  if (r.size() != gen.w.rows()) {
    throw ValidationError("coordinate vector length does not match generator");
  }
  const CoordinateVector out = matrix_exp(gen.w * tau) * r;
  const double trace_drift = std::abs(out(gen.identity_slot()) - r(gen.identity_slot()));
  if (trace_drift > kHermitianTol) {
    std::ostringstream msg;
    msg << "trace coordinate drifted by " << trace_drift << " during propagation";
    throw NumericalError(msg.str());
  }
  return out;
}

SteadyStateReport steady_state(const RealGenerator& gen) {
  Eigen::EigenSolver<RealMatrix> solver(gen.w);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on generator");
  const Eigen::VectorXcd eigs = solver.eigenvalues();

  const double scale = std::max(1.0, gen.w.cwiseAbs().maxCoeff());
  const double zero_tol = 1e-9 * scale;

  SteadyStateReport report;
  bool all_decaying = true;
  bool have_nonzero = false;
  double abscissa = 0.0;
  for (Eigen::Index k = 0; k < eigs.size(); ++k) {
    if (std::abs(eigs(k)) <= zero_tol) {
      ++report.kernel_dimension;
    } else {
      const double re = eigs(k).real();
      abscissa = have_nonzero ? std::max(abscissa, re) : re;
      have_nonzero = true;
      if (re >= -1e-10) all_decaying = false;
    }
  }
  report.spectral_abscissa_nonzero_modes = have_nonzero ? abscissa : 0.0;
  report.is_relaxing = (report.kernel_dimension == 1) && have_nonzero && all_decaying;

  if (report.kernel_dimension == 1) {
    // Solve W x = 0 with the trace coordinate pinned to 1/sqrt(N); the
    // identity row of W is zero, so it can carry the constraint.
    const int id = gen.identity_slot();
    RealMatrix a = gen.w;
    a.row(id).setZero();
    a(id, id) = 1.0;
    RealVector b = RealVector::Zero(a.rows());
    b(id) = 1.0 / std::sqrt(static_cast<double>(gen.dim));
    Eigen::FullPivLU<RealMatrix> lu(a);
    if (lu.isInvertible()) {
      const RealVector x = lu.solve(b);
      const double residual = (gen.w * x).cwiseAbs().maxCoeff();
      if (x.allFinite() && residual <= 1e-7 * scale * std::max(1.0, x.cwiseAbs().maxCoeff())) {
        report.steady_coordinate = x;
      }
    }
  }
  return report;
}

}  // namespace qbnet
