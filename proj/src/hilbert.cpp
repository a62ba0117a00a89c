#include "qbnet/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace qbnet {

int qubit_count_for_dim(int dim) {
  for (int n = 1; n <= kMaxQubits; ++n) {
    if ((1 << n) == dim) return n;
  }
  throw ValidationError("dimension " + std::to_string(dim) +
                        " is not 2^n with n in [1, " + std::to_string(kMaxQubits) + "]");
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > kDimCap || cols > kDimCap) {
    std::ostringstream msg;
    msg << "tensor product result " << rows << "x" << cols
        << " exceeds the dimension cap " << kDimCap << " (n too large)";
    throw ValidationError(msg.str());
  }
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ValidationError("empty state vector");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw ValidationError("state vector norm " + std::to_string(norm) + " is not 1");
  }
}

ComplexMatrix projector(const PureState& state) {
  const ComplexVector& v = state.amplitudes();
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > kUnitNormTol) {
    throw ValidationError("projector input norm deviates by " + std::to_string(norm - 1.0));
  }
  return v * v.adjoint();
}

double hermitian_deviation(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver failed");
  }
  return solver.eigenvalues().minCoeff();
}

DensityOp validate_density(const ComplexMatrix& m, double psd_floor) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ValidationError("density operator must be a nonempty square matrix");
  }
  const double herm = hermitian_deviation(m);
  if (herm > kHermitianTol) {
    std::ostringstream msg;
    msg << "NotHermitian: max |rho - rho^dag| = " << herm << " > " << kHermitianTol;
    throw ValidationError(msg.str());
  }
  const double trace_dev = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_dev > kTraceTol) {
    std::ostringstream msg;
    msg << "TraceNotOne: |tr(rho) - 1| = " << trace_dev << " > " << kTraceTol;
    throw ValidationError(msg.str());
  }
  const double min_eig = min_eigenvalue(m);
  if (min_eig < psd_floor) {
    std::ostringstream msg;
    msg << "NotPSD: min eigenvalue " << min_eig << " < " << psd_floor;
    throw ValidationError(msg.str());
  }
  return DensityOp(m);
}

}  // namespace qbnet
