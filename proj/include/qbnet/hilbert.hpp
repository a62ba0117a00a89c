#pragma once

#include "qbnet/types.hpp"

namespace qbnet {

// Kronecker product a (x) b. Rejects results larger than kDimCap x kDimCap.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Unit-norm state vector.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);
  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  ComplexVector amplitudes_;
};

// Rank-one projector v v^dag.
ComplexMatrix projector(const PureState& state);

/// Hermitian, PSD, trace-one operator. Constructed only through
/// validate_density; never normalizes silently.
class DensityOp {
 public:
  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

  friend DensityOp validate_density(const ComplexMatrix& m, double psd_floor);

 private:
  explicit DensityOp(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

// Checks all DensityOp invariants and throws with the violated quantity:
//   NotHermitian / TraceNotOne / NotPSD.
// psd_floor defaults to the strict floor; pass kEvolvedPsdFloor for states
// coming out of a propagation step.
DensityOp validate_density(const ComplexMatrix& m, double psd_floor = kPsdFloor);

double hermitian_deviation(const ComplexMatrix& m);

// Smallest eigenvalue of a (near-)Hermitian matrix.
double min_eigenvalue(const ComplexMatrix& m);

}  // namespace qbnet
