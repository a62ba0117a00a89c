#pragma once

#include <optional>
#include <vector>

#include "qbnet/hilbert.hpp"

namespace qbnet {

// Real coordinates of a Hermitian operator in an orthonormal Hermitian basis
// (length N^2; the last slot of the generalized Gell-Mann layout is the trace
// coordinate).
using CoordinateVector = RealVector;

/// Ordered orthonormal Hermitian basis of L(H_N) under the trace inner
/// product, with exactly one element proportional to the identity.
class HermitianBasis {
 public:
  HermitianBasis(int dim, std::vector<ComplexMatrix> elements);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }
  int identity_slot() const { return identity_slot_; }
  const ComplexMatrix& element(int k) const { return elements_[k]; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  int dim_;
  std::vector<ComplexMatrix> elements_;
  int identity_slot_;
};

// Generalized Gell-Mann basis for dimension N >= 2. Slot layout (1-based k):
//   k = p+(q-1)N, p<q : (|p><q| + |q><p|)/sqrt(2)
//   k = q+(p-1)N, p<q : (-i|p><q| + i|q><p|)/sqrt(2)
//   k = p+(p-1)N, p<N : (sum_{j<=p} |j><j| - p|p+1><p+1|)/sqrt(p+p^2)
//   k = N^2           : I/sqrt(N)   (trace slot)
HermitianBasis gell_mann_basis(int dim);

// r_k = tr(rho sigma_k). Throws NumericalError if any trace has imaginary
// part above kCoordImagTol (non-Hermitian input or corrupted basis).
CoordinateVector to_coordinates(const ComplexMatrix& op, const HermitianBasis& basis);

// sum_k r_k sigma_k. Not validated as a density; callers validate when needed.
ComplexMatrix from_coordinates(const CoordinateVector& r, const HermitianBasis& basis);

/// Lindblad model d(rho)/ds = -i[H,rho] + sum_d (V_d rho V_d^dag
/// - (V_d^dag V_d rho + rho V_d^dag V_d)/2).
struct LindbladModel {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> dissipators;

  LindbladModel(ComplexMatrix h, std::vector<ComplexMatrix> v);
  int dim() const { return static_cast<int>(hamiltonian.rows()); }
};

/// Realified generator: d r/ds = W r with W = L + sum_d D^(d),
///   L_mn     = tr(i H [sigma_m, sigma_n])
///   D^(d)_mn = tr(V_d^dag sigma_m V_d sigma_n)
///              - tr(V_d^dag V_d {sigma_m, sigma_n})/2.
/// The trace-slot row of W is zero (trace preservation).
struct RealGenerator {
  int dim = 0;  // N; matrices are N^2 x N^2
  RealMatrix w;
  RealMatrix hamiltonian_part;
  std::vector<RealMatrix> dissipator_parts;

  int identity_slot() const { return dim * dim - 1; }
};

RealGenerator build_generator(const LindbladModel& model, const HermitianBasis& basis);

// e^A by scaling-and-squaring with diagonal Pade approximants (degrees
// 3/5/7/9/13 chosen from the 1-norm). Deterministic for fixed input.
RealMatrix matrix_exp(const RealMatrix& a);

// e^A through a self-adjoint eigendecomposition; requires symmetric input.
RealMatrix matrix_exp_symmetric(const RealMatrix& a);

// e^{W tau} r. The trace coordinate must come back unchanged (checked).
CoordinateVector propagate(const RealGenerator& gen, const CoordinateVector& r, double tau);

struct SteadyStateReport {
  int kernel_dimension = 0;
  // Present iff the kernel is one-dimensional and carries a trace-one state.
  std::optional<CoordinateVector> steady_coordinate;
  bool is_relaxing = false;
  // Largest real part among eigenvalues outside the kernel (0 if none).
  double spectral_abscissa_nonzero_modes = 0.0;
};

// Eigen-analysis of W: kernel dimension, unique steady coordinate when it
// exists, and the relaxing flag (kernel dimension 1 and every nonzero mode
// strictly decaying).
SteadyStateReport steady_state(const RealGenerator& gen);

}  // namespace qbnet
