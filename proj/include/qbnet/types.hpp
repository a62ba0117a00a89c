#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qbnet {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Dense-exponential ceiling: the realified generator is 4^n x 4^n.
inline constexpr int kMaxQubits = 6;
inline constexpr int kMaxDim = 1 << kMaxQubits;        // 2^6
inline constexpr int kDimCap = kMaxDim * kMaxDim;      // 4^6, largest tensor result allowed

// Shared tolerances. Probability guarantees downstream depend on these being
// fixed; they are named constants, not knobs.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdFloor = -1e-9;         // freshly constructed densities
inline constexpr double kEvolvedPsdFloor = -1e-7;  // densities produced by propagation
inline constexpr double kUnitNormTol = 1e-9;
inline constexpr double kCoordImagTol = 1e-8;
inline constexpr double kRowSumTol = 1e-8;
inline constexpr double kEntryFloor = -1e-9;

// Bad inputs and broken preconditions (CLI exit code 1).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical invariant failed mid-computation (CLI exit code 2).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Returns n with dim == 2^n; throws ValidationError if dim is not a power of
// two in [2, 2^kMaxQubits].
int qubit_count_for_dim(int dim);

}  // namespace qbnet
