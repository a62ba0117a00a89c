#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qbnet/lindblad.hpp"

namespace qbnet {

/// Single-qubit projective measurement: an orthonormal eigenvector pair plus
/// outcome labels. The labels are metadata only; bits are the canonical
/// outcome identity (outcome 0 <-> v0, outcome 1 <-> v1).
struct QubitMeasurement {
  PureState v0;
  PureState v1;
  double lambda0 = 0.0;
  double lambda1 = 1.0;

  QubitMeasurement(PureState a, PureState b, double l0 = 0.0, double l1 = 1.0);
};

// v0 = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, v1 its orthogonal
// complement; (0, 0) gives the computational basis.
QubitMeasurement qubit_basis_from_angles(double theta, double phi);

/// Length-n bit vector [i1 ... in]; qubit 1 is the most significant bit.
class BooleanState {
 public:
  explicit BooleanState(std::vector<std::uint8_t> bits);
  static BooleanState from_string(std::string_view s);

  int size() const { return static_cast<int>(bits_.size()); }
  std::uint8_t bit(int k) const { return bits_[k]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::string to_string() const;
  int hamming_weight() const;

  bool operator==(const BooleanState& other) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// 1-based chain index: <i1...in> = sum_k i_k 2^{n-k} + 1.
int btoi(const BooleanState& bits);
// 0-based twin of btoi (used for matrix indexing throughout).
int state_index(const BooleanState& bits);

// Inverse of btoi for 1 <= index <= 2^n.
BooleanState itob(int index, int n);
// 0-based twin of itob.
BooleanState state_from_index(int index0, int n);

// All 2^n bit-string labels in chain order.
std::vector<std::string> state_labels(int n);

// The N = 2^n rank-one network projectors M_[i] = P_{i1} (x) ... (x) P_{in},
// ordered by btoi. Every qubit shares the same single-qubit basis; a
// per-qubit list would be the extension point for heterogeneous measurements.
std::vector<ComplexMatrix> network_projectors(const QubitMeasurement& m, int n);

/// Columns are the basis coordinates of the network projectors:
/// theta.col(i) = coordinates of M_[i+1]. Satisfies Theta^T Theta = I_N.
struct ThetaMatrix {
  int n = 0;
  RealMatrix theta;  // N^2 x N

  int dim() const { return 1 << n; }
};

ThetaMatrix theta_matrix(const std::vector<ComplexMatrix>& projectors,
                         const HermitianBasis& basis);

}  // namespace qbnet
