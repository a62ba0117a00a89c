#include "qbnet/measurement.hpp"

#include <cmath>
#include <sstream>

namespace qbnet {

QubitMeasurement::QubitMeasurement(PureState a, PureState b, double l0, double l1)
    : v0(std::move(a)), v1(std::move(b)), lambda0(l0), lambda1(l1) {
  if (v0.dim() != 2 || v1.dim() != 2) {
    throw ValidationError("qubit measurement vectors must have dimension 2");
  }
  const double overlap = std::abs(v0.amplitudes().dot(v1.amplitudes()));
  if (overlap > 1e-12) {
    throw ValidationError("measurement eigenvectors are not orthogonal: |<v0|v1>| = " +
                          std::to_string(overlap));
  }
}

QubitMeasurement qubit_basis_from_angles(double theta, double phi) {
  const Complex phase = std::polar(1.0, phi);
  ComplexVector v0(2), v1(2);
  v0 << std::cos(theta / 2.0), phase * std::sin(theta / 2.0);
  v1 << std::sin(theta / 2.0), -phase * std::cos(theta / 2.0);
  return QubitMeasurement(PureState(v0), PureState(v1));
}

BooleanState::BooleanState(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty() || static_cast<int>(bits_.size()) > kMaxQubits) {
    throw ValidationError("Boolean state must have between 1 and " +
                          std::to_string(kMaxQubits) + " bits");
  }
  for (auto b : bits_) {
    if (b > 1) throw ValidationError("Boolean state entries must be 0 or 1");
  }
}

BooleanState BooleanState::from_string(std::string_view s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw ValidationError("invalid bit string \"" + std::string(s) + "\"");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BooleanState(std::move(bits));
}

std::string BooleanState::to_string() const {
  std::string s(bits_.size(), '0');
  for (size_t k = 0; k < bits_.size(); ++k) s[k] = static_cast<char>('0' + bits_[k]);
  return s;
}

int BooleanState::hamming_weight() const {
  int w = 0;
  for (auto b : bits_) w += b;
  return w;
}

int btoi(const BooleanState& bits) { return state_index(bits) + 1; }

int state_index(const BooleanState& bits) {
  int idx = 0;
  for (int k = 0; k < bits.size(); ++k) idx = (idx << 1) | bits.bit(k);
  return idx;
}

BooleanState itob(int index, int n) {
  if (n < 1 || n > kMaxQubits) {
    throw ValidationError("qubit count out of range: " + std::to_string(n));
  }
  if (index < 1 || index > (1 << n)) {
    throw ValidationError("state index " + std::to_string(index) + " out of range for n = " +
                          std::to_string(n));
  }
  return state_from_index(index - 1, n);
}

BooleanState state_from_index(int index0, int n) {
  if (n < 1 || n > kMaxQubits || index0 < 0 || index0 >= (1 << n)) {
    throw ValidationError("state index out of range");
  }
  std::vector<std::uint8_t> bits(n);
  for (int k = 0; k < n; ++k) {
    bits[k] = static_cast<std::uint8_t>((index0 >> (n - 1 - k)) & 1);
  }
  return BooleanState(std::move(bits));
}

std::vector<std::string> state_labels(int n) {
  std::vector<std::string> labels;
  labels.reserve(1 << n);
  for (int i = 0; i < (1 << n); ++i) labels.push_back(state_from_index(i, n).to_string());
  return labels;
}

std::vector<ComplexMatrix> network_projectors(const QubitMeasurement& m, int n) {
  if (n < 1 || n > kMaxQubits) {
    throw ValidationError("qubit count " + std::to_string(n) + " exceeds cap " +
                          std::to_string(kMaxQubits));
  }
  const ComplexMatrix p0 = projector(m.v0);
  const ComplexMatrix p1 = projector(m.v1);
  const int count = 1 << n;
  std::vector<ComplexMatrix> projectors;
  projectors.reserve(count);
  for (int i = 0; i < count; ++i) {
    const BooleanState bits = state_from_index(i, n);
    ComplexMatrix acc = bits.bit(0) ? p1 : p0;
    for (int k = 1; k < n; ++k) acc = tensor_product(acc, bits.bit(k) ? p1 : p0);
    projectors.push_back(std::move(acc));
  }
  return projectors;
}

ThetaMatrix theta_matrix(const std::vector<ComplexMatrix>& projectors,
                         const HermitianBasis& basis) {
  const int dim = basis.dim();
  if (static_cast<int>(projectors.size()) != dim) {
    throw ValidationError("projector count does not match basis dimension");
  }
  ThetaMatrix result;
  result.n = qubit_count_for_dim(dim);
  result.theta.resize(basis.size(), dim);
  for (int i = 0; i < dim; ++i) {
    result.theta.col(i) = to_coordinates(projectors[i], basis);
  }

  const RealMatrix gram = result.theta.transpose() * result.theta;
  const double gram_dev = (gram - RealMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (gram_dev > kHermitianTol) {
    std::ostringstream msg;
    msg << "projector coordinates are not orthonormal: max |Theta^T Theta - I| = " << gram_dev;
    throw NumericalError(msg.str());
  }
  const double want = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < dim; ++i) {
    if (std::abs(result.theta(basis.identity_slot(), i) - want) > kHermitianTol) {
      throw NumericalError("projector trace coordinate deviates from 1/sqrt(N)");
    }
  }
  return result;
}

}  // namespace qbnet
