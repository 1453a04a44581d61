// Copyright 2026 The ndotomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NDOTOMO_QCORE_H
#define NDOTOMO_QCORE_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace ndotomo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// A configuration of binary units, one byte per unit, values in {0,1}.
using Bits = std::vector<std::uint8_t>;
using BitsView = std::span<const std::uint8_t>;

/// Largest qubit count for which dense 2^N x 2^N matrices are built.
inline constexpr int kMaxQubits = 10;

/// Raised when a computation leaves the numerically representable domain
/// (singular complex softplus, vanishing quasiprobability normalizer,
/// non-positive rotated probability, exponent guard exceeded).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bit ordering: sigma_1 is the most significant bit, so the configuration
// (s_1, ..., s_N) has index sum_j s_j * 2^(N - j).
std::size_t bits_to_index(BitsView bits);
Bits index_to_bits(std::size_t index, int n_bits);
void check_qubit_cap(int n_qubits);

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

Pauli pauli_from_char(char c);

/// Per-site measurement basis, e.g. "XY" measures qubit 1 in X and qubit 2 in Y.
class BasisLabel {
 public:
  BasisLabel() = default;
  explicit BasisLabel(std::vector<Pauli> sites) : sites_(std::move(sites)) {}

  /// Parses "XZY"-style labels. Throws std::invalid_argument naming the
  /// offending character.
  static BasisLabel parse(std::string_view text);

  std::size_t size() const { return sites_.size(); }
  Pauli operator[](std::size_t i) const { return sites_[i]; }
  const std::vector<Pauli>& sites() const { return sites_; }

  /// Number of sites measured outside the reference (Z) basis.
  int rotated_count() const;
  std::string str() const;

  auto operator<=>(const BasisLabel&) const = default;

 private:
  std::vector<Pauli> sites_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// 2x2 change of basis. Rows index outcomes in the measured basis, columns
/// index reference states. X is the Hadamard matrix and Y maps to the +1/-1
/// eigenstates of sigma_y (outcome 0 is eigenvalue +1).
ComplexMatrix local_unitary(Pauli label);

/// Tensor product of local_unitary over the sites of `basis`.
ComplexMatrix basis_rotation(const BasisLabel& basis);

/// Which invariants of a candidate density matrix hold, and by how much
/// they are violated.
struct DensityReport {
  double hermiticity_error = 0.0;  // max |m_ij - conj(m_ji)|
  Complex trace{0.0, 0.0};
  double min_eigenvalue = 0.0;

  static constexpr double kHermiticityTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kEigenvalueTol = 1e-10;

  bool hermitian() const { return hermiticity_error <= kHermiticityTol; }
  bool unit_trace() const { return std::abs(trace - Complex(1.0, 0.0)) <= kTraceTol; }
  bool positive() const { return min_eigenvalue >= -kEigenvalueTol; }
  bool ok() const { return hermitian() && unit_trace() && positive(); }

  std::string summary() const;
};

/// A Hermitian, unit-trace, positive semidefinite matrix of dimension 2^N.
class DensityMatrix {
 public:
  /// Validates `m`; throws std::invalid_argument with the report summary
  /// when any invariant fails.
  static DensityMatrix from_matrix(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  int num_qubits() const;
  double purity() const;

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

struct DensityValidation {
  DensityReport report;
  std::optional<DensityMatrix> state;  // set iff report.ok()
};

DensityValidation validate_density(const ComplexMatrix& m);

/// Tr sqrt(sqrt(a) b sqrt(a)), via Hermitian eigendecompositions. Eigenvalues
/// in [-1e-10, 0) are treated as 0; more negative ones throw NumericalError.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// Half the trace norm of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix pure_density(const ComplexVector& psi);

/// (1 - p) |psi><psi| + p I / 2^N.
DensityMatrix depolarize(const ComplexVector& psi, double p_dep);

/// "bell_phi_plus" -> (|00> + |11>)/sqrt2, "psi_i" -> (|00> + i|11>)/sqrt2.
ComplexVector canonical_state(std::string_view name);

}  // namespace ndotomo

#endif  // NDOTOMO_QCORE_H
