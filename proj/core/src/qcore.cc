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

#include "ndotomo/qcore.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace ndotomo {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kEigenClamp = 1e-10;

// Positive square root of a Hermitian PSD matrix.
ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m);
  RealVector w = eig.eigenvalues();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] < -kEigenClamp) {
      throw NumericalError("matrix is not positive semidefinite (eigenvalue " +
                           std::to_string(w[i]) + ")");
    }
    w[i] = std::sqrt(std::max(w[i], 0.0));
  }
  const ComplexMatrix& v = eig.eigenvectors();
  return v * w.cast<Complex>().asDiagonal() * v.adjoint();
}

DensityReport inspect(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
  DensityReport report;
  report.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  report.trace = m.trace();
  // Spectrum of the Hermitian part; non-Hermiticity is reported separately.
  ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  return report;
}

}  // namespace

std::size_t bits_to_index(BitsView bits) {
  std::size_t index = 0;
  for (std::uint8_t b : bits) {
    index = (index << 1) | (b & 1u);
  }
  return index;
}

Bits index_to_bits(std::size_t index, int n_bits) {
  Bits bits(static_cast<std::size_t>(n_bits));
  for (int j = n_bits - 1; j >= 0; --j) {
    bits[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(index & 1u);
    index >>= 1;
  }
  return bits;
}

void check_qubit_cap(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(n_qubits) +
                                " outside the dense enumeration range [1, " +
                                std::to_string(kMaxQubits) + "]");
  }
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'X':
      return Pauli::X;
    case 'Y':
      return Pauli::Y;
    case 'Z':
      return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("unknown basis label '") + c + "'");
  }
}

BasisLabel BasisLabel::parse(std::string_view text) {
  if (text.empty()) {
    throw std::invalid_argument("empty basis label");
  }
  std::vector<Pauli> sites;
  sites.reserve(text.size());
  for (char c : text) {
    sites.push_back(pauli_from_char(c));
  }
  return BasisLabel(std::move(sites));
}

int BasisLabel::rotated_count() const {
  return static_cast<int>(std::count_if(sites_.begin(), sites_.end(),
                                        [](Pauli p) { return p != Pauli::Z; }));
}

std::string BasisLabel::str() const {
  std::string out;
  out.reserve(sites_.size());
  for (Pauli p : sites_) {
    out.push_back(static_cast<char>(p));
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() == 0 || b.size() == 0) {
    throw std::invalid_argument("kron of an empty matrix");
  }
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix local_unitary(Pauli label) {
  ComplexMatrix u(2, 2);
  const Complex i1(0.0, 1.0);
  switch (label) {
    case Pauli::Z:
      u << 1.0, 0.0, 0.0, 1.0;
      return u;
    case Pauli::X:
      u << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
      return u;
    case Pauli::Y:
      u << kInvSqrt2, -i1 * kInvSqrt2, kInvSqrt2, i1 * kInvSqrt2;
      return u;
  }
  throw std::invalid_argument("unknown basis label");
}

ComplexMatrix basis_rotation(const BasisLabel& basis) {
  check_qubit_cap(static_cast<int>(basis.size()));
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (Pauli p : basis.sites()) {
    out = kron(out, local_unitary(p));
  }
  return out;
}

std::string DensityReport::summary() const {
  std::ostringstream out;
  out.precision(6);
  bool first = true;
  auto sep = [&] {
    if (!first) out << "; ";
    first = false;
  };
  if (!hermitian()) {
    sep();
    out << "not Hermitian (max deviation " << hermiticity_error << ")";
  }
  if (!unit_trace()) {
    sep();
    out << "trace " << trace.real();
    if (trace.imag() != 0.0) out << (trace.imag() < 0 ? "-" : "+") << std::abs(trace.imag()) << "i";
    out << " != 1";
  }
  if (!positive()) {
    sep();
    out << "not positive semidefinite (min eigenvalue " << min_eigenvalue << ")";
  }
  if (first) out << "valid density matrix";
  return out.str();
}

DensityValidation validate_density(const ComplexMatrix& m) {
  DensityValidation result;
  result.report = inspect(m);
  if (result.report.ok()) {
    result.state = DensityMatrix::from_matrix(m);
  }
  return result;
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
  const Eigen::Index d = m.rows();
  if (d > 0 && (d & (d - 1)) != 0) {
    throw std::invalid_argument("density matrix dimension must be a power of two");
  }
  DensityReport report = inspect(m);
  if (!report.ok()) {
    throw std::invalid_argument("invalid density matrix: " + report.summary());
  }
  return DensityMatrix(std::move(m));
}

int DensityMatrix::num_qubits() const {
  int n = 0;
  while ((Eigen::Index{1} << n) < m_.rows()) ++n;
  return n;
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  ComplexMatrix sa = psd_sqrt(a.matrix());
  ComplexMatrix inner = sa * b.matrix() * sa;
  inner = 0.5 * (inner + inner.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(inner, Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (double w : eig.eigenvalues()) {
    if (w < -kEigenClamp) {
      throw NumericalError("fidelity: negative eigenvalue " + std::to_string(w));
    }
    f += std::sqrt(std::max(w, 0.0));
  }
  if (f > 1.0 + 1e-8) {
    throw NumericalError("fidelity: value " + std::to_string(f) + " exceeds 1");
  }
  return std::clamp(f, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  ComplexMatrix diff = a.matrix() - b.matrix();
  diff = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(diff, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

DensityMatrix pure_density(const ComplexVector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state vector is not normalized");
  }
  ComplexMatrix rho = psi * psi.adjoint();
  return DensityMatrix::from_matrix(std::move(rho));
}

DensityMatrix depolarize(const ComplexVector& psi, double p_dep) {
  if (!(p_dep >= 0.0 && p_dep <= 1.0)) {
    throw std::invalid_argument("depolarizing strength must lie in [0, 1]");
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state vector is not normalized");
  }
  const Eigen::Index d = psi.size();
  ComplexMatrix rho = (1.0 - p_dep) * (psi * psi.adjoint());
  rho.diagonal().array() += p_dep / static_cast<double>(d);
  return DensityMatrix::from_matrix(std::move(rho));
}

ComplexVector canonical_state(std::string_view name) {
  ComplexVector psi = ComplexVector::Zero(4);
  if (name == "bell_phi_plus" || name == "bell") {
    psi[0] = kInvSqrt2;
    psi[3] = kInvSqrt2;
  } else if (name == "psi_i") {
    psi[0] = kInvSqrt2;
    psi[3] = Complex(0.0, kInvSqrt2);
  } else {
    throw std::invalid_argument("unknown canonical state '" + std::string(name) + "'");
  }
  return psi;
}

}  // namespace ndotomo
