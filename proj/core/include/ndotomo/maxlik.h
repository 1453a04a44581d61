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

#ifndef NDOTOMO_MAXLIK_H
#define NDOTOMO_MAXLIK_H

#include <cstdint>
#include <vector>

#include "ndotomo/dataset.h"
#include "ndotomo/qcore.h"

namespace ndotomo {

// Maximum-likelihood tomography over rho(t) = T^dagger T / Tr(T^dagger T),
// with T lower triangular. The 4^N real parameters t are laid out as the
// 2^N real diagonal entries, then (Re, Im) of T(i, j) for i > j in row-major
// order.

std::size_t cholesky_size(int n_qubits);
ComplexMatrix cholesky_factor(const RealVector& t, int n_qubits);
RealVector cholesky_params(const ComplexMatrix& lower);

/// Throws std::invalid_argument for an all-zero t.
DensityMatrix rho_from_cholesky(const RealVector& t, int n_qubits);

/// Mean log-likelihood (1/M) sum_b sum_records log (U_b rho(t) U_b^dagger)[s, s]
/// and its analytic gradient in t.
class MaxLikObjective {
 public:
  explicit MaxLikObjective(const Dataset& dataset);

  int n_qubits() const { return n_qubits_; }
  double value(const RealVector& t) const;
  RealVector gradient(const RealVector& t) const;

 private:
  struct Term {
    ComplexVector conj_row;  // conj of row s of U_b, as a column
    double weight;           // count / M
  };
  int n_qubits_;
  std::vector<Term> terms_;
};

struct MaxLikConfig {
  int max_iters = 20000;
  double tolerance = 1e-6;  // on the gradient norm of the mean log-likelihood
  std::uint64_t seed = 0;
};

struct MaxLikResult {
  DensityMatrix rho;
  double log_likelihood;  // mean per record
  double gradient_norm;
  int iterations;
  bool converged;
  std::vector<double> trace;  // accepted objective values
};

/// Gradient ascent with backtracking (Armijo) line search, starting from
/// T = I plus a small seeded perturbation. Non-convergence is reported
/// through `converged` and the final gradient norm.
MaxLikResult maxlik_fit(const Dataset& dataset, const MaxLikConfig& config = {});

}  // namespace ndotomo

#endif  // NDOTOMO_MAXLIK_H
