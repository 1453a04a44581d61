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

#include "ndotomo/maxlik.h"

#include <cmath>
#include <limits>

#include "ndotomo/rng.h"

namespace ndotomo {

namespace {

Eigen::Index dim_of(int n_qubits) {
  check_qubit_cap(n_qubits);
  return Eigen::Index{1} << n_qubits;
}

}  // namespace

std::size_t cholesky_size(int n_qubits) {
  const auto d = static_cast<std::size_t>(dim_of(n_qubits));
  return d * d;
}

ComplexMatrix cholesky_factor(const RealVector& t, int n_qubits) {
  const Eigen::Index d = dim_of(n_qubits);
  if (static_cast<std::size_t>(t.size()) != cholesky_size(n_qubits)) {
    throw std::invalid_argument("cholesky parameters: expected " +
                                std::to_string(cholesky_size(n_qubits)) + " values");
  }
  ComplexMatrix lower = ComplexMatrix::Zero(d, d);
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < d; ++i) lower(i, i) = t[at++];
  for (Eigen::Index i = 1; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      lower(i, j) = Complex(t[at], t[at + 1]);
      at += 2;
    }
  }
  return lower;
}

RealVector cholesky_params(const ComplexMatrix& lower) {
  const Eigen::Index d = lower.rows();
  RealVector t(d * d);
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < d; ++i) t[at++] = lower(i, i).real();
  for (Eigen::Index i = 1; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      t[at++] = lower(i, j).real();
      t[at++] = lower(i, j).imag();
    }
  }
  return t;
}

DensityMatrix rho_from_cholesky(const RealVector& t, int n_qubits) {
  const ComplexMatrix lower = cholesky_factor(t, n_qubits);
  const double norm = lower.squaredNorm();
  if (norm == 0.0) throw std::invalid_argument("cholesky parameters are all zero");
  ComplexMatrix rho = lower.adjoint() * lower / norm;
  // T^dagger T is Hermitian up to rounding; symmetrize so the result is exact.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix::from_matrix(std::move(rho));
}

MaxLikObjective::MaxLikObjective(const Dataset& dataset) : n_qubits_(dataset.n_qubits) {
  dataset.check();
  const auto counts = dataset.count_table();
  const double total = static_cast<double>(dataset.num_records());
  for (std::size_t g = 0; g < dataset.groups.size(); ++g) {
    const ComplexMatrix u = basis_rotation(dataset.groups[g].basis);
    for (std::size_t i = 0; i < counts[g].size(); ++i) {
      if (counts[g][i] == 0) continue;
      terms_.push_back({u.row(static_cast<Eigen::Index>(i)).adjoint(),
                        static_cast<double>(counts[g][i]) / total});
    }
  }
}

double MaxLikObjective::value(const RealVector& t) const {
  const ComplexMatrix lower = cholesky_factor(t, n_qubits_);
  const double log_norm = std::log(lower.squaredNorm());
  double acc = 0.0;
  for (const Term& term : terms_) {
    acc += term.weight * (std::log((lower * term.conj_row).squaredNorm()) - log_norm);
  }
  return acc;
}

RealVector MaxLikObjective::gradient(const RealVector& t) const {
  const ComplexMatrix lower = cholesky_factor(t, n_qubits_);
  const Eigen::Index d = lower.rows();
  // Complex gradient G = dL/dRe T + i dL/dIm T. For f = |T u^dagger|^2 it is
  // 2 x u with x = T u^dagger; for Tr(T^dagger T) it is 2 T.
  ComplexMatrix g = ComplexMatrix::Zero(d, d);
  double weight_sum = 0.0;
  for (const Term& term : terms_) {
    const ComplexVector x = lower * term.conj_row;
    const double f = x.squaredNorm();
    g += (2.0 * term.weight / f) * x * term.conj_row.adjoint();
    weight_sum += term.weight;
  }
  g -= (2.0 * weight_sum / lower.squaredNorm()) * lower;
  return cholesky_params(g);
}

MaxLikResult maxlik_fit(const Dataset& dataset, const MaxLikConfig& config) {
  if (config.max_iters < 1) throw std::invalid_argument("maxlik: max_iters must be >= 1");
  const MaxLikObjective objective(dataset);
  const int n = dataset.n_qubits;
  const Eigen::Index d = dim_of(n);

  Rng rng(derive_seed(config.seed, "maxlik"));
  ComplexMatrix start = ComplexMatrix::Identity(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      start(i, j) += Complex(rng.uniform(-0.01, 0.01), i == j ? 0.0 : rng.uniform(-0.01, 0.01));
    }
  }
  RealVector t = cholesky_params(start);
  double value = objective.value(t);
  RealVector grad = objective.gradient(t);
  double step = 1.0;
  int iter = 0;
  bool converged = false;
  std::vector<double> trace{value};

  for (; iter < config.max_iters; ++iter) {
    const double gnorm2 = grad.squaredNorm();
    if (std::sqrt(gnorm2) < config.tolerance) {
      converged = true;
      break;
    }
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      const RealVector trial = t + step * grad;
      const double trial_value = objective.value(trial);
      if (std::isfinite(trial_value) && trial_value >= value + 1e-4 * step * gnorm2) {
        t = trial;
        value = trial_value;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    trace.push_back(value);
    grad = objective.gradient(t);
    step = std::min(step * 2.0, 1e6);
  }
  return MaxLikResult{rho_from_cholesky(t, n), value, grad.norm(), iter, converged, std::move(trace)};
}

}  // namespace ndotomo
