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

#ifndef NDOTOMO_GIBBS_H
#define NDOTOMO_GIBBS_H

#include <cstdint>
#include <utility>
#include <vector>

#include "ndotomo/ndo.h"
#include "ndotomo/rng.h"

namespace ndotomo {

// Block Gibbs sampling of p_lambda(sigma, a, h). Only the amplitude network
// enters: the phase network does not change the sampled distribution.

/// P(h_i = 1 | sigma) = logistic(W_i sigma + c_i).
RealVector conditional_hidden(const RbmParams& net, BitsView sigma);

/// P(a_k = 1 | sigma) = logistic(U_k sigma + d_k).
RealVector conditional_aux(const RbmParams& net, BitsView sigma);

/// P(sigma_j = 1 | h, a) = logistic(sum_i h_i W_ij + sum_k a_k U_kj + b_j).
RealVector conditional_visible(const RbmParams& net, BitsView hidden, BitsView aux);

struct ChainState {
  SpinConfig config;
  std::uint64_t rng_seed = 0;
  std::uint64_t sweep_count = 0;
  Rng rng{0};
};

/// Chain positioned at `sigma` with hidden and auxiliary units drawn from
/// their conditionals. The chain owns the stream Rng(seed).
ChainState start_chain(const RbmParams& net, BitsView sigma, std::uint64_t seed);

/// One block update in the fixed order h -> a -> sigma.
void gibbs_sweep(ChainState& state, const RbmParams& net);

/// Contrastive-divergence negative sample: a chain seeded at the data
/// configuration and advanced k >= 1 sweeps. Draws from `rng`.
SpinConfig cd_negative_sample(const RbmParams& net, BitsView data_sigma, int k, Rng& rng);

/// Sparse operator stored by column: columns[s] lists (s', O_{s' s}) for
/// every nonzero entry in column s.
struct SparseObservable {
  int n_qubits = 0;
  std::vector<std::vector<std::pair<std::size_t, Complex>>> columns;

  static SparseObservable from_dense(const ComplexMatrix& op, double drop_tol = 0.0);
  static SparseObservable identity(int n_qubits);
  /// Pauli string such as "ZI" or "XX" (characters I, X, Y, Z per site).
  static SparseObservable pauli(std::string_view sites);
};

struct SamplerConfig {
  std::size_t n_samples = 10000;
  std::size_t burn_in = 1000;
  std::size_t n_batches = 30;
  std::uint64_t seed = 0;
};

struct ObservableEstimate {
  Complex mean{0.0, 0.0};
  double standard_error = 0.0;  // batch means over the real and imaginary parts
  std::size_t n_samples = 0;
};

/// Monte Carlo estimate of Tr(rho O) from the local observable
///   O_L(sigma, a) = sum_s' sqrt(p_l(s', a) / p_l(sigma, a))
///                   * exp(i (phi_m(sigma, a) - phi_m(s', a))) O_{s' sigma}
/// averaged over Gibbs samples of |psi(sigma, a)|^2.
ObservableEstimate estimate_observable(const NdoParams& params, const SparseObservable& observable,
                                       const SamplerConfig& config);

/// Local observable value at one sample; exposed for testing.
Complex local_observable(const NdoParams& params, const SparseObservable& observable,
                         BitsView sigma, BitsView aux);

}  // namespace ndotomo

#endif  // NDOTOMO_GIBBS_H
