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

#ifndef NDOTOMO_TOMO_TRAIN_H
#define NDOTOMO_TOMO_TRAIN_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ndotomo/dataset.h"
#include "ndotomo/ndo.h"
#include "ndotomo/rng.h"

namespace ndotomo {

// ---------------------------------------------------------------------------
// Quasiprobability sums over rotated bases.
//
// For a record sigma^b measured in basis b,
//   Q(s, s') = U_b(sigma^b, s) rho~(s, s') conj(U_b(sigma^b, s')).
// U_b is diagonal on sites measured in Z, so only the 4^t pairs that agree
// with sigma^b on those sites contribute (t = number of X/Y sites).
// ---------------------------------------------------------------------------

enum class PairSet {
  kRestricted,  // the 4^t contributing pairs
  kFull,        // all 4^N pairs; used to cross-check the restriction
};

/// Q(s, s') = exp(log_scale) * term.weight over an enumerated set of pairs.
struct QuasiDistribution {
  struct Term {
    std::size_t s;
    std::size_t s_prime;
    Complex weight;
  };
  std::vector<VisibleTerms> configs;
  std::vector<Term> terms;
  double log_scale = 0.0;
  Complex normalizer{0.0, 0.0};  // sum of weights

  /// log |sum Q|; throws NumericalError when the sum is below 1e-300.
  double log_abs_normalizer() const;
};

QuasiDistribution quasi_distribution(const NdoParams& params, const BasisLabel& basis,
                                     BitsView outcome, PairSet pairs = PairSet::kRestricted);

/// sum Q(s, s') f(s, s') / sum Q(s, s') for an integrand returning
/// gradient-shaped complex vectors (or scalars).
template <class Integrand>
auto q_average(const NdoParams& params, const BasisLabel& basis, BitsView outcome,
               Integrand&& integrand, PairSet pairs = PairSet::kRestricted) {
  const QuasiDistribution q = quasi_distribution(params, basis, outcome, pairs);
  q.log_abs_normalizer();
  using Value = std::decay_t<decltype(integrand(q.configs[0], q.configs[0]))>;
  Value acc = integrand(q.configs[q.terms[0].s], q.configs[q.terms[0].s_prime]) * q.terms[0].weight;
  for (std::size_t i = 1; i < q.terms.size(); ++i) {
    acc += integrand(q.configs[q.terms[i].s], q.configs[q.terms[i].s_prime]) * q.terms[i].weight;
  }
  return Value(acc / q.normalizer);
}

/// Normalized rho^b(sigma^b, sigma^b) = (U_b rho U_b^dagger)[sigma^b, sigma^b].
Complex rotated_diagonal(const NdoParams& params, const BasisLabel& basis, BitsView outcome,
                         PairSet pairs = PairSet::kRestricted);

/// Average negative log-likelihood
///   -sum_b |D_b|^{-1} sum_{sigma in D_b} log rho^b(sigma, sigma).
/// Throws NumericalError naming the record if a rotated probability is not
/// positive.
double nll(const Dataset& dataset, const NdoParams& params);

// ---------------------------------------------------------------------------
// Gradients of nll. All gradient vectors use NdoParams' flattened layout;
// grad_lambda / grad_mu return only their own block.
// ---------------------------------------------------------------------------

enum class NegativePhase { kExact, kContrastiveDivergence };

struct NegativePhaseConfig {
  NegativePhase mode = NegativePhase::kExact;
  int cd_k = 10;
};

/// One record together with its per-basis weight 1/|D_b|.
struct WeightedRecord {
  const BasisLabel* basis;
  const Bits* outcome;
  double weight;
};

std::vector<WeightedRecord> weighted_records(const Dataset& dataset);

/// scale * sum_r w_r (-Re<grad log rho~>_Q(r) + grad log Z), where grad log Z
/// is the exact model average or, in CD mode, grad log rho~(s, s) at a CD-k
/// sample seeded at the record. With scale = 1 over all records this is the
/// exact gradient of nll. `rng` is required in CD mode.
RealVector batch_gradient(std::span<const WeightedRecord> batch, double scale,
                          const NdoParams& params, const NegativePhaseConfig& negative,
                          Rng* rng = nullptr);

RealVector grad_lambda(const Dataset& dataset, const NdoParams& params,
                       const NegativePhaseConfig& negative = {}, Rng* rng = nullptr);
RealVector grad_mu(const Dataset& dataset, const NdoParams& params);

/// Exact <grad_lambda log rho~(s, s)> under the normalized diagonal of rho
/// (amplitude block only). Requires the enumeration cap.
RealVector exact_negative_phase(const NdoParams& params);

/// Mean of grad_lambda log rho~(s, s) over CD-k samples seeded at each
/// outcome in `seeds`.
RealVector cd_negative_phase(const NdoParams& params, std::span<const Bits> seeds, int k,
                             Rng& rng);

// ---------------------------------------------------------------------------
// Optimizers.
// ---------------------------------------------------------------------------

enum class OptimizerKind { kSgd, kAdaDelta };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdaDelta;
  double learning_rate = 0.01;  // sgd
  double decay = 0.95;          // adadelta rho
  double epsilon = 1e-6;        // adadelta epsilon
};

class OptimizerState {
 public:
  OptimizerState(const OptimizerConfig& config, Eigen::Index n_params);

  /// theta <- theta - eta g (sgd), or the AdaDelta update.
  void step(RealVector& theta, const RealVector& grad);

  const OptimizerConfig& config() const { return config_; }
  const RealVector& mean_sq_grad() const { return mean_sq_grad_; }
  const RealVector& mean_sq_update() const { return mean_sq_update_; }

 private:
  OptimizerConfig config_;
  RealVector mean_sq_grad_;
  RealVector mean_sq_update_;
};

// ---------------------------------------------------------------------------
// Training loop.
// ---------------------------------------------------------------------------

struct TrainConfig {
  int n_hidden = 1;
  int n_aux = 2;
  int epochs = 1000;
  /// When positive, caps the number of parameter updates: training stops
  /// after the first epoch that reaches this many minibatch steps.
  long max_updates = 0;
  int batch_size = 10;
  OptimizerConfig optimizer;
  NegativePhaseConfig negative;
  std::uint64_t seed = 0;
  double init_width = 0.01;
  /// Fraction of records held out for model selection; 0 selects on the
  /// training NLL.
  double holdout = 0.0;
  std::optional<DensityMatrix> reference;
};

struct EpochStats {
  int epoch = 0;
  double nll = 0.0;                    // training-set NLL
  std::optional<double> holdout_nll;   // set when holdout > 0
  std::optional<double> fidelity;      // set when a reference state is given
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  NdoParams best_params;
  int best_epoch = 0;
  bool selected_on_holdout = false;

  /// The NLL trace used for model selection.
  double selection_nll(const EpochStats& e) const {
    return selected_on_holdout ? *e.holdout_nll : e.nll;
  }
};

/// Trains an NDO from scratch. Records are shuffled into minibatches each
/// epoch; the returned best_params is the snapshot with the lowest selection
/// NLL. Progress lines go to `progress` when given. Numerical failures are
/// rethrown as NumericalError with the epoch number prepended.
TrainReport train(const Dataset& dataset, const TrainConfig& config,
                  std::ostream* progress = nullptr);

}  // namespace ndotomo

#endif  // NDOTOMO_TOMO_TRAIN_H
