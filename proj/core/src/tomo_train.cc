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

#include "ndotomo/tomo_train.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "ndotomo/gibbs.h"

namespace ndotomo {

namespace {

constexpr double kMinNormalizer = 1e-300;

std::string record_text(const BasisLabel& basis, BitsView outcome) {
  std::string s = basis.str() + " ";
  for (std::uint8_t b : outcome) s.push_back(static_cast<char>('0' + b));
  return s;
}

// sum_r w_r (-Re <grad log rho~>_Q(r)) over the records, full flattened layout.
RealVector data_gradient(std::span<const WeightedRecord> batch, const NdoParams& params) {
  RealVector grad = RealVector::Zero(params.size());
  ComplexVector local(params.size());
  for (const WeightedRecord& rec : batch) {
    const QuasiDistribution q = quasi_distribution(params, *rec.basis, *rec.outcome);
    q.log_abs_normalizer();
    local.setZero();
    for (const auto& term : q.terms) {
      accumulate_log_rho_gradient(params, q.configs[term.s], q.configs[term.s_prime], term.weight,
                                  local);
    }
    grad -= rec.weight * (local / q.normalizer).real();
  }
  return grad;
}

}  // namespace

double QuasiDistribution::log_abs_normalizer() const {
  const double mag = std::abs(normalizer);
  const double log_mag = mag > 0.0 ? log_scale + std::log(mag) : -std::numeric_limits<double>::infinity();
  if (!(log_mag >= std::log(kMinNormalizer))) {
    throw NumericalError("quasiprobability normalizer vanishes (log magnitude " +
                         std::to_string(log_mag) + ")");
  }
  return log_mag;
}

QuasiDistribution quasi_distribution(const NdoParams& params, const BasisLabel& basis,
                                     BitsView outcome, PairSet pairs) {
  const int n = params.n_visible;
  if (static_cast<int>(basis.size()) != n || static_cast<int>(outcome.size()) != n) {
    throw std::invalid_argument("record " + record_text(basis, outcome) + " does not match a " +
                                std::to_string(n) + "-qubit model");
  }
  std::vector<ComplexMatrix> local(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) local[static_cast<std::size_t>(j)] = local_unitary(basis[static_cast<std::size_t>(j)]);

  // Configurations summed over and their factors U_b(sigma^b, s).
  std::vector<Bits> configs;
  if (pairs == PairSet::kFull) {
    check_qubit_cap(n);
    for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) configs.push_back(index_to_bits(s, n));
  } else {
    std::vector<int> rotated;
    for (int j = 0; j < n; ++j) {
      if (basis[static_cast<std::size_t>(j)] != Pauli::Z) rotated.push_back(j);
    }
    const std::size_t count = std::size_t{1} << rotated.size();
    for (std::size_t m = 0; m < count; ++m) {
      Bits s(outcome.begin(), outcome.end());
      for (std::size_t r = 0; r < rotated.size(); ++r) {
        s[static_cast<std::size_t>(rotated[r])] =
            static_cast<std::uint8_t>((m >> (rotated.size() - 1 - r)) & 1u);
      }
      configs.push_back(std::move(s));
    }
  }
  std::vector<Complex> factor(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    Complex f(1.0, 0.0);
    for (int j = 0; j < n; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      f *= local[jj](outcome[jj], configs[c][jj]);
    }
    factor[c] = f;
  }

  QuasiDistribution q;
  q.configs.reserve(configs.size());
  for (const Bits& s : configs) q.configs.push_back(visible_terms(params, s));
  std::vector<Complex> logs;
  logs.reserve(configs.size() * configs.size());
  q.terms.reserve(configs.size() * configs.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < configs.size(); ++a) {
    for (std::size_t b = 0; b < configs.size(); ++b) {
      const Complex l = log_rho_unnormalized(params, q.configs[a], q.configs[b]);
      logs.push_back(l);
      q.terms.push_back({a, b, Complex(0.0, 0.0)});
      if (factor[a] != 0.0 && factor[b] != 0.0) max_log = std::max(max_log, l.real());
    }
  }
  q.log_scale = std::isfinite(max_log) ? max_log : 0.0;
  for (std::size_t i = 0; i < q.terms.size(); ++i) {
    auto& t = q.terms[i];
    t.weight = factor[t.s] * std::conj(factor[t.s_prime]) * std::exp(logs[i] - q.log_scale);
    q.normalizer += t.weight;
  }
  return q;
}

Complex rotated_diagonal(const NdoParams& params, const BasisLabel& basis, BitsView outcome,
                         PairSet pairs) {
  const QuasiDistribution q = quasi_distribution(params, basis, outcome, pairs);
  return q.normalizer * std::exp(q.log_scale - log_partition(params));
}

double nll(const Dataset& dataset, const NdoParams& params) {
  dataset.check();
  if (dataset.n_qubits != params.n_visible) {
    throw std::invalid_argument("nll: dataset and model qubit counts differ");
  }
  const auto counts = dataset.count_table();
  const double log_z = log_partition(params);
  double total = 0.0;
  for (std::size_t g = 0; g < dataset.groups.size(); ++g) {
    const BasisGroup& group = dataset.groups[g];
    const double inv_size = 1.0 / static_cast<double>(group.outcomes.size());
    for (std::size_t i = 0; i < counts[g].size(); ++i) {
      if (counts[g][i] == 0) continue;
      const Bits outcome = index_to_bits(i, dataset.n_qubits);
      const QuasiDistribution q = quasi_distribution(params, group.basis, outcome);
      if (!(q.normalizer.real() > 0.0)) {
        throw NumericalError("non-positive rotated probability for record '" +
                             record_text(group.basis, outcome) + "'");
      }
      const double log_p = q.log_scale + std::log(q.normalizer.real()) - log_z;
      if (!std::isfinite(log_p)) {
        throw NumericalError("rotated probability underflows for record '" +
                             record_text(group.basis, outcome) + "'");
      }
      total += static_cast<double>(counts[g][i]) * inv_size * log_p;
    }
  }
  return -total;
}

std::vector<WeightedRecord> weighted_records(const Dataset& dataset) {
  std::vector<WeightedRecord> out;
  out.reserve(dataset.num_records());
  for (const BasisGroup& g : dataset.groups) {
    const double w = 1.0 / static_cast<double>(g.outcomes.size());
    for (const Bits& o : g.outcomes) out.push_back({&g.basis, &o, w});
  }
  return out;
}

RealVector exact_negative_phase(const NdoParams& params) {
  check_qubit_cap(params.n_visible);
  const std::size_t dim = std::size_t{1} << params.n_visible;
  std::vector<double> logs(dim);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < dim; ++s) {
    const VisibleTerms t = visible_terms(params, index_to_bits(s, params.n_visible));
    logs[s] = log_rho_unnormalized(params, t, t).real();
    max_log = std::max(max_log, logs[s]);
  }
  double z = 0.0;
  for (double& l : logs) {
    l = std::exp(l - max_log);
    z += l;
  }
  RealVector grad = RealVector::Zero(params.size());
  for (std::size_t s = 0; s < dim; ++s) {
    accumulate_diagonal_gradient(params, index_to_bits(s, params.n_visible), logs[s] / z, grad);
  }
  return grad.head(params.amplitude_size());
}

RealVector cd_negative_phase(const NdoParams& params, std::span<const Bits> seeds, int k,
                             Rng& rng) {
  if (seeds.empty()) throw std::invalid_argument("cd_negative_phase: no seed configurations");
  RealVector grad = RealVector::Zero(params.size());
  const double w = 1.0 / static_cast<double>(seeds.size());
  for (const Bits& seed : seeds) {
    const SpinConfig sample = cd_negative_sample(params.amplitude, seed, k, rng);
    accumulate_diagonal_gradient(params, sample.sigma, w, grad);
  }
  return grad.head(params.amplitude_size());
}

RealVector batch_gradient(std::span<const WeightedRecord> batch, double scale,
                          const NdoParams& params, const NegativePhaseConfig& negative, Rng* rng) {
  RealVector grad = data_gradient(batch, params);
  const Eigen::Index na = params.amplitude_size();
  if (negative.mode == NegativePhase::kExact) {
    double total_weight = 0.0;
    for (const WeightedRecord& rec : batch) total_weight += rec.weight;
    grad.head(na) += total_weight * exact_negative_phase(params);
  } else {
    if (rng == nullptr) throw std::invalid_argument("contrastive divergence needs an Rng");
    RealVector model = RealVector::Zero(params.size());
    for (const WeightedRecord& rec : batch) {
      const SpinConfig sample = cd_negative_sample(params.amplitude, *rec.outcome, negative.cd_k, *rng);
      accumulate_diagonal_gradient(params, sample.sigma, rec.weight, model);
    }
    grad.head(na) += model.head(na);
  }
  return scale * grad;
}

RealVector grad_lambda(const Dataset& dataset, const NdoParams& params,
                       const NegativePhaseConfig& negative, Rng* rng) {
  dataset.check();
  const auto records = weighted_records(dataset);
  return batch_gradient(records, 1.0, params, negative, rng).head(params.amplitude_size());
}

RealVector grad_mu(const Dataset& dataset, const NdoParams& params) {
  dataset.check();
  const auto records = weighted_records(dataset);
  return data_gradient(records, params).tail(params.phase.size());
}

OptimizerState::OptimizerState(const OptimizerConfig& config, Eigen::Index n_params)
    : config_(config),
      mean_sq_grad_(RealVector::Zero(n_params)),
      mean_sq_update_(RealVector::Zero(n_params)) {
  if (config.kind == OptimizerKind::kSgd && !(config.learning_rate > 0.0)) {
    throw std::invalid_argument("optimizer: learning rate must be positive");
  }
  if (config.kind == OptimizerKind::kAdaDelta) {
    if (!(config.decay > 0.0 && config.decay < 1.0)) {
      throw std::invalid_argument("optimizer: AdaDelta decay must lie in (0, 1)");
    }
    if (!(config.epsilon > 0.0)) throw std::invalid_argument("optimizer: epsilon must be positive");
  }
}

void OptimizerState::step(RealVector& theta, const RealVector& grad) {
  if (theta.size() != mean_sq_grad_.size() || grad.size() != mean_sq_grad_.size()) {
    throw std::invalid_argument("optimizer: parameter/gradient size mismatch");
  }
  if (config_.kind == OptimizerKind::kSgd) {
    theta -= config_.learning_rate * grad;
    return;
  }
  const double rho = config_.decay;
  const double eps = config_.epsilon;
  mean_sq_grad_ = rho * mean_sq_grad_ + (1.0 - rho) * grad.cwiseAbs2();
  const RealVector update = -((mean_sq_update_.array() + eps).sqrt() /
                              (mean_sq_grad_.array() + eps).sqrt() * grad.array())
                                 .matrix();
  mean_sq_update_ = rho * mean_sq_update_ + (1.0 - rho) * update.cwiseAbs2();
  theta += update;
}

namespace {

struct Split {
  Dataset train;
  Dataset holdout;
};

Split split_holdout(const Dataset& data, double fraction, Rng rng) {
  const std::size_t total = data.num_records();
  const auto n_hold = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(total)));
  if (n_hold == 0 || n_hold >= total) {
    throw std::invalid_argument("holdout fraction leaves an empty training or holdout set");
  }
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  shuffle(order.begin(), order.end(), rng);
  std::vector<bool> held(total, false);
  for (std::size_t i = 0; i < n_hold; ++i) held[order[i]] = true;
  Split out;
  out.train.n_qubits = out.holdout.n_qubits = data.n_qubits;
  std::size_t at = 0;
  for (const BasisGroup& g : data.groups) {
    for (const Bits& o : g.outcomes) {
      (held[at++] ? out.holdout : out.train).add(g.basis, o);
    }
  }
  return out;
}

}  // namespace

TrainReport train(const Dataset& dataset, const TrainConfig& config, std::ostream* progress) {
  dataset.check();
  check_qubit_cap(dataset.n_qubits);
  if (config.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (config.batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");
  if (config.n_hidden < 0 || config.n_aux < 0) {
    throw std::invalid_argument("train: unit counts must be non-negative");
  }
  if (config.negative.mode == NegativePhase::kContrastiveDivergence && config.negative.cd_k < 1) {
    throw std::invalid_argument("train: cd_k must be >= 1");
  }
  if (!(config.holdout >= 0.0 && config.holdout < 1.0)) {
    throw std::invalid_argument("train: holdout fraction must lie in [0, 1)");
  }
  if (config.reference && config.reference->num_qubits() != dataset.n_qubits) {
    throw std::invalid_argument("train: reference state has the wrong qubit count");
  }

  const Rng root(config.seed);
  Rng init_rng = root.split("init");
  Rng shuffle_rng = root.split("shuffle");
  Rng cd_rng = root.split("cd");

  std::optional<Split> split;
  if (config.holdout > 0.0) split = split_holdout(dataset, config.holdout, root.split("holdout"));
  const Dataset& train_set = split ? split->train : dataset;

  NdoParams params = NdoParams::initialize(dataset.n_qubits, config.n_hidden, config.n_aux,
                                           config.init_width, init_rng);
  RealVector theta = params.flatten();
  OptimizerState optimizer(config.optimizer, theta.size());
  std::vector<WeightedRecord> records = weighted_records(train_set);
  const double n_records = static_cast<double>(records.size());

  TrainReport report;
  report.selected_on_holdout = split.has_value();
  report.best_params = params;
  double best = std::numeric_limits<double>::infinity();
  long updates = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.max_updates > 0 && updates >= config.max_updates) break;
    try {
      shuffle(records.begin(), records.end(), shuffle_rng);
      for (std::size_t start = 0; start < records.size(); start += static_cast<std::size_t>(config.batch_size)) {
        const std::size_t len = std::min(records.size() - start, static_cast<std::size_t>(config.batch_size));
        const std::span<const WeightedRecord> batch(records.data() + start, len);
        const RealVector grad =
            batch_gradient(batch, n_records / static_cast<double>(len), params, config.negative, &cd_rng);
        optimizer.step(theta, grad);
        params.assign(theta);
        ++updates;
      }
      if (!theta.allFinite()) throw NumericalError("parameters became non-finite");

      EpochStats stats;
      stats.epoch = epoch;
      stats.nll = nll(train_set, params);
      if (split) stats.holdout_nll = nll(split->holdout, params);
      if (config.reference) stats.fidelity = fidelity(materialize(params), *config.reference);
      report.epochs.push_back(stats);

      const double score = report.selection_nll(stats);
      if (score < best) {
        best = score;
        report.best_epoch = epoch;
        report.best_params = params;
      }
      if (progress) {
        *progress << "epoch " << epoch << "/" << config.epochs << " nll " << std::setprecision(8)
                   << stats.nll;
        if (stats.holdout_nll) *progress << " holdout_nll " << *stats.holdout_nll;
        if (stats.fidelity) *progress << " fidelity " << std::fixed << std::setprecision(6)
                                      << *stats.fidelity << std::defaultfloat;
        *progress << '\n';
      }
    } catch (const NumericalError& e) {
      throw NumericalError("epoch " + std::to_string(epoch) + ": " + e.what());
    }
  }
  return report;
}

}  // namespace ndotomo
