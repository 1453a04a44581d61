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

#include "ndotomo/gibbs.h"

#include <cmath>
#include <string>

namespace ndotomo {

namespace {

// Exponent guard for the sqrt(p(s', a) / p(s, a)) ratios.
constexpr double kRatioGuard = 500.0;

void sample_into(const RealVector& probs, Bits& out, Rng& rng) {
  out.resize(static_cast<std::size_t>(probs.size()));
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    out[static_cast<std::size_t>(i)] = rng.bernoulli(probs[i]) ? 1 : 0;
  }
}

}  // namespace

RealVector conditional_hidden(const RbmParams& net, BitsView sigma) {
  RealVector p = net.hidden_bias;
  for (Eigen::Index i = 0; i < net.weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < net.weights.cols(); ++j) {
      if (sigma[static_cast<std::size_t>(j)]) p[i] += net.weights(i, j);
    }
    p[i] = logistic(p[i]);
  }
  return p;
}

RealVector conditional_aux(const RbmParams& net, BitsView sigma) {
  RealVector p = net.aux_bias.size() != 0 ? net.aux_bias
                                          : RealVector::Zero(net.aux_weights.rows()).eval();
  for (Eigen::Index k = 0; k < net.aux_weights.rows(); ++k) {
    for (Eigen::Index j = 0; j < net.aux_weights.cols(); ++j) {
      if (sigma[static_cast<std::size_t>(j)]) p[k] += net.aux_weights(k, j);
    }
    p[k] = logistic(p[k]);
  }
  return p;
}

RealVector conditional_visible(const RbmParams& net, BitsView hidden, BitsView aux) {
  RealVector p = net.visible_bias;
  for (Eigen::Index i = 0; i < net.weights.rows(); ++i) {
    if (hidden[static_cast<std::size_t>(i)]) p += net.weights.row(i).transpose();
  }
  for (Eigen::Index k = 0; k < net.aux_weights.rows(); ++k) {
    if (aux[static_cast<std::size_t>(k)]) p += net.aux_weights.row(k).transpose();
  }
  for (Eigen::Index j = 0; j < p.size(); ++j) p[j] = logistic(p[j]);
  return p;
}

ChainState start_chain(const RbmParams& net, BitsView sigma, std::uint64_t seed) {
  if (static_cast<Eigen::Index>(sigma.size()) != net.visible_bias.size()) {
    throw std::invalid_argument("start_chain: sigma has the wrong length");
  }
  ChainState state;
  state.rng_seed = seed;
  state.rng = Rng(seed);
  state.config.sigma.assign(sigma.begin(), sigma.end());
  sample_into(conditional_hidden(net, state.config.sigma), state.config.hidden, state.rng);
  sample_into(conditional_aux(net, state.config.sigma), state.config.aux, state.rng);
  return state;
}

void gibbs_sweep(ChainState& state, const RbmParams& net) {
  SpinConfig& c = state.config;
  sample_into(conditional_hidden(net, c.sigma), c.hidden, state.rng);
  sample_into(conditional_aux(net, c.sigma), c.aux, state.rng);
  sample_into(conditional_visible(net, c.hidden, c.aux), c.sigma, state.rng);
  ++state.sweep_count;
}

SpinConfig cd_negative_sample(const RbmParams& net, BitsView data_sigma, int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("cd_negative_sample: k must be >= 1");
  if (static_cast<Eigen::Index>(data_sigma.size()) != net.visible_bias.size()) {
    throw std::invalid_argument("cd_negative_sample: sigma has the wrong length");
  }
  SpinConfig c;
  c.sigma.assign(data_sigma.begin(), data_sigma.end());
  for (int step = 0; step < k; ++step) {
    sample_into(conditional_hidden(net, c.sigma), c.hidden, rng);
    sample_into(conditional_aux(net, c.sigma), c.aux, rng);
    sample_into(conditional_visible(net, c.hidden, c.aux), c.sigma, rng);
  }
  return c;
}

SparseObservable SparseObservable::from_dense(const ComplexMatrix& op, double drop_tol) {
  if (op.rows() != op.cols() || op.rows() == 0 || (op.rows() & (op.rows() - 1)) != 0) {
    throw std::invalid_argument("observable must be square with power-of-two dimension");
  }
  SparseObservable o;
  while ((Eigen::Index{1} << o.n_qubits) < op.rows()) ++o.n_qubits;
  o.columns.resize(static_cast<std::size_t>(op.cols()));
  for (Eigen::Index s = 0; s < op.cols(); ++s) {
    for (Eigen::Index sp = 0; sp < op.rows(); ++sp) {
      if (std::abs(op(sp, s)) > drop_tol) {
        o.columns[static_cast<std::size_t>(s)].emplace_back(static_cast<std::size_t>(sp), op(sp, s));
      }
    }
  }
  return o;
}

SparseObservable SparseObservable::identity(int n_qubits) {
  check_qubit_cap(n_qubits);
  SparseObservable o;
  o.n_qubits = n_qubits;
  o.columns.resize(std::size_t{1} << n_qubits);
  for (std::size_t s = 0; s < o.columns.size(); ++s) o.columns[s].emplace_back(s, Complex(1.0, 0.0));
  return o;
}

SparseObservable SparseObservable::pauli(std::string_view sites) {
  const int n = static_cast<int>(sites.size());
  check_qubit_cap(n);
  SparseObservable o;
  o.n_qubits = n;
  o.columns.resize(std::size_t{1} << n);
  for (std::size_t s = 0; s < o.columns.size(); ++s) {
    std::size_t target = s;
    Complex value(1.0, 0.0);
    for (int j = 0; j < n; ++j) {
      const std::size_t mask = std::size_t{1} << (n - 1 - j);
      const bool bit = (s & mask) != 0;
      switch (sites[static_cast<std::size_t>(j)]) {
        case 'I':
          break;
        case 'X':
          target ^= mask;
          break;
        case 'Y':
          target ^= mask;
          value *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
          break;
        case 'Z':
          if (bit) value = -value;
          break;
        default:
          throw std::invalid_argument(std::string("unknown Pauli '") + sites[static_cast<std::size_t>(j)] + "'");
      }
    }
    o.columns[s].emplace_back(target, value);
  }
  return o;
}

Complex local_observable(const NdoParams& params, const SparseObservable& observable,
                         BitsView sigma, BitsView aux) {
  const std::size_t s = bits_to_index(sigma);
  const double lp = log_marginal(params.amplitude, sigma, aux);
  const double phase = 0.5 * log_marginal(params.phase, sigma, aux);
  Complex acc(0.0, 0.0);
  for (const auto& [sp, value] : observable.columns[s]) {
    if (sp == s) {
      acc += value;
      continue;
    }
    const Bits other = index_to_bits(sp, params.n_visible);
    const double exponent = 0.5 * (log_marginal(params.amplitude, other, aux) - lp);
    if (std::abs(exponent) > kRatioGuard) {
      throw NumericalError("local observable ratio exponent " + std::to_string(exponent) +
                           " exceeds the guard");
    }
    const double dphase = phase - 0.5 * log_marginal(params.phase, other, aux);
    acc += std::polar(std::exp(exponent), dphase) * value;
  }
  return acc;
}

ObservableEstimate estimate_observable(const NdoParams& params, const SparseObservable& observable,
                                       const SamplerConfig& config) {
  if (config.n_samples == 0) throw std::invalid_argument("estimate_observable: zero samples");
  if (observable.n_qubits != params.n_visible) {
    throw std::invalid_argument("estimate_observable: observable acts on the wrong qubit count");
  }
  Rng init(derive_seed(config.seed, "chain-init"));
  Bits sigma(static_cast<std::size_t>(params.n_visible));
  for (auto& b : sigma) b = init.bernoulli(0.5) ? 1 : 0;
  ChainState chain = start_chain(params.amplitude, sigma, derive_seed(config.seed, "chain"));
  for (std::size_t i = 0; i < config.burn_in; ++i) gibbs_sweep(chain, params.amplitude);

  const std::size_t n_batches =
      std::max<std::size_t>(1, std::min(config.n_batches, config.n_samples));
  std::vector<Complex> batch_sum(n_batches, Complex(0.0, 0.0));
  std::vector<std::size_t> batch_count(n_batches, 0);
  Complex total(0.0, 0.0);
  for (std::size_t i = 0; i < config.n_samples; ++i) {
    gibbs_sweep(chain, params.amplitude);
    const Complex v = local_observable(params, observable, chain.config.sigma, chain.config.aux);
    const std::size_t b = i * n_batches / config.n_samples;
    batch_sum[b] += v;
    ++batch_count[b];
    total += v;
  }
  ObservableEstimate est;
  est.n_samples = config.n_samples;
  est.mean = total / static_cast<double>(config.n_samples);
  if (n_batches > 1) {
    double var_re = 0.0;
    double var_im = 0.0;
    for (std::size_t b = 0; b < n_batches; ++b) {
      const Complex m = batch_sum[b] / static_cast<double>(batch_count[b]);
      var_re += (m.real() - est.mean.real()) * (m.real() - est.mean.real());
      var_im += (m.imag() - est.mean.imag()) * (m.imag() - est.mean.imag());
    }
    const double denom = static_cast<double>(n_batches) * static_cast<double>(n_batches - 1);
    est.standard_error = std::sqrt((var_re + var_im) / denom);
  }
  return est;
}

}  // namespace ndotomo
