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

#include "ndotomo/ndo.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ndotomo {

namespace {

constexpr double kExpGuard = 700.0;
constexpr double kSingularTol = 1e-14;

double dot(const RealVector& row_or_vec, BitsView sigma) {
  double acc = 0.0;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    if (sigma[j]) acc += row_or_vec[static_cast<Eigen::Index>(j)];
  }
  return acc;
}

// W sigma + bias, for a row-major view of W.
RealVector affine(const RealMatrix& w, BitsView sigma, const RealVector* bias) {
  RealVector out = bias ? *bias : RealVector::Zero(w.rows());
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      if (sigma[static_cast<std::size_t>(j)]) out[i] += w(i, j);
    }
  }
  return out;
}

double softplus_sum(const RealVector& pre) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < pre.size(); ++i) acc += softplus(pre[i]);
  return acc;
}

void check_length(BitsView bits, int expected, const char* what) {
  if (static_cast<int>(bits.size()) != expected) {
    throw std::invalid_argument(std::string(what) + " has length " + std::to_string(bits.size()) +
                                ", expected " + std::to_string(expected));
  }
}

Complex mixing_argument(const NdoParams& params, const VisibleTerms& s, const VisibleTerms& sp,
                        Eigen::Index k) {
  return {0.5 * (s.amp_aux[k] + sp.amp_aux[k]) + params.amplitude.aux_bias[k],
          0.5 * (s.phase_aux[k] - sp.phase_aux[k])};
}

void check_shape(const RealMatrix& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw std::invalid_argument(std::string("parameter ") + what + " has shape " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string("parameter ") + what + " has non-finite entries");
  }
}

void copy_out(const RbmParams& net, RealVector& flat, Eigen::Index& at) {
  for (Eigen::Index i = 0; i < net.weights.rows(); ++i)
    for (Eigen::Index j = 0; j < net.weights.cols(); ++j) flat[at++] = net.weights(i, j);
  for (Eigen::Index i = 0; i < net.aux_weights.rows(); ++i)
    for (Eigen::Index j = 0; j < net.aux_weights.cols(); ++j) flat[at++] = net.aux_weights(i, j);
  for (Eigen::Index j = 0; j < net.visible_bias.size(); ++j) flat[at++] = net.visible_bias[j];
  for (Eigen::Index i = 0; i < net.hidden_bias.size(); ++i) flat[at++] = net.hidden_bias[i];
  for (Eigen::Index k = 0; k < net.aux_bias.size(); ++k) flat[at++] = net.aux_bias[k];
}

void copy_in(RbmParams& net, const RealVector& flat, Eigen::Index& at) {
  for (Eigen::Index i = 0; i < net.weights.rows(); ++i)
    for (Eigen::Index j = 0; j < net.weights.cols(); ++j) net.weights(i, j) = flat[at++];
  for (Eigen::Index i = 0; i < net.aux_weights.rows(); ++i)
    for (Eigen::Index j = 0; j < net.aux_weights.cols(); ++j) net.aux_weights(i, j) = flat[at++];
  for (Eigen::Index j = 0; j < net.visible_bias.size(); ++j) net.visible_bias[j] = flat[at++];
  for (Eigen::Index i = 0; i < net.hidden_bias.size(); ++i) net.hidden_bias[i] = flat[at++];
  for (Eigen::Index k = 0; k < net.aux_bias.size(); ++k) net.aux_bias[k] = flat[at++];
}

}  // namespace

NdoParams NdoParams::zeros(int n_visible, int n_hidden, int n_aux) {
  if (n_visible < 1 || n_hidden < 0 || n_aux < 0) {
    throw std::invalid_argument("NdoParams: need n_visible >= 1 and non-negative n_hidden, n_aux");
  }
  NdoParams p;
  p.n_visible = n_visible;
  p.n_hidden = n_hidden;
  p.n_aux = n_aux;
  for (RbmParams* net : {&p.amplitude, &p.phase}) {
    net->weights = RealMatrix::Zero(n_hidden, n_visible);
    net->aux_weights = RealMatrix::Zero(n_aux, n_visible);
    net->visible_bias = RealVector::Zero(n_visible);
    net->hidden_bias = RealVector::Zero(n_hidden);
  }
  p.amplitude.aux_bias = RealVector::Zero(n_aux);
  p.phase.aux_bias = RealVector();
  return p;
}

NdoParams NdoParams::initialize(int n_visible, int n_hidden, int n_aux, double width, Rng& rng) {
  NdoParams p = zeros(n_visible, n_hidden, n_aux);
  const double half = 0.5 * width;
  for (RbmParams* net : {&p.amplitude, &p.phase}) {
    for (Eigen::Index i = 0; i < net->weights.rows(); ++i)
      for (Eigen::Index j = 0; j < net->weights.cols(); ++j)
        net->weights(i, j) = rng.uniform(-half, half);
    for (Eigen::Index k = 0; k < net->aux_weights.rows(); ++k)
      for (Eigen::Index j = 0; j < net->aux_weights.cols(); ++j)
        net->aux_weights(k, j) = rng.uniform(-half, half);
  }
  return p;
}

void NdoParams::check() const {
  if (n_visible < 1 || n_hidden < 0 || n_aux < 0) {
    throw std::invalid_argument("NdoParams: invalid layer sizes");
  }
  for (const RbmParams* net : {&amplitude, &phase}) {
    check_shape(net->weights, n_hidden, n_visible, "W");
    check_shape(net->aux_weights, n_aux, n_visible, "U");
    check_shape(net->visible_bias, n_visible, 1, "b");
    check_shape(net->hidden_bias, n_hidden, 1, "c");
  }
  check_shape(amplitude.aux_bias, n_aux, 1, "d");
  if (phase.aux_bias.size() != 0) {
    throw std::invalid_argument("NdoParams: the phase network has no auxiliary bias");
  }
}

RealVector NdoParams::flatten() const {
  RealVector flat(size());
  Eigen::Index at = 0;
  copy_out(amplitude, flat, at);
  copy_out(phase, flat, at);
  return flat;
}

void NdoParams::assign(const RealVector& flat) {
  if (flat.size() != size()) {
    throw std::invalid_argument("NdoParams::assign: expected " + std::to_string(size()) +
                                " values, got " + std::to_string(flat.size()));
  }
  Eigen::Index at = 0;
  copy_in(amplitude, flat, at);
  copy_in(phase, flat, at);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Complex softplus(Complex z) {
  if (z.real() > 30.0) {
    Complex r = z + std::log(1.0 + std::exp(-z));
    return {r.real(), std::remainder(r.imag(), 2.0 * std::numbers::pi)};
  }
  const Complex w = 1.0 + std::exp(z);
  if (std::abs(w) < kSingularTol) {
    throw NumericalError("complex softplus is singular: |1 + exp(z)| < 1e-14 at z = (" +
                         std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
  }
  return std::log(w);
}

Complex logistic(Complex z) {
  if (z.real() >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const Complex e = std::exp(z);
  return e / (1.0 + e);
}

double gamma(const RbmParams& net, BitsView sigma, BitsView sigma_prime, Sign sign) {
  const int n = static_cast<int>(net.visible_bias.size());
  check_length(sigma, n, "sigma");
  check_length(sigma_prime, n, "sigma'");
  const double s = sign == Sign::kPlus ? 1.0 : -1.0;
  const double a = softplus_sum(affine(net.weights, sigma, &net.hidden_bias));
  const double b = softplus_sum(affine(net.weights, sigma_prime, &net.hidden_bias));
  double bias = 0.0;
  for (int j = 0; j < n; ++j) {
    bias += net.visible_bias[j] * (sigma[static_cast<std::size_t>(j)] +
                                   s * sigma_prime[static_cast<std::size_t>(j)]);
  }
  return 0.5 * (a + s * b + bias);
}

Complex pi_term(const NdoParams& params, BitsView sigma, BitsView sigma_prime) {
  check_length(sigma, params.n_visible, "sigma");
  check_length(sigma_prime, params.n_visible, "sigma'");
  Complex acc = 0.0;
  for (int k = 0; k < params.n_aux; ++k) {
    double re = params.amplitude.aux_bias[k];
    double im = 0.0;
    for (int j = 0; j < params.n_visible; ++j) {
      const auto sj = static_cast<double>(sigma[static_cast<std::size_t>(j)]);
      const auto tj = static_cast<double>(sigma_prime[static_cast<std::size_t>(j)]);
      re += 0.5 * params.amplitude.aux_weights(k, j) * (sj + tj);
      im += 0.5 * params.phase.aux_weights(k, j) * (sj - tj);
    }
    acc += softplus(Complex(re, im));
  }
  return acc;
}

VisibleTerms visible_terms(const NdoParams& params, BitsView sigma) {
  check_length(sigma, params.n_visible, "sigma");
  VisibleTerms t;
  t.sigma.assign(sigma.begin(), sigma.end());
  t.amp_hidden = affine(params.amplitude.weights, sigma, &params.amplitude.hidden_bias);
  t.phase_hidden = affine(params.phase.weights, sigma, &params.phase.hidden_bias);
  t.amp_aux = affine(params.amplitude.aux_weights, sigma, nullptr);
  t.phase_aux = affine(params.phase.aux_weights, sigma, nullptr);
  t.amp_softplus = softplus_sum(t.amp_hidden);
  t.phase_softplus = softplus_sum(t.phase_hidden);
  t.amp_bias = dot(params.amplitude.visible_bias, sigma);
  t.phase_bias = dot(params.phase.visible_bias, sigma);
  return t;
}

Complex log_rho_unnormalized(const NdoParams& params, const VisibleTerms& s,
                             const VisibleTerms& sp) {
  Complex acc(0.5 * (s.amp_softplus + sp.amp_softplus + s.amp_bias + sp.amp_bias),
              0.5 * (s.phase_softplus - sp.phase_softplus + s.phase_bias - sp.phase_bias));
  for (Eigen::Index k = 0; k < params.n_aux; ++k) {
    acc += softplus(mixing_argument(params, s, sp, k));
  }
  return acc;
}

Complex log_rho_unnormalized(const NdoParams& params, BitsView sigma, BitsView sigma_prime) {
  return log_rho_unnormalized(params, visible_terms(params, sigma),
                              visible_terms(params, sigma_prime));
}

Complex rho_unnormalized(const NdoParams& params, BitsView sigma, BitsView sigma_prime) {
  const Complex l = log_rho_unnormalized(params, sigma, sigma_prime);
  if (l.real() > kExpGuard) {
    throw NumericalError("unnormalized matrix element overflows (log magnitude " +
                         std::to_string(l.real()) + ")");
  }
  return std::exp(l);
}

double log_partition(const NdoParams& params) {
  check_qubit_cap(params.n_visible);
  const std::size_t dim = std::size_t{1} << params.n_visible;
  std::vector<double> logs(dim);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < dim; ++s) {
    const Bits bits = index_to_bits(s, params.n_visible);
    const VisibleTerms t = visible_terms(params, bits);
    logs[s] = log_rho_unnormalized(params, t, t).real();
    max_log = std::max(max_log, logs[s]);
  }
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - max_log);
  return max_log + std::log(acc);
}

double partition(const NdoParams& params) {
  const double l = log_partition(params);
  if (l > kExpGuard) {
    throw NumericalError("partition function overflows (log Z = " + std::to_string(l) + ")");
  }
  return std::exp(l);
}

DensityMatrix materialize(const NdoParams& params) {
  check_qubit_cap(params.n_visible);
  const std::size_t dim = std::size_t{1} << params.n_visible;
  std::vector<VisibleTerms> terms;
  terms.reserve(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    terms.push_back(visible_terms(params, index_to_bits(s, params.n_visible)));
  }
  ComplexMatrix log_rho(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      log_rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          log_rho_unnormalized(params, terms[r], terms[c]);
    }
  }
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < dim; ++s) {
    max_log = std::max(max_log, log_rho(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)).real());
  }
  double z = 0.0;
  for (std::size_t s = 0; s < dim; ++s) {
    z += std::exp(log_rho(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)).real() - max_log);
  }
  const double log_z = max_log + std::log(z);
  ComplexMatrix rho = (log_rho.array() - log_z).exp().matrix();
  return DensityMatrix::from_matrix(std::move(rho));
}

double log_marginal(const RbmParams& net, BitsView sigma, BitsView aux) {
  const auto n = net.visible_bias.size();
  check_length(sigma, static_cast<int>(n), "sigma");
  check_length(aux, static_cast<int>(net.aux_weights.rows()), "aux");
  double acc = softplus_sum(affine(net.weights, sigma, &net.hidden_bias));
  acc += dot(net.visible_bias, sigma);
  for (Eigen::Index k = 0; k < net.aux_weights.rows(); ++k) {
    if (!aux[static_cast<std::size_t>(k)]) continue;
    acc += dot(net.aux_weights.row(k).transpose(), sigma);
    if (net.aux_bias.size() != 0) acc += net.aux_bias[k];
  }
  return acc;
}

Complex psi_amplitude(const NdoParams& params, BitsView sigma, BitsView aux, double log_z) {
  const double amp = 0.5 * (log_marginal(params.amplitude, sigma, aux) - log_z);
  const double phase = 0.5 * log_marginal(params.phase, sigma, aux);
  return std::polar(std::exp(amp), phase);
}

Complex psi_amplitude(const NdoParams& params, BitsView sigma, BitsView aux) {
  return psi_amplitude(params, sigma, aux, log_partition(params));
}

void accumulate_log_rho_gradient(const NdoParams& params, const VisibleTerms& s,
                                 const VisibleTerms& sp, Complex weight, ComplexVector& out) {
  const Eigen::Index n = params.n_visible;
  const Eigen::Index nh = params.n_hidden;
  const Eigen::Index na = params.n_aux;
  const Complex half_w = 0.5 * weight;
  const Complex half_iw = Complex(0.0, 0.5) * weight;

  // Amplitude block: W, U, b, c, d.
  Eigen::Index w_at = 0;
  Eigen::Index u_at = w_at + nh * n;
  Eigen::Index b_at = u_at + na * n;
  Eigen::Index c_at = b_at + n;
  Eigen::Index d_at = c_at + nh;
  for (Eigen::Index i = 0; i < nh; ++i) {
    const double ga = logistic(s.amp_hidden[i]);
    const double gb = logistic(sp.amp_hidden[i]);
    for (Eigen::Index j = 0; j < n; ++j) {
      out[w_at + i * n + j] += half_w * (ga * s.sigma[j] + gb * sp.sigma[j]);
    }
    out[c_at + i] += half_w * (ga + gb);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    out[b_at + j] += half_w * static_cast<double>(s.sigma[j] + sp.sigma[j]);
  }
  const Eigen::Index phase_at = params.amplitude_size();
  const Eigen::Index pw_at = phase_at;
  const Eigen::Index pu_at = pw_at + nh * n;
  const Eigen::Index pb_at = pu_at + na * n;
  const Eigen::Index pc_at = pb_at + n;
  for (Eigen::Index k = 0; k < na; ++k) {
    const Complex g = logistic(mixing_argument(params, s, sp, k));
    const Complex gw = g * weight;
    for (Eigen::Index j = 0; j < n; ++j) {
      out[u_at + k * n + j] += 0.5 * gw * static_cast<double>(s.sigma[j] + sp.sigma[j]);
      const int diff = static_cast<int>(s.sigma[j]) - static_cast<int>(sp.sigma[j]);
      if (diff != 0) out[pu_at + k * n + j] += Complex(0.0, 0.5 * diff) * gw;
    }
    out[d_at + k] += gw;
  }

  // Phase block: W, U (above), b, c.
  for (Eigen::Index i = 0; i < nh; ++i) {
    const double ga = logistic(s.phase_hidden[i]);
    const double gb = logistic(sp.phase_hidden[i]);
    for (Eigen::Index j = 0; j < n; ++j) {
      out[pw_at + i * n + j] += half_iw * (ga * s.sigma[j] - gb * sp.sigma[j]);
    }
    out[pc_at + i] += half_iw * (ga - gb);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const int diff = static_cast<int>(s.sigma[j]) - static_cast<int>(sp.sigma[j]);
    if (diff != 0) out[pb_at + j] += half_iw * static_cast<double>(diff);
  }
}

void accumulate_diagonal_gradient(const NdoParams& params, BitsView sigma, double weight,
                                  RealVector& out) {
  const Eigen::Index n = params.n_visible;
  const Eigen::Index nh = params.n_hidden;
  const Eigen::Index na = params.n_aux;
  const Eigen::Index u_at = nh * n;
  const Eigen::Index b_at = u_at + na * n;
  const Eigen::Index c_at = b_at + n;
  const Eigen::Index d_at = c_at + nh;
  const RbmParams& amp = params.amplitude;
  for (Eigen::Index i = 0; i < nh; ++i) {
    double pre = amp.hidden_bias[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (sigma[static_cast<std::size_t>(j)]) pre += amp.weights(i, j);
    }
    const double g = weight * logistic(pre);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (sigma[static_cast<std::size_t>(j)]) out[i * n + j] += g;
    }
    out[c_at + i] += g;
  }
  for (Eigen::Index k = 0; k < na; ++k) {
    double pre = amp.aux_bias[k];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (sigma[static_cast<std::size_t>(j)]) pre += amp.aux_weights(k, j);
    }
    const double g = weight * logistic(pre);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (sigma[static_cast<std::size_t>(j)]) out[u_at + k * n + j] += g;
    }
    out[d_at + k] += g;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (sigma[static_cast<std::size_t>(j)]) out[b_at + j] += weight;
  }
}

}  // namespace ndotomo
