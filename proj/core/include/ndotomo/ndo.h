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

#ifndef NDOTOMO_NDO_H
#define NDOTOMO_NDO_H

#include "ndotomo/qcore.h"
#include "ndotomo/rng.h"

namespace ndotomo {

/// One restricted Boltzmann machine over (visible sigma, hidden h, auxiliary a).
/// The phase network carries no auxiliary bias: it cancels in the traced-out
/// density matrix, so `aux_bias` is empty there.
struct RbmParams {
  RealMatrix weights;       // n_hidden x n_visible
  RealMatrix aux_weights;   // n_aux x n_visible
  RealVector visible_bias;  // n_visible
  RealVector hidden_bias;   // n_hidden
  RealVector aux_bias;      // n_aux, or empty

  Eigen::Index size() const {
    return weights.size() + aux_weights.size() + visible_bias.size() + hidden_bias.size() +
           aux_bias.size();
  }
};

/// Parameters of a neural density operator: an amplitude network (lambda)
/// and a phase network (mu).
///
/// Flattened layout, used for gradients and optimizers: amplitude then phase,
/// each as W (row-major), U (row-major), b, c, and d (amplitude only).
struct NdoParams {
  int n_visible = 0;
  int n_hidden = 0;
  int n_aux = 0;
  RbmParams amplitude;
  RbmParams phase;

  static NdoParams zeros(int n_visible, int n_hidden, int n_aux);

  /// Weights uniform in [-width/2, width/2], biases zero.
  static NdoParams initialize(int n_visible, int n_hidden, int n_aux, double width, Rng& rng);

  /// Throws std::invalid_argument on inconsistent shapes or non-finite entries.
  void check() const;

  Eigen::Index size() const { return amplitude.size() + phase.size(); }
  Eigen::Index amplitude_size() const { return amplitude.size(); }

  RealVector flatten() const;
  void assign(const RealVector& flat);
};

/// Binary configuration of the three layers. `hidden` is empty when the
/// hidden layer has been summed out.
struct SpinConfig {
  Bits sigma;
  Bits aux;
  Bits hidden;

  bool operator==(const SpinConfig&) const = default;
};

enum class Sign { kPlus, kMinus };

/// log(1 + e^x) without overflow.
double softplus(double x);
double logistic(double x);

/// Principal-branch log(1 + e^z). Throws NumericalError when |1 + e^z| < 1e-14.
Complex softplus(Complex z);
Complex logistic(Complex z);

/// Gamma^[+/-](sigma, sigma') for one network.
double gamma(const RbmParams& net, BitsView sigma, BitsView sigma_prime, Sign sign);

/// Pi(sigma, sigma'): the mixing term left after tracing out the auxiliary units.
Complex pi_term(const NdoParams& params, BitsView sigma, BitsView sigma_prime);

/// log of the unnormalized matrix element, Gamma_l^+ + i Gamma_m^- + Pi.
Complex log_rho_unnormalized(const NdoParams& params, BitsView sigma, BitsView sigma_prime);

/// exp(log_rho_unnormalized). Throws NumericalError if the real part of the
/// exponent exceeds 700.
Complex rho_unnormalized(const NdoParams& params, BitsView sigma, BitsView sigma_prime);

/// log Z_lambda = log sum_sigma rho~(sigma, sigma), by enumeration.
double log_partition(const NdoParams& params);
double partition(const NdoParams& params);

/// Dense normalized density matrix, rho~ / Z_lambda.
DensityMatrix materialize(const NdoParams& params);

/// log p(sigma, a) with the hidden layer summed out. The d^T a term is
/// included only when the network has an auxiliary bias.
double log_marginal(const RbmParams& net, BitsView sigma, BitsView aux);

/// Purified amplitude psi(sigma, a) = Z^{-1/2} sqrt(p_l) exp(i log(p_m) / 2).
Complex psi_amplitude(const NdoParams& params, BitsView sigma, BitsView aux);
Complex psi_amplitude(const NdoParams& params, BitsView sigma, BitsView aux, double log_z);

/// Per-configuration quantities reused across every (sigma, sigma') pair that
/// contains sigma.
struct VisibleTerms {
  Bits sigma;
  RealVector amp_hidden;   // W_l sigma + c_l
  RealVector phase_hidden; // W_m sigma + c_m
  RealVector amp_aux;      // U_l sigma
  RealVector phase_aux;    // U_m sigma
  double amp_softplus = 0.0;   // sum_i softplus(amp_hidden_i)
  double phase_softplus = 0.0; // sum_i softplus(phase_hidden_i)
  double amp_bias = 0.0;       // b_l . sigma
  double phase_bias = 0.0;     // b_m . sigma
};

VisibleTerms visible_terms(const NdoParams& params, BitsView sigma);

Complex log_rho_unnormalized(const NdoParams& params, const VisibleTerms& s, const VisibleTerms& sp);

/// out += weight * d log rho~(sigma, sigma') / d theta, in the flattened
/// layout. The amplitude block holds grad_l(Gamma^+ + Pi) and the phase
/// block holds i grad_m Gamma^- + grad_m Pi.
void accumulate_log_rho_gradient(const NdoParams& params, const VisibleTerms& s,
                                 const VisibleTerms& sp, Complex weight, ComplexVector& out);

/// out += weight * d log rho~(sigma, sigma) / d lambda, written into the
/// amplitude block of a flattened vector.
void accumulate_diagonal_gradient(const NdoParams& params, BitsView sigma, double weight,
                                  RealVector& out);

}  // namespace ndotomo

#endif  // NDOTOMO_NDO_H
