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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ndotomo/datagen.h"
#include "support/oracles.h"

namespace ndotomo {
namespace {

TEST(CholeskyTest, Layout) {
  EXPECT_EQ(cholesky_size(2), 16u);
  RealVector t = RealVector::Zero(16);
  t.head(4).setOnes();
  EXPECT_TRUE(rho_from_cholesky(t, 2).matrix().isApprox(ComplexMatrix::Identity(4, 4) / 4.0));
  t.setZero();
  t(0) = 1.0;
  const ComplexMatrix pure = rho_from_cholesky(t, 2).matrix();
  EXPECT_NEAR(pure(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(pure.cwiseAbs().sum(), 1.0, 1e-15);
  EXPECT_THROW(rho_from_cholesky(RealVector::Zero(16), 2), std::invalid_argument);
}

TEST(CholeskyTest, ParamsRoundTrip) {
  Rng rng(61);
  RealVector t(16);
  for (int i = 0; i < 16; ++i) t(i) = rng.uniform(-1, 1);
  const ComplexMatrix lower = cholesky_factor(t, 2);
  EXPECT_TRUE(lower.isLowerTriangular());
  EXPECT_EQ(cholesky_params(lower), t);
}

TEST(CholeskyTest, RandomParamsArePhysical) {
  Rng rng(62);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    RealVector t(cholesky_size(n));
    for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = rng.uniform(-1, 1);
    EXPECT_TRUE(validate_density(rho_from_cholesky(t, n).matrix()).report.ok());
  }
}

TEST(ObjectiveTest, GradientMatchesFiniteDifferences) {
  Rng rng(63);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 1 + trial % 2;
    const Dataset d = testing::random_dataset(all_pauli_bases(n), 5, rng);
    const MaxLikObjective objective(d);
    RealVector t(cholesky_size(n));
    for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = rng.uniform(-1, 1);
    const RealVector g = objective.gradient(t);
    const double h = 1e-3;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      auto at = [&](double off) {
        RealVector u = t;
        u(i) += off;
        return objective.value(u);
      };
      const double fd = (8 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12 * h);
      EXPECT_LE(std::abs(g(i) - fd), std::max(1e-6 * std::abs(fd), 1e-10)) << i;
    }
  }
}

TEST(ObjectiveTest, MatchesDenseLikelihood) {
  Rng rng(64);
  const Dataset d = testing::random_dataset(nine_bases(), 4, rng);
  RealVector t(16);
  for (int i = 0; i < 16; ++i) t(i) = rng.uniform(-1, 1);
  const double dense = -testing::dense_nll(d, rho_from_cholesky(t, 2).matrix()) / 9.0;
  // Every basis holds the same number of records, so the per-record mean
  // equals the per-basis average divided by the basis count.
  EXPECT_NEAR(MaxLikObjective(d).value(t), dense, 1e-12);
}

TEST(FitTest, MixedStateData) {
  const DensityMatrix mixed = depolarize(canonical_state("bell"), 1.0);
  const Dataset d = sample_dataset(mixed, {nine_bases(), 20000, 5});
  const MaxLikResult r = maxlik_fit(d);
  EXPECT_LT(trace_distance(r.rho, mixed), 0.05);
  EXPECT_TRUE(validate_density(r.rho.matrix()).report.ok());
}

TEST(FitTest, BellDataAndMonotoneTrace) {
  const DensityMatrix bell = pure_density(canonical_state("bell"));
  const Dataset d = sample_dataset(bell, {nine_bases(), 10000, 6});
  const MaxLikResult r = maxlik_fit(d);
  EXPECT_GE(fidelity(r.rho, bell), 0.99);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i], r.trace[i - 1]);
}

TEST(FitTest, ReportsNonConvergence) {
  const Dataset d = sample_dataset(depolarize(canonical_state("bell"), 0.5), {nine_bases(), 100, 7});
  const MaxLikResult r = maxlik_fit(d, {3, 1e-12, 0});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_GT(r.gradient_norm, 0.0);
}

TEST(FitTest, FidelityImprovesWithSamples) {
  Rng rng(65);
  ComplexVector psi(4);
  for (int i = 0; i < 4; ++i) psi(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  psi.normalize();
  const DensityMatrix target = depolarize(psi, 0.3);
  std::vector<double> medians;
  for (std::size_t n_s : {100u, 1000u, 10000u}) {
    std::vector<double> f;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      f.push_back(fidelity(maxlik_fit(sample_dataset(target, {nine_bases(), n_s, seed})).rho, target));
    }
    std::nth_element(f.begin(), f.begin() + 2, f.end());
    medians.push_back(f[2]);
  }
  EXPECT_LE(medians[0], medians[1]);
  EXPECT_LE(medians[1], medians[2]);
}

}  // namespace
}  // namespace ndotomo
