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

#ifndef NDOTOMO_DATAGEN_H
#define NDOTOMO_DATAGEN_H

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ndotomo/dataset.h"
#include "ndotomo/qcore.h"

namespace ndotomo {

struct MeasurementProtocol {
  std::vector<BasisLabel> bases;
  std::size_t samples_per_basis = 0;
  std::uint64_t seed = 0;

  void check() const;
};

/// Diagonal of U_b rho U_b^dagger. Entries in [-1e-12, 0) are clamped to 0;
/// anything more negative, or a total off by more than 1e-10, throws
/// NumericalError.
RealVector outcome_distribution(const DensityMatrix& target, const BasisLabel& basis);

/// samples_per_basis independent inverse-CDF draws per basis. Basis i uses
/// the stream derive_seed(seed, "gen", i).
Dataset sample_dataset(const DensityMatrix& target, const MeasurementProtocol& protocol);

/// All two-qubit Pauli bases in the order ZZ, ZX, ZY, XZ, XX, XY, YZ, YX, YY.
std::vector<BasisLabel> nine_bases();

/// Every basis in {X,Y,Z}^n, in the same lexicographic order as nine_bases().
std::vector<BasisLabel> all_pauli_bases(int n_qubits);

// Text format, one record per line:
//   # ndotomo dataset v1
//   XY 01
// A third column turns a line into a count-table entry ("XY 01 250" is 250
// records). Lines starting with '#' and blank lines are ignored.
void write_dataset(const Dataset& dataset, std::ostream& out);
void write_count_table(const Dataset& dataset, std::ostream& out);
Dataset read_dataset(std::istream& in);

void write_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace ndotomo

#endif  // NDOTOMO_DATAGEN_H
