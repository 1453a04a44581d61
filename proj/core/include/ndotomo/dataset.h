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

#ifndef NDOTOMO_DATASET_H
#define NDOTOMO_DATASET_H

#include <cstddef>
#include <vector>

#include "ndotomo/qcore.h"

namespace ndotomo {

/// All snapshots measured in one basis.
struct BasisGroup {
  BasisLabel basis;
  std::vector<Bits> outcomes;
};

/// Measurement records grouped by basis, in first-seen basis order.
struct Dataset {
  int n_qubits = 0;
  std::vector<BasisGroup> groups;

  /// Appends a record, creating the basis group on first use.
  void add(const BasisLabel& basis, Bits outcome);

  /// Throws std::invalid_argument unless every group is non-empty and every
  /// basis and outcome has length n_qubits with entries in {0,1}.
  void check() const;

  std::size_t num_records() const;

  /// counts[g][i]: number of records in group g with outcome index i.
  /// Requires n_qubits within the dense enumeration cap.
  std::vector<std::vector<std::size_t>> count_table() const;
};

}  // namespace ndotomo

#endif  // NDOTOMO_DATASET_H
