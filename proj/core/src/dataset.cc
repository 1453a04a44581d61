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

#include "ndotomo/dataset.h"

#include <algorithm>
#include <string>

namespace ndotomo {

void Dataset::add(const BasisLabel& basis, Bits outcome) {
  auto it = std::find_if(groups.begin(), groups.end(),
                         [&](const BasisGroup& g) { return g.basis == basis; });
  if (it == groups.end()) {
    groups.push_back(BasisGroup{basis, {}});
    it = std::prev(groups.end());
  }
  it->outcomes.push_back(std::move(outcome));
}

void Dataset::check() const {
  if (n_qubits < 1) throw std::invalid_argument("dataset: qubit count must be positive");
  if (groups.empty()) throw std::invalid_argument("dataset: no measurement records");
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const BasisGroup& group = groups[g];
    if (static_cast<int>(group.basis.size()) != n_qubits) {
      throw std::invalid_argument("dataset: basis " + group.basis.str() + " does not have " +
                                  std::to_string(n_qubits) + " sites");
    }
    for (std::size_t h = 0; h < g; ++h) {
      if (groups[h].basis == group.basis) {
        throw std::invalid_argument("dataset: duplicate basis group " + group.basis.str());
      }
    }
    if (group.outcomes.empty()) {
      throw std::invalid_argument("dataset: basis " + group.basis.str() + " has no records");
    }
    for (const Bits& o : group.outcomes) {
      if (static_cast<int>(o.size()) != n_qubits ||
          std::any_of(o.begin(), o.end(), [](std::uint8_t b) { return b > 1; })) {
        throw std::invalid_argument("dataset: malformed outcome in basis " + group.basis.str());
      }
    }
  }
}

std::size_t Dataset::num_records() const {
  std::size_t n = 0;
  for (const BasisGroup& g : groups) n += g.outcomes.size();
  return n;
}

std::vector<std::vector<std::size_t>> Dataset::count_table() const {
  check_qubit_cap(n_qubits);
  std::vector<std::vector<std::size_t>> counts;
  counts.reserve(groups.size());
  for (const BasisGroup& g : groups) {
    std::vector<std::size_t> row(std::size_t{1} << n_qubits, 0);
    for (const Bits& o : g.outcomes) ++row[bits_to_index(o)];
    counts.push_back(std::move(row));
  }
  return counts;
}

}  // namespace ndotomo
