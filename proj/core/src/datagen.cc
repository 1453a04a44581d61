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

#include "ndotomo/datagen.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ndotomo/rng.h"

namespace ndotomo {

namespace {

constexpr double kClampTol = 1e-12;
constexpr double kSumTol = 1e-10;
constexpr const char* kHeader = "# ndotomo dataset v1";

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  throw std::invalid_argument("dataset line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

}  // namespace

void MeasurementProtocol::check() const {
  if (bases.empty()) throw std::invalid_argument("protocol: no bases");
  if (samples_per_basis < 1) throw std::invalid_argument("protocol: samples per basis must be >= 1");
  for (const BasisLabel& b : bases) {
    if (b.size() != bases.front().size()) {
      throw std::invalid_argument("protocol: bases have different lengths");
    }
  }
}

RealVector outcome_distribution(const DensityMatrix& target, const BasisLabel& basis) {
  if (static_cast<int>(basis.size()) != target.num_qubits()) {
    throw std::invalid_argument("outcome_distribution: basis " + basis.str() + " does not match a " +
                                std::to_string(target.num_qubits()) + "-qubit state");
  }
  const ComplexMatrix u = basis_rotation(basis);
  const ComplexMatrix rotated = u * target.matrix() * u.adjoint();
  RealVector p = rotated.diagonal().real();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < -kClampTol) {
      throw NumericalError("outcome_distribution: negative probability " + std::to_string(p[i]));
    }
    p[i] = std::max(p[i], 0.0);
  }
  if (std::abs(p.sum() - 1.0) > kSumTol) {
    throw NumericalError("outcome_distribution: probabilities sum to " + std::to_string(p.sum()));
  }
  return p;
}

Dataset sample_dataset(const DensityMatrix& target, const MeasurementProtocol& protocol) {
  protocol.check();
  Dataset data;
  data.n_qubits = target.num_qubits();
  for (std::size_t b = 0; b < protocol.bases.size(); ++b) {
    const BasisLabel& basis = protocol.bases[b];
    const RealVector p = outcome_distribution(target, basis);
    std::vector<double> cdf(static_cast<std::size_t>(p.size()));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      acc += p[i];
      cdf[static_cast<std::size_t>(i)] = acc;
    }
    Rng rng(derive_seed(protocol.seed, "gen", b));
    BasisGroup group{basis, {}};
    group.outcomes.reserve(protocol.samples_per_basis);
    for (std::size_t s = 0; s < protocol.samples_per_basis; ++s) {
      const double u = rng.uniform() * acc;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      // Rounding can land past the last nonzero bin.
      std::size_t idx = static_cast<std::size_t>(std::min(it, std::prev(cdf.end())) - cdf.begin());
      while (idx > 0 && p[static_cast<Eigen::Index>(idx)] == 0.0) --idx;
      group.outcomes.push_back(index_to_bits(idx, data.n_qubits));
    }
    data.groups.push_back(std::move(group));
  }
  return data;
}

std::vector<BasisLabel> all_pauli_bases(int n_qubits) {
  check_qubit_cap(n_qubits);
  static constexpr Pauli kOrder[3] = {Pauli::Z, Pauli::X, Pauli::Y};
  std::vector<BasisLabel> out;
  std::size_t total = 1;
  for (int i = 0; i < n_qubits; ++i) total *= 3;
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<Pauli> sites(static_cast<std::size_t>(n_qubits));
    std::size_t c = code;
    for (int j = n_qubits - 1; j >= 0; --j) {
      sites[static_cast<std::size_t>(j)] = kOrder[c % 3];
      c /= 3;
    }
    out.emplace_back(std::move(sites));
  }
  return out;
}

std::vector<BasisLabel> nine_bases() { return all_pauli_bases(2); }

void write_dataset(const Dataset& dataset, std::ostream& out) {
  dataset.check();
  out << kHeader << '\n';
  for (const BasisGroup& g : dataset.groups) {
    const std::string label = g.basis.str();
    for (const Bits& o : g.outcomes) {
      out << label << ' ';
      for (std::uint8_t b : o) out << static_cast<char>('0' + b);
      out << '\n';
    }
  }
}

void write_count_table(const Dataset& dataset, std::ostream& out) {
  const auto counts = dataset.count_table();
  out << kHeader << " counts\n";
  for (std::size_t g = 0; g < dataset.groups.size(); ++g) {
    const std::string label = dataset.groups[g].basis.str();
    for (std::size_t i = 0; i < counts[g].size(); ++i) {
      if (counts[g][i] == 0) continue;
      out << label << ' ';
      for (std::uint8_t b : index_to_bits(i, dataset.n_qubits)) out << static_cast<char>('0' + b);
      out << ' ' << counts[g][i] << '\n';
    }
  }
}

Dataset read_dataset(std::istream& in) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line);
    if (fields.empty() || fields[0].front() == '#') continue;
    if (fields.size() != 2 && fields.size() != 3) {
      parse_error(line_no, "expected '<basis> <outcome> [count]', got " +
                               std::to_string(fields.size()) + " fields");
    }
    const std::string_view basis_text = fields[0];
    const std::string_view outcome_text = fields[1];
    for (std::size_t i = 0; i < basis_text.size(); ++i) {
      const char c = basis_text[i];
      if (c != 'X' && c != 'Y' && c != 'Z') {
        parse_error(line_no, std::string("invalid basis character '") + c + "' at position " +
                                 std::to_string(i + 1));
      }
    }
    Bits outcome;
    outcome.reserve(outcome_text.size());
    for (std::size_t i = 0; i < outcome_text.size(); ++i) {
      const char c = outcome_text[i];
      if (c != '0' && c != '1') {
        parse_error(line_no, std::string("invalid outcome character '") + c + "' at position " +
                                 std::to_string(i + 1));
      }
      outcome.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (basis_text.size() != outcome_text.size()) {
      parse_error(line_no, "basis and outcome lengths differ");
    }
    if (data.n_qubits == 0) {
      data.n_qubits = static_cast<int>(basis_text.size());
    } else if (static_cast<int>(basis_text.size()) != data.n_qubits) {
      parse_error(line_no, "record has " + std::to_string(basis_text.size()) +
                               " sites, earlier records have " + std::to_string(data.n_qubits));
    }
    std::size_t count = 1;
    if (fields.size() == 3) {
      const std::string_view c = fields[2];
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), count);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        parse_error(line_no, "invalid count '" + std::string(c) + "'");
      }
    }
    const BasisLabel basis = BasisLabel::parse(basis_text);
    for (std::size_t r = 0; r < count; ++r) data.add(basis, outcome);
  }
  data.check();
  return data;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_dataset(dataset, out);
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_dataset(in);
}

}  // namespace ndotomo
