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

#include "ndotomo/report.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace ndotomo {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
  std::vector<double> row;
  std::size_t i = 0;
  while (i <= line.size()) {
    std::size_t j = line.find(',', i);
    if (j == std::string::npos) j = line.size();
    std::string cell = line.substr(i, j - i);
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) cell.pop_back();
    std::size_t lead = 0;
    while (lead < cell.size() && std::isspace(static_cast<unsigned char>(cell[lead]))) ++lead;
    double v = 0.0;
    const char* first = cell.data() + lead;
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last) {
      throw std::invalid_argument("matrix line " + std::to_string(line_no) + ": invalid number '" +
                                  cell + "'");
    }
    row.push_back(v);
    i = j + 1;
  }
  return row;
}

}  // namespace

void write_matrix_blocks(const ComplexMatrix& m, std::ostream& out) {
  for (int part = 0; part < 2; ++part) {
    out << (part == 0 ? "[real]\n" : "[imag]\n");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out << ',';
        out << format_double(part == 0 ? m(i, j).real() : m(i, j).imag());
      }
      out << '\n';
    }
  }
}

ComplexMatrix read_matrix_blocks(std::istream& in) {
  std::vector<std::vector<double>> blocks[2];
  int current = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line == "[real]") {
      current = 0;
    } else if (line == "[imag]") {
      current = 1;
    } else if (current < 0) {
      // Metric lines (e.g. "fidelity,0.99") may precede the blocks.
      continue;
    } else {
      blocks[current].push_back(parse_row(line, line_no));
    }
  }
  const std::size_t d = blocks[0].size();
  if (d == 0 || blocks[1].size() != d) {
    throw std::invalid_argument("matrix file needs [real] and [imag] blocks of equal size");
  }
  ComplexMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (blocks[0][i].size() != d || blocks[1][i].size() != d) {
      throw std::invalid_argument("matrix file: row " + std::to_string(i) + " is not " +
                                  std::to_string(d) + " wide");
    }
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(blocks[0][i][j], blocks[1][i][j]);
    }
  }
  return m;
}

void write_density(const DensityMatrix& rho, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "# ndotomo density v1\n";
  write_matrix_blocks(rho.matrix(), out);
}

DensityMatrix read_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return DensityMatrix::from_matrix(read_matrix_blocks(in));
}

void write_train_report(const TrainReport& report, std::ostream& out) {
  out << "# ndotomo train report v1\n";
  out << "# best_epoch " << report.best_epoch << '\n';
  out << "# selection " << (report.selected_on_holdout ? "holdout" : "train") << '\n';
  out << "epoch,nll,holdout_nll,fidelity\n";
  for (const EpochStats& e : report.epochs) {
    out << e.epoch << ',' << format_double(e.nll) << ',';
    if (e.holdout_nll) out << format_double(*e.holdout_nll);
    out << ',';
    if (e.fidelity) out << format_double(*e.fidelity);
    out << '\n';
  }
}

void write_train_report(const TrainReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_train_report(report, out);
}

}  // namespace ndotomo
