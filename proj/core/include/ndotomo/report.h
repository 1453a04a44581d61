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

#ifndef NDOTOMO_REPORT_H
#define NDOTOMO_REPORT_H

#include <filesystem>
#include <iosfwd>

#include "ndotomo/qcore.h"
#include "ndotomo/tomo_train.h"

namespace ndotomo {

// Density matrix text format: the real part then the imaginary part, each a
// 2^N x 2^N block of comma-separated values with 17 significant digits.
//
//   # ndotomo density v1
//   [real]
//   0.5,0,0,0.5
//   ...
//   [imag]
//   ...
void write_matrix_blocks(const ComplexMatrix& m, std::ostream& out);
ComplexMatrix read_matrix_blocks(std::istream& in);

void write_density(const DensityMatrix& rho, const std::filesystem::path& path);
DensityMatrix read_density(const std::filesystem::path& path);

// Training report: comment header with the selected epoch, then CSV rows
//   epoch,nll,holdout_nll,fidelity
// with empty cells for quantities that were not tracked. NLL values omit the
// (unknown) entropy of the measurement distribution.
void write_train_report(const TrainReport& report, std::ostream& out);
void write_train_report(const TrainReport& report, const std::filesystem::path& path);

}  // namespace ndotomo

#endif  // NDOTOMO_REPORT_H
