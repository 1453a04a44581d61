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

#ifndef NDOTOMO_TOOLS_CLI_COMMANDS_H
#define NDOTOMO_TOOLS_CLI_COMMANDS_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ndotomo/qcore.h"
#include "ndotomo/tomo_train.h"

namespace ndotomo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Invalid flag values or combinations; mapped to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A target/reference state named on the command line: "bell" (the
/// depolarized |Phi+>), "psi_i", or "file" (a density-matrix text file).
struct StateSpec {
  std::string kind = "bell";
  double p_dep = 0.0;
  std::string file;
};

DensityMatrix resolve_state(const StateSpec& spec);

struct GenOptions {
  StateSpec target;
  std::string bases = "all";
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  std::string out;
  bool counts = false;
};

struct TrainOptions {
  std::string data;
  TrainConfig config;
  std::optional<StateSpec> reference;
  std::string out_model;
  std::string out_report;
  bool quiet = false;
};

struct EvalOptions {
  std::string model;
  StateSpec reference;
  std::string out;
};

struct SweepOptions {
  std::vector<double> p_dep_list{0.0, 0.5, 1.0};
  std::vector<std::size_t> ns_list{100, 1000, 10000};
  std::vector<int> n_aux_list{1, 2};
  int repeats = 10;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out_csv;
  /// Template for every NDO run; n_aux and seed are overridden per row.
  TrainConfig train;
  int maxlik_iters = 20000;
};

/// One (p_dep, n_s, n_aux, repeat) cell run. Failed runs keep the error in
/// `status` and leave the numeric fields empty.
struct SweepRow {
  double p_dep = 0.0;
  std::size_t n_s = 0;
  int n_aux = 0;
  int repeat = 0;
  std::uint64_t seed = 0;
  std::optional<double> fidelity_ndo;
  std::optional<double> fidelity_maxlik;
  std::optional<double> nll_best;
  std::string status = "ok";
};

int run_gen(const GenOptions& opts, std::ostream& log);
int run_train(const TrainOptions& opts, std::ostream& log);
int run_eval(const EvalOptions& opts, std::ostream& out, std::ostream& log);

/// Rows in deterministic order: p_dep, then n_s, then n_aux, then repeat.
/// Repeat r uses seed + r; its dataset, NDO and MaxLik streams derive from
/// that with the tags "gen", "train" and "maxlik".
std::vector<SweepRow> run_sweep(const SweepOptions& opts, std::ostream* log = nullptr);

/// CSV with a version comment, one row per run and one summary row (mean and
/// standard deviation) after each cell.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

/// Full command line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ndotomo::cli

#endif  // NDOTOMO_TOOLS_CLI_COMMANDS_H
