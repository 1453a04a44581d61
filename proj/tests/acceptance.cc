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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.h"
#include "ndotomo/datagen.h"
#include "ndotomo/gibbs.h"
#include "ndotomo/maxlik.h"
#include "ndotomo/ndo.h"
#include "ndotomo/report.h"
#include "ndotomo/tomo_train.h"
#include "support/oracles.h"

namespace ndotomo {
namespace {

namespace fs = std::filesystem;
using testing::random_params;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome physicality() {
  const auto t0 = Clock::now();
  Rng rng(1001);
  double herm = 0, trace = 0, min_eig = 1;
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + static_cast<int>(rng.below(3));
    const NdoParams p = random_params(n, 1 + rng.below(3), 1 + rng.below(3), rng);
    const DensityReport r = validate_density(materialize(p).matrix()).report;
    herm = std::max(herm, r.hermiticity_error);
    trace = std::max(trace, std::abs(r.trace - 1.0));
    min_eig = std::min(min_eig, r.min_eigenvalue);
  }
  const double t = seconds_since(t0);
  return {herm <= 1e-12 && trace <= 1e-10 && min_eig >= -1e-10 && t < 10,
          "max |rho - rho^dag| " + fmt("%.2e", herm) + ", max |Tr - 1| " + fmt("%.2e", trace) +
              ", min eigenvalue " + fmt("%.2e", min_eig) + ", " + fmt("%.2f", t) + " s"};
}

Outcome purification() {
  const auto t0 = Clock::now();
  Rng rng(1002);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + static_cast<int>(rng.below(3));
    const NdoParams p = random_params(n, 1 + rng.below(3), 1 + rng.below(3), rng);
    worst = std::max(worst,
                     (materialize(p).matrix() - testing::brute_purification(p)).cwiseAbs().maxCoeff());
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-10 && t < 5,
          "max entry deviation " + fmt("%.2e", worst) + ", " + fmt("%.2f", t) + " s"};
}

Outcome zero_mixing_purity() {
  Rng rng(1003);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    NdoParams p = random_params(2 + static_cast<int>(rng.below(3)), 1 + rng.below(3),
                                1 + rng.below(3), rng);
    p.amplitude.aux_weights.setZero();
    p.phase.aux_weights.setZero();
    worst = std::max(worst, std::abs(materialize(p).purity() - 1.0));
  }
  return {worst <= 1e-10, "max |Tr rho^2 - 1| " + fmt("%.2e", worst)};
}

Outcome gradients() {
  const auto t0 = Clock::now();
  Rng rng(1004);
  double worst_rel = 0;
  int failures = 0;
  for (int i = 0; i < 20; ++i) {
    const NdoParams p = random_params(2, 1 + rng.below(2), 1 + rng.below(3), rng);
    const Dataset d = testing::random_dataset(nine_bases(), 1 + static_cast<int>(rng.below(4)), rng);
    RealVector analytic(p.size());
    analytic << grad_lambda(d, p), grad_mu(d, p);
    const RealVector fd = testing::finite_difference_nll(d, p, 1e-3);
    for (Eigen::Index k = 0; k < fd.size(); ++k) {
      const double diff = std::abs(analytic(k) - fd(k));
      if (diff > std::max(1e-6 * std::abs(fd(k)), 1e-10)) ++failures;
      if (std::abs(fd(k)) > 1e-10) worst_rel = std::max(worst_rel, diff / std::abs(fd(k)));
    }
  }
  const double t = seconds_since(t0);
  return {failures == 0 && t < 60, std::to_string(failures) + " components out of tolerance, " +
                                       "max relative error " + fmt("%.2e", worst_rel) + ", " +
                                       fmt("%.2f", t) + " s"};
}

Outcome sampler() {
  const auto t0 = Clock::now();
  Rng rng(1005);
  const NdoParams p = random_params(2, 2, 1, rng);
  const std::vector<double> exact = testing::exact_joint(p.amplitude, 2, 1);
  ChainState c = start_chain(p.amplitude, Bits{0, 0}, 77);
  const int sweeps = 1000000;
  std::vector<double> freq(exact.size(), 0.0);
  for (int i = 0; i < sweeps; ++i) {
    gibbs_sweep(c, p.amplitude);
    freq[bits_to_index(c.config.sigma) * 2 + c.config.aux[0]] += 1.0 / sweeps;
  }
  const double tv = testing::tv_distance(freq, exact);

  const ComplexMatrix rho = materialize(p).matrix();
  std::string detail = "TV " + fmt("%.4f", tv);
  bool ok = tv < 0.02;
  for (const char* label : {"II", "ZI", "XX"}) {
    const SparseObservable o = SparseObservable::pauli(label);
    ComplexMatrix dense = ComplexMatrix::Zero(4, 4);
    for (std::size_t s = 0; s < 4; ++s)
      for (const auto& [sp, v] : o.columns[s]) dense(sp, s) += v;
    const Complex target = (rho * dense).trace();
    int within = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const ObservableEstimate e = estimate_observable(p, o, {20000, 1000, 30, seed});
      // The identity estimate is exactly constant (zero error bar); the
      // 1e-12 floor only absorbs rounding in the exact trace.
      if (std::abs(e.mean - target) <= 3 * e.standard_error + 1e-12) ++within;
    }
    ok = ok && within >= 95;
    detail += std::string(", ") + label + " " + std::to_string(within) + "/100";
  }
  const double t = seconds_since(t0);
  return {ok && t < 300, detail + ", " + fmt("%.1f", t) + " s"};
}

// Criteria 6 and 7 share one sweep.
struct SweepResults {
  std::vector<cli::SweepRow> rows;
  double seconds = 0;
  std::vector<double> fidelities(double p, std::size_t ns, int na, bool ndo) const {
    std::vector<double> v;
    for (const auto& r : rows) {
      if (r.p_dep == p && r.n_s == ns && r.n_aux == na) {
        const auto& f = ndo ? r.fidelity_ndo : r.fidelity_maxlik;
        if (f) v.push_back(*f);
      }
    }
    return v;
  }
};

cli::SweepOptions sweep_options() {
  cli::SweepOptions opts;
  opts.repeats = 10;
  opts.seed = 2024;
  opts.train.max_updates = 200000;
  return opts;
}

SweepResults run_scaling_sweep() {
  const auto t0 = Clock::now();
  SweepResults res;
  cli::SweepOptions main_grid = sweep_options();
  main_grid.p_dep_list = {0.0, 0.5, 1.0};
  main_grid.ns_list = {100, 1000, 10000};
  main_grid.n_aux_list = {2};
  res.rows = cli::run_sweep(main_grid, &std::cerr);
  cli::SweepOptions single_aux = sweep_options();
  single_aux.p_dep_list = {0.5};
  single_aux.ns_list = {10000};
  single_aux.n_aux_list = {1};
  const auto extra = cli::run_sweep(single_aux, &std::cerr);
  res.rows.insert(res.rows.end(), extra.begin(), extra.end());
  res.seconds = seconds_since(t0);
  return res;
}

Outcome fidelity_scaling(const SweepResults& s) {
  bool ok = true;
  std::string detail;
  for (const auto& r : s.rows) {
    if (r.status != "ok") {
      ok = false;
      detail += "row failed: " + r.status + "; ";
    }
  }
  const double a = median(s.fidelities(0.0, 10000, 2, true));
  const double b = median(s.fidelities(0.5, 10000, 2, true));
  ok = ok && a >= 0.99 && b >= 0.98;
  detail += "(a) " + fmt("%.4f", a) + " (b) " + fmt("%.4f", b) + " (c)";
  for (double p : {0.0, 0.5, 1.0}) {
    std::vector<double> m;
    for (std::size_t ns : {100u, 1000u, 10000u}) m.push_back(median(s.fidelities(p, ns, 2, true)));
    ok = ok && m[0] <= m[1] && m[1] <= m[2];
    detail += " p=" + fmt("%.1f", p) + ":" + fmt("%.4f", m[0]) + "/" + fmt("%.4f", m[1]) + "/" +
              fmt("%.4f", m[2]);
  }
  const double d1 = median(s.fidelities(0.5, 10000, 1, true));
  ok = ok && b > d1 && s.seconds < 1800;
  detail += " (d) n_a=2 " + fmt("%.4f", b) + " vs n_a=1 " + fmt("%.4f", d1) + ", " +
            fmt("%.0f", s.seconds) + " s";
  return {ok, detail};
}

Outcome maxlik_comparison(const SweepResults& s) {
  bool ok = true;
  std::string detail;
  for (double p : {0.0, 0.5}) {
    const double ndo = median(s.fidelities(p, 10000, 2, true));
    const double ml = median(s.fidelities(p, 10000, 2, false));
    ok = ok && std::abs(ndo - ml) <= 0.02;
    detail += "p=" + fmt("%.1f", p) + ": NDO " + fmt("%.4f", ndo) + " MaxLik " + fmt("%.4f", ml) + "; ";
  }
  return {ok, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// gen -> train -> eval through the command-line layer; returns the eval text.
std::string psi_i_pipeline(const fs::path& dir, std::string& log) {
  std::ostringstream out, err;
  auto run = [&](std::vector<std::string> args) {
    const int code = cli::run_cli(args, out, err);
    if (code != cli::kExitOk) throw std::runtime_error("command failed: " + err.str());
  };
  run({"gen", "--target", "psi_i", "--n-samples", "10000", "--seed", "11", "--out",
       (dir / "psi.txt").string()});
  run({"train", "--data", (dir / "psi.txt").string(), "--max-updates", "200000", "--seed", "12",
       "--quiet", "--out-model", (dir / "psi.json").string()});
  out.str("");
  run({"eval", "--model", (dir / "psi.json").string(), "--reference", "psi_i"});
  log = err.str();
  return out.str();
}

Outcome psi_i_reconstruction(const fs::path& dir, std::string& eval_text) {
  std::string log;
  eval_text = psi_i_pipeline(dir, log);
  std::istringstream in(eval_text);
  std::string line;
  double f = 0;
  while (std::getline(in, line)) {
    if (line.rfind("fidelity,", 0) == 0) f = std::stod(line.substr(9));
  }
  std::istringstream blocks(eval_text);
  const ComplexMatrix m = read_matrix_blocks(blocks);
  double corner_dev = 0, other = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool corner = (i == 0 || i == 3) && (j == 0 || j == 3);
      if (corner) {
        corner_dev = std::max(corner_dev, std::abs(std::abs(m(i, j)) - 0.5));
      } else {
        other = std::max(other, std::abs(m(i, j)));
      }
    }
  const bool phase_ok = m(3, 0).imag() > 0.4 && m(0, 3).imag() < -0.4;
  return {f >= 0.99 && corner_dev <= 0.02 && other <= 0.02,
          "fidelity " + fmt("%.4f", f) + ", max corner deviation " + fmt("%.4f", corner_dev) +
              ", max other magnitude " + fmt("%.4f", other) +
              (phase_ok ? ", coherence along +i" : ", coherence phase unexpected")};
}

RealVector cd_gradient(const NdoParams& p, const Dataset& d, std::uint64_t seed) {
  Rng rng(seed);
  return grad_lambda(d, p, {NegativePhase::kContrastiveDivergence, 100}, &rng);
}

Outcome cd_convergence() {
  Rng rng(1009);
  const NdoParams p = random_params(2, 1, 2, rng);
  const Dataset d = sample_dataset(depolarize(canonical_state("bell"), 0.2), {nine_bases(), 200, 5});
  const RealVector exact = grad_lambda(d, p);
  const RealVector cd = cd_gradient(p, d, 6);
  const double corr = testing::correlation(cd, exact);

  std::vector<Bits> seeds;
  for (const BasisGroup& g : d.groups) seeds.insert(seeds.end(), g.outcomes.begin(), g.outcomes.end());
  Rng chain(7);
  const double neg_corr =
      testing::correlation(cd_negative_phase(p, seeds, 100, chain), exact_negative_phase(p));
  return {corr > 0.99 && neg_corr > 0.99, "gradient correlation " + fmt("%.5f", corr) +
                                              ", negative-phase correlation " +
                                              fmt("%.5f", neg_corr)};
}

Outcome determinism(const fs::path& dir, const SweepResults& sweep, const std::string& eval_text) {
  std::vector<std::string> mismatches;
  auto expect = [&](bool same, const std::string& what) {
    if (!same) mismatches.push_back(what);
  };

  // Library-level repeats.
  {
    Rng a(42), b(42);
    const NdoParams pa = random_params(3, 2, 2, a), pb = random_params(3, 2, 2, b);
    expect(materialize(pa).matrix() == materialize(pb).matrix(), "materialize");
    const SparseObservable o = SparseObservable::pauli("XYZ");
    const auto ea = estimate_observable(pa, o, {5000, 100, 30, 3});
    const auto eb = estimate_observable(pb, o, {5000, 100, 30, 3});
    expect(ea.mean == eb.mean && ea.standard_error == eb.standard_error, "estimate_observable");
  }
  {
    Rng rng(1009);
    const NdoParams p = random_params(2, 1, 2, rng);
    const Dataset d = sample_dataset(depolarize(canonical_state("bell"), 0.2), {nine_bases(), 50, 5});
    expect(cd_gradient(p, d, 6) == cd_gradient(p, d, 6), "contrastive divergence gradient");
    const auto ma = maxlik_fit(d, {500, 1e-8, 1}), mb = maxlik_fit(d, {500, 1e-8, 1});
    expect(ma.rho.matrix() == mb.rho.matrix(), "maxlik_fit");
  }

  // Command-line repeats: every subcommand twice into fresh files.
  for (const char* run : {"a", "b"}) {
    const fs::path d = dir / run;
    fs::create_directories(d);
    std::ostringstream out, err;
    auto cmd = [&](std::vector<std::string> args) { return cli::run_cli(args, out, err); };
    cmd({"gen", "--target", "bell", "--p-dep", "0.5", "--n-samples", "200", "--seed", "3", "--out",
         (d / "d.txt").string()});
    cmd({"train", "--data", (d / "d.txt").string(), "--epochs", "5", "--reference", "bell",
         "--p-dep", "0.5", "--quiet", "--out-model", (d / "m.json").string(), "--out-report",
         (d / "r.csv").string()});
    cmd({"train", "--data", (d / "d.txt").string(), "--epochs", "2", "--negative-phase", "cd",
         "--quiet", "--out-model", (d / "cd.json").string()});
    cmd({"eval", "--model", (d / "m.json").string(), "--reference", "bell", "--out",
         (d / "e.txt").string()});
    cmd({"sweep", "--p-dep-list", "0,1", "--ns-list", "50", "--n-aux-list", "1,2", "--repeats", "2",
         "--max-updates", "50", "--maxlik-iters", "100", "--jobs", run[0] == 'a' ? "1" : "2",
         "--out-csv", (d / "s.csv").string()});
  }
  for (const char* file : {"d.txt", "m.json", "r.csv", "cd.json", "e.txt", "s.csv"}) {
    const std::string a = slurp(dir / "a" / file), b = slurp(dir / "b" / file);
    expect(!a.empty() && a == b, std::string("cli output ") + file);
  }

  // One cell of the reference sweep and the psi_i pipeline, recomputed.
  cli::SweepOptions one = sweep_options();
  one.p_dep_list = {0.5};
  one.ns_list = {10000};
  one.n_aux_list = {2};
  one.repeats = 1;
  const cli::SweepRow again = cli::run_sweep(one, nullptr).at(0);
  bool found = false;
  for (const auto& r : sweep.rows) {
    if (r.p_dep == 0.5 && r.n_s == 10000 && r.n_aux == 2 && r.repeat == 0) {
      found = true;
      expect(r.fidelity_ndo == again.fidelity_ndo && r.fidelity_maxlik == again.fidelity_maxlik &&
                 r.nll_best == again.nll_best,
             "sweep cell p_dep=0.5 n_s=10000 repeat 0");
    }
  }
  expect(found, "sweep cell present");
  const fs::path again_dir = dir / "psi_again";
  fs::create_directories(again_dir);
  std::string log;
  expect(psi_i_pipeline(again_dir, log) == eval_text, "psi_i gen/train/eval pipeline");

  std::string detail = mismatches.empty() ? "all repeated outputs identical" : "mismatch:";
  for (const auto& m : mismatches) detail += " " + m + ";";
  return {mismatches.empty(), detail};
}

}  // namespace
}  // namespace ndotomo

int main() {
  using namespace ndotomo;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ndotomo_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  int failed = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": "
              << o.detail << std::endl;
  };

  report(1, "physicality", physicality);
  report(2, "purification oracle", purification);
  report(3, "purity at zero mixing", zero_mixing_purity);
  report(4, "gradient suite", gradients);
  report(5, "sampler suite", sampler);
  SweepResults sweep;
  report(6, "fidelity scaling sweep", [&] {
    sweep = run_scaling_sweep();
    return fidelity_scaling(sweep);
  });
  report(7, "maxlik comparability", [&] { return maxlik_comparison(sweep); });
  std::string eval_text;
  report(8, "psi_i reconstruction", [&] { return psi_i_reconstruction(dir / "", eval_text); });
  report(9, "contrastive divergence convergence", cd_convergence);
  report(10, "determinism", [&] { return determinism(dir, sweep, eval_text); });

  fs::remove_all(dir);
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
