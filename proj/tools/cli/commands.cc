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

#include "commands.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ndotomo/checkpoint.h"
#include "ndotomo/datagen.h"
#include "ndotomo/maxlik.h"
#include "ndotomo/ndo.h"
#include "ndotomo/report.h"

namespace ndotomo::cli {

namespace {

std::string fmt(double v, int precision = 10) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::vector<BasisLabel> parse_bases(const std::string& text, int n_qubits) {
  if (text == "all") return all_pauli_bases(n_qubits);
  std::vector<BasisLabel> bases;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    BasisLabel b;
    try {
      b = BasisLabel::parse(item);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--bases: ") + e.what());
    }
    if (static_cast<int>(b.size()) != n_qubits) {
      throw UsageError("--bases: " + item + " does not match the " + std::to_string(n_qubits) +
                       "-qubit target");
    }
    bases.push_back(std::move(b));
  }
  if (bases.empty()) throw UsageError("--bases: no bases given");
  return bases;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

std::string csv_cell(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  return buf;
}

std::string csv_escape(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  }
  return s;
}

SweepRow run_sweep_row(const SweepOptions& opts, double p_dep, std::size_t n_s, int n_aux,
                       int repeat) {
  SweepRow row;
  row.p_dep = p_dep;
  row.n_s = n_s;
  row.n_aux = n_aux;
  row.repeat = repeat;
  row.seed = opts.seed + static_cast<std::uint64_t>(repeat);
  try {
    const DensityMatrix target = depolarize(canonical_state("bell_phi_plus"), p_dep);
    const MeasurementProtocol protocol{nine_bases(), n_s, derive_seed(row.seed, "gen")};
    const Dataset data = sample_dataset(target, protocol);

    TrainConfig config = opts.train;
    config.n_aux = n_aux;
    config.seed = derive_seed(row.seed, "train");
    config.reference.reset();
    const TrainReport report = train(data, config);
    row.fidelity_ndo = fidelity(materialize(report.best_params), target);
    for (const EpochStats& e : report.epochs) {
      if (e.epoch == report.best_epoch) row.nll_best = report.selection_nll(e);
    }

    MaxLikConfig ml;
    ml.max_iters = opts.maxlik_iters;
    ml.seed = derive_seed(row.seed, "maxlik");
    row.fidelity_maxlik = fidelity(maxlik_fit(data, ml).rho, target);
  } catch (const std::exception& e) {
    row.fidelity_ndo.reset();
    row.fidelity_maxlik.reset();
    row.nll_best.reset();
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

}  // namespace

DensityMatrix resolve_state(const StateSpec& spec) {
  if (spec.kind == "file") {
    if (spec.file.empty()) throw UsageError("a 'file' state needs a matrix file path");
    return read_density(spec.file);
  }
  if (!(spec.p_dep >= 0.0 && spec.p_dep <= 1.0)) {
    throw UsageError("--p-dep must lie in [0, 1]");
  }
  if (spec.kind == "bell") return depolarize(canonical_state("bell_phi_plus"), spec.p_dep);
  if (spec.kind == "psi_i") return depolarize(canonical_state("psi_i"), spec.p_dep);
  throw UsageError("unknown state '" + spec.kind + "' (expected bell, psi_i or file)");
}

int run_gen(const GenOptions& opts, std::ostream& log) {
  const DensityMatrix target = resolve_state(opts.target);
  if (opts.n_samples < 1) throw UsageError("--n-samples must be >= 1");
  MeasurementProtocol protocol{parse_bases(opts.bases, target.num_qubits()), opts.n_samples,
                               opts.seed};
  const Dataset data = sample_dataset(target, protocol);
  std::ofstream out(opts.out);
  if (!out) throw std::runtime_error("cannot open " + opts.out + " for writing");
  if (opts.counts) {
    write_count_table(data, out);
  } else {
    write_dataset(data, out);
  }
  log << "target " << opts.target.kind;
  if (opts.target.kind != "file") log << " p_dep " << opts.target.p_dep;
  log << " qubits " << target.num_qubits() << " purity " << fmt(target.purity()) << '\n';
  if (opts.target.kind != "file") {
    const std::string name = opts.target.kind == "bell" ? "bell_phi_plus" : "psi_i";
    log << "fidelity to the pure " << name << " state "
        << fmt(fidelity(target, pure_density(canonical_state(name)))) << '\n';
  }
  log << "wrote " << data.num_records() << " records in " << protocol.bases.size()
      << " bases to " << opts.out << '\n';
  return kExitOk;
}

int run_train(const TrainOptions& opts, std::ostream& log) {
  const Dataset data = read_dataset(std::filesystem::path(opts.data));
  TrainConfig config = opts.config;
  if (opts.reference) config.reference = resolve_state(*opts.reference);
  const TrainReport report = train(data, config, opts.quiet ? nullptr : &log);
  save_checkpoint(report.best_params, std::filesystem::path(opts.out_model));
  if (!opts.out_report.empty()) write_train_report(report, std::filesystem::path(opts.out_report));
  log << "best epoch " << report.best_epoch << '\n';
  return kExitOk;
}

int run_eval(const EvalOptions& opts, std::ostream& out, std::ostream& log) {
  const NdoParams params = load_checkpoint(std::filesystem::path(opts.model));
  if (params.n_visible > kMaxQubits) throw std::runtime_error("model exceeds the enumeration cap");
  const DensityMatrix rho = materialize(params);
  const DensityMatrix reference = resolve_state(opts.reference);
  if (reference.dim() != rho.dim()) {
    throw UsageError("reference state and model have different qubit counts");
  }
  std::ostringstream text;
  text << "# ndotomo eval v1\n";
  text << "metric,value\n";
  text << "fidelity," << fmt(fidelity(rho, reference)) << '\n';
  text << "purity," << fmt(rho.purity()) << '\n';
  text << "trace_distance," << fmt(trace_distance(rho, reference)) << '\n';
  text << "n_qubits," << rho.num_qubits() << '\n';
  write_matrix_blocks(rho.matrix(), text);
  if (opts.out.empty()) {
    out << text.str();
  } else {
    std::ofstream file(opts.out);
    if (!file) throw std::runtime_error("cannot open " + opts.out + " for writing");
    file << text.str();
    log << "wrote evaluation to " << opts.out << '\n';
  }
  return kExitOk;
}

std::vector<SweepRow> run_sweep(const SweepOptions& opts, std::ostream* log) {
  if (opts.repeats < 1) throw UsageError("--repeats must be >= 1");
  if (opts.p_dep_list.empty() || opts.ns_list.empty() || opts.n_aux_list.empty()) {
    throw UsageError("sweep grids must be non-empty");
  }
  for (double p : opts.p_dep_list) {
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("--p-dep-list values must lie in [0, 1]");
  }
  for (std::size_t n : opts.ns_list) {
    if (n < 1) throw UsageError("--ns-list values must be >= 1");
  }
  for (int a : opts.n_aux_list) {
    if (a < 0) throw UsageError("--n-aux-list values must be >= 0");
  }

  struct Cell {
    double p;
    std::size_t ns;
    int na;
    int repeat;
  };
  std::vector<Cell> cells;
  for (double p : opts.p_dep_list)
    for (std::size_t ns : opts.ns_list)
      for (int na : opts.n_aux_list)
        for (int r = 0; r < opts.repeats; ++r) cells.push_back({p, ns, na, r});

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      rows[i] = run_sweep_row(opts, c.p, c.ns, c.na, c.repeat);
      if (log) {
        std::lock_guard<std::mutex> lock(log_mutex);
        *log << "sweep p_dep " << c.p << " n_s " << c.ns << " n_aux " << c.na << " repeat "
             << c.repeat << ": " << rows[i].status;
        if (rows[i].fidelity_ndo) {
          *log << " F_ndo " << fmt(*rows[i].fidelity_ndo, 6) << " F_maxlik "
               << fmt(*rows[i].fidelity_maxlik, 6);
        }
        *log << '\n';
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(cells.size())));
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "# ndotomo sweep v1\n";
  out << "kind,p_dep,n_s,n_aux,repeat,seed,fidelity_ndo,fidelity_maxlik,nll_best,"
         "fidelity_ndo_std,fidelity_maxlik_std,nll_best_std,status\n";
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    std::vector<double> f_ndo, f_ml, nll;
    for (; j < rows.size() && rows[j].p_dep == rows[i].p_dep && rows[j].n_s == rows[i].n_s &&
           rows[j].n_aux == rows[i].n_aux;
         ++j) {
      const SweepRow& r = rows[j];
      out << "run," << csv_cell(r.p_dep) << ',' << r.n_s << ',' << r.n_aux << ',' << r.repeat << ','
          << r.seed << ',' << csv_cell(r.fidelity_ndo) << ',' << csv_cell(r.fidelity_maxlik) << ','
          << csv_cell(r.nll_best) << ",,,," << csv_escape(r.status) << '\n';
      if (r.fidelity_ndo) f_ndo.push_back(*r.fidelity_ndo);
      if (r.fidelity_maxlik) f_ml.push_back(*r.fidelity_maxlik);
      if (r.nll_best) nll.push_back(*r.nll_best);
    }
    const SweepRow& head = rows[i];
    auto mean_cell = [](const std::vector<double>& v) {
      return v.empty() ? std::string() : csv_cell(mean_of(v));
    };
    auto std_cell = [](const std::vector<double>& v) {
      return v.empty() ? std::string() : csv_cell(stddev_of(v));
    };
    out << "summary," << csv_cell(head.p_dep) << ',' << head.n_s << ',' << head.n_aux << ",,,"
        << mean_cell(f_ndo) << ',' << mean_cell(f_ml) << ',' << mean_cell(nll) << ','
        << std_cell(f_ndo) << ',' << std_cell(f_ml) << ',' << std_cell(nll) << ','
        << (f_ndo.size() == j - i ? "ok" : std::to_string(j - i - f_ndo.size()) + " failed")
        << '\n';
    i = j;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neural density operator tomography"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read flag defaults from an INI/TOML file");

  auto add_state = [](CLI::App* sub, StateSpec& spec, const std::string& flag) {
    sub->add_option("--" + flag, spec.kind, "bell | psi_i | file")
        ->check(CLI::IsMember({"bell", "psi_i", "file"}))
        ->capture_default_str();
    sub->add_option("--p-dep", spec.p_dep, "Depolarizing strength applied to bell/psi_i")
        ->capture_default_str();
    sub->add_option("--" + flag + "-file", spec.file, "Density-matrix file for '" + flag + " file'");
  };

  // gen
  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Sample a synthetic measurement dataset");
  add_state(gen_cmd, gen.target, "target");
  std::vector<std::string> gen_bases{gen.bases};
  gen_cmd->add_option("--bases", gen_bases, "'all' or a comma list such as ZZ,XX")
      ->delimiter(',')
      ->capture_default_str();
  gen_cmd->add_option("--n-samples", gen.n_samples, "Records per basis")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Dataset file to write")->required();
  gen_cmd->add_flag("--counts", gen.counts, "Write a count table instead of one line per record");

  // train
  TrainOptions tr;
  StateSpec tr_reference;
  std::string optimizer = "adadelta";
  std::string negative = "exact";
  CLI::App* train_cmd = app.add_subcommand("train", "Train a neural density operator");
  train_cmd->add_option("--data", tr.data, "Dataset file")->required();
  train_cmd->add_option("--n-hidden", tr.config.n_hidden)->capture_default_str();
  train_cmd->add_option("--n-aux", tr.config.n_aux)->capture_default_str();
  train_cmd->add_option("--epochs", tr.config.epochs)->capture_default_str();
  train_cmd->add_option("--max-updates", tr.config.max_updates, "Cap on minibatch updates (0: none)")
      ->capture_default_str();
  train_cmd->add_option("--batch-size", tr.config.batch_size)->capture_default_str();
  train_cmd->add_option("--optimizer", optimizer)
      ->check(CLI::IsMember({"adadelta", "sgd"}))
      ->capture_default_str();
  train_cmd->add_option("--learning-rate", tr.config.optimizer.learning_rate, "SGD step size")
      ->capture_default_str();
  train_cmd->add_option("--adadelta-decay", tr.config.optimizer.decay)->capture_default_str();
  train_cmd->add_option("--adadelta-epsilon", tr.config.optimizer.epsilon)->capture_default_str();
  train_cmd->add_option("--negative-phase", negative)
      ->check(CLI::IsMember({"exact", "cd"}))
      ->capture_default_str();
  train_cmd->add_option("--cd-k", tr.config.negative.cd_k)->capture_default_str();
  train_cmd->add_option("--seed", tr.config.seed)->capture_default_str();
  train_cmd->add_option("--holdout", tr.config.holdout, "Fraction held out for model selection")
      ->capture_default_str();
  CLI::Option* ref_opt = train_cmd->add_option("--reference", tr_reference.kind,
                                               "Log fidelity to bell | psi_i | file per epoch")
                             ->check(CLI::IsMember({"bell", "psi_i", "file"}));
  train_cmd->add_option("--p-dep", tr_reference.p_dep)->capture_default_str();
  train_cmd->add_option("--reference-file", tr_reference.file);
  train_cmd->add_option("--out-model", tr.out_model, "Checkpoint file to write")->required();
  train_cmd->add_option("--out-report", tr.out_report, "Training report CSV");
  train_cmd->add_flag("--quiet", tr.quiet, "Suppress per-epoch progress lines");

  // eval
  EvalOptions ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Compare a trained model with a reference state");
  eval_cmd->add_option("--model", ev.model, "Checkpoint file")->required();
  add_state(eval_cmd, ev.reference, "reference");
  eval_cmd->add_option("--out", ev.out, "Write the report here instead of stdout");

  // sweep
  SweepOptions sw;
  sw.train.max_updates = 200000;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Fidelity sweep: NDO vs maximum likelihood");
  sweep_cmd->add_option("--p-dep-list", sw.p_dep_list)->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--ns-list", sw.ns_list)->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--n-aux-list", sw.n_aux_list)->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--repeats", sw.repeats)->capture_default_str();
  sweep_cmd->add_option("--seed", sw.seed)->capture_default_str();
  sweep_cmd->add_option("--jobs", sw.jobs, "Concurrent runs")
      ->envname("NDOTOMO_JOBS")
      ->capture_default_str();
  sweep_cmd->add_option("--n-hidden", sw.train.n_hidden)->capture_default_str();
  sweep_cmd->add_option("--epochs", sw.train.epochs)->capture_default_str();
  sweep_cmd->add_option("--max-updates", sw.train.max_updates)->capture_default_str();
  sweep_cmd->add_option("--batch-size", sw.train.batch_size)->capture_default_str();
  sweep_cmd->add_option("--maxlik-iters", sw.maxlik_iters)->capture_default_str();
  sweep_cmd->add_option("--out-csv", sw.out_csv)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      gen.bases.clear();
      for (const std::string& b : gen_bases) gen.bases += (gen.bases.empty() ? "" : ",") + b;
      return run_gen(gen, err);
    }
    if (train_cmd->parsed()) {
      tr.config.optimizer.kind = optimizer == "sgd" ? OptimizerKind::kSgd : OptimizerKind::kAdaDelta;
      tr.config.negative.mode =
          negative == "cd" ? NegativePhase::kContrastiveDivergence : NegativePhase::kExact;
      if (ref_opt->count() > 0) tr.reference = tr_reference;
      return run_train(tr, err);
    }
    if (eval_cmd->parsed()) return run_eval(ev, out, err);
    if (sweep_cmd->parsed()) {
      const auto rows = run_sweep(sw, &err);
      std::ofstream csv(sw.out_csv);
      if (!csv) throw std::runtime_error("cannot open " + sw.out_csv + " for writing");
      write_sweep_csv(rows, csv);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("ndotomo");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ndotomo::cli
