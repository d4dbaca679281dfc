// SPDX-License-Identifier: Apache-2.0
//
// zfsel: user selection for zero-forcing multi-user MIMO downlink
// Copyright (C) 2026 The zfsel authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line front end. Exit codes: 0 ok, 1 usage, 2 runtime or
// verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zfsel/harness.hpp"
#include "zfsel/trace_io.hpp"
#include "zfsel/verify.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kFailure = 2;

struct SimulateArgs {
  zfsel::Index antennas = 0;
  std::vector<zfsel::Index> users;
  std::vector<double> snr_db;
  std::int64_t trials = 2000;
  std::vector<std::string> algorithms{"zfs", "swf", "sus", "gus_ns", "guss"};
  double sus_alpha = zfsel::kDefaultSusAlpha;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::uint64_t exhaustive_budget = zfsel::kDefaultExhaustiveBudget;
  std::string out;
  std::string matrix_file;
  bool no_timing = false;
};

struct TraceArgs {
  std::string matrix_file;
  double snr_db = 0.0;
  std::string algorithm = "guss";
  std::string out;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw zfsel::Error("cannot write " + path);
}

int run_simulate(const SimulateArgs& a) {
  if (a.matrix_file.empty() && (a.antennas == 0 || a.users.empty() || a.snr_db.empty())) {
    std::cerr << "simulate: --antennas, --users and --snr-db are required "
                 "(or --matrix-file with --snr-db)\n";
    return kUsage;
  }
  if (a.snr_db.empty()) {
    std::cerr << "simulate: --snr-db is required\n";
    return kUsage;
  }
  zfsel::SimConfig cfg;
  cfg.antennas = a.antennas;
  cfg.users = a.users;
  cfg.snr_db = a.snr_db;
  cfg.trials = a.trials;
  cfg.sus_alpha = a.sus_alpha;
  cfg.master_seed = zfsel::RngSeed{a.seed};
  cfg.workers = a.workers;
  cfg.exhaustive_budget = a.exhaustive_budget;
  cfg.record_timing = !a.no_timing;
  try {
    for (const auto& name : a.algorithms) cfg.algorithms.push_back(zfsel::parse_algorithm(name));
    if (!a.matrix_file.empty()) cfg.fixed_channel = zfsel::load_matrix(a.matrix_file);
    zfsel::validate(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "simulate: " << e.what() << '\n';
    return kUsage;
  }
  write_text(a.out, zfsel::format_csv(zfsel::run_simulation(cfg)));
  return 0;
}

int run_trace(const TraceArgs& a) {
  zfsel::Algorithm algorithm;
  try {
    algorithm = zfsel::parse_algorithm(a.algorithm);
  } catch (const std::invalid_argument& e) {
    std::cerr << "trace: " << e.what() << '\n';
    return kUsage;
  }
  const zfsel::ChannelMatrix channel = zfsel::load_matrix(a.matrix_file);
  const auto result = zfsel::run_algorithm(algorithm, channel, zfsel::db_to_linear(a.snr_db));
  write_text(a.out, zfsel::serialize_trace(result.trace) + "\n");
  return 0;
}

int run_verify(const zfsel::VerifyConfig& cfg) {
  const zfsel::VerifyReport r = zfsel::verify_engine(cfg);
  std::printf("sequences=%lld operations=%lld max_gain_error=%.3e max_eval_apply_gap=%.3e "
              "max_swap_route_gap=%.3e max_invariant=%.3e\n",
              static_cast<long long>(r.sequences), static_cast<long long>(r.operations),
              r.max_gain_error, r.max_eval_apply_gap, r.max_swap_route_gap, r.max_orthogonality);
  for (const auto& f : r.failures) std::printf("FAIL %s\n", f.c_str());
  std::printf("%s\n", r.passed() ? "verify: PASS" : "verify: FAIL");
  return r.passed() ? 0 : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zfsel: user selection for zero-forcing MU-MIMO downlink"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep, CSV output");
  simulate->add_option("--antennas", sim.antennas, "base station antennas M")->check(CLI::PositiveNumber);
  simulate->add_option("--users", sim.users, "user counts K (comma list)")->delimiter(',');
  simulate->add_option("--snr-db", sim.snr_db, "total SNR P in dB (comma list)")->delimiter(',');
  simulate->add_option("--trials", sim.trials, "channel realizations per cell")->check(CLI::PositiveNumber);
  simulate->add_option("--algorithms", sim.algorithms, "zfs,swf,sus,gus_ns,guss,exhaustive")
      ->delimiter(',');
  simulate->add_option("--sus-alpha", sim.sus_alpha, "SUS orthogonality threshold");
  simulate->add_option("--seed", sim.seed, "master seed");
  simulate->add_option("--workers", sim.workers, "worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--exhaustive-budget", sim.exhaustive_budget, "max subsets for exhaustive");
  simulate->add_option("--out", sim.out, "output CSV (default stdout)");
  simulate->add_option("--matrix-file", sim.matrix_file, "fixed channel matrix CSV");
  simulate->add_flag("--no-timing", sim.no_timing, "write wall_time_s as 0");

  TraceArgs tr;
  auto* trace = app.add_subcommand("trace", "run one algorithm on a matrix file, JSON trace output");
  trace->add_option("--matrix-file", tr.matrix_file, "channel matrix CSV")->required();
  trace->add_option("--snr-db", tr.snr_db, "total SNR P in dB")->required();
  trace->add_option("--algorithm", tr.algorithm, "algorithm name");
  trace->add_option("--out", tr.out, "output JSON (default stdout)");

  zfsel::VerifyConfig ver;
  auto* verify = app.add_subcommand("verify", "cross-check incremental updates against direct formulas");
  verify->add_option("--trials", ver.sequences, "random operation sequences")->check(CLI::PositiveNumber);
  verify->add_option("--max-users", ver.max_users, "largest K")->check(CLI::Range(2, 64));
  verify->add_option("--max-antennas", ver.max_antennas, "largest M")->check(CLI::Range(1, 64));
  verify->add_option("--tolerance", ver.tolerance, "relative tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--seed", ver.seed, "sequence seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*trace) return run_trace(tr);
    return run_verify(ver);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
