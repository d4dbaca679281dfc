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

#include "zfsel/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace zfsel {

void validate(const SimConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.algorithms.empty()) throw std::invalid_argument("no algorithms selected");
  if (config.snr_db.empty()) throw std::invalid_argument("no SNR values given");
  for (double p : config.snr_db)
    if (!std::isfinite(p)) throw std::invalid_argument("SNR values must be finite");
  if (config.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (config.sus_alpha <= 0.0 || config.sus_alpha > 1.0) {
    throw std::invalid_argument("sus alpha must be in (0, 1]");
  }
  if (config.fixed_channel) {
    const Index k = config.fixed_channel->user_count();
    for (Index u : config.users)
      if (u != k) throw std::invalid_argument("user count does not match the matrix file");
    if (config.antennas != 0 && config.antennas != config.fixed_channel->antenna_count()) {
      throw std::invalid_argument("antenna count does not match the matrix file");
    }
  } else {
    if (config.antennas < 1) throw std::invalid_argument("antennas must be >= 1");
    if (config.users.empty()) throw std::invalid_argument("no user counts given");
    for (Index u : config.users)
      if (u < 1) throw std::invalid_argument("user counts must be >= 1");
  }
  for (Algorithm a : config.algorithms) {
    if (a != Algorithm::exhaustive) continue;
    const Index m = config.fixed_channel ? config.fixed_channel->antenna_count() : config.antennas;
    const std::vector<Index> ks =
        config.fixed_channel ? std::vector<Index>{config.fixed_channel->user_count()} : config.users;
    for (Index k : ks) {
      const std::uint64_t count = exhaustive_subset_count(k, m);
      if (count > config.exhaustive_budget) {
        throw BudgetExceeded("exhaustive search over K=" + std::to_string(k) + ", M=" +
                             std::to_string(m) + " needs " + std::to_string(count) +
                             " subsets, budget is " + std::to_string(config.exhaustive_budget));
      }
    }
  }
}

std::uint64_t trial_seed(RngSeed master, Index users, std::size_t snr_index, std::int64_t trial) {
  return mix_seed(master.value, static_cast<std::uint64_t>(users),
                  static_cast<std::uint64_t>(snr_index), static_cast<std::uint64_t>(trial));
}

namespace {

struct Outcome {
  double rate = 0.0;
  double set_size = 0.0;
  double swaps = 0.0;
  double deletes = 0.0;
  double seconds = 0.0;
};

// Runs `count` jobs over `workers` threads; job(i) must only touch slot i.
template <typename Job>
void parallel_for(std::int64_t count, unsigned workers, Job job) {
  if (workers <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::int64_t>(workers, count));
  for (unsigned w = 0; w < n; ++w) {
    pool.emplace_back([&] {
      for (std::int64_t i = next++; i < count && !failed; i = next++) {
        try {
          job(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<ResultRow> run_simulation(const SimConfig& config) {
  validate(config);
  const Index m = config.fixed_channel ? config.fixed_channel->antenna_count() : config.antennas;
  const std::vector<Index> ks =
      config.fixed_channel ? std::vector<Index>{config.fixed_channel->user_count()} : config.users;

  AlgorithmParams params;
  params.options = config.options;
  params.sus_alpha = config.sus_alpha;
  params.exhaustive_budget = config.exhaustive_budget;

  const std::size_t n_alg = config.algorithms.size();
  std::ptrdiff_t exhaustive_slot = -1;
  for (std::size_t a = 0; a < n_alg; ++a)
    if (config.algorithms[a] == Algorithm::exhaustive) exhaustive_slot = static_cast<std::ptrdiff_t>(a);

  std::vector<ResultRow> rows;
  for (Index k : ks) {
    for (std::size_t pi = 0; pi < config.snr_db.size(); ++pi) {
      const double power = db_to_linear(config.snr_db[pi]);
      // outcomes[t * n_alg + a]
      std::vector<Outcome> outcomes(static_cast<std::size_t>(config.trials) * n_alg);

      parallel_for(config.trials, config.workers, [&](std::int64_t t) {
        const ChannelMatrix channel =
            config.fixed_channel ? *config.fixed_channel
                                 : generate_rayleigh(k, m, RngSeed{trial_seed(config.master_seed, k, pi, t)});
        for (std::size_t a = 0; a < n_alg; ++a) {
          const auto start = std::chrono::steady_clock::now();
          const AlgoResult result = run_algorithm(config.algorithms[a], channel, power, params);
          const auto stop = std::chrono::steady_clock::now();
          Outcome& o = outcomes[static_cast<std::size_t>(t) * n_alg + a];
          o.rate = result.trace.final_rate;
          o.set_size = static_cast<double>(result.trace.final_set.size());
          o.swaps = static_cast<double>(result.trace.swap_count);
          o.deletes = static_cast<double>(result.trace.delete_count);
          o.seconds = std::chrono::duration<double>(stop - start).count();
        }
      });

      std::vector<ResultRow> cell(n_alg);
      for (std::size_t a = 0; a < n_alg; ++a) {
        ResultRow& row = cell[a];
        row.algorithm = std::string(to_string(config.algorithms[a]));
        row.antennas = m;
        row.users = k;
        row.snr_db = config.snr_db[pi];
        row.trials = config.trials;
        double redundant = 0.0;
        double escaped = 0.0;
        double seconds = 0.0;
        for (std::int64_t t = 0; t < config.trials; ++t) {
          const Outcome& o = outcomes[static_cast<std::size_t>(t) * n_alg + a];
          row.mean_rate += o.rate;
          row.mean_set_size += o.set_size;
          row.mean_swaps_a += o.swaps;
          row.mean_deletes_b += o.deletes;
          redundant += o.deletes > 0 ? 1.0 : 0.0;
          escaped += o.swaps > 0 ? 1.0 : 0.0;
          seconds += o.seconds;
        }
        const double n = static_cast<double>(config.trials);
        row.mean_rate /= n;
        row.mean_set_size /= n;
        row.mean_swaps_a /= n;
        row.mean_deletes_b /= n;
        row.ratio_redundant_eliminated = redundant / n;
        row.ratio_local_escaped = escaped / n;
        row.wall_time_s = config.record_timing ? seconds : 0.0;
      }
      if (exhaustive_slot >= 0) {
        const double best = cell[static_cast<std::size_t>(exhaustive_slot)].mean_rate;
        for (ResultRow& row : cell) row.frac_of_exhaustive = best > 0.0 ? row.mean_rate / best : 1.0;
      }
      rows.insert(rows.end(), cell.begin(), cell.end());
    }
  }
  return rows;
}

namespace {

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const ResultRow& r : rows) {
    out += r.algorithm + ',' + std::to_string(r.antennas) + ',' + std::to_string(r.users) + ',' +
           fmt_real(r.snr_db) + ',' + std::to_string(r.trials) + ',' + fmt_real(r.mean_rate) + ',' +
           fmt_real(r.mean_set_size) + ',' + fmt_real(r.ratio_redundant_eliminated) + ',' +
           fmt_real(r.ratio_local_escaped) + ',' + fmt_real(r.mean_swaps_a) + ',' +
           fmt_real(r.mean_deletes_b) + ',' +
           (r.frac_of_exhaustive ? fmt_real(*r.frac_of_exhaustive) : std::string()) + ',' +
           fmt_real(r.wall_time_s) + '\n';
  }
  return out;
}

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << format_csv(rows);
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("csv: unexpected header");
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 13) throw ParseError("csv line " + std::to_string(line_no) + ": expected 13 fields");
    try {
      ResultRow r;
      r.algorithm = f[0];
      r.antennas = std::stoll(f[1]);
      r.users = std::stoll(f[2]);
      r.snr_db = std::stod(f[3]);
      r.trials = std::stoll(f[4]);
      r.mean_rate = std::stod(f[5]);
      r.mean_set_size = std::stod(f[6]);
      r.ratio_redundant_eliminated = std::stod(f[7]);
      r.ratio_local_escaped = std::stod(f[8]);
      r.mean_swaps_a = std::stod(f[9]);
      r.mean_deletes_b = std::stod(f[10]);
      if (!f[11].empty()) r.frac_of_exhaustive = std::stod(f[11]);
      r.wall_time_s = std::stod(f[12]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("csv line " + std::to_string(line_no) + ": bad number");
    }
  }
  return rows;
}

}  // namespace zfsel
