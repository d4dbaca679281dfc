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

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>

#include "zfsel/linalg.hpp"

namespace zfsel {

/// K x M channel matrix, one row h_k per single-antenna user.
///
/// Invariants: K >= 1, M >= 1, every row nonzero. Construction validates.
class ChannelMatrix {
 public:
  explicit ChannelMatrix(CMatrix rows);

  const CMatrix& rows() const noexcept { return rows_; }
  auto row(Index k) const { return rows_.row(k); }
  Index user_count() const noexcept { return rows_.rows(); }
  Index antenna_count() const noexcept { return rows_.cols(); }

 private:
  CMatrix rows_;
};

struct RngSeed {
  std::uint64_t value = 0;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive 64-bit combination of seed components.
constexpr std::uint64_t mix_seed(std::uint64_t seed) noexcept { return splitmix64(seed); }

template <typename... Rest>
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t next, Rest... rest) noexcept {
  return mix_seed(splitmix64(seed) ^ (next + 0x632be59bd9b4e019ULL), static_cast<std::uint64_t>(rest)...);
}

/// Portable circularly-symmetric complex Gaussian source.
///
/// Uniforms take the top 53 bits of std::mt19937_64 (whose output sequence is
/// fixed by the standard) mapped to (0, 1]; each complex sample consumes two
/// uniforms through the Box-Muller transform, cosine branch to the real
/// part and sine branch to the imaginary part, scaled to unit total variance.
/// Library distributions are avoided because their output is
/// implementation-defined.
class ComplexGaussian {
 public:
  explicit ComplexGaussian(RngSeed seed) : engine_(splitmix64(seed.value)) {}

  double uniform() noexcept {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  Complex operator()() noexcept;

 private:
  std::mt19937_64 engine_;
};

/// i.i.d. CN(0, 1) entries; a pure function of (K, M, seed).
ChannelMatrix generate_rayleigh(Index users, Index antennas, RngSeed seed);

/// Reads the CSV matrix format: one user per line, 2M fields interleaved
/// re,im,re,im,...; lines starting with '#' and blank lines are skipped.
ChannelMatrix load_matrix(const std::filesystem::path& path);

/// Parses the same format from a string.
ChannelMatrix parse_matrix(const std::string& text);

}  // namespace zfsel
