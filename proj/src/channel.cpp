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

#include "zfsel/channel.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace zfsel {

ChannelMatrix::ChannelMatrix(CMatrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw InvalidChannelError("channel matrix needs at least one user and one antenna");
  }
  if (!rows_.allFinite()) throw InvalidChannelError("channel matrix has non-finite entries");
  for (Index k = 0; k < rows_.rows(); ++k) {
    if (rows_.row(k).squaredNorm() == 0.0) {
      throw InvalidChannelError("user " + std::to_string(k + 1) + " has a zero channel");
    }
  }
}

Complex ComplexGaussian::operator()() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-std::log(u1));  // sqrt(-2 ln u) / sqrt(2)
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

ChannelMatrix generate_rayleigh(Index users, Index antennas, RngSeed seed) {
  if (users < 1 || antennas < 1) {
    throw InvalidChannelError("generate_rayleigh: K and M must be >= 1");
  }
  ComplexGaussian source(seed);
  CMatrix h(users, antennas);
  for (Index k = 0; k < users; ++k)
    for (Index m = 0; m < antennas; ++m) h(k, m) = source();
  return ChannelMatrix(std::move(h));
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_field(const std::string& field, std::size_t line_no) {
  const std::string t = trim(field);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + t + "'");
  }
  if (used != t.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + t + "'");
  }
  return value;
}

}  // namespace

ChannelMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::vector<Complex>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;

    std::vector<double> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(parse_field(field, line_no));
    if (t.back() == ',') throw ParseError("line " + std::to_string(line_no) + ": trailing comma");
    if (fields.empty() || fields.size() % 2 != 0) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected an even number of fields (re,im pairs)");
    }
    std::vector<Complex> row;
    for (std::size_t i = 0; i < fields.size(); i += 2) row.emplace_back(fields[i], fields[i + 1]);
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(line_no) + ": ragged row (" +
                       std::to_string(row.size()) + " entries, expected " +
                       std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix file contains no rows");

  CMatrix h(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t m = 0; m < rows[k].size(); ++m)
      h(static_cast<Index>(k), static_cast<Index>(m)) = rows[k][m];
  return ChannelMatrix(std::move(h));
}

ChannelMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix(buffer.str());
}

}  // namespace zfsel
