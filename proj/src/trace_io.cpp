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

#include "zfsel/trace_io.hpp"

#include <json.hpp>

namespace zfsel {

namespace {

using nlohmann::json;

json one_based(const std::vector<Index>& users) {
  json out = json::array();
  for (Index u : users) out.push_back(u + 1);
  return out;
}

std::vector<Index> zero_based(const json& users) {
  std::vector<Index> out;
  for (const auto& u : users) out.push_back(u.get<Index>() - 1);
  return out;
}

Operation parse_op(const std::string& name) {
  for (Operation op : {Operation::add, Operation::remove, Operation::swap})
    if (name == to_string(op)) return op;
  throw ParseError("trace: unknown op '" + name + "'");
}

}  // namespace

std::string serialize_trace(const SelectionTrace& trace, int indent) {
  json steps = json::array();
  for (const TraceStep& s : trace.steps) {
    steps.push_back({{"op", std::string(to_string(s.op))},
                     {"users", one_based(s.users)},
                     {"delta_rate", s.delta_rate},
                     {"rate_after", s.rate_after}});
  }
  json doc = {{"steps", steps},
              {"final_set", one_based(trace.final_set)},
              {"final_rate", trace.final_rate},
              {"swap_count", trace.swap_count},
              {"delete_count", trace.delete_count},
              {"redundant_user_eliminated", trace.redundant_user_eliminated},
              {"local_optimum_escaped", trace.local_optimum_escaped},
              {"zero_power_delete_seen", trace.zero_power_delete_seen}};
  return doc.dump(indent);
}

SelectionTrace parse_trace(const std::string& text) {
  try {
    const json doc = json::parse(text);
    SelectionTrace trace;
    for (const auto& s : doc.at("steps")) {
      trace.steps.push_back({parse_op(s.at("op").get<std::string>()), zero_based(s.at("users")),
                             s.at("delta_rate").get<double>(), s.at("rate_after").get<double>()});
    }
    trace.final_set = zero_based(doc.at("final_set"));
    trace.final_rate = doc.at("final_rate").get<double>();
    trace.swap_count = doc.at("swap_count").get<std::int64_t>();
    trace.delete_count = doc.at("delete_count").get<std::int64_t>();
    trace.redundant_user_eliminated = doc.at("redundant_user_eliminated").get<bool>();
    trace.local_optimum_escaped = doc.at("local_optimum_escaped").get<bool>();
    trace.zero_power_delete_seen = doc.at("zero_power_delete_seen").get<bool>();
    return trace;
  } catch (const json::exception& e) {
    throw ParseError(std::string("trace: ") + e.what());
  }
}

}  // namespace zfsel
