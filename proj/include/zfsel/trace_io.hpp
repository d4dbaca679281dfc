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

#include <string>

#include "zfsel/selectors.hpp"

namespace zfsel {

/// JSON document for a selection trace. User indices are written 1-based.
std::string serialize_trace(const SelectionTrace& trace, int indent = 2);

/// Inverse of serialize_trace. Throws ParseError on malformed input.
SelectionTrace parse_trace(const std::string& text);

}  // namespace zfsel
