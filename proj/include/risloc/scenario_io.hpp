// SPDX-License-Identifier: Apache-2.0
//
// risloc: RIS configuration based localization toolkit
// Copyright (C) 2026 The risloc Authors
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

#ifndef RISLOC_SCENARIO_IO_HPP
#define RISLOC_SCENARIO_IO_HPP

#include "risloc/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace risloc
{
    // Flat "key = value" text with dotted keys, '#' comments and comma-separated vectors, e.g.
    //   scenario.ris.n_y = 21
    //   scenario.ris.center = 0, 0, 3.5
    // Every field is required except scenario.nlos.mirror and scenario.nlos.blockage, which must come
    // together. scenario.ris.ref is "center", "corner" or an element index.
    // Throws ParseError naming the line, or the missing field.
    Scenario parse_scenario(std::istream &in);
    Scenario parse_scenario_text(const std::string &text);
    Scenario load_scenario(const std::string &path);

    // Writes every field in the format read by parse_scenario, 17 significant digits.
    void write_scenario(std::ostream &out, const Scenario &scenario);
    std::string scenario_text(const Scenario &scenario);

    // 64-bit FNV-1a of a byte string, as 16 hex digits.
    std::string fnv1a_hex(const std::string &bytes);
}

#endif
