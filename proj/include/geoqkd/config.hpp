// Copyright 2026 The geoqkd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scenario files. Keys carry their units, e.g. "a_R_m" or "gate_ns".

#include <string>

#include <json.hpp>

#include "geoqkd/pipeline.hpp"

namespace geoqkd::config {

/// Parses a file into JSON; syntax errors become InputError.
nlohmann::json load_json(const std::string& path);

/// Builds a scenario. Unknown keys and wrong types raise InputError naming
/// the dotted key path.
pipeline::Scenario scenario_from_json(const nlohmann::json& j);

pipeline::Scenario load_scenario(const std::string& path);

/// Canonical form of a scenario; round-trips through scenario_from_json.
nlohmann::json scenario_to_json(const pipeline::Scenario& s);

/// Rounds to twelve significant digits; non-finite values become strings.
nlohmann::json rounded(double v);

/// Result record with the key, the loss budget in dB and the link figures.
nlohmann::json result_to_json(const pipeline::PointResult& r, const pipeline::Scenario& s);

/// Sets a dotted key such as "optics.a_R_m", creating objects on the way.
void set_path(nlohmann::json& j, const std::string& dotted, const nlohmann::json& value);

}  // namespace geoqkd::config
