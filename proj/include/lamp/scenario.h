/* Copyright 2026-present, the lampsim authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LAMP_SCENARIO_H_
#define LAMP_SCENARIO_H_

#include <optional>
#include <string>

#include "lamp/fabric.h"

namespace lamp {

// Output paths requested by the scenario file; command-line flags win
// over these. Empty string means not requested.
struct OutputConfig {
  std::string report_csv;
  std::string report_json;
  std::string trace;
};

struct ScenarioFile {
  Topology topology;
  ScenarioConfig scenario;
  OutputConfig output;
};

// Strict loaders: an unknown key, a missing required key, or an
// ill-typed value raises ConfigError naming the full key path, e.g.
// "topology.switches[1].lpm[0].prefix".
ScenarioFile load_scenario_file(const std::string& path);
ScenarioFile parse_scenario_text(const std::string& text);

std::optional<Mode> mode_from_string(const std::string& text);

}  // namespace lamp

#endif  // LAMP_SCENARIO_H_
