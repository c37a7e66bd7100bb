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

#ifndef LAMP_REPORT_H_
#define LAMP_REPORT_H_

#include <string>
#include <vector>

#include "lamp/fabric.h"

namespace lamp {

// A finished run plus everything needed to reproduce it.
struct RunReport {
  std::string scenario_path;
  uint64_t seed = 0;
  Mode mode = Mode::Lamp;
  Metrics metrics;
};

// Renderers are pure string builders with stable formatting, so equal
// runs produce byte-identical files. Every renderer re-derives the
// aggregates from the trial rows and refuses to emit a report whose
// aggregate block disagrees (std::logic_error).
std::string render_csv(const RunReport& report);
std::string render_json(const RunReport& report);
std::string render_compare(const RunReport& lamp, const RunReport& sdn);
std::string render_trace(const std::vector<TraceEvent>& events);

void write_file(const std::string& path, const std::string& content);

}  // namespace lamp

#endif  // LAMP_REPORT_H_
