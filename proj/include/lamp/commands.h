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

#ifndef LAMP_COMMANDS_H_
#define LAMP_COMMANDS_H_

#include <optional>
#include <ostream>
#include <string>

#include "lamp/fabric.h"

namespace lamp {

struct CliOptions {
  std::string scenario_path;
  std::optional<Mode> mode;    // overrides the file's mode
  std::optional<uint64_t> seed;  // overrides the file's seed
  std::string out;             // report path; extension picks the format
  std::string trace;           // trace path ("" = no trace)
  unsigned parallel = 1;       // trial worker threads
  std::string switch_sel;      // inspect: switch name or numeric swid
};

// Each command returns a process exit status and reports failures on
// `err` as a one-line diagnostic naming the offending config key or
// simulation error.
int cmd_run(const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_compare(const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_inspect(const CliOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace lamp

#endif  // LAMP_COMMANDS_H_
