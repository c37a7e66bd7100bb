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

#include <iostream>

#include <CLI11.hpp>

#include "lamp/commands.h"
#include "lamp/scenario.h"

int main(int argc, char** argv) {
  CLI::App app{
      "lampsim: in-data-plane L7 attack mitigation vs. an SDN-controller "
      "baseline, on a deterministic simulated switch fabric"};
  app.require_subcommand(1);

  lamp::CliOptions opt;
  std::string mode_text;
  uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* cmd, bool with_mode) {
    cmd->add_option("--scenario", opt.scenario_path, "scenario file (JSON)")
        ->required();
    if (with_mode)
      cmd->add_option("--mode", mode_text, "pipeline to run: lamp|sdn")
          ->check(CLI::IsMember({"lamp", "sdn"}));
    cmd->add_option("--seed", seed_value, "RNG seed override");
    cmd->add_option("--out", opt.out,
                    "report path (.json selects the structured format)");
    cmd->add_option("--trace", opt.trace, "per-event trace path");
    cmd->add_option("--parallel", opt.parallel,
                    "trial worker threads (identical output at any count)")
        ->check(CLI::Range(1u, 256u));
  };

  CLI::App* run =
      app.add_subcommand("run", "run one mode and write a metrics report");
  add_common(run, true);
  CLI::App* compare = app.add_subcommand(
      "compare", "run both modes on one seed and write a side-by-side table");
  add_common(compare, false);
  CLI::App* inspect = app.add_subcommand(
      "inspect", "dump a switch's match tables and registers");
  inspect->add_option("--scenario", opt.scenario_path, "scenario file (JSON)")
      ->required();
  inspect->add_option("--switch", opt.switch_sel, "switch name or swid")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed() || compare->parsed()) {
    CLI::App* active = run->parsed() ? run : compare;
    if (active->count("--seed")) opt.seed = seed_value;
    if (!mode_text.empty()) opt.mode = lamp::mode_from_string(mode_text);
  }

  if (run->parsed()) return lamp::cmd_run(opt, std::cout, std::cerr);
  if (compare->parsed()) return lamp::cmd_compare(opt, std::cout, std::cerr);
  return lamp::cmd_inspect(opt, std::cout, std::cerr);
}
