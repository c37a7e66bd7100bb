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

#include "lamp/commands.h"

#include <algorithm>
#include <cctype>

#include "lamp/report.h"
#include "lamp/scenario.h"

namespace lamp {

namespace {

bool ends_with(const std::string& text, const std::string& suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<TraceEvent> merged_trace(const std::vector<TrialResult>& results) {
  std::vector<TraceEvent> all;
  for (const TrialResult& r : results)
    all.insert(all.end(), r.trace.begin(), r.trace.end());
  return all;
}

struct LoadedRun {
  ScenarioFile file;
  std::string trace_path;
};

LoadedRun load_with_overrides(const CliOptions& opt) {
  LoadedRun run;
  run.file = load_scenario_file(opt.scenario_path);
  if (opt.mode) run.file.scenario.mode = *opt.mode;
  if (opt.seed) run.file.scenario.seed = *opt.seed;
  run.trace_path = opt.trace.empty() ? run.file.output.trace : opt.trace;
  return run;
}

int fail(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << "\n";
  return 1;
}

}  // namespace

int cmd_run(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    LoadedRun run = load_with_overrides(opt);
    Fabric fabric =
        build_fabric(std::move(run.file.topology), run.file.scenario);
    fabric.set_tracing(!run.trace_path.empty());
    std::vector<TrialResult> results = fabric.run_all_trials(opt.parallel);
    RunReport report{opt.scenario_path, run.file.scenario.seed,
                     run.file.scenario.mode, fabric.metrics_of(results)};

    bool wrote = false;
    if (!opt.out.empty()) {
      write_file(opt.out, ends_with(opt.out, ".json") ? render_json(report)
                                                      : render_csv(report));
      wrote = true;
    } else {
      if (!run.file.output.report_csv.empty()) {
        write_file(run.file.output.report_csv, render_csv(report));
        wrote = true;
      }
      if (!run.file.output.report_json.empty()) {
        write_file(run.file.output.report_json, render_json(report));
        wrote = true;
      }
    }
    if (!run.trace_path.empty())
      write_file(run.trace_path, render_trace(merged_trace(results)));
    if (!wrote) out << render_csv(report);
    return 0;
  } catch (const std::exception& e) {
    return fail(err, e);
  }
}

int cmd_compare(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    LoadedRun run = load_with_overrides(opt);
    Fabric fabric =
        build_fabric(std::move(run.file.topology), run.file.scenario);
    fabric.set_tracing(!run.trace_path.empty());

    fabric.scenario().mode = Mode::Lamp;
    std::vector<TrialResult> lamp_results = fabric.run_all_trials(opt.parallel);
    RunReport lamp_report{opt.scenario_path, run.file.scenario.seed,
                          Mode::Lamp, fabric.metrics_of(lamp_results)};

    fabric.scenario().mode = Mode::SdnBaseline;
    std::vector<TrialResult> sdn_results = fabric.run_all_trials(opt.parallel);
    RunReport sdn_report{opt.scenario_path, run.file.scenario.seed,
                         Mode::SdnBaseline, fabric.metrics_of(sdn_results)};

    std::string table = render_compare(lamp_report, sdn_report);
    if (!opt.out.empty())
      write_file(opt.out, table);
    else
      out << table;
    if (!run.trace_path.empty()) {
      write_file(run.trace_path + ".lamp",
                 render_trace(merged_trace(lamp_results)));
      write_file(run.trace_path + ".sdn",
                 render_trace(merged_trace(sdn_results)));
    }
    return 0;
  } catch (const std::exception& e) {
    return fail(err, e);
  }
}

namespace {

PortId key_port(const std::vector<uint8_t>& key) {
  return static_cast<PortId>((key[0] << 8) | key[1]);
}

uint32_t key_swid(const std::vector<uint8_t>& key) {
  return (uint32_t{key[0]} << 24) | (uint32_t{key[1]} << 16) |
         (uint32_t{key[2]} << 8) | key[3];
}

void dump_switch(std::ostream& out, const SwitchConfig& cfg,
                 const SwitchState& state) {
  out << "switch " << cfg.name << " (swid " << cfg.swid << ")\n";

  auto entries = state.tables.ipv4_lpm.entries();
  out << "ipv4_lpm: " << entries.size() << " entries\n";
  for (const auto& [prefix, action] : entries) {
    out << "  " << to_string(prefix) << " -> ";
    if (action.kind == ForwardingAction::Kind::Drop)
      out << "drop\n";
    else
      out << "forward port " << action.next_hop.egress_port << " mac "
          << mac_to_string(action.next_hop.dst_mac) << "\n";
  }

  out << "swid_add: " << state.tables.swid_add.size() << " entries\n";
  for (const auto& [key, action] : state.tables.swid_add.entries())
    out << "  port " << key_port(key) << " -> " << to_string(action) << "\n";

  out << "swid_remove: " << state.tables.swid_remove.size() << " entries\n";
  for (const auto& [key, action] : state.tables.swid_remove.entries())
    out << "  port " << key_port(key) << " option " << int{key[2]} << " -> "
        << to_string(action) << "\n";

  out << "swid_forward: " << state.tables.swid_forward.size() << " entries\n";
  for (const auto& [key, action] : state.tables.swid_forward.entries())
    out << "  swid " << key_swid(key) << " -> " << to_string(action) << "\n";

  size_t nonzero = 0;
  for (size_t i = 0; i < state.register_slots(); ++i) {
    if (!state.blacklist[i] && !state.iplist[i] && !state.hash_ip_to_swid[i])
      continue;
    ++nonzero;
    out << "  slot " << i << ": blacklist=" << int{state.blacklist[i]}
        << " iplist=" << ipv4_to_string(state.iplist[i])
        << " hash_ip_to_swid=" << state.hash_ip_to_swid[i] << "\n";
  }
  out << "registers: " << state.register_slots() << " slots, " << nonzero
      << " nonzero\n";
}

}  // namespace

int cmd_inspect(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    ScenarioFile file = load_scenario_file(opt.scenario_path);
    bool numeric = !opt.switch_sel.empty() &&
                   opt.switch_sel.size() <= 9 &&
                   std::all_of(opt.switch_sel.begin(), opt.switch_sel.end(),
                               [](unsigned char c) { return std::isdigit(c); });
    uint32_t swid_sel =
        numeric ? static_cast<uint32_t>(std::stoul(opt.switch_sel)) : 0;
    std::string name;
    for (const SwitchConfig& cfg : file.topology.control_plane.switches)
      if (cfg.name == opt.switch_sel || (numeric && cfg.swid == swid_sel)) {
        name = cfg.name;
        break;
      }
    if (name.empty()) {
      err << "error: unknown switch '" << opt.switch_sel << "'\n";
      return 1;
    }
    Fabric fabric = build_fabric(std::move(file.topology), file.scenario);
    const SwitchConfig* cfg = nullptr;
    for (const SwitchConfig& c : fabric.topology().control_plane.switches)
      if (c.name == name) cfg = &c;
    dump_switch(out, *cfg, fabric.switch_state(name));
    return 0;
  } catch (const std::exception& e) {
    return fail(err, e);
  }
}

}  // namespace lamp
