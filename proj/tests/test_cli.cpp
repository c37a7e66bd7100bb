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

// Scenario file parsing, report rendering, and the run/compare/inspect
// command entry points.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lamp/commands.h"
#include "lamp/report.h"
#include "lamp/scenario.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lamp;

namespace {

// One switch, one attacker, one server, 1 ms links, threshold 4 at
// 100 pps starting t=5. The fourth bad request reaches the server at
// t=37, the alert reaches s1 at t=38 and the ingress map points at s1
// itself, so the block lands at exactly 38.0 with four requests
// through per trial.
json minimal_doc() {
  json lpm = json::array();
  lpm.push_back({{"prefix", "10.0.0.66/32"},
                 {"action", "forward"},
                 {"port", 1},
                 {"dst_mac", "02:00:00:00:00:66"}});
  lpm.push_back({{"prefix", "10.0.1.10/32"},
                 {"action", "forward"},
                 {"port", 2},
                 {"dst_mac", "02:00:00:00:01:0a"}});

  json sw;
  sw["name"] = "s1";
  sw["swid"] = 1;
  sw["ports"] = {1, 2};
  sw["external_ports"] = {1};
  sw["host_ports"] = {2};
  sw["lpm"] = lpm;

  json attacker;
  attacker["name"] = "attacker";
  attacker["ip"] = "10.0.0.66";
  attacker["mac"] = "02:00:00:00:00:66";
  attacker["switch"] = "s1";
  attacker["port"] = 1;
  attacker["role"] = "attacker";

  json server;
  server["name"] = "server";
  server["ip"] = "10.0.1.10";
  server["mac"] = "02:00:00:00:01:0a";
  server["switch"] = "s1";
  server["port"] = 2;
  server["role"] = "server";

  json doc;
  doc["topology"]["switches"] = json::array({sw});
  doc["topology"]["hosts"] = json::array({attacker, server});
  doc["topology"]["links"] = json::array();
  doc["topology"]["links"].push_back(
      {{"a", "attacker"}, {"b", "s1:1"}, {"latency_ms", 1.0}});
  doc["topology"]["links"].push_back(
      {{"a", "s1:2"}, {"b", "server"}, {"latency_ms", 1.0}});

  json sc;
  sc["mode"] = "lamp";
  sc["seed"] = 7;
  sc["trials"] = 3;
  sc["attack_rate_pps"] = 100.0;
  sc["attack_start_ms"] = 5.0;
  sc["attack_duration_ms"] = 200.0;
  sc["attack_targets"] = {"server"};
  sc["detection_threshold"] = 4;
  sc["horizon_ms"] = 5000.0;
  doc["scenario"] = sc;
  return doc;
}

ScenarioFile parse(const json& doc) { return parse_scenario_text(doc.dump()); }

ConfigError capture(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  throw std::logic_error("unreachable");
}

fs::path temp_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "lampsim_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

void write_doc(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << doc.dump(2) << "\n";
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> words_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

// The minimal scenario report, byte for byte.
std::string expected_minimal_csv(const std::string& path,
                                 const std::string& mode, uint64_t seed) {
  std::string out;
  out += "# lampsim report\n";
  out += "# scenario=" + path + "\n";
  out += "# seed=" + std::to_string(seed) + "\n";
  out += "# mode=" + mode + "\n";
  out += "trial,mode,server,invalid_received,block_time_ms,alert_drops\n";
  for (int trial = 0; trial < 3; ++trial)
    out += std::to_string(trial) + "," + mode + ",server,4,38.000,0\n";
  out += "aggregate,mode,server,total,min,max,mean\n";
  out += "aggregate," + mode + ",server,12,4,4,4.000\n";
  return out;
}

}  // namespace

TEST_CASE("mode names map to modes") {
  CHECK(mode_from_string("lamp") == Mode::Lamp);
  CHECK(mode_from_string("sdn") == Mode::SdnBaseline);
  CHECK_FALSE(mode_from_string("LAMP").has_value());
  CHECK_FALSE(mode_from_string("both").has_value());
  CHECK_FALSE(mode_from_string("").has_value());
  CHECK(std::string(to_string(Mode::Lamp)) == "lamp");
  CHECK(std::string(to_string(Mode::SdnBaseline)) == "sdn");
}

TEST_CASE("scenario documents parse into configuration") {
  ScenarioFile file = parse(minimal_doc());

  CHECK(file.scenario.mode == Mode::Lamp);
  CHECK(file.scenario.seed == 7);
  CHECK(file.scenario.trials == 3);
  CHECK(file.scenario.attack_rate_pps == 100.0);
  CHECK(file.scenario.attack_start_ms == 5.0);
  CHECK(file.scenario.attack_duration_ms == 200.0);
  CHECK(file.scenario.attack_targets == std::vector<std::string>{"server"});
  CHECK(file.scenario.detection_threshold == 4);
  CHECK(file.scenario.detection_processing_delay_ms == 0.0);
  CHECK(file.scenario.horizon_ms == 5000.0);
  CHECK(file.scenario.controller.uplink_ms == 0.0);
  CHECK(file.scenario.background_flows.empty());

  REQUIRE(file.topology.control_plane.switches.size() == 1);
  const SwitchConfig& sw = file.topology.control_plane.switches[0];
  CHECK(sw.name == "s1");
  CHECK(sw.swid == 1);
  CHECK(sw.ports == std::set<PortId>{1, 2});
  CHECK(sw.external_ports == std::vector<PortId>{1});
  CHECK(sw.host_ports == std::vector<PortId>{2});
  REQUIRE(sw.lpm.size() == 2);
  CHECK(sw.lpm[0].prefix == Prefix{0x0a000042, 32});
  CHECK(sw.lpm[0].action.kind == ForwardingAction::Kind::Forward);
  CHECK(sw.lpm[0].action.next_hop.egress_port == 1);

  REQUIRE(file.topology.hosts.size() == 2);
  CHECK(file.topology.hosts[0].role == HostRole::Attacker);
  CHECK(file.topology.hosts[1].role == HostRole::Server);
  REQUIRE(file.topology.links.size() == 2);
  CHECK(file.topology.links[0].a.is_host);
  CHECK_FALSE(file.topology.links[0].b.is_host);
  CHECK(file.topology.links[0].b.port == 1);

  CHECK(file.output.report_csv.empty());
  CHECK(file.output.report_json.empty());
  CHECK(file.output.trace.empty());
}

TEST_CASE("parsed documents build a runnable fabric") {
  ScenarioFile file = parse(minimal_doc());
  Fabric fabric = build_fabric(std::move(file.topology), file.scenario);

  TrialResult r = fabric.run_trial(0);
  CHECK(r.metrics.block_time_ms == 38.0);
  CHECK(r.metrics.invalid_received.at("server") == 4);
  CHECK(r.metrics.alert_drops == 0);

  Metrics m = fabric.run_scenario();
  REQUIRE(m.trials.size() == 3);
  CHECK(m.per_server.at("server") == AggregateRow{12, 4, 4, 4.0});
}

TEST_CASE("parse diagnostics name the offending path") {
  json doc = minimal_doc();

  SUBCASE("unknown keys are rejected at every level") {
    doc["extra"] = 1;
    ConfigError e = capture([&] { parse(doc); });
    CHECK(e.kind() == ConfigError::Kind::UnknownKey);
    CHECK(std::string(e.what()) == "(root): unknown key 'extra'");

    doc = minimal_doc();
    doc["scenario"]["t1"] = 1;
    e = capture([&] { parse(doc); });
    CHECK(e.kind() == ConfigError::Kind::UnknownKey);
    CHECK(std::string(e.what()) == "scenario: unknown key 't1'");

    doc = minimal_doc();
    doc["topology"]["switches"][0]["vlan"] = 12;
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.switches[0]: unknown key 'vlan'");

    doc = minimal_doc();
    doc["topology"]["hosts"][1]["rack"] = "b2";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.hosts[1]: unknown key 'rack'");
  }
  SUBCASE("missing required keys") {
    doc["topology"]["switches"][0].erase("name");
    ConfigError e = capture([&] { parse(doc); });
    CHECK(e.kind() == ConfigError::Kind::BadValue);
    CHECK(std::string(e.what()) ==
          "topology.switches[0]: missing required key 'name'");

    doc = minimal_doc();
    doc.erase("topology");
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "(root): missing required key 'topology'");
  }
  SUBCASE("malformed addresses") {
    doc["topology"]["hosts"][0]["ip"] = "10.0.0";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.hosts[0].ip: expected a dotted-quad address");

    doc = minimal_doc();
    doc["topology"]["hosts"][0]["mac"] = "02:00:00:00:00";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.hosts[0].mac: expected a colon-separated 6-byte address");
  }
  SUBCASE("malformed prefixes") {
    doc["topology"]["switches"][0]["lpm"][0]["prefix"] = "10.0.0.66";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.switches[0].lpm[0].prefix: expected 'address/length' "
          "notation");

    doc = minimal_doc();
    doc["topology"]["switches"][0]["lpm"][0]["prefix"] = "10.0.0.66/33";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.switches[0].lpm[0].prefix: prefix length must be 0..32");
  }
  SUBCASE("malformed forwarding actions") {
    doc["topology"]["switches"][0]["lpm"][0]["action"] = "flood";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.switches[0].lpm[0].action: expected 'forward' or 'drop'");

    doc = minimal_doc();
    doc["topology"]["switches"][0]["lpm"][0]["action"] = "drop";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.switches[0].lpm[0]: drop action takes no port or dst_mac");
  }
  SUBCASE("malformed link endpoints") {
    doc["topology"]["links"][0]["b"] = "s1:one";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.links[0].b: expected 'switch:port' or a host name");
  }
  SUBCASE("duplicate swid routes") {
    json route = {{"swid", 9}, {"port", 1}, {"dst_mac", "02:00:00:00:00:09"}};
    doc["topology"]["switches"][0]["swid_routes"] = json::array({route, route});
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.switches[0].swid_routes[1]: duplicate route for swid 9");
  }
  SUBCASE("malformed scenario values") {
    doc["scenario"]["mode"] = "both";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "scenario.mode: expected 'lamp' or 'sdn'");

    doc = minimal_doc();
    doc["scenario"]["trials"] = "three";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "scenario.trials: expected a non-negative integer");

    doc = minimal_doc();
    doc["scenario"]["seed"] = -1;
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "scenario.seed: expected a non-negative integer");

    doc = minimal_doc();
    doc["scenario"]["attack_rate_pps"] = "fast";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "scenario.attack_rate_pps: expected a number");
  }
  SUBCASE("malformed roles and ports") {
    doc["topology"]["hosts"][0]["role"] = "printer";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.hosts[0].role: expected 'attacker', 'server' or 'benign'");

    doc = minimal_doc();
    doc["topology"]["hosts"][0]["port"] = 70000;
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.hosts[0].port: port number out of range");

    doc = minimal_doc();
    doc["topology"]["switches"][0]["ports"] = 5;
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology.switches[0].ports: expected an array of ports");
  }
  SUBCASE("wrong container shapes") {
    doc["topology"] = 5;
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "topology: expected an object");

    doc = minimal_doc();
    doc["scenario"]["attack_targets"] = "server";
    CHECK(std::string(capture([&] { parse(doc); }).what()) ==
          "scenario.attack_targets: expected an array");
  }
  SUBCASE("invalid json text") {
    ConfigError e = capture([&] { parse_scenario_text("{ nope"); });
    CHECK(std::string(e.what()).find("scenario is not valid JSON: ") == 0);
  }
  SUBCASE("missing scenario file") {
    ConfigError e =
        capture([&] { load_scenario_file("/nonexistent/mini.json"); });
    CHECK(std::string(e.what()) ==
          "cannot open scenario file '/nonexistent/mini.json'");
  }
}

TEST_CASE("csv and json reports render stably") {
  RunReport rep;
  rep.scenario_path = "demo.json";
  rep.seed = 9;
  rep.mode = Mode::Lamp;
  TrialMetrics t0;
  t0.trial = 0;
  t0.invalid_received["server"] = 4;
  t0.block_time_ms = 38.0;
  TrialMetrics t1;
  t1.trial = 1;
  t1.invalid_received["server"] = 6;
  t1.block_time_ms = -1.0;
  t1.alert_drops = 2;
  rep.metrics.trials = {t0, t1};
  rep.metrics.per_server = aggregate_metrics(rep.metrics.trials, {"server"});

  SUBCASE("csv layout") {
    CHECK(render_csv(rep) ==
          "# lampsim report\n"
          "# scenario=demo.json\n"
          "# seed=9\n"
          "# mode=lamp\n"
          "trial,mode,server,invalid_received,block_time_ms,alert_drops\n"
          "0,lamp,server,4,38.000,0\n"
          "1,lamp,server,6,-1.000,2\n"
          "aggregate,mode,server,total,min,max,mean\n"
          "aggregate,lamp,server,10,4,6,5.000\n");
  }
  SUBCASE("json layout parses back") {
    std::string text = render_json(rep);
    CHECK(text.back() == '\n');
    json doc = json::parse(text);
    CHECK(doc["scenario"] == "demo.json");
    CHECK(doc["seed"] == 9);
    CHECK(doc["mode"] == "lamp");
    REQUIRE(doc["trials"].size() == 2);
    CHECK(doc["trials"][0]["block_time_ms"] == 38.0);
    CHECK(doc["trials"][0]["invalid_received"]["server"] == 4);
    CHECK(doc["trials"][1]["block_time_ms"] == -1.0);
    CHECK(doc["trials"][1]["alert_drops"] == 2);
    CHECK(doc["aggregates"]["server"]["total"] == 10);
    CHECK(doc["aggregates"]["server"]["min"] == 4);
    CHECK(doc["aggregates"]["server"]["max"] == 6);
    CHECK(doc["aggregates"]["server"]["mean"] == 5.0);
  }
  SUBCASE("renderers refuse stale aggregates") {
    rep.metrics.per_server["server"].total = 11;
    CHECK_THROWS_AS((void)render_csv(rep), std::logic_error);
    CHECK_THROWS_AS((void)render_json(rep), std::logic_error);
  }
  SUBCASE("comparison table") {
    RunReport sdn = rep;
    sdn.mode = Mode::SdnBaseline;
    for (TrialMetrics& tm : sdn.metrics.trials)
      for (auto& [name, count] : tm.invalid_received) count *= 4;
    sdn.metrics.per_server =
        aggregate_metrics(sdn.metrics.trials, {"server"});

    std::string table = render_compare(rep, sdn);
    std::vector<std::string> lines = lines_of(table);
    REQUIRE(lines.size() == 8);
    CHECK(lines[0] == "# lampsim comparison");
    CHECK(lines[1] == "# scenario=demo.json");
    CHECK(lines[2] == "# seed=9");
    CHECK(words_of(lines[3]) ==
          std::vector<std::string>{"measurement", "lamp", "sdn"});
    CHECK(words_of(lines[4]) ==
          std::vector<std::string>{"server", "total", "10", "40"});
    CHECK(words_of(lines[5]) ==
          std::vector<std::string>{"server", "maximum", "6", "24"});
    CHECK(words_of(lines[6]) ==
          std::vector<std::string>{"server", "minimum", "4", "16"});
    CHECK(words_of(lines[7]) ==
          std::vector<std::string>{"server", "average", "5.000", "20.000"});
  }
  SUBCASE("comparison requires matching servers") {
    RunReport other = rep;
    other.mode = Mode::SdnBaseline;
    for (TrialMetrics& tm : other.metrics.trials) {
      tm.invalid_received.clear();
      tm.invalid_received["mirror"] = 1;
    }
    other.metrics.per_server =
        aggregate_metrics(other.metrics.trials, {"mirror"});
    CHECK_THROWS_WITH_AS((void)render_compare(rep, other),
                         "comparison runs cover different servers",
                         std::logic_error);
  }
}

TEST_CASE("file writes surface their failures") {
  fs::path ok = temp_dir() / "writable.txt";
  write_file(ok.string(), "hello\n");
  CHECK(read_file(ok) == "hello\n");

  fs::path bad = temp_dir() / "no_such_dir" / "out.txt";
  ConfigError e = capture([&] { write_file(bad.string(), "x"); });
  CHECK(std::string(e.what()) ==
        "cannot open '" + bad.string() + "' for writing");
}

TEST_CASE("run command renders reports and traces") {
  fs::path scenario = temp_dir() / "mini.json";
  write_doc(scenario, minimal_doc());

  CliOptions opt;
  opt.scenario_path = scenario.string();
  std::ostringstream out, err;

  SUBCASE("csv lands on stdout when no outputs are configured") {
    CHECK(cmd_run(opt, out, err) == 0);
    CHECK(err.str().empty());
    CHECK(out.str() == expected_minimal_csv(opt.scenario_path, "lamp", 7));
  }
  SUBCASE("--out picks the format from the suffix") {
    opt.out = (temp_dir() / "report.csv").string();
    CHECK(cmd_run(opt, out, err) == 0);
    CHECK(out.str().empty());
    CHECK(read_file(opt.out) ==
          expected_minimal_csv(opt.scenario_path, "lamp", 7));

    opt.out = (temp_dir() / "report.json").string();
    CHECK(cmd_run(opt, out, err) == 0);
    json doc = json::parse(read_file(opt.out));
    CHECK(doc["mode"] == "lamp");
    CHECK(doc["seed"] == 7);
    REQUIRE(doc["trials"].size() == 3);
    for (const auto& row : doc["trials"]) {
      CHECK(row["block_time_ms"] == 38.0);
      CHECK(row["invalid_received"]["server"] == 4);
    }
    CHECK(doc["aggregates"]["server"]["total"] == 12);
  }
  SUBCASE("mode and seed overrides reach the report") {
    opt.mode = Mode::SdnBaseline;
    opt.seed = 123;
    CHECK(cmd_run(opt, out, err) == 0);
    // no controller latencies configured, so the baseline blocks at the
    // same instant and only the labels move
    CHECK(out.str() == expected_minimal_csv(opt.scenario_path, "sdn", 123));
  }
  SUBCASE("--trace writes one line per hop") {
    opt.trace = (temp_dir() / "run.trace").string();
    CHECK(cmd_run(opt, out, err) == 0);
    std::vector<std::string> lines = lines_of(read_file(opt.trace));
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "0.000 sim trial(0) start -");
    bool blocked = false;
    for (const std::string& line : lines)
      if (line == "38.000 s1 ALERT:10.0.1.10>10.0.0.66+alert(10.0.0.66) "
                  "consume block-installed")
        blocked = true;
    CHECK(blocked);
  }
  SUBCASE("configured outputs in the file are honored") {
    json doc = minimal_doc();
    fs::path auto_csv = temp_dir() / "auto.csv";
    doc["output"]["report_csv"] = auto_csv.string();
    fs::path with_output = temp_dir() / "mini_output.json";
    write_doc(with_output, doc);
    opt.scenario_path = with_output.string();
    CHECK(cmd_run(opt, out, err) == 0);
    CHECK(out.str().empty());
    CHECK(read_file(auto_csv) ==
          expected_minimal_csv(opt.scenario_path, "lamp", 7));
  }
  SUBCASE("invalid configuration fails with a diagnostic") {
    json doc = minimal_doc();
    doc["scenario"]["trials"] = 0;
    fs::path broken = temp_dir() / "broken.json";
    write_doc(broken, doc);
    opt.scenario_path = broken.string();
    CHECK(cmd_run(opt, out, err) == 1);
    CHECK(out.str().empty());
    CHECK(err.str().find("error: ") == 0);
    CHECK(err.str().find("scenario.trials") != std::string::npos);
  }
  SUBCASE("missing scenario file fails cleanly") {
    opt.scenario_path = (temp_dir() / "absent.json").string();
    CHECK(cmd_run(opt, out, err) == 1);
    CHECK(err.str().find("cannot open scenario file") != std::string::npos);
  }
}

TEST_CASE("compare command runs both modes over one config") {
  fs::path scenario = temp_dir() / "mini_cmp.json";
  write_doc(scenario, minimal_doc());

  CliOptions opt;
  opt.scenario_path = scenario.string();
  opt.out = (temp_dir() / "cmp.txt").string();
  opt.trace = (temp_dir() / "cmp.trace").string();
  std::ostringstream out, err;
  REQUIRE(cmd_compare(opt, out, err) == 0);
  CHECK(err.str().empty());
  CHECK(out.str().empty());

  std::vector<std::string> lines = lines_of(read_file(opt.out));
  REQUIRE(lines.size() == 8);
  CHECK(lines[1] == "# scenario=" + opt.scenario_path);
  CHECK(words_of(lines[3]) ==
        std::vector<std::string>{"measurement", "lamp", "sdn"});
  // zero controller latencies: the baseline lands the same block, so
  // the two columns agree
  CHECK(words_of(lines[4]) ==
        std::vector<std::string>{"server", "total", "12", "12"});
  CHECK(words_of(lines[7]) ==
        std::vector<std::string>{"server", "average", "4.000", "4.000"});

  std::string lamp_trace = read_file(opt.trace + ".lamp");
  std::string sdn_trace = read_file(opt.trace + ".sdn");
  CHECK(lamp_trace.find("consume block-installed") != std::string::npos);
  CHECK(lamp_trace.find("alert-punted") == std::string::npos);
  CHECK(sdn_trace.find("consume alert-punted") != std::string::npos);
  CHECK(sdn_trace.find("install") != std::string::npos);
}

TEST_CASE("inspect command dumps one switch's dataplane") {
  fs::path scenario = temp_dir() / "mini_inspect.json";
  write_doc(scenario, minimal_doc());

  CliOptions opt;
  opt.scenario_path = scenario.string();
  opt.switch_sel = "s1";
  std::ostringstream out, err;
  REQUIRE(cmd_inspect(opt, out, err) == 0);
  CHECK(err.str().empty());

  std::string dump = out.str();
  CHECK(dump.find("switch s1 (swid 1)\n") == 0);
  CHECK(dump.find("ipv4_lpm: 2 entries\n") != std::string::npos);
  CHECK(dump.find("  10.0.0.66/32 -> forward port 1 mac 02:00:00:00:00:66\n") !=
        std::string::npos);
  CHECK(dump.find("  10.0.1.10/32 -> forward port 2 mac 02:00:00:00:01:0a\n") !=
        std::string::npos);
  // only external ports get explicit entries; others hit the default
  CHECK(dump.find("swid_add: 1 entries\n") != std::string::npos);
  CHECK(dump.find("  port 1 -> add_swid(1)\n") != std::string::npos);
  CHECK(dump.find("swid_remove: 1 entries\n") != std::string::npos);
  CHECK(dump.find("  port 2 option 29 -> remove_swid\n") != std::string::npos);
  CHECK(dump.find("swid_forward: 1 entries\n") != std::string::npos);
  CHECK(dump.find("  swid 1 -> block\n") != std::string::npos);
  CHECK(dump.find("registers: 200 slots, 0 nonzero\n") != std::string::npos);

  SUBCASE("numeric selectors match the swid") {
    std::ostringstream by_swid;
    opt.switch_sel = "1";
    REQUIRE(cmd_inspect(opt, by_swid, err) == 0);
    CHECK(by_swid.str() == dump);
  }
  SUBCASE("unknown switches are an error") {
    std::ostringstream out2, err2;
    opt.switch_sel = "s9";
    CHECK(cmd_inspect(opt, out2, err2) == 1);
    CHECK(out2.str().empty());
    CHECK(err2.str() == "error: unknown switch 's9'\n");
  }
}
