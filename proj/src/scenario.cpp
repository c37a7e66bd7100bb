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

#include "lamp/scenario.h"

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace lamp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(ConfigError::Kind::BadValue, path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(ConfigError::Kind::UnknownKey,
                        path + ": unknown key '" + it.key() + "'");
  }
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const std::string& path, const char* key) {
  const json* p = find(j, key);
  if (!p) fail(path, std::string("missing required key '") + key + "'");
  return *p;
}

std::string get_str(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

uint64_t get_u64(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<uint64_t>();
  if (j.is_number_integer() && j.get<int64_t>() >= 0)
    return static_cast<uint64_t>(j.get<int64_t>());
  fail(path, "expected a non-negative integer");
}

double get_num(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

uint32_t get_ip(const json& j, const std::string& path) {
  auto ip = ipv4_from_string(get_str(j, path));
  if (!ip) fail(path, "expected a dotted-quad address");
  return *ip;
}

MacAddr get_mac(const json& j, const std::string& path) {
  auto mac = mac_from_string(get_str(j, path));
  if (!mac) fail(path, "expected a colon-separated 6-byte address");
  return *mac;
}

PortId get_port(const json& j, const std::string& path) {
  uint64_t v = get_u64(j, path);
  if (v > 0xffff) fail(path, "port number out of range");
  return static_cast<PortId>(v);
}

Prefix get_prefix(const json& j, const std::string& path) {
  std::string text = get_str(j, path);
  auto slash = text.find('/');
  if (slash == std::string::npos)
    fail(path, "expected 'address/length' notation");
  auto addr = ipv4_from_string(text.substr(0, slash));
  if (!addr) fail(path, "expected a dotted-quad address before '/'");
  std::string len_text = text.substr(slash + 1);
  char* end = nullptr;
  long len = std::strtol(len_text.c_str(), &end, 10);
  if (len_text.empty() || *end != '\0' || len < 0 || len > 32)
    fail(path, "prefix length must be 0..32");
  return Prefix{*addr, static_cast<uint8_t>(len)};
}

NextHop get_next_hop(const json& j, const std::string& path) {
  NextHop nh;
  nh.egress_port = get_port(require(j, path, "port"), path + ".port");
  nh.dst_mac = get_mac(require(j, path, "dst_mac"), path + ".dst_mac");
  return nh;
}

std::vector<PortId> get_port_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of ports");
  std::vector<PortId> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(get_port(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

SwitchConfig parse_switch(const json& j, const std::string& path) {
  check_keys(j, path,
             {"name", "swid", "ports", "external_ports", "host_ports", "lpm",
              "swid_routes"});
  SwitchConfig sc;
  sc.name = get_str(require(j, path, "name"), path + ".name");
  sc.swid = static_cast<uint32_t>(
      get_u64(require(j, path, "swid"), path + ".swid"));
  for (PortId p : get_port_list(require(j, path, "ports"), path + ".ports"))
    sc.ports.insert(p);
  if (const json* ext = find(j, "external_ports"))
    sc.external_ports = get_port_list(*ext, path + ".external_ports");
  if (const json* hp = find(j, "host_ports"))
    sc.host_ports = get_port_list(*hp, path + ".host_ports");
  if (const json* lpm = find(j, "lpm")) {
    std::string lpm_path = path + ".lpm";
    if (!lpm->is_array()) fail(lpm_path, "expected an array");
    for (size_t i = 0; i < lpm->size(); ++i) {
      const json& e = (*lpm)[i];
      std::string epath = lpm_path + "[" + std::to_string(i) + "]";
      check_keys(e, epath, {"prefix", "action", "port", "dst_mac"});
      LpmEntry entry;
      entry.prefix = get_prefix(require(e, epath, "prefix"),
                                epath + ".prefix");
      std::string action =
          get_str(require(e, epath, "action"), epath + ".action");
      if (action == "forward") {
        entry.action = ForwardingAction::forward(get_next_hop(e, epath));
      } else if (action == "drop") {
        if (find(e, "port") || find(e, "dst_mac"))
          fail(epath, "drop action takes no port or dst_mac");
        entry.action = ForwardingAction::drop();
      } else {
        fail(epath + ".action", "expected 'forward' or 'drop'");
      }
      sc.lpm.push_back(entry);
    }
  }
  if (const json* routes = find(j, "swid_routes")) {
    std::string rpath = path + ".swid_routes";
    if (!routes->is_array()) fail(rpath, "expected an array");
    for (size_t i = 0; i < routes->size(); ++i) {
      const json& e = (*routes)[i];
      std::string epath = rpath + "[" + std::to_string(i) + "]";
      check_keys(e, epath, {"swid", "port", "dst_mac"});
      uint32_t dest = static_cast<uint32_t>(
          get_u64(require(e, epath, "swid"), epath + ".swid"));
      if (sc.swid_routes.count(dest))
        fail(epath, "duplicate route for swid " + std::to_string(dest));
      sc.swid_routes.emplace(dest, get_next_hop(e, epath));
    }
  }
  return sc;
}

HostRole get_role(const json& j, const std::string& path) {
  std::string text = get_str(j, path);
  if (text == "attacker") return HostRole::Attacker;
  if (text == "server") return HostRole::Server;
  if (text == "benign") return HostRole::Benign;
  fail(path, "expected 'attacker', 'server' or 'benign'");
}

HostSpec parse_host(const json& j, const std::string& path) {
  check_keys(j, path, {"name", "ip", "mac", "switch", "port", "role"});
  HostSpec h;
  h.name = get_str(require(j, path, "name"), path + ".name");
  h.ip = get_ip(require(j, path, "ip"), path + ".ip");
  h.mac = get_mac(require(j, path, "mac"), path + ".mac");
  h.switch_name = get_str(require(j, path, "switch"), path + ".switch");
  h.switch_port = get_port(require(j, path, "port"), path + ".port");
  h.role = get_role(require(j, path, "role"), path + ".role");
  return h;
}

LinkEndpoint parse_endpoint(const json& j, const std::string& path) {
  std::string text = get_str(j, path);
  auto colon = text.rfind(':');
  if (colon == std::string::npos) return LinkEndpoint{text, 0, true};
  std::string port_text = text.substr(colon + 1);
  char* end = nullptr;
  long port = std::strtol(port_text.c_str(), &end, 10);
  if (port_text.empty() || *end != '\0' || port < 0 || port > 0xffff)
    fail(path, "expected 'switch:port' or a host name");
  return LinkEndpoint{text.substr(0, colon), static_cast<PortId>(port),
                      false};
}

LinkSpec parse_link(const json& j, const std::string& path) {
  check_keys(j, path, {"a", "b", "latency_ms"});
  LinkSpec link;
  link.a = parse_endpoint(require(j, path, "a"), path + ".a");
  link.b = parse_endpoint(require(j, path, "b"), path + ".b");
  link.latency_ms =
      get_num(require(j, path, "latency_ms"), path + ".latency_ms");
  return link;
}

Topology parse_topology(const json& j, const std::string& path) {
  check_keys(j, path, {"switches", "hosts", "links"});
  Topology topo;
  const json& switches = require(j, path, "switches");
  if (!switches.is_array()) fail(path + ".switches", "expected an array");
  for (size_t i = 0; i < switches.size(); ++i)
    topo.control_plane.switches.push_back(parse_switch(
        switches[i], path + ".switches[" + std::to_string(i) + "]"));
  if (const json* hosts = find(j, "hosts")) {
    if (!hosts->is_array()) fail(path + ".hosts", "expected an array");
    for (size_t i = 0; i < hosts->size(); ++i)
      topo.hosts.push_back(
          parse_host((*hosts)[i], path + ".hosts[" + std::to_string(i) + "]"));
  }
  if (const json* links = find(j, "links")) {
    if (!links->is_array()) fail(path + ".links", "expected an array");
    for (size_t i = 0; i < links->size(); ++i)
      topo.links.push_back(
          parse_link((*links)[i], path + ".links[" + std::to_string(i) + "]"));
  }
  return topo;
}

ControllerModel parse_controller(const json& j, const std::string& path) {
  check_keys(j, path,
             {"uplink_ms", "processing_fixed_ms", "processing_jitter_min_ms",
              "processing_jitter_max_ms", "install_ms"});
  ControllerModel cm;
  if (const json* v = find(j, "uplink_ms"))
    cm.uplink_ms = get_num(*v, path + ".uplink_ms");
  if (const json* v = find(j, "processing_fixed_ms"))
    cm.processing_fixed_ms = get_num(*v, path + ".processing_fixed_ms");
  if (const json* v = find(j, "processing_jitter_min_ms"))
    cm.processing_jitter_min_ms =
        get_num(*v, path + ".processing_jitter_min_ms");
  if (const json* v = find(j, "processing_jitter_max_ms"))
    cm.processing_jitter_max_ms =
        get_num(*v, path + ".processing_jitter_max_ms");
  if (const json* v = find(j, "install_ms"))
    cm.install_ms = get_num(*v, path + ".install_ms");
  return cm;
}

ScenarioConfig parse_scenario(const json& j, const std::string& path) {
  check_keys(j, path,
             {"mode", "seed", "trials", "attack_rate_pps", "attack_start_ms",
              "attack_duration_ms", "attack_targets", "detection_threshold",
              "detection_processing_delay_ms", "horizon_ms", "controller",
              "background_flows"});
  ScenarioConfig sc;
  if (const json* v = find(j, "mode")) {
    auto mode = mode_from_string(get_str(*v, path + ".mode"));
    if (!mode) fail(path + ".mode", "expected 'lamp' or 'sdn'");
    sc.mode = *mode;
  }
  if (const json* v = find(j, "seed")) sc.seed = get_u64(*v, path + ".seed");
  if (const json* v = find(j, "trials"))
    sc.trials = get_u64(*v, path + ".trials");
  if (const json* v = find(j, "attack_rate_pps"))
    sc.attack_rate_pps = get_num(*v, path + ".attack_rate_pps");
  if (const json* v = find(j, "attack_start_ms"))
    sc.attack_start_ms = get_num(*v, path + ".attack_start_ms");
  if (const json* v = find(j, "attack_duration_ms"))
    sc.attack_duration_ms = get_num(*v, path + ".attack_duration_ms");
  if (const json* v = find(j, "attack_targets")) {
    if (!v->is_array()) fail(path + ".attack_targets", "expected an array");
    for (size_t i = 0; i < v->size(); ++i)
      sc.attack_targets.push_back(get_str(
          (*v)[i], path + ".attack_targets[" + std::to_string(i) + "]"));
  }
  if (const json* v = find(j, "detection_threshold"))
    sc.detection_threshold = get_u64(*v, path + ".detection_threshold");
  if (const json* v = find(j, "detection_processing_delay_ms"))
    sc.detection_processing_delay_ms =
        get_num(*v, path + ".detection_processing_delay_ms");
  if (const json* v = find(j, "horizon_ms"))
    sc.horizon_ms = get_num(*v, path + ".horizon_ms");
  if (const json* v = find(j, "controller"))
    sc.controller = parse_controller(*v, path + ".controller");
  if (const json* v = find(j, "background_flows")) {
    std::string fpath = path + ".background_flows";
    if (!v->is_array()) fail(fpath, "expected an array");
    for (size_t i = 0; i < v->size(); ++i) {
      const json& e = (*v)[i];
      std::string epath = fpath + "[" + std::to_string(i) + "]";
      check_keys(e, epath, {"src", "dst", "start_ms", "interval_ms", "count"});
      BackgroundFlow flow;
      flow.src = get_str(require(e, epath, "src"), epath + ".src");
      flow.dst = get_str(require(e, epath, "dst"), epath + ".dst");
      if (const json* f = find(e, "start_ms"))
        flow.start_ms = get_num(*f, epath + ".start_ms");
      if (const json* f = find(e, "interval_ms"))
        flow.interval_ms = get_num(*f, epath + ".interval_ms");
      flow.count = get_u64(require(e, epath, "count"), epath + ".count");
      sc.background_flows.push_back(std::move(flow));
    }
  }
  return sc;
}

OutputConfig parse_output(const json& j, const std::string& path) {
  check_keys(j, path, {"report_csv", "report_json", "trace"});
  OutputConfig out;
  if (const json* v = find(j, "report_csv"))
    out.report_csv = get_str(*v, path + ".report_csv");
  if (const json* v = find(j, "report_json"))
    out.report_json = get_str(*v, path + ".report_json");
  if (const json* v = find(j, "trace"))
    out.trace = get_str(*v, path + ".trace");
  return out;
}

ScenarioFile parse_document(const json& j) {
  check_keys(j, "(root)", {"topology", "scenario", "output"});
  ScenarioFile file;
  file.topology = parse_topology(require(j, "(root)", "topology"), "topology");
  if (const json* sc = find(j, "scenario"))
    file.scenario = parse_scenario(*sc, "scenario");
  if (const json* out = find(j, "output"))
    file.output = parse_output(*out, "output");
  return file;
}

}  // namespace

std::optional<Mode> mode_from_string(const std::string& text) {
  if (text == "lamp") return Mode::Lamp;
  if (text == "sdn") return Mode::SdnBaseline;
  return std::nullopt;
}

ScenarioFile parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigError::Kind::BadValue,
                      std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_document(j);
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError(ConfigError::Kind::BadValue,
                      "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

}  // namespace lamp
