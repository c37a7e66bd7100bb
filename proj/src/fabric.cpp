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

#include "lamp/fabric.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <thread>

namespace lamp {

const char* const kMarkerHello = "HELLO";
const char* const kMarkerHelloAck = "HELLOACK";
const char* const kMarkerInvalidRequest = "INVREQ";
const char* const kMarkerBackground = "BGDATA";
const char* const kMarkerAlert = "ALERT";

const char* to_string(HostRole r) {
  switch (r) {
    case HostRole::Attacker:
      return "attacker";
    case HostRole::Server:
      return "server";
    case HostRole::Benign:
      return "benign";
  }
  return "?";
}

const char* to_string(Mode m) {
  return m == Mode::Lamp ? "lamp" : "sdn";
}

std::vector<uint8_t> marker_payload(const char* marker) {
  const uint8_t* p = reinterpret_cast<const uint8_t*>(marker);
  return std::vector<uint8_t>(p, p + std::strlen(marker));
}

namespace {

bool payload_starts_with(const std::vector<uint8_t>& payload,
                         const char* text, size_t n) {
  return payload.size() >= n && std::equal(text, text + n, payload.begin());
}

}  // namespace

bool has_marker(const Packet& pkt, const char* marker) {
  size_t n = std::strlen(marker);
  if (!payload_starts_with(pkt.payload, marker, n)) return false;
  // HELLO is a prefix of HELLOACK; an ack payload matches only the
  // full ack marker.
  size_t ack_n = std::strlen(kMarkerHelloAck);
  if (payload_starts_with(pkt.payload, kMarkerHelloAck, ack_n) && n != ack_n)
    return false;
  return true;
}

MacAddr switch_mac(uint32_t swid) {
  return MacAddr{0x02, 0xaa, 0x00, 0x00, 0x00, static_cast<uint8_t>(swid)};
}

std::string to_string(const TraceEvent& ev) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", ev.t_ms);
  return std::string(buf) + " " + ev.node + " " + ev.event + " " +
         ev.decision + " " + ev.reason;
}

std::optional<HostEmission> host_on_receive(HostRuntime& host,
                                            const Packet& pkt,
                                            const ScenarioConfig& scenario,
                                            const MacAddr& first_hop_mac) {
  if (!pkt.ip) return std::nullopt;
  const HostSpec& spec = *host.spec;
  if (has_marker(pkt, kMarkerHello)) {
    Packet ack =
        make_ipv4_packet(spec.mac, pkt.eth.src_mac, spec.ip,
                         pkt.ip->src_addr, marker_payload(kMarkerHelloAck));
    return HostEmission{std::move(ack), 0.0};
  }
  if (spec.role == HostRole::Server &&
      has_marker(pkt, kMarkerInvalidRequest)) {
    ++host.invalid_received;
    uint32_t src = pkt.ip->src_addr;
    uint64_t seen = ++host.invreq_by_src[src];
    if (seen >= scenario.detection_threshold && !host.alerted.count(src)) {
      host.alerted.insert(src);
      Packet alert = make_ipv4_packet(spec.mac, first_hop_mac, spec.ip, src,
                                      marker_payload(kMarkerAlert));
      alert = attach_option(std::move(alert), LampOption::attack_alert(src));
      return HostEmission{std::move(alert),
                          scenario.detection_processing_delay_ms};
    }
  }
  return std::nullopt;
}

uint64_t trial_seed(uint64_t scenario_seed, uint64_t trial) {
  uint64_t z = scenario_seed + (trial + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d4a68b021dfb5fULL;
  return z ^ (z >> 31);
}

double uniform_double(std::mt19937_64& rng, double lo, double hi) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::map<std::string, AggregateRow> aggregate_metrics(
    const std::vector<TrialMetrics>& trials,
    const std::vector<std::string>& servers) {
  std::map<std::string, AggregateRow> out;
  for (const std::string& server : servers) {
    AggregateRow row;
    bool first = true;
    for (const TrialMetrics& tm : trials) {
      auto it = tm.invalid_received.find(server);
      uint64_t v = it == tm.invalid_received.end() ? 0 : it->second;
      row.total += v;
      row.min = first ? v : std::min(row.min, v);
      row.max = std::max(row.max, v);
      first = false;
    }
    row.mean =
        trials.empty() ? 0.0
                       : static_cast<double>(row.total) / trials.size();
    out[server] = row;
  }
  return out;
}

namespace {

std::string packet_summary(const Packet& pkt) {
  const char* marker = "DATA";
  for (const char* m : {kMarkerHello, kMarkerHelloAck, kMarkerInvalidRequest,
                        kMarkerBackground, kMarkerAlert})
    if (has_marker(pkt, m)) marker = m;
  if (!pkt.ip) return std::string(marker) + ":non-ip";
  std::string s = std::string(marker) + ":" +
                  ipv4_to_string(pkt.ip->src_addr) + ">" +
                  ipv4_to_string(pkt.ip->dst_addr);
  if (pkt.lamp_option) {
    const LampOption& opt = *pkt.lamp_option;
    switch (opt.kind) {
      case OptionKind::IngressSwitchInfo:
        s += "+swid(" + std::to_string(*opt.swid) + ")";
        break;
      case OptionKind::AttackAlert:
        s += "+alert(" + ipv4_to_string(*opt.attacker_ip) + ")";
        break;
      case OptionKind::Forward:
        s += "+fwd(" + ipv4_to_string(*opt.attacker_ip) + "," +
             std::to_string(*opt.swid) + ")";
        break;
    }
  }
  return s;
}

bool is_alert_traffic(const Packet& pkt) {
  if (pkt.lamp_option && pkt.lamp_option->kind != OptionKind::IngressSwitchInfo)
    return true;
  return has_marker(pkt, kMarkerAlert);
}

}  // namespace

// One trial: copies of the pristine switch states, fresh host state, a
// (time, seq) ordered event heap. Owns no part of the Fabric, so many
// TrialRuns may execute concurrently against one const Fabric.
class TrialRun {
 public:
  TrialRun(const Fabric& fabric, uint64_t trial)
      : f_(fabric),
        trial_(trial),
        rng_(trial_seed(fabric.scenario_.seed, trial)) {
    for (const auto& [name, state] : f_.pristine_)
      switches_.emplace(name, state);
    for (const auto& [name, spec] : f_.hosts_) {
      HostRuntime rt;
      rt.spec = &spec;
      hosts_.emplace(name, std::move(rt));
    }
  }

  TrialResult run() {
    result_.metrics.trial = trial_;
    for (const auto& [name, spec] : f_.hosts_)
      if (spec.role == HostRole::Server)
        result_.metrics.invalid_received[name] = 0;

    SimEvent boundary;
    boundary.t = f_.scenario_.horizon_ms;
    boundary.kind = SimEvent::Kind::TrialBoundary;
    schedule(std::move(boundary));
    trace(0.0, "sim", "trial(" + std::to_string(trial_) + ")", "start", "-");
    schedule_traffic();

    while (!heap_.empty()) {
      SimEvent ev = pop();
      if (ev.kind == SimEvent::Kind::TrialBoundary) {
        if (!heap_.empty())
          throw SimError(SimError::Kind::Nontermination,
                         "horizon " + std::to_string(f_.scenario_.horizon_ms) +
                             " ms reached with " +
                             std::to_string(heap_.size()) +
                             " events still pending");
        break;
      }
      switch (ev.kind) {
        case SimEvent::Kind::HostSend:
          on_host_send(ev);
          break;
        case SimEvent::Kind::PacketArrival:
          if (hosts_.count(ev.node))
            on_deliver(ev);
          else
            on_switch(ev);
          break;
        case SimEvent::Kind::ControllerInstall:
          on_install(ev);
          break;
        case SimEvent::Kind::TrialBoundary:
          break;
      }
    }

    for (auto& [name, host] : hosts_)
      if (host.spec->role == HostRole::Server)
        result_.metrics.invalid_received[name] = host.invalid_received;
    result_.switch_states = std::move(switches_);
    return std::move(result_);
  }

 private:
  static bool later(const SimEvent& a, const SimEvent& b) {
    return a.t > b.t || (a.t == b.t && a.seq > b.seq);
  }

  void schedule(SimEvent ev) {
    ev.seq = next_seq_++;
    heap_.push_back(std::move(ev));
    std::push_heap(heap_.begin(), heap_.end(), later);
  }

  SimEvent pop() {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    SimEvent ev = std::move(heap_.back());
    heap_.pop_back();
    return ev;
  }

  void trace(double t, const std::string& node, std::string event,
             std::string decision, std::string reason) {
    if (!f_.tracing_) return;
    result_.trace.push_back(TraceEvent{t, node, std::move(event),
                                       std::move(decision),
                                       std::move(reason)});
  }

  void send_at(double t, const std::string& host, Packet pkt) {
    SimEvent ev;
    ev.t = t;
    ev.kind = SimEvent::Kind::HostSend;
    ev.node = host;
    ev.packet = std::move(pkt);
    schedule(std::move(ev));
  }

  void schedule_traffic() {
    const ScenarioConfig& sc = f_.scenario_;
    for (const auto& [name, spec] : f_.hosts_) {
      if (spec.role != HostRole::Attacker) continue;
      for (const std::string& target : sc.attack_targets) {
        const HostSpec& dst = f_.hosts_.at(target);
        send_at(0.0, name,
                make_ipv4_packet(spec.mac, dst.mac, spec.ip, dst.ip,
                                 marker_payload(kMarkerHello)));
        double interval = 1000.0 / sc.attack_rate_pps;
        uint64_t count = static_cast<uint64_t>(
            sc.attack_duration_ms * sc.attack_rate_pps / 1000.0 + 1e-9);
        for (uint64_t k = 0; k < count; ++k)
          send_at(sc.attack_start_ms + static_cast<double>(k) * interval,
                  name,
                  make_ipv4_packet(spec.mac, dst.mac, spec.ip, dst.ip,
                                   marker_payload(kMarkerInvalidRequest)));
      }
    }
    for (const BackgroundFlow& flow : sc.background_flows) {
      const HostSpec& src = f_.hosts_.at(flow.src);
      const HostSpec& dst = f_.hosts_.at(flow.dst);
      for (uint64_t k = 0; k < flow.count; ++k)
        send_at(flow.start_ms + static_cast<double>(k) * flow.interval_ms,
                flow.src,
                make_ipv4_packet(src.mac, dst.mac, src.ip, dst.ip,
                                 marker_payload(kMarkerBackground)));
    }
    for (const Fabric::PendingInject& inj : f_.injects_)
      send_at(inj.at_ms, inj.host, inj.packet);
  }

  void transmit(const std::string& node, PortId port, const Packet& pkt,
                double now) {
    auto it = f_.peers_.find({node, port});
    if (it == f_.peers_.end()) {
      ++result_.dropped;
      trace(now, node, packet_summary(pkt), "drop", "unlinked-port");
      return;
    }
    SimEvent ev;
    ev.t = now + it->second.latency_ms;
    ev.kind = SimEvent::Kind::PacketArrival;
    ev.node = it->second.endpoint.node;
    ev.port = it->second.endpoint.port;
    ev.bytes = serialize_packet(pkt);
    schedule(std::move(ev));
  }

  void on_host_send(SimEvent& ev) {
    ++result_.injected;
    trace(ev.t, ev.node, packet_summary(ev.packet), "send", "-");
    transmit(ev.node, 0, ev.packet, ev.t);
  }

  void on_switch(SimEvent& ev) {
    SwitchState& sw = switches_.at(ev.node);
    Packet pkt;
    try {
      pkt = parse_packet(ev.bytes);
    } catch (const WireError&) {
      ++sw.counters.drops[DropReason::MalformedOption];
      ++result_.dropped;
      trace(ev.t, ev.node, "unparsable", "drop", "malformed-wire");
      return;
    }
    std::string summary = packet_summary(pkt);
    bool alert_traffic = is_alert_traffic(pkt);
    Decision d = f_.scenario_.mode == Mode::Lamp
                     ? process_packet(sw, ev.port, std::move(pkt))
                     : process_packet_sdn(sw, ev.port, std::move(pkt));
    switch (d.kind) {
      case Decision::Kind::Forward:
        trace(ev.t, ev.node, packet_summary(d.packet),
              "forward(" + std::to_string(d.egress_port) + ")", "-");
        transmit(ev.node, d.egress_port, d.packet, ev.t);
        break;
      case Decision::Kind::Drop:
        ++result_.dropped;
        if (alert_traffic) ++result_.metrics.alert_drops;
        trace(ev.t, ev.node, summary, "drop", to_string(d.reason));
        break;
      case Decision::Kind::Consume:
        ++result_.consumed;
        if (d.effect == Decision::ConsumeEffect::BlockInstalled) {
          if (result_.metrics.block_time_ms < 0)
            result_.metrics.block_time_ms = ev.t;
          trace(ev.t, ev.node, summary, "consume", "block-installed");
        } else {
          trace(ev.t, ev.node, summary, "consume", "alert-punted");
          punt_to_controller(ev.t, d.attacker_ip);
        }
        break;
    }
  }

  void punt_to_controller(double now, uint32_t attacker_ip) {
    const HostSpec* attacker = f_.host_by_ip(attacker_ip);
    if (!attacker) {
      ++result_.metrics.alert_drops;
      trace(now, "controller", "resolve(" + ipv4_to_string(attacker_ip) + ")",
            "drop", "unknown-attacker");
      return;
    }
    const ControllerModel& cm = f_.scenario_.controller;
    double jitter = uniform_double(rng_, cm.processing_jitter_min_ms,
                                   cm.processing_jitter_max_ms);
    SimEvent install;
    install.t = now + cm.uplink_ms + cm.processing_fixed_ms + jitter +
                cm.install_ms;
    install.kind = SimEvent::Kind::ControllerInstall;
    install.node = attacker->switch_name;
    install.attacker_ip = attacker_ip;
    schedule(std::move(install));
  }

  void on_install(SimEvent& ev) {
    SwitchState& sw = switches_.at(ev.node);
    action_block(sw, ev.attacker_ip);
    if (result_.metrics.block_time_ms < 0)
      result_.metrics.block_time_ms = ev.t;
    trace(ev.t, ev.node, "block(" + ipv4_to_string(ev.attacker_ip) + ")",
          "install", "-");
  }

  void on_deliver(SimEvent& ev) {
    Packet pkt = parse_packet(ev.bytes);
    ++result_.delivered;
    trace(ev.t, ev.node, packet_summary(pkt), "deliver", "-");
    HostRuntime& host = hosts_.at(ev.node);
    result_.deliveries.push_back(
        Delivery{ev.t, ev.node, pkt, std::move(ev.bytes)});
    auto emission = host_on_receive(host, pkt, f_.scenario_,
                                    f_.first_hop_mac(*host.spec));
    if (emission)
      send_at(ev.t + emission->delay_ms, ev.node,
              std::move(emission->packet));
  }

  const Fabric& f_;
  uint64_t trial_;
  std::mt19937_64 rng_;
  std::map<std::string, SwitchState> switches_;
  std::map<std::string, HostRuntime> hosts_;
  std::vector<SimEvent> heap_;
  uint64_t next_seq_ = 0;
  TrialResult result_;
};

namespace {

void check_scenario(const ScenarioConfig& sc) {
  auto bad = [](const std::string& what) {
    throw ConfigError(ConfigError::Kind::BadValue, what);
  };
  if (sc.attack_rate_pps <= 0) bad("scenario.attack_rate_pps must be positive");
  if (sc.trials < 1) bad("scenario.trials must be at least 1");
  if (sc.detection_threshold < 1)
    bad("scenario.detection_threshold must be at least 1");
  if (sc.attack_start_ms < 0) bad("scenario.attack_start_ms must be >= 0");
  if (sc.attack_duration_ms < 0)
    bad("scenario.attack_duration_ms must be >= 0");
  if (sc.detection_processing_delay_ms < 0)
    bad("scenario.detection_processing_delay_ms must be >= 0");
  if (sc.horizon_ms <= 0) bad("scenario.horizon_ms must be positive");
  const ControllerModel& cm = sc.controller;
  if (cm.uplink_ms < 0 || cm.processing_fixed_ms < 0 || cm.install_ms < 0 ||
      cm.processing_jitter_min_ms < 0)
    bad("scenario.controller latencies must be >= 0");
  if (cm.processing_jitter_min_ms > cm.processing_jitter_max_ms)
    bad("scenario.controller jitter bounds out of order");
  for (const BackgroundFlow& flow : sc.background_flows) {
    if (flow.start_ms < 0)
      bad("scenario.background_flows start_ms must be >= 0");
    if (flow.count > 1 && flow.interval_ms <= 0)
      bad("scenario.background_flows interval_ms must be positive");
  }
}

}  // namespace

Fabric::Fabric(Topology topology, ScenarioConfig scenario)
    : topology_(std::move(topology)), scenario_(std::move(scenario)) {
  check_scenario(scenario_);

  auto tables = load_control_plane(topology_.control_plane);
  for (const SwitchConfig& sc : topology_.control_plane.switches) {
    if (switch_cfg_.count(sc.name))
      throw ConfigError(ConfigError::Kind::BadValue,
                        "duplicate switch name '" + sc.name + "'");
    switch_cfg_.emplace(sc.name, &sc);
    pristine_.emplace(sc.name,
                      SwitchState(sc.swid, std::move(tables.at(sc.swid))));
  }

  for (const HostSpec& host : topology_.hosts) {
    if (hosts_.count(host.name) || switch_cfg_.count(host.name))
      throw ConfigError(ConfigError::Kind::BadValue,
                        "duplicate node name '" + host.name + "'");
    if (host_by_ip_.count(host.ip))
      throw ConfigError(ConfigError::Kind::BadValue,
                        "hosts '" + host_by_ip_.at(host.ip) + "' and '" +
                            host.name + "' share address " +
                            ipv4_to_string(host.ip));
    auto sit = switch_cfg_.find(host.switch_name);
    if (sit == switch_cfg_.end())
      throw ConfigError(ConfigError::Kind::UnknownSwitch,
                        "host '" + host.name + "' attaches to unknown switch '" +
                            host.switch_name + "'");
    if (!sit->second->ports.count(host.switch_port))
      throw ConfigError(ConfigError::Kind::UnknownPort,
                        "host '" + host.name + "' attaches to missing port " +
                            std::to_string(host.switch_port) + " of switch '" +
                            host.switch_name + "'");
    hosts_.emplace(host.name, host);
    host_by_ip_.emplace(host.ip, host.name);
  }

  auto port_class = [&](const SwitchConfig& sc, PortId port) {
    bool ext = std::find(sc.external_ports.begin(), sc.external_ports.end(),
                         port) != sc.external_ports.end();
    bool hostp = std::find(sc.host_ports.begin(), sc.host_ports.end(),
                           port) != sc.host_ports.end();
    return std::pair<bool, bool>(ext, hostp);
  };

  for (const LinkSpec& link : topology_.links) {
    if (link.latency_ms < 0)
      throw ConfigError(ConfigError::Kind::BadValue,
                        "link latency must be >= 0");
    auto resolve = [&](const LinkEndpoint& ep) -> LinkEndpoint {
      if (ep.is_host) {
        if (!hosts_.count(ep.node))
          throw ConfigError(ConfigError::Kind::UnknownHost,
                            "link endpoint '" + ep.node +
                                "' names no known host");
        return LinkEndpoint{ep.node, 0, true};
      }
      auto it = switch_cfg_.find(ep.node);
      if (it == switch_cfg_.end())
        throw ConfigError(ConfigError::Kind::UnknownSwitch,
                          "link endpoint '" + ep.node +
                              "' names no known switch");
      if (!it->second->ports.count(ep.port))
        throw ConfigError(ConfigError::Kind::UnknownPort,
                          "link endpoint '" + ep.node + ":" +
                              std::to_string(ep.port) +
                              "' names a missing port");
      return LinkEndpoint{ep.node, ep.port, false};
    };
    LinkEndpoint a = resolve(link.a);
    LinkEndpoint b = resolve(link.b);
    if (a.is_host && b.is_host)
      throw ConfigError(ConfigError::Kind::BadValue,
                        "link '" + a.node + "' - '" + b.node +
                            "' connects two hosts");
    if (!a.is_host && !b.is_host) {
      // trunk link: both ports must be plain internal ports
      for (const LinkEndpoint& ep : {a, b}) {
        auto [ext, hostp] = port_class(*switch_cfg_.at(ep.node), ep.port);
        if (ext || hostp)
          throw ConfigError(ConfigError::Kind::BadValue,
                            "switch-to-switch link uses classified port " +
                                std::to_string(ep.port) + " of switch '" +
                                ep.node + "'");
      }
    } else {
      const LinkEndpoint& sw = a.is_host ? b : a;
      auto [ext, hostp] = port_class(*switch_cfg_.at(sw.node), sw.port);
      if (!ext && !hostp)
        throw ConfigError(ConfigError::Kind::BadValue,
                          "host link uses unclassified port " +
                              std::to_string(sw.port) + " of switch '" +
                              sw.node + "'");
    }
    auto connect = [&](const LinkEndpoint& from, const LinkEndpoint& to) {
      auto key = std::make_pair(from.node, from.port);
      if (peers_.count(key))
        throw ConfigError(
            ConfigError::Kind::BadValue,
            "endpoint '" + from.node + ":" + std::to_string(from.port) +
                "' appears in more than one link");
      peers_.emplace(key, PeerRef{to, link.latency_ms});
    };
    connect(a, b);
    connect(b, a);
  }

  for (const auto& [name, host] : hosts_) {
    auto it = peers_.find({name, 0});
    if (it == peers_.end() || it->second.endpoint.is_host ||
        it->second.endpoint.node != host.switch_name ||
        it->second.endpoint.port != host.switch_port)
      throw ConfigError(ConfigError::Kind::UnknownPort,
                        "host '" + name + "' declares attachment " +
                            host.switch_name + ":" +
                            std::to_string(host.switch_port) +
                            " but no such link exists");
  }

  // Every swid route chain must reach its destination switch without
  // revisiting a switch.
  for (const SwitchConfig& sc : topology_.control_plane.switches) {
    for (const auto& [dest, unused] : sc.swid_routes) {
      const SwitchConfig* cur = &sc;
      std::set<uint32_t> visited;
      while (cur->swid != dest) {
        if (!visited.insert(cur->swid).second)
          throw ConfigError(ConfigError::Kind::RoutingLoop,
                            "swid routes for destination " +
                                std::to_string(dest) + " loop at switch '" +
                                cur->name + "'");
        auto rit = cur->swid_routes.find(dest);
        if (rit == cur->swid_routes.end())
          throw ConfigError(ConfigError::Kind::BadValue,
                            "switch '" + cur->name +
                                "' has no route toward swid " +
                                std::to_string(dest) + " (path from '" +
                                sc.name + "')");
        auto pit = peers_.find({cur->name, rit->second.egress_port});
        if (pit == peers_.end() || pit->second.endpoint.is_host)
          throw ConfigError(ConfigError::Kind::BadValue,
                            "swid route at switch '" + cur->name +
                                "' egresses port " +
                                std::to_string(rit->second.egress_port) +
                                " which does not reach a switch");
        cur = switch_cfg_.at(pit->second.endpoint.node);
      }
    }
  }

  for (const std::string& target : scenario_.attack_targets) {
    auto it = hosts_.find(target);
    if (it == hosts_.end())
      throw ConfigError(ConfigError::Kind::UnknownHost,
                        "scenario.attack_targets names unknown host '" +
                            target + "'");
    if (it->second.role != HostRole::Server)
      throw ConfigError(ConfigError::Kind::BadValue,
                        "scenario.attack_targets host '" + target +
                            "' is not a server");
  }
  for (const BackgroundFlow& flow : scenario_.background_flows)
    for (const std::string& name : {flow.src, flow.dst})
      if (!hosts_.count(name))
        throw ConfigError(ConfigError::Kind::UnknownHost,
                          "scenario.background_flows names unknown host '" +
                              name + "'");
}

TrialResult Fabric::run_trial(uint64_t trial_index) const {
  return TrialRun(*this, trial_index).run();
}

std::vector<TrialResult> Fabric::run_all_trials(unsigned workers) const {
  uint64_t n = scenario_.trials;
  std::vector<TrialResult> results(n);
  if (workers <= 1 || n <= 1) {
    for (uint64_t k = 0; k < n; ++k) results[k] = run_trial(k);
    return results;
  }
  std::atomic<uint64_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto body = [&] {
    for (;;) {
      uint64_t k = next.fetch_add(1);
      if (k >= n) return;
      try {
        results[k] = run_trial(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  unsigned count = static_cast<unsigned>(
      std::min<uint64_t>(workers, n));
  std::vector<std::thread> threads;
  threads.reserve(count);
  for (unsigned i = 0; i < count; ++i) threads.emplace_back(body);
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

Metrics Fabric::metrics_of(const std::vector<TrialResult>& results) const {
  Metrics m;
  m.trials.reserve(results.size());
  for (const TrialResult& r : results) m.trials.push_back(r.metrics);
  std::vector<std::string> servers;
  for (const auto& [name, spec] : hosts_)
    if (spec.role == HostRole::Server) servers.push_back(name);
  m.per_server = aggregate_metrics(m.trials, servers);
  return m;
}

Metrics Fabric::run_scenario(unsigned workers) const {
  return metrics_of(run_all_trials(workers));
}

void Fabric::inject(const std::string& host, Packet pkt, double at_ms) {
  if (!hosts_.count(host))
    throw ConfigError(ConfigError::Kind::UnknownHost,
                      "inject host '" + host + "' is unknown");
  injects_.push_back(PendingInject{host, std::move(pkt), at_ms});
}

const SwitchState& Fabric::switch_state(const std::string& name) const {
  auto it = pristine_.find(name);
  if (it == pristine_.end())
    throw ConfigError(ConfigError::Kind::UnknownSwitch,
                      "unknown switch '" + name + "'");
  return it->second;
}

const HostSpec& Fabric::host(const std::string& name) const {
  auto it = hosts_.find(name);
  if (it == hosts_.end())
    throw ConfigError(ConfigError::Kind::UnknownHost,
                      "unknown host '" + name + "'");
  return it->second;
}

const HostSpec* Fabric::host_by_ip(uint32_t ip) const {
  auto it = host_by_ip_.find(ip);
  return it == host_by_ip_.end() ? nullptr : &hosts_.at(it->second);
}

MacAddr Fabric::first_hop_mac(const HostSpec& host) const {
  return switch_mac(switch_cfg_.at(host.switch_name)->swid);
}

Fabric build_fabric(Topology topology, ScenarioConfig scenario) {
  return Fabric(std::move(topology), std::move(scenario));
}

}  // namespace lamp
