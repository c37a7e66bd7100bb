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

#ifndef LAMP_FABRIC_H_
#define LAMP_FABRIC_H_

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lamp/match_tables.h"
#include "lamp/pipeline.h"
#include "lamp/wire.h"

// Deterministic discrete-event simulation of a small switch fabric:
// switches running the tagging pipeline (or the baseline pipeline plus
// a modeled controller), hosts with attacker/server/benign behavior,
// and latency-bearing links. Time is continuous milliseconds; all
// per-packet processing inside a switch takes zero simulated time.

namespace lamp {

class SimError : public std::runtime_error {
 public:
  enum class Kind { Nontermination };

  SimError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class HostRole { Attacker, Server, Benign };

const char* to_string(HostRole r);

struct HostSpec {
  std::string name;
  uint32_t ip = 0;
  MacAddr mac{};
  std::string switch_name;  // attached switch
  PortId switch_port = 0;   // switch-side port of the attachment link
  HostRole role = HostRole::Benign;
};

// A link endpoint is either (switch name, port) or a host name; hosts
// have a single implicit port.
struct LinkEndpoint {
  std::string node;
  PortId port = 0;
  bool is_host = false;

  bool operator==(const LinkEndpoint&) const = default;
};

struct LinkSpec {
  LinkEndpoint a;
  LinkEndpoint b;
  double latency_ms = 0.0;
};

struct Topology {
  ControlPlaneConfig control_plane;
  std::vector<HostSpec> hosts;
  std::vector<LinkSpec> links;
};

enum class Mode { Lamp, SdnBaseline };

const char* to_string(Mode m);

// Alert handling cost of the baseline: punt to the controller, resolve
// the ingress switch from global knowledge, then install the drop
// entry. Total added latency per alert is
//   uplink + fixed + U[jitter_min, jitter_max] + install.
struct ControllerModel {
  double uplink_ms = 0.0;
  double processing_fixed_ms = 0.0;
  double processing_jitter_min_ms = 0.0;
  double processing_jitter_max_ms = 0.0;
  double install_ms = 0.0;

  double total_fixed() const {
    return uplink_ms + processing_fixed_ms + install_ms;
  }
};

// Benign cross traffic: `count` marked payloads from src to dst,
// spaced interval_ms apart starting at start_ms.
struct BackgroundFlow {
  std::string src;
  std::string dst;
  double start_ms = 0.0;
  double interval_ms = 1.0;
  uint64_t count = 0;
};

struct ScenarioConfig {
  Mode mode = Mode::Lamp;
  uint64_t seed = 1;
  uint64_t trials = 30;
  double attack_rate_pps = 200.0;
  double attack_start_ms = 10.0;      // t1; the handshake runs at t0 = 0
  double attack_duration_ms = 1000.0;
  std::vector<std::string> attack_targets;
  uint64_t detection_threshold = 5;
  double detection_processing_delay_ms = 0.0;
  double horizon_ms = 10000.0;
  ControllerModel controller;
  std::vector<BackgroundFlow> background_flows;
};

// Payload markers hosts react to. A packet "is" a marker when its
// payload starts with these bytes.
extern const char* const kMarkerHello;
extern const char* const kMarkerHelloAck;
extern const char* const kMarkerInvalidRequest;
extern const char* const kMarkerBackground;
extern const char* const kMarkerAlert;

std::vector<uint8_t> marker_payload(const char* marker);
bool has_marker(const Packet& pkt, const char* marker);

// Packets travel between nodes as serialized bytes, so every hop goes
// through parse and serialize exactly like a real link.
struct SimEvent {
  enum class Kind { PacketArrival, HostSend, ControllerInstall, TrialBoundary };

  double t = 0.0;
  uint64_t seq = 0;  // tie breaker; assigned in scheduling order
  Kind kind = Kind::TrialBoundary;
  std::string node;            // switch or host receiving/acting
  PortId port = 0;             // PacketArrival at a switch: ingress port
  std::vector<uint8_t> bytes;  // PacketArrival: on-the-wire form
  Packet packet;               // HostSend
  uint32_t attacker_ip = 0;    // ControllerInstall
};

struct TraceEvent {
  double t_ms = 0.0;
  std::string node;
  std::string event;     // packet or event summary
  std::string decision;  // forward(p) | drop | consume | deliver | send | install
  std::string reason;    // drop reason / consume effect, "-" otherwise
};

std::string to_string(const TraceEvent& ev);

// Packet handed to a host, with the exact bytes that crossed the
// host-facing link.
struct Delivery {
  double t_ms = 0.0;
  std::string host;
  Packet packet;
  std::vector<uint8_t> bytes;
};

// One trial's report row set: per-server victim counts plus the block
// timeline. block_time_ms is -1 when no block was installed.
struct TrialMetrics {
  uint64_t trial = 0;
  std::map<std::string, uint64_t> invalid_received;  // server name -> count
  double block_time_ms = -1.0;
  uint64_t alert_drops = 0;
};

struct AggregateRow {
  uint64_t total = 0;
  uint64_t min = 0;
  uint64_t max = 0;
  double mean = 0.0;

  bool operator==(const AggregateRow&) const = default;
};

struct Metrics {
  std::vector<TrialMetrics> trials;
  std::map<std::string, AggregateRow> per_server;
};

// Recomputes per-server aggregates from the trial rows.
std::map<std::string, AggregateRow> aggregate_metrics(
    const std::vector<TrialMetrics>& trials,
    const std::vector<std::string>& servers);

// Everything observable about one finished trial. Packet conservation:
// injected == delivered + dropped + consumed once the queue drains.
struct TrialResult {
  TrialMetrics metrics;
  std::vector<TraceEvent> trace;
  std::vector<Delivery> deliveries;
  std::map<std::string, SwitchState> switch_states;
  uint64_t injected = 0;
  uint64_t delivered = 0;
  uint64_t dropped = 0;
  uint64_t consumed = 0;
};

// Synthetic L2 address of a switch, used as the first hop of packets
// a host originates toward the fabric (no ARP is modeled).
MacAddr switch_mac(uint32_t swid);

// Per-trial mutable host state. Reset per trial by construction.
struct HostRuntime {
  const HostSpec* spec = nullptr;
  std::map<uint32_t, uint64_t> invreq_by_src;
  std::set<uint32_t> alerted;
  uint64_t invalid_received = 0;
};

struct HostEmission {
  Packet packet;
  double delay_ms = 0.0;  // relative to the receive time
};

// Role behavior on packet delivery. Servers count invalid requests per
// source and emit one AttackAlert per attacker per trial once the
// detection threshold is reached; any host answers a handshake probe.
std::optional<HostEmission> host_on_receive(HostRuntime& host,
                                            const Packet& pkt,
                                            const ScenarioConfig& scenario,
                                            const MacAddr& first_hop_mac);

// SplitMix64 finalizer over gamma-spaced input; the per-trial seed
// depends only on (scenario seed, trial index) so trials are
// order-independent and safe to run in parallel.
uint64_t trial_seed(uint64_t scenario_seed, uint64_t trial);

// [0, 1) from the top 53 bits; avoids distribution objects so draws
// are identical across standard library implementations.
double uniform_double(std::mt19937_64& rng, double lo, double hi);

class Fabric {
 public:
  Fabric(Topology topology, ScenarioConfig scenario);

  // switch_cfg_ points into topology_, so moves are fine but copies
  // are not.
  Fabric(const Fabric&) = delete;
  Fabric& operator=(const Fabric&) = delete;
  Fabric(Fabric&&) = default;
  Fabric& operator=(Fabric&&) = default;

  // Runs one trial on a copy of the pristine built state.
  TrialResult run_trial(uint64_t trial_index) const;

  // Runs scenario.trials trials (serially, or on `workers` threads when
  // workers > 1) and aggregates. Results are merged in trial-index
  // order, so the worker count never changes any output byte.
  Metrics run_scenario(unsigned workers = 1) const;
  std::vector<TrialResult> run_all_trials(unsigned workers = 1) const;
  // Aggregates already-computed trial results over this fabric's
  // server hosts.
  Metrics metrics_of(const std::vector<TrialResult>& results) const;

  // Adds a packet send to every trial's schedule (handy for tests).
  void inject(const std::string& host, Packet pkt, double at_ms);

  // When true, run_trial records TraceEvents into TrialResult::trace.
  void set_tracing(bool enabled) { tracing_ = enabled; }

  const Topology& topology() const { return topology_; }
  const ScenarioConfig& scenario() const { return scenario_; }
  ScenarioConfig& scenario() { return scenario_; }

  // Pristine (pre-trial) switch state, as built by load_control_plane.
  const SwitchState& switch_state(const std::string& name) const;
  const HostSpec& host(const std::string& name) const;
  const HostSpec* host_by_ip(uint32_t ip) const;
  // L2 address a host uses to reach its attached switch.
  MacAddr first_hop_mac(const HostSpec& host) const;

 private:
  struct PendingInject {
    std::string host;
    Packet packet;
    double at_ms;
  };

  struct PeerRef {
    LinkEndpoint endpoint;
    double latency_ms = 0.0;
  };

  friend class TrialRun;

  Topology topology_;
  ScenarioConfig scenario_;
  bool tracing_ = false;
  std::vector<PendingInject> injects_;
  std::map<std::string, SwitchState> pristine_;         // by switch name
  std::map<std::string, const SwitchConfig*> switch_cfg_;
  std::map<std::string, HostSpec> hosts_;               // by host name
  std::map<uint32_t, std::string> host_by_ip_;
  // (node, port) -> far end; hosts use port 0.
  std::map<std::pair<std::string, PortId>, PeerRef> peers_;
};

Fabric build_fabric(Topology topology, ScenarioConfig scenario);

}  // namespace lamp

#endif  // LAMP_FABRIC_H_
