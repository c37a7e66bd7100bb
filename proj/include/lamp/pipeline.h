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

#ifndef LAMP_PIPELINE_H_
#define LAMP_PIPELINE_H_

#include "lamp/match_tables.h"

namespace lamp {

constexpr size_t kDefaultRegisterSlots = 200;

uint32_t crc32_ieee(std::span<const uint8_t> bytes);

// CRC-32 of the four big-endian address bytes, modulo the register
// width. Indexes all three per-switch registers.
size_t hash_index(uint32_t addr, size_t slots = kDefaultRegisterSlots);

enum class DropReason {
  Blacklisted,
  NoRoute,
  InvalidHeader,
  TtlExpired,
  UnknownIngress,
  MalformedExternal,
  MalformedOption,
};

const char* to_string(DropReason r);

class PipelineError : public std::runtime_error {
 public:
  enum class Kind { NotAnAlert, NoOption };

  PipelineError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct PacketMetadata {
  PortId ingress_port = 0;
  bool check_source_ip = false;  // set only by add_swid
};

struct SwitchCounters {
  uint64_t forwards = 0;
  uint64_t consumed = 0;
  uint64_t blacklist_evictions = 0;
  std::map<DropReason, uint64_t> drops;
  std::map<uint32_t, uint64_t> forwards_by_src;

  uint64_t total_drops() const;
};

// One switch: identity, the four match-action tables, and the three
// hashed registers. Owned by exactly one execution context at a time;
// tables are read-only after load, registers mutate per packet.
struct SwitchState {
  SwitchState(uint32_t swid, SwitchTables tables,
              size_t register_slots = kDefaultRegisterSlots);

  uint32_t swid;
  SwitchTables tables;
  std::vector<uint8_t> blacklist;        // 1-bit drop flags
  std::vector<uint32_t> iplist;          // blocked address per slot
  std::vector<uint32_t> hash_ip_to_swid; // source ip -> ingress swid
  SwitchCounters counters;

  size_t register_slots() const { return blacklist.size(); }
  void reset_registers();
};

struct Decision {
  enum class Kind { Forward, Drop, Consume };
  enum class ConsumeEffect { BlockInstalled, AlertPunted };

  Kind kind = Kind::Drop;
  // Forward
  PortId egress_port = 0;
  Packet packet;
  // Drop
  DropReason reason = DropReason::NoRoute;
  // Consume
  ConsumeEffect effect = ConsumeEffect::BlockInstalled;
  uint32_t attacker_ip = 0;

  static Decision forward(PortId port, Packet pkt);
  static Decision drop(DropReason reason);
  static Decision consume(ConsumeEffect effect, uint32_t attacker_ip);
};

// Attaches IngressSwitchInfo{state.swid} and marks the packet to be
// checked against the blacklist.
Packet action_add_swid(SwitchState& state, Packet pkt, PacketMetadata& meta);

// Strips IngressSwitchInfo, recording the source-ip -> swid mapping.
// The returned packet serializes byte-identically to the pre-tagging
// original.
Packet action_remove_swid(SwitchState& state, Packet pkt);

// Installs a drop entry for attacker_ip. Overwriting a slot that holds
// a different address counts as an eviction.
void action_block(SwitchState& state, uint32_t attacker_ip);

// True iff the flag is set and the stored address matches exactly, so
// hash collisions never block bystanders.
bool is_blacklisted(const SwitchState& state, uint32_t addr);

// Resolves the alerted address to its ingress switch, rewrites the
// option to Forward and routes it there; installs the block directly
// when this switch is the ingress itself.
Decision handle_alert(SwitchState& state, Packet pkt);

// The LAMP ingress flow: header validation, swid_add + blacklist at
// external ports, alert/forward option handling, ipv4_lpm forwarding,
// swid_remove at host-facing egress. Total: every failure is a Drop.
Decision process_packet(SwitchState& state, PortId port, Packet pkt);

// Baseline switch used for the SDN comparison: no tagging, alerts are
// punted (Consume{AlertPunted}) for a controller modeled elsewhere,
// blacklist still enforced at external ports.
Decision process_packet_sdn(SwitchState& state, PortId port, Packet pkt);

}  // namespace lamp

#endif  // LAMP_PIPELINE_H_
