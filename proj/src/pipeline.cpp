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

#include "lamp/pipeline.h"

#include <array>

namespace lamp {

namespace {

// reflected IEEE polynomial, table-driven
const std::array<uint32_t, 256>& crc32_table() {
  static const std::array<uint32_t, 256> table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  return table;
}

std::array<uint8_t, 4> addr_bytes(uint32_t addr) {
  return {static_cast<uint8_t>(addr >> 24),
          static_cast<uint8_t>((addr >> 16) & 0xff),
          static_cast<uint8_t>((addr >> 8) & 0xff),
          static_cast<uint8_t>(addr & 0xff)};
}

// ipv4_forward: dst MAC rewrite, TTL decrement, checksum refresh,
// then the swid_remove stage before the packet leaves the switch.
Decision forward_via(SwitchState& state, const NextHop& nh, Packet pkt,
                     bool lamp_egress) {
  if (pkt.ip->ttl <= 1) {
    ++state.counters.drops[DropReason::TtlExpired];
    return Decision::drop(DropReason::TtlExpired);
  }
  pkt.eth.dst_mac = nh.dst_mac;
  --pkt.ip->ttl;
  refresh_checksum(pkt);
  if (lamp_egress && pkt.lamp_option) {
    const ActionDescriptor& act = state.tables.swid_remove.lookup(
        key_of_port_option(nh.egress_port, pkt.lamp_option->kind));
    if (act.kind == ActionDescriptor::Kind::RemoveSwid)
      pkt = action_remove_swid(state, std::move(pkt));
  }
  ++state.counters.forwards;
  ++state.counters.forwards_by_src[pkt.ip->src_addr];
  return Decision::forward(nh.egress_port, std::move(pkt));
}

Decision drop_counted(SwitchState& state, DropReason reason) {
  ++state.counters.drops[reason];
  return Decision::drop(reason);
}

Decision lpm_stage(SwitchState& state, Packet pkt, bool lamp_egress) {
  const ForwardingAction* route =
      state.tables.ipv4_lpm.lookup(pkt.ip->dst_addr);
  if (!route || route->kind == ForwardingAction::Kind::Drop)
    return drop_counted(state, DropReason::NoRoute);
  return forward_via(state, route->next_hop, std::move(pkt), lamp_egress);
}

bool header_valid(const Packet& pkt) {
  return pkt.ip && pkt.ip->ttl > 0 && header_checksum_ok(pkt);
}

}  // namespace

uint32_t crc32_ieee(std::span<const uint8_t> bytes) {
  const auto& table = crc32_table();
  uint32_t crc = 0xffffffffu;
  for (uint8_t b : bytes) crc = table[(crc ^ b) & 0xff] ^ (crc >> 8);
  return crc ^ 0xffffffffu;
}

size_t hash_index(uint32_t addr, size_t slots) {
  auto bytes = addr_bytes(addr);
  return crc32_ieee(bytes) % slots;
}

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::Blacklisted:
      return "Blacklisted";
    case DropReason::NoRoute:
      return "NoRoute";
    case DropReason::InvalidHeader:
      return "InvalidHeader";
    case DropReason::TtlExpired:
      return "TtlExpired";
    case DropReason::UnknownIngress:
      return "UnknownIngress";
    case DropReason::MalformedExternal:
      return "MalformedExternal";
    case DropReason::MalformedOption:
      return "MalformedOption";
  }
  return "?";
}

uint64_t SwitchCounters::total_drops() const {
  uint64_t n = 0;
  for (const auto& [reason, count] : drops) n += count;
  return n;
}

SwitchState::SwitchState(uint32_t swid_, SwitchTables tables_,
                         size_t register_slots)
    : swid(swid_),
      tables(std::move(tables_)),
      blacklist(register_slots, 0),
      iplist(register_slots, 0),
      hash_ip_to_swid(register_slots, 0) {}

void SwitchState::reset_registers() {
  std::fill(blacklist.begin(), blacklist.end(), 0);
  std::fill(iplist.begin(), iplist.end(), 0);
  std::fill(hash_ip_to_swid.begin(), hash_ip_to_swid.end(), 0);
  counters = SwitchCounters{};
}

Decision Decision::forward(PortId port, Packet pkt) {
  Decision d;
  d.kind = Kind::Forward;
  d.egress_port = port;
  d.packet = std::move(pkt);
  return d;
}

Decision Decision::drop(DropReason reason) {
  Decision d;
  d.kind = Kind::Drop;
  d.reason = reason;
  return d;
}

Decision Decision::consume(ConsumeEffect effect, uint32_t attacker_ip) {
  Decision d;
  d.kind = Kind::Consume;
  d.effect = effect;
  d.attacker_ip = attacker_ip;
  return d;
}

Packet action_add_swid(SwitchState& state, Packet pkt, PacketMetadata& meta) {
  pkt = attach_option(std::move(pkt),
                      LampOption::ingress_switch_info(state.swid));
  meta.check_source_ip = true;
  return pkt;
}

Packet action_remove_swid(SwitchState& state, Packet pkt) {
  if (!pkt.lamp_option ||
      pkt.lamp_option->kind != OptionKind::IngressSwitchInfo)
    throw PipelineError(PipelineError::Kind::NoOption,
                        "packet carries no INGRESS_SWITCH_INFO option");
  auto [clean, opt] = strip_option(std::move(pkt));
  size_t i = hash_index(clean.ip->src_addr, state.register_slots());
  state.hash_ip_to_swid[i] = *opt.swid;
  return std::move(clean);
}

void action_block(SwitchState& state, uint32_t attacker_ip) {
  size_t i = hash_index(attacker_ip, state.register_slots());
  if (state.blacklist[i] && state.iplist[i] != attacker_ip)
    ++state.counters.blacklist_evictions;
  state.blacklist[i] = 1;
  state.iplist[i] = attacker_ip;
}

bool is_blacklisted(const SwitchState& state, uint32_t addr) {
  size_t i = hash_index(addr, state.register_slots());
  return state.blacklist[i] == 1 && state.iplist[i] == addr;
}

Decision handle_alert(SwitchState& state, Packet pkt) {
  if (!pkt.lamp_option || pkt.lamp_option->kind != OptionKind::AttackAlert)
    throw PipelineError(PipelineError::Kind::NotAnAlert,
                        "packet carries no ATTACK_ALERT option");
  uint32_t attacker = *pkt.lamp_option->attacker_ip;
  uint32_t ingress =
      state.hash_ip_to_swid[hash_index(attacker, state.register_slots())];
  if (ingress == 0) return drop_counted(state, DropReason::UnknownIngress);
  if (ingress == state.swid) {
    // degenerate single-switch case: this switch is the ingress
    action_block(state, attacker);
    ++state.counters.consumed;
    return Decision::consume(Decision::ConsumeEffect::BlockInstalled,
                             attacker);
  }
  Packet rewritten = attach_option(strip_option(std::move(pkt)).first,
                                   LampOption::forward(attacker, ingress));
  const ActionDescriptor& act =
      state.tables.swid_forward.lookup(key_of_swid(ingress));
  if (act.kind != ActionDescriptor::Kind::Ipv4Forward)
    return drop_counted(state, DropReason::NoRoute);
  return forward_via(state, act.next_hop, std::move(rewritten), true);
}

Decision process_packet(SwitchState& state, PortId port, Packet pkt) {
  if (!header_valid(pkt)) return drop_counted(state, DropReason::InvalidHeader);
  PacketMetadata meta;
  meta.ingress_port = port;

  const ActionDescriptor& add =
      state.tables.swid_add.lookup(key_of_port(port));
  if (add.kind == ActionDescriptor::Kind::AddSwid) {
    // external port: tag, then filter
    if (pkt.lamp_option)
      return drop_counted(state, DropReason::MalformedExternal);
    pkt = action_add_swid(state, std::move(pkt), meta);
    if (is_blacklisted(state, pkt.ip->src_addr))
      return drop_counted(state, DropReason::Blacklisted);
  } else if (pkt.lamp_option) {
    if (pkt.lamp_option->kind == OptionKind::AttackAlert)
      return handle_alert(state, std::move(pkt));
    if (pkt.lamp_option->kind == OptionKind::Forward) {
      const ActionDescriptor& act =
          state.tables.swid_forward.lookup(key_of_swid(*pkt.lamp_option->swid));
      if (act.kind == ActionDescriptor::Kind::Block) {
        uint32_t attacker = *pkt.lamp_option->attacker_ip;
        action_block(state, attacker);
        ++state.counters.consumed;
        return Decision::consume(Decision::ConsumeEffect::BlockInstalled,
                                 attacker);
      }
      if (act.kind == ActionDescriptor::Kind::Ipv4Forward)
        return forward_via(state, act.next_hop, std::move(pkt), true);
      return drop_counted(state, DropReason::NoRoute);
    }
  }
  return lpm_stage(state, std::move(pkt), true);
}

Decision process_packet_sdn(SwitchState& state, PortId port, Packet pkt) {
  if (!header_valid(pkt)) return drop_counted(state, DropReason::InvalidHeader);
  const ActionDescriptor& add =
      state.tables.swid_add.lookup(key_of_port(port));
  if (add.kind == ActionDescriptor::Kind::AddSwid) {
    // installed drop rules act at the network edge, as in LAMP
    if (is_blacklisted(state, pkt.ip->src_addr))
      return drop_counted(state, DropReason::Blacklisted);
  } else if (pkt.lamp_option &&
             pkt.lamp_option->kind == OptionKind::AttackAlert) {
    ++state.counters.consumed;
    return Decision::consume(Decision::ConsumeEffect::AlertPunted,
                             *pkt.lamp_option->attacker_ip);
  }
  return lpm_stage(state, std::move(pkt), false);
}

}  // namespace lamp
