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

#include "lamp/match_tables.h"

namespace lamp {

std::string to_string(const Prefix& p) {
  return ipv4_to_string(p.value) + "/" + std::to_string(p.length);
}

std::string to_string(const ActionDescriptor& a) {
  switch (a.kind) {
    case ActionDescriptor::Kind::NoAction:
      return "no_action";
    case ActionDescriptor::Kind::AddSwid:
      return "add_swid(" + std::to_string(a.swid) + ")";
    case ActionDescriptor::Kind::RemoveSwid:
      return "remove_swid";
    case ActionDescriptor::Kind::Block:
      return "block";
    case ActionDescriptor::Kind::Ipv4Forward:
      return "ipv4_forward(port=" + std::to_string(a.next_hop.egress_port) +
             " mac=" + mac_to_string(a.next_hop.dst_mac) + ")";
  }
  return "?";
}

LpmTable::LpmTable() { nodes_.emplace_back(); }

void LpmTable::insert(const Prefix& prefix, const ForwardingAction& action) {
  if (prefix.length > 32 ||
      (prefix.value & ~prefix_mask(prefix.length)) != 0)
    throw ConfigError(ConfigError::Kind::InvalidPrefix,
                      "prefix has nonzero bits beyond its length: " +
                          to_string(prefix));
  int node = 0;
  for (int depth = 0; depth < prefix.length; ++depth) {
    int bit = (prefix.value >> (31 - depth)) & 1;
    if (nodes_[node].child[bit] < 0) {
      nodes_[node].child[bit] = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
    }
    node = nodes_[node].child[bit];
  }
  if (!nodes_[node].occupied) ++size_;
  nodes_[node].occupied = true;
  nodes_[node].action = action;
}

const ForwardingAction* LpmTable::lookup(uint32_t addr) const {
  const ForwardingAction* best = nullptr;
  int node = 0;
  if (nodes_[0].occupied) best = &nodes_[0].action;
  for (int depth = 0; depth < 32; ++depth) {
    int bit = (addr >> (31 - depth)) & 1;
    node = nodes_[node].child[bit];
    if (node < 0) break;
    if (nodes_[node].occupied) best = &nodes_[node].action;
  }
  return best;
}

std::vector<std::pair<Prefix, ForwardingAction>> LpmTable::entries() const {
  std::vector<std::pair<Prefix, ForwardingAction>> out;
  struct Frame {
    int node;
    uint32_t value;
    uint8_t depth;
  };
  std::vector<Frame> stack{{0, 0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const Node& n = nodes_[f.node];
    if (n.occupied) out.push_back({Prefix{f.value, f.depth}, n.action});
    // push right child first so the left (0) bit pops first
    for (int bit = 1; bit >= 0; --bit) {
      if (n.child[bit] >= 0) {
        uint32_t v = f.value;
        if (bit) v |= uint32_t{1} << (31 - f.depth);
        stack.push_back({n.child[bit], v, static_cast<uint8_t>(f.depth + 1)});
      }
    }
  }
  return out;
}

void ExactTable::insert(const std::vector<uint8_t>& key,
                        const ActionDescriptor& action) {
  if (key.size() != key_width_)
    throw ConfigError(ConfigError::Kind::KeyWidthMismatch,
                      "key width " + std::to_string(key.size()) +
                          " != table width " + std::to_string(key_width_));
  entries_[key] = action;
}

const ActionDescriptor& ExactTable::lookup(
    const std::vector<uint8_t>& key) const {
  if (key.size() != key_width_)
    throw ConfigError(ConfigError::Kind::KeyWidthMismatch,
                      "key width " + std::to_string(key.size()) +
                          " != table width " + std::to_string(key_width_));
  auto it = entries_.find(key);
  return it == entries_.end() ? default_action_ : it->second;
}

std::vector<uint8_t> key_of_port(PortId port) {
  return {static_cast<uint8_t>(port >> 8), static_cast<uint8_t>(port & 0xff)};
}

std::vector<uint8_t> key_of_port_option(PortId port, OptionKind kind) {
  return {static_cast<uint8_t>(port >> 8), static_cast<uint8_t>(port & 0xff),
          option_type_byte(kind)};
}

std::vector<uint8_t> key_of_swid(uint32_t swid) {
  return {static_cast<uint8_t>(swid >> 24),
          static_cast<uint8_t>((swid >> 16) & 0xff),
          static_cast<uint8_t>((swid >> 8) & 0xff),
          static_cast<uint8_t>(swid & 0xff)};
}

namespace {

void require_port(const SwitchConfig& sw, PortId port, const char* where) {
  if (!sw.ports.count(port))
    throw ConfigError(ConfigError::Kind::UnknownPort,
                      "switch " + sw.name + ": " + where + " references port " +
                          std::to_string(port) + " which does not exist");
}

}  // namespace

std::map<uint32_t, SwitchTables> load_control_plane(
    const ControlPlaneConfig& config) {
  std::map<uint32_t, SwitchTables> out;
  for (const SwitchConfig& sw : config.switches) {
    if (sw.swid == 0)
      throw ConfigError(ConfigError::Kind::ReservedSwid,
                        "switch " + sw.name +
                            ": swid 0 is reserved for \"no mapping\"");
    if (out.count(sw.swid))
      throw ConfigError(ConfigError::Kind::DuplicateSwid,
                        "swid " + std::to_string(sw.swid) +
                            " assigned to more than one switch");
    SwitchTables tables;
    for (const LpmEntry& e : sw.lpm) {
      if (e.action.kind == ForwardingAction::Kind::Forward)
        require_port(sw, e.action.next_hop.egress_port, "lpm entry");
      tables.ipv4_lpm.insert(e.prefix, e.action);
    }
    for (PortId p : sw.external_ports) {
      require_port(sw, p, "external_ports");
      tables.swid_add.insert(key_of_port(p),
                             ActionDescriptor::add_swid(sw.swid));
    }
    for (PortId p : sw.host_ports) {
      require_port(sw, p, "host_ports");
      tables.swid_remove.insert(
          key_of_port_option(p, OptionKind::IngressSwitchInfo),
          ActionDescriptor::remove_swid());
    }
    for (const auto& [dest_swid, nh] : sw.swid_routes) {
      require_port(sw, nh.egress_port, "swid_routes");
      tables.swid_forward.insert(key_of_swid(dest_swid),
                                 ActionDescriptor::ipv4_forward(nh));
    }
    // the switch's own id always resolves to block
    tables.swid_forward.insert(key_of_swid(sw.swid),
                               ActionDescriptor::block());
    out.emplace(sw.swid, std::move(tables));
  }
  return out;
}

}  // namespace lamp
