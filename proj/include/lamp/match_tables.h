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

#ifndef LAMP_MATCH_TABLES_H_
#define LAMP_MATCH_TABLES_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lamp/wire.h"

namespace lamp {

using PortId = uint16_t;

class ConfigError : public std::runtime_error {
 public:
  enum class Kind {
    InvalidPrefix,
    KeyWidthMismatch,
    DuplicateSwid,
    ReservedSwid,
    UnknownPort,
    UnknownSwitch,
    UnknownHost,
    RoutingLoop,
    BadValue,
    UnknownKey,
  };

  ConfigError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

constexpr uint32_t prefix_mask(uint8_t length) {
  return length == 0 ? 0 : ~uint32_t{0} << (32 - length);
}

struct Prefix {
  uint32_t value = 0;
  uint8_t length = 0;  // 0..32; bits beyond length must be zero

  bool matches(uint32_t addr) const {
    return (addr & prefix_mask(length)) == value;
  }
  auto operator<=>(const Prefix&) const = default;
};

std::string to_string(const Prefix& p);

struct NextHop {
  PortId egress_port = 0;
  MacAddr dst_mac{};

  bool operator==(const NextHop&) const = default;
};

struct ForwardingAction {
  enum class Kind { Forward, Drop };
  Kind kind = Kind::Drop;
  NextHop next_hop;

  static ForwardingAction forward(NextHop nh) { return {Kind::Forward, nh}; }
  static ForwardingAction drop() { return {Kind::Drop, {}}; }
  bool operator==(const ForwardingAction&) const = default;
};

// Longest-prefix-match table over IPv4 destinations, backed by a
// binary trie. Inserting an existing prefix replaces its action.
class LpmTable {
 public:
  LpmTable();

  void insert(const Prefix& prefix, const ForwardingAction& action);
  // nullptr on miss, else the action of the longest matching prefix.
  const ForwardingAction* lookup(uint32_t addr) const;

  size_t size() const { return size_; }
  // entries in (value, length) order, for dumps and tests
  std::vector<std::pair<Prefix, ForwardingAction>> entries() const;

 private:
  struct Node {
    int child[2] = {-1, -1};
    bool occupied = false;
    ForwardingAction action;
  };
  std::vector<Node> nodes_;
  size_t size_ = 0;
};

// P4-style action descriptor shared by the exact-match tables.
struct ActionDescriptor {
  enum class Kind { NoAction, AddSwid, RemoveSwid, Block, Ipv4Forward };
  Kind kind = Kind::NoAction;
  uint32_t swid = 0;  // AddSwid only
  NextHop next_hop;   // Ipv4Forward only

  static ActionDescriptor no_action() { return {}; }
  static ActionDescriptor add_swid(uint32_t swid) {
    return {Kind::AddSwid, swid, {}};
  }
  static ActionDescriptor remove_swid() {
    return {Kind::RemoveSwid, 0, {}};
  }
  static ActionDescriptor block() { return {Kind::Block, 0, {}}; }
  static ActionDescriptor ipv4_forward(NextHop nh) {
    return {Kind::Ipv4Forward, 0, nh};
  }
  bool operator==(const ActionDescriptor&) const = default;
};

std::string to_string(const ActionDescriptor& a);

// Exact-match table over fixed-width byte keys; a missing key yields
// the default action.
class ExactTable {
 public:
  explicit ExactTable(size_t key_width,
                      ActionDescriptor default_action = {})
      : key_width_(key_width), default_action_(default_action) {}

  void insert(const std::vector<uint8_t>& key, const ActionDescriptor& action);
  const ActionDescriptor& lookup(const std::vector<uint8_t>& key) const;

  size_t size() const { return entries_.size(); }
  size_t key_width() const { return key_width_; }
  const std::map<std::vector<uint8_t>, ActionDescriptor>& entries() const {
    return entries_;
  }

 private:
  size_t key_width_;
  ActionDescriptor default_action_;
  std::map<std::vector<uint8_t>, ActionDescriptor> entries_;
};

std::vector<uint8_t> key_of_port(PortId port);
std::vector<uint8_t> key_of_port_option(PortId port, OptionKind kind);
std::vector<uint8_t> key_of_swid(uint32_t swid);

struct LpmEntry {
  Prefix prefix;
  ForwardingAction action;
};

// One switch's control-plane state: identity, routes, and the port
// classification driving the swid tables.
struct SwitchConfig {
  std::string name;
  uint32_t swid = 0;
  std::set<PortId> ports;  // every port that exists on this switch
  std::vector<LpmEntry> lpm;
  std::vector<PortId> external_ports;
  std::vector<PortId> host_ports;
  std::map<uint32_t, NextHop> swid_routes;  // destination swid -> next hop
};

struct ControlPlaneConfig {
  std::vector<SwitchConfig> switches;
};

struct SwitchTables {
  LpmTable ipv4_lpm;
  ExactTable swid_add{2};
  ExactTable swid_remove{3};
  ExactTable swid_forward{4};
};

// Builds the four tables per switch: ipv4_lpm from the route entries,
// swid_add keyed by external ports, swid_remove keyed by
// (host port, INGRESS_SWITCH_INFO), swid_forward mapping every known
// swid to its next hop except the switch's own, which maps to block.
std::map<uint32_t, SwitchTables> load_control_plane(
    const ControlPlaneConfig& config);

}  // namespace lamp

#endif  // LAMP_MATCH_TABLES_H_
