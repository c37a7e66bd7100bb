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

#ifndef LAMP_WIRE_H_
#define LAMP_WIRE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lamp {

using MacAddr = std::array<uint8_t, 6>;

constexpr uint16_t kEthertypeIpv4 = 0x0800;
constexpr size_t kEthernetHeaderSize = 14;
constexpr size_t kIpv4FixedHeaderSize = 20;

// Wire format, big-endian throughout:
//
//   ethernet : dst_mac(6) src_mac(6) ethertype(2)
//   ipv4     : ver/ihl(1) tos(1) total_len(2) id(2) flags/frag(2)
//              ttl(1) proto(1) checksum(2) src(4) dst(4)
//   options  : [lamp option block][foreign options, verbatim]
//   payload  : total_len - ihl*4 bytes
//
// A lamp option block is type(1) len(1) fields(4 or 8) padded with zero
// bytes to a 4-byte boundary. The length byte covers type+len+fields
// only, not the padding (8 bytes on the wire for the 6-byte options,
// 12 for the 10-byte forward option).

struct EthernetHeader {
  MacAddr dst_mac{};
  MacAddr src_mac{};
  uint16_t ethertype = kEthertypeIpv4;

  bool operator==(const EthernetHeader&) const = default;
};

struct Ipv4Header {
  uint8_t version = 4;
  uint8_t ihl = 5;  // header length in 32-bit words
  uint8_t tos = 0;
  uint16_t total_len = kIpv4FixedHeaderSize;
  uint16_t identification = 0;
  uint8_t flags = 0;  // bit2 = reserved, bit1 = DF, bit0 = MF
  uint16_t frag_offset = 0;
  uint8_t ttl = 64;
  uint8_t protocol = 253;
  uint16_t checksum = 0;
  uint32_t src_addr = 0;
  uint32_t dst_addr = 0;

  bool operator==(const Ipv4Header&) const = default;
};

// 5-bit option numbers; with copyFlag=0 and optClass=0 the wire type
// byte equals the number itself.
enum class OptionKind : uint8_t {
  AttackAlert = 31,        // type byte 0x1f, carries attacker ip
  IngressSwitchInfo = 29,  // type byte 0x1d, carries swid
  Forward = 27,            // type byte 0x1b, carries attacker ip + swid
};

constexpr uint8_t option_type_byte(OptionKind k) {
  return static_cast<uint8_t>(k);
}

// Size covered by the option length byte (type + len + fields).
constexpr size_t option_wire_size(OptionKind k) {
  return k == OptionKind::Forward ? 10 : 6;
}

// Size occupied on the wire once zero-padded to a word boundary.
constexpr size_t option_padded_size(OptionKind k) {
  return k == OptionKind::Forward ? 12 : 8;
}

const char* to_string(OptionKind k);

struct LampOption {
  OptionKind kind = OptionKind::IngressSwitchInfo;
  std::optional<uint32_t> swid;
  std::optional<uint32_t> attacker_ip;

  static LampOption ingress_switch_info(uint32_t swid);
  static LampOption attack_alert(uint32_t attacker_ip);
  static LampOption forward(uint32_t attacker_ip, uint32_t swid);

  bool operator==(const LampOption&) const = default;
};

// A non-IPv4 ethertype yields ip == nullopt and the whole body in
// payload. foreign_options holds non-lamp IP options verbatim; a lamp
// option always serializes first in the options area.
struct Packet {
  EthernetHeader eth;
  std::optional<Ipv4Header> ip = Ipv4Header{};
  std::optional<LampOption> lamp_option;
  std::vector<uint8_t> foreign_options;
  std::vector<uint8_t> payload;

  bool operator==(const Packet&) const = default;
};

class WireError : public std::runtime_error {
 public:
  enum class Kind {
    HeaderTooShort,
    Truncated,
    BadVersion,
    MalformedOption,
    Fragmented,
    OptionAlreadyPresent,
    HeaderOverflow,
    NoOption,
    InvariantViolation,
  };

  WireError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Returns nullptr if pkt satisfies every Packet invariant, else a
// description of the first violation.
const char* validate_packet(const Packet& pkt);

// Structural decode. The stored checksum field is preserved as read,
// not verified (validity checks live in the pipeline).
Packet parse_packet(std::span<const uint8_t> bytes);

// Deparse in fixed order: ethernet, ipv4, option type, option length,
// attacker ip, swid, zero padding, foreign options, payload. The header
// checksum is recomputed and embedded.
std::vector<uint8_t> serialize_packet(const Packet& pkt);

// Ones-complement sum of 16-bit words, complemented. Expects the
// checksum field zeroed.
uint16_t compute_checksum(std::span<const uint8_t> header_bytes);

// Checksum of pkt's IPv4 header (fixed part + options) as it would
// serialize, with the checksum field zeroed.
uint16_t compute_header_checksum(const Packet& pkt);

void refresh_checksum(Packet& pkt);
bool header_checksum_ok(const Packet& pkt);

// Grows ihl/total_len by the padded option size and refreshes the
// checksum. The packet must not already carry a lamp option.
Packet attach_option(Packet pkt, const LampOption& opt);

// Inverse of attach_option; returns the cleaned packet and the removed
// option.
std::pair<Packet, LampOption> strip_option(Packet pkt);

Packet make_ipv4_packet(const MacAddr& src_mac, const MacAddr& dst_mac,
                        uint32_t src_ip, uint32_t dst_ip,
                        std::vector<uint8_t> payload, uint8_t ttl = 64,
                        uint8_t protocol = 253);

std::string ipv4_to_string(uint32_t addr);
std::optional<uint32_t> ipv4_from_string(const std::string& text);
std::string mac_to_string(const MacAddr& mac);
std::optional<MacAddr> mac_from_string(const std::string& text);

}  // namespace lamp

#endif  // LAMP_WIRE_H_
