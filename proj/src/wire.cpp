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

#include "lamp/wire.h"

#include <cstdio>
#include <cstring>

namespace lamp {

namespace {

constexpr uint8_t kOptEol = 0x00;
constexpr uint8_t kOptNop = 0x01;

bool is_lamp_type_byte(uint8_t b) {
  return b == option_type_byte(OptionKind::AttackAlert) ||
         b == option_type_byte(OptionKind::IngressSwitchInfo) ||
         b == option_type_byte(OptionKind::Forward);
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>((p[0] << 8) | p[1]);
}

uint32_t read_u32(const uint8_t* p) {
  return (static_cast<uint32_t>(p[0]) << 24) |
         (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v & 0xff));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<uint8_t>(v & 0xff));
}

size_t options_area_size(const Packet& pkt) {
  size_t n = pkt.foreign_options.size();
  if (pkt.lamp_option) n += option_padded_size(pkt.lamp_option->kind);
  return n;
}

// IPv4 header bytes (fixed part + options area) with an explicit
// checksum value. The canonical layout: lamp option first, then
// foreign options verbatim.
std::vector<uint8_t> header_bytes(const Packet& pkt, uint16_t checksum) {
  const Ipv4Header& ip = *pkt.ip;
  std::vector<uint8_t> out;
  out.reserve(static_cast<size_t>(ip.ihl) * 4);
  out.push_back(static_cast<uint8_t>((ip.version << 4) | (ip.ihl & 0x0f)));
  out.push_back(ip.tos);
  put_u16(out, ip.total_len);
  put_u16(out, ip.identification);
  put_u16(out, static_cast<uint16_t>((ip.flags << 13) |
                                     (ip.frag_offset & 0x1fff)));
  out.push_back(ip.ttl);
  out.push_back(ip.protocol);
  put_u16(out, checksum);
  put_u32(out, ip.src_addr);
  put_u32(out, ip.dst_addr);
  if (pkt.lamp_option) {
    const LampOption& opt = *pkt.lamp_option;
    out.push_back(option_type_byte(opt.kind));
    out.push_back(static_cast<uint8_t>(option_wire_size(opt.kind)));
    if (opt.attacker_ip) put_u32(out, *opt.attacker_ip);
    if (opt.swid) put_u32(out, *opt.swid);
    size_t pad = option_padded_size(opt.kind) - option_wire_size(opt.kind);
    out.insert(out.end(), pad, 0);
  }
  out.insert(out.end(), pkt.foreign_options.begin(),
             pkt.foreign_options.end());
  return out;
}

LampOption parse_lamp_option(std::span<const uint8_t> area, size_t* pos) {
  OptionKind kind = static_cast<OptionKind>(area[0]);
  size_t wire_size = option_wire_size(kind);
  if (area.size() < 2 || area[1] != wire_size || area.size() < wire_size)
    throw WireError(WireError::Kind::MalformedOption,
                    "option length byte disagrees with its kind");
  LampOption opt;
  opt.kind = kind;
  const uint8_t* p = area.data() + 2;
  if (kind == OptionKind::AttackAlert) {
    opt.attacker_ip = read_u32(p);
  } else if (kind == OptionKind::IngressSwitchInfo) {
    opt.swid = read_u32(p);
  } else {
    opt.attacker_ip = read_u32(p);
    opt.swid = read_u32(p + 4);
  }
  *pos = wire_size;
  return opt;
}

}  // namespace

const char* to_string(OptionKind k) {
  switch (k) {
    case OptionKind::AttackAlert:
      return "attack_alert";
    case OptionKind::IngressSwitchInfo:
      return "ingress_switch_info";
    case OptionKind::Forward:
      return "forward";
  }
  return "?";
}

LampOption LampOption::ingress_switch_info(uint32_t swid) {
  LampOption o;
  o.kind = OptionKind::IngressSwitchInfo;
  o.swid = swid;
  return o;
}

LampOption LampOption::attack_alert(uint32_t attacker_ip) {
  LampOption o;
  o.kind = OptionKind::AttackAlert;
  o.attacker_ip = attacker_ip;
  return o;
}

LampOption LampOption::forward(uint32_t attacker_ip, uint32_t swid) {
  LampOption o;
  o.kind = OptionKind::Forward;
  o.attacker_ip = attacker_ip;
  o.swid = swid;
  return o;
}

const char* validate_packet(const Packet& pkt) {
  if (!pkt.ip) {
    if (pkt.eth.ethertype == kEthertypeIpv4)
      return "ethertype 0x0800 requires an ipv4 header";
    if (pkt.lamp_option || !pkt.foreign_options.empty())
      return "non-ip packet cannot carry ip options";
    return nullptr;
  }
  if (pkt.eth.ethertype != kEthertypeIpv4)
    return "ipv4 header requires ethertype 0x0800";
  const Ipv4Header& ip = *pkt.ip;
  if (ip.version != 4) return "version must be 4";
  if (ip.frag_offset != 0 || (ip.flags & 0x1) != 0)
    return "fragmented packets are out of scope";
  if (pkt.lamp_option) {
    const LampOption& opt = *pkt.lamp_option;
    bool want_swid = opt.kind != OptionKind::AttackAlert;
    bool want_ip = opt.kind != OptionKind::IngressSwitchInfo;
    if (opt.swid.has_value() != want_swid ||
        opt.attacker_ip.has_value() != want_ip)
      return "lamp option fields disagree with its kind";
  }
  if (pkt.foreign_options.size() % 4 != 0)
    return "foreign options must preserve word granularity";
  if (pkt.lamp_option && !pkt.foreign_options.empty() &&
      (pkt.foreign_options[0] == kOptEol || pkt.foreign_options[0] == kOptNop))
    return "foreign options may not begin with padding after a lamp option";
  size_t opts = options_area_size(pkt);
  if (ip.ihl != 5 + opts / 4) return "ihl disagrees with options size";
  if (ip.ihl < 5 || ip.ihl > 15) return "ihl out of range";
  size_t want_len = static_cast<size_t>(ip.ihl) * 4 + pkt.payload.size();
  if (want_len > 0xffff) return "packet too large for total_len";
  if (ip.total_len != want_len) return "total_len disagrees with payload";
  return nullptr;
}

Packet parse_packet(std::span<const uint8_t> bytes) {
  if (bytes.size() < kEthernetHeaderSize)
    throw WireError(WireError::Kind::Truncated, "short ethernet header");
  Packet pkt;
  std::memcpy(pkt.eth.dst_mac.data(), bytes.data(), 6);
  std::memcpy(pkt.eth.src_mac.data(), bytes.data() + 6, 6);
  pkt.eth.ethertype = read_u16(bytes.data() + 12);
  if (pkt.eth.ethertype != kEthertypeIpv4) {
    pkt.ip.reset();
    pkt.payload.assign(bytes.begin() + kEthernetHeaderSize, bytes.end());
    return pkt;
  }
  if (bytes.size() < kEthernetHeaderSize + kIpv4FixedHeaderSize)
    throw WireError(WireError::Kind::Truncated, "short ipv4 header");
  const uint8_t* p = bytes.data() + kEthernetHeaderSize;
  Ipv4Header ip;
  ip.version = p[0] >> 4;
  ip.ihl = p[0] & 0x0f;
  if (ip.version != 4)
    throw WireError(WireError::Kind::BadVersion, "ip version is not 4");
  if (ip.ihl < 5)
    throw WireError(WireError::Kind::HeaderTooShort, "ihl below 5");
  ip.tos = p[1];
  ip.total_len = read_u16(p + 2);
  ip.identification = read_u16(p + 4);
  uint16_t flags_frag = read_u16(p + 6);
  ip.flags = static_cast<uint8_t>(flags_frag >> 13);
  ip.frag_offset = flags_frag & 0x1fff;
  ip.ttl = p[8];
  ip.protocol = p[9];
  ip.checksum = read_u16(p + 10);
  ip.src_addr = read_u32(p + 12);
  ip.dst_addr = read_u32(p + 16);

  size_t header_len = static_cast<size_t>(ip.ihl) * 4;
  if (ip.total_len < header_len)
    throw WireError(WireError::Kind::Truncated,
                    "total_len smaller than header");
  if (bytes.size() < kEthernetHeaderSize + ip.total_len)
    throw WireError(WireError::Kind::Truncated,
                    "bytes end before total_len");
  if (ip.frag_offset != 0 || (ip.flags & 0x1) != 0)
    throw WireError(WireError::Kind::Fragmented,
                    "fragmented packets are out of scope");
  pkt.ip = ip;

  std::span<const uint8_t> area =
      bytes.subspan(kEthernetHeaderSize + kIpv4FixedHeaderSize,
                    header_len - kIpv4FixedHeaderSize);
  if (!area.empty() && is_lamp_type_byte(area[0])) {
    size_t pos = 0;
    pkt.lamp_option = parse_lamp_option(area, &pos);
    // padding behind the option is canonical, not content
    while (pos < area.size() &&
           (area[pos] == kOptEol || area[pos] == kOptNop))
      ++pos;
    pkt.foreign_options.assign(area.begin() + pos, area.end());
    if (pkt.foreign_options.size() % 4 != 0)
      throw WireError(WireError::Kind::MalformedOption,
                      "trailing options break word granularity");
  } else {
    pkt.foreign_options.assign(area.begin(), area.end());
  }
  pkt.payload.assign(bytes.begin() + kEthernetHeaderSize + header_len,
                     bytes.begin() + kEthernetHeaderSize + ip.total_len);
  return pkt;
}

std::vector<uint8_t> serialize_packet(const Packet& pkt) {
  if (const char* bad = validate_packet(pkt))
    throw WireError(WireError::Kind::InvariantViolation, bad);
  std::vector<uint8_t> out;
  out.reserve(kEthernetHeaderSize +
              (pkt.ip ? pkt.ip->total_len : pkt.payload.size()));
  out.insert(out.end(), pkt.eth.dst_mac.begin(), pkt.eth.dst_mac.end());
  out.insert(out.end(), pkt.eth.src_mac.begin(), pkt.eth.src_mac.end());
  put_u16(out, pkt.eth.ethertype);
  if (pkt.ip) {
    std::vector<uint8_t> hdr = header_bytes(pkt, 0);
    uint16_t sum = compute_checksum(hdr);
    hdr[10] = static_cast<uint8_t>(sum >> 8);
    hdr[11] = static_cast<uint8_t>(sum & 0xff);
    out.insert(out.end(), hdr.begin(), hdr.end());
  }
  out.insert(out.end(), pkt.payload.begin(), pkt.payload.end());
  return out;
}

uint16_t compute_checksum(std::span<const uint8_t> header_bytes) {
  uint32_t sum = 0;
  size_t i = 0;
  for (; i + 1 < header_bytes.size(); i += 2)
    sum += static_cast<uint32_t>(read_u16(header_bytes.data() + i));
  if (i < header_bytes.size())
    sum += static_cast<uint32_t>(header_bytes[i]) << 8;
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<uint16_t>(~sum & 0xffff);
}

uint16_t compute_header_checksum(const Packet& pkt) {
  if (!pkt.ip)
    throw WireError(WireError::Kind::InvariantViolation,
                    "non-ip packet has no header checksum");
  return compute_checksum(header_bytes(pkt, 0));
}

void refresh_checksum(Packet& pkt) {
  if (pkt.ip) pkt.ip->checksum = compute_header_checksum(pkt);
}

bool header_checksum_ok(const Packet& pkt) {
  if (!pkt.ip) return false;
  return pkt.ip->checksum == compute_header_checksum(pkt);
}

Packet attach_option(Packet pkt, const LampOption& opt) {
  if (pkt.lamp_option)
    throw WireError(WireError::Kind::OptionAlreadyPresent,
                    "packet already carries a lamp option");
  if (!pkt.ip)
    throw WireError(WireError::Kind::InvariantViolation,
                    "cannot attach an option to a non-ip packet");
  if (!pkt.foreign_options.empty() &&
      (pkt.foreign_options[0] == kOptEol || pkt.foreign_options[0] == kOptNop))
    throw WireError(WireError::Kind::InvariantViolation,
                    "foreign options begin with padding");
  size_t padded = option_padded_size(opt.kind);
  size_t new_ihl = pkt.ip->ihl + padded / 4;
  if (new_ihl > 15)
    throw WireError(WireError::Kind::HeaderOverflow, "ihl would exceed 15");
  pkt.lamp_option = opt;
  pkt.ip->ihl = static_cast<uint8_t>(new_ihl);
  pkt.ip->total_len = static_cast<uint16_t>(pkt.ip->total_len + padded);
  refresh_checksum(pkt);
  return pkt;
}

std::pair<Packet, LampOption> strip_option(Packet pkt) {
  if (!pkt.lamp_option)
    throw WireError(WireError::Kind::NoOption, "no lamp option to strip");
  LampOption opt = *pkt.lamp_option;
  size_t padded = option_padded_size(opt.kind);
  pkt.lamp_option.reset();
  pkt.ip->ihl = static_cast<uint8_t>(pkt.ip->ihl - padded / 4);
  pkt.ip->total_len = static_cast<uint16_t>(pkt.ip->total_len - padded);
  refresh_checksum(pkt);
  return {std::move(pkt), opt};
}

Packet make_ipv4_packet(const MacAddr& src_mac, const MacAddr& dst_mac,
                        uint32_t src_ip, uint32_t dst_ip,
                        std::vector<uint8_t> payload, uint8_t ttl,
                        uint8_t protocol) {
  Packet pkt;
  pkt.eth.src_mac = src_mac;
  pkt.eth.dst_mac = dst_mac;
  pkt.ip->ttl = ttl;
  pkt.ip->protocol = protocol;
  pkt.ip->src_addr = src_ip;
  pkt.ip->dst_addr = dst_ip;
  pkt.ip->total_len =
      static_cast<uint16_t>(kIpv4FixedHeaderSize + payload.size());
  pkt.payload = std::move(payload);
  refresh_checksum(pkt);
  return pkt;
}

std::string ipv4_to_string(uint32_t addr) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (addr >> 24) & 0xff,
                (addr >> 16) & 0xff, (addr >> 8) & 0xff, addr & 0xff);
  return buf;
}

std::optional<uint32_t> ipv4_from_string(const std::string& text) {
  unsigned a, b, c, d;
  char tail;
  if (std::sscanf(text.c_str(), "%u.%u.%u.%u%c", &a, &b, &c, &d, &tail) != 4)
    return std::nullopt;
  if (a > 255 || b > 255 || c > 255 || d > 255) return std::nullopt;
  return (a << 24) | (b << 16) | (c << 8) | d;
}

std::string mac_to_string(const MacAddr& mac) {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x", mac[0],
                mac[1], mac[2], mac[3], mac[4], mac[5]);
  return buf;
}

std::optional<MacAddr> mac_from_string(const std::string& text) {
  unsigned b[6];
  char tail;
  if (std::sscanf(text.c_str(), "%x:%x:%x:%x:%x:%x%c", &b[0], &b[1], &b[2],
                  &b[3], &b[4], &b[5], &tail) != 6)
    return std::nullopt;
  MacAddr mac;
  for (int i = 0; i < 6; ++i) {
    if (b[i] > 255) return std::nullopt;
    mac[i] = static_cast<uint8_t>(b[i]);
  }
  return mac;
}

}  // namespace lamp
