// Copyright 2026 The Campusgate Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "campusgate/acl.hpp"

#include <algorithm>

#include <json.hpp>

namespace campusgate {

namespace {

using nlohmann::json;

bool rule_matches(const AclRule& rule, const PacketMeta& pkt,
                  std::optional<int> src_vlan) {
  if (rule.src_vlan && (!src_vlan || *rule.src_vlan != *src_vlan)) {
    return false;
  }
  if (!rule.dst_port_set.empty() && !rule.dst_port_set.contains(pkt.dst_port)) {
    return false;
  }
  if (rule.protocol && *rule.protocol != pkt.protocol) {
    return false;
  }
  return true;
}

}  // namespace

void RuleSet::add(const AclRule& rule) {
  auto pos = std::lower_bound(
      rules_.begin(), rules_.end(), rule,
      [](const AclRule& a, const AclRule& b) { return a.order < b.order; });
  if (pos != rules_.end() && pos->order == rule.order) {
    throw RuleError(RuleError::Code::DuplicateOrder,
                    "duplicate rule order " + std::to_string(rule.order));
  }
  rules_.insert(pos, rule);
}

RuleSet parse_rules_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw RuleError(RuleError::Code::Malformed, e.what());
  }
  if (!doc.is_array()) {
    throw RuleError(RuleError::Code::Malformed, "acl rules must be an array");
  }
  RuleSet rules;
  for (const json& jr : doc) {
    AclRule rule;
    try {
      rule.order = jr.at("order").get<int>();
      if (jr.contains("src_vlan")) rule.src_vlan = jr.at("src_vlan").get<int>();
      for (const json& port : jr.value("dst_port_set", json::array())) {
        rule.dst_port_set.insert(port.get<std::uint16_t>());
      }
      if (jr.contains("protocol")) {
        const std::string name = jr.at("protocol").get<std::string>();
        rule.protocol = name == "udp" ? Protocol::Udp : Protocol::Tcp;
      }
      const std::string action = jr.at("action").get<std::string>();
      if (action == "forward") {
        rule.action = Verdict::Forward;
      } else if (action == "block") {
        rule.action = Verdict::Block;
      } else if (action == "capture") {
        rule.action = Verdict::CaptureToPortal;
      } else {
        throw RuleError(RuleError::Code::Malformed,
                        "unknown rule action: " + action);
      }
    } catch (const json::exception& e) {
      throw RuleError(RuleError::Code::Malformed, e.what());
    }
    rules.add(rule);
  }
  return rules;
}

Verdict classify(const RuleSet& rules, const PacketMeta& pkt, bool has_session,
                 std::optional<int> src_vlan) {
  if (is_netbios_port(pkt.dst_port)) {
    return Verdict::Block;
  }
  for (const AclRule& rule : rules.rules()) {
    if (rule_matches(rule, pkt, src_vlan)) {
      return rule.action;
    }
  }
  if (is_web_port(pkt.dst_port)) {
    return has_session ? Verdict::Forward : Verdict::CaptureToPortal;
  }
  return Verdict::Block;
}

NatTable::NatTable(Ipv4Addr external_address, std::uint16_t first_port,
                   std::uint16_t last_port)
    : external_addr_(external_address),
      first_port_(first_port),
      last_port_(last_port) {}

const NatBinding& NatTable::allocate(Ipv4Addr internal_addr,
                                     std::uint16_t internal_port,
                                     SimTime now) {
  const auto key = std::make_pair(internal_addr.value, internal_port);
  if (auto it = by_internal_.find(key); it != by_internal_.end()) {
    return it->second;
  }
  for (std::uint32_t port = first_port_; port <= last_port_; ++port) {
    const auto external_port = static_cast<std::uint16_t>(port);
    if (by_external_.contains(external_port)) continue;
    NatBinding binding{internal_addr, internal_port, external_addr_,
                       external_port, now};
    auto [it, inserted] = by_internal_.emplace(key, binding);
    by_external_.emplace(external_port, key);
    return it->second;
  }
  throw NatError(NatError::Code::PortRangeExhausted,
                 "no free external port in range");
}

std::optional<NatBinding> NatTable::find_internal(Ipv4Addr addr,
                                                  std::uint16_t port) const {
  auto it = by_internal_.find(std::make_pair(addr.value, port));
  if (it == by_internal_.end()) return std::nullopt;
  return it->second;
}

std::optional<NatBinding> NatTable::find_external(std::uint16_t port) const {
  auto it = by_external_.find(port);
  if (it == by_external_.end()) return std::nullopt;
  return by_internal_.at(it->second);
}

std::optional<PacketMeta> NatTable::translate(NatDirection direction,
                                              const PacketMeta& pkt) const {
  if (direction == NatDirection::Outbound) {
    auto binding = find_internal(pkt.src, pkt.src_port);
    if (!binding) return std::nullopt;
    PacketMeta out = pkt;
    out.src = binding->external_addr;
    out.src_port = binding->external_port;
    return out;
  }
  auto binding = find_external(pkt.dst_port);
  if (!binding || binding->external_addr != pkt.dst) return std::nullopt;
  PacketMeta in = pkt;
  in.dst = binding->internal_addr;
  in.dst_port = binding->internal_port;
  return in;
}

}  // namespace campusgate
