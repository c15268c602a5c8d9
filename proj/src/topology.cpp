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

#include "campusgate/topology.hpp"

#include <algorithm>

#include <json.hpp>

namespace campusgate {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& why) {
  throw ConfigError(ConfigError::Code::Malformed, why);
}

std::string kind_name(UplinkKind kind) {
  return kind == UplinkKind::BroadbandAdsl ? "broadband_adsl"
                                           : "dedicated_wireless";
}

UplinkKind parse_kind(const std::string& name) {
  if (name == "broadband_adsl") return UplinkKind::BroadbandAdsl;
  if (name == "dedicated_wireless") return UplinkKind::DedicatedWireless;
  malformed("unknown uplink kind: " + name);
}

std::string mode_name(ProxyMode mode) {
  switch (mode) {
    case ProxyMode::Sibling:
      return "sibling";
    case ProxyMode::Child:
      return "child";
    case ProxyMode::Parent:
      return "parent";
  }
  return "sibling";
}

ProxyMode parse_mode(const std::string& name) {
  if (name == "sibling") return ProxyMode::Sibling;
  if (name == "child") return ProxyMode::Child;
  if (name == "parent") return ProxyMode::Parent;
  malformed("unknown proxy mode: " + name);
}

Ipv4Prefix parse_prefix_or_throw(const std::string& text) {
  auto prefix = Ipv4Prefix::parse(text);
  if (!prefix) malformed("bad subnet: " + text);
  return *prefix;
}

}  // namespace

const Vlan* Topology::find_vlan(int id) const {
  for (const Vlan& v : vlans) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

const Host* Topology::find_host(const std::string& id) const {
  for (const Host& h : hosts) {
    if (h.id == id) return &h;
  }
  return nullptr;
}

const Uplink* Topology::find_uplink(const std::string& id) const {
  for (const Uplink& u : uplinks) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

const ProxyNode* Topology::find_proxy(const std::string& id) const {
  for (const ProxyNode& p : proxies) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const Vlan& Topology::management_vlan() const {
  for (const Vlan& v : vlans) {
    if (v.management) return v;
  }
  throw ConfigError(ConfigError::Code::MissingManagementVlan,
                    "no VLAN is marked management");
}

void validate_topology(const Topology& topo) {
  if (topo.vlans.empty()) malformed("at least one VLAN is required");
  for (std::size_t i = 0; i < topo.vlans.size(); ++i) {
    const Vlan& v = topo.vlans[i];
    if (v.dhcp_pool.first < 1 || v.dhcp_pool.last < v.dhcp_pool.first ||
        v.dhcp_pool.last > v.subnet.host_count()) {
      malformed("VLAN " + std::to_string(v.id) + " has a bad dhcp_pool");
    }
    for (std::size_t j = i + 1; j < topo.vlans.size(); ++j) {
      if (topo.vlans[j].id == v.id) {
        throw ConfigError(ConfigError::Code::DuplicateVlanId,
                          "duplicate VLAN id " + std::to_string(v.id));
      }
      if (topo.vlans[j].subnet.overlaps(v.subnet)) {
        throw ConfigError(
            ConfigError::Code::OverlappingSubnets,
            "subnets of VLANs " + std::to_string(v.id) + " and " +
                std::to_string(topo.vlans[j].id) + " overlap");
      }
    }
  }
  bool has_management = false;
  for (const Vlan& v : topo.vlans) has_management |= v.management;
  if (!has_management) {
    throw ConfigError(ConfigError::Code::MissingManagementVlan,
                      "no VLAN is marked management");
  }

  std::set<std::string> host_ids;
  for (const Host& h : topo.hosts) {
    if (!host_ids.insert(h.id).second) {
      malformed("duplicate host id " + h.id);
    }
    const Vlan* v = topo.find_vlan(h.vlan);
    if (v == nullptr) {
      throw ConfigError(ConfigError::Code::DanglingReference,
                        "host " + h.id + " references unknown VLAN " +
                            std::to_string(h.vlan));
    }
    if (h.address && !v->subnet.contains(*h.address)) {
      malformed("host " + h.id + " address outside its VLAN subnet");
    }
  }

  std::set<std::string> uplink_ids;
  for (const Uplink& u : topo.uplinks) {
    if (!uplink_ids.insert(u.id).second) {
      malformed("duplicate uplink id " + u.id);
    }
    if (u.nominal_kbps <= 0) malformed("uplink " + u.id + " needs bandwidth");
    if (u.contention < 1) malformed("uplink " + u.id + " bad contention");
  }

  std::set<std::string> proxy_ids;
  for (const ProxyNode& p : topo.proxies) {
    if (!proxy_ids.insert(p.id).second) {
      malformed("duplicate proxy id " + p.id);
    }
    if (topo.find_uplink(p.uplink) == nullptr) {
      throw ConfigError(ConfigError::Code::DanglingReference,
                        "proxy " + p.id + " references unknown uplink " +
                            p.uplink);
    }
  }
}

Topology load_topology(const std::string& config_text) {
  json doc;
  try {
    doc = json::parse(config_text);
  } catch (const json::parse_error& e) {
    malformed(std::string("bad JSON: ") + e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");

  Topology topo;
  try {
    for (const json& jv : doc.value("vlans", json::array())) {
      Vlan v;
      v.id = jv.at("id").get<int>();
      v.subnet = parse_prefix_or_throw(jv.at("subnet").get<std::string>());
      v.management = jv.value("management", false);
      if (jv.contains("dhcp_pool")) {
        const json& pool = jv.at("dhcp_pool");
        v.dhcp_pool.first = pool.at(0).get<std::uint32_t>();
        v.dhcp_pool.last = pool.at(1).get<std::uint32_t>();
      }
      topo.vlans.push_back(v);
    }
    for (const json& jh : doc.value("hosts", json::array())) {
      Host h;
      h.id = jh.at("id").get<std::string>();
      h.vlan = jh.at("vlan").get<int>();
      if (jh.contains("address")) {
        auto addr = Ipv4Addr::parse(jh.at("address").get<std::string>());
        if (!addr) malformed("bad host address for " + h.id);
        h.address = *addr;
      }
      topo.hosts.push_back(h);
    }
    for (const json& ju : doc.value("uplinks", json::array())) {
      Uplink u;
      u.id = ju.at("id").get<std::string>();
      u.kind = parse_kind(ju.at("kind").get<std::string>());
      u.nominal_kbps = ju.at("nominal_kbps").get<int>();
      u.contention = ju.value("contention", 1);
      topo.uplinks.push_back(u);
    }
    for (const json& jp : doc.value("proxies", json::array())) {
      ProxyNode p;
      p.id = jp.at("id").get<std::string>();
      p.uplink = jp.at("uplink").get<std::string>();
      p.mode = parse_mode(jp.value("mode", std::string("sibling")));
      if (jp.contains("capacity_entries") &&
          !jp.at("capacity_entries").is_string()) {
        p.capacity_entries = jp.at("capacity_entries").get<std::size_t>();
      }
      topo.proxies.push_back(p);
    }
  } catch (const json::exception& e) {
    malformed(std::string("bad topology field: ") + e.what());
  }

  validate_topology(topo);
  return topo;
}

std::string serialize_topology(const Topology& topo) {
  json doc;
  doc["vlans"] = json::array();
  for (const Vlan& v : topo.vlans) {
    json jv;
    jv["id"] = v.id;
    jv["subnet"] = v.subnet.to_string();
    jv["management"] = v.management;
    jv["dhcp_pool"] = {v.dhcp_pool.first, v.dhcp_pool.last};
    doc["vlans"].push_back(jv);
  }
  doc["hosts"] = json::array();
  for (const Host& h : topo.hosts) {
    json jh;
    jh["id"] = h.id;
    jh["vlan"] = h.vlan;
    if (h.address) jh["address"] = h.address->to_string();
    doc["hosts"].push_back(jh);
  }
  doc["uplinks"] = json::array();
  for (const Uplink& u : topo.uplinks) {
    json ju;
    ju["id"] = u.id;
    ju["kind"] = kind_name(u.kind);
    ju["nominal_kbps"] = u.nominal_kbps;
    ju["contention"] = u.contention;
    doc["uplinks"].push_back(ju);
  }
  doc["proxies"] = json::array();
  for (const ProxyNode& p : topo.proxies) {
    json jp;
    jp["id"] = p.id;
    jp["uplink"] = p.uplink;
    jp["mode"] = mode_name(p.mode);
    if (p.capacity_entries) {
      jp["capacity_entries"] = *p.capacity_entries;
    } else {
      jp["capacity_entries"] = "infinite";
    }
    doc["proxies"].push_back(jp);
  }
  return doc.dump(2) + "\n";
}

std::optional<int> vlan_of(const Topology& topo, Ipv4Addr address) {
  for (const Vlan& v : topo.vlans) {
    if (v.subnet.contains(address)) return v.id;
  }
  return std::nullopt;
}

AddressAllocator::AddressAllocator(const Topology& topo) : topo_(topo) {
  for (const Vlan& v : topo.vlans) {
    vlans_.emplace(v.id, VlanState{v.subnet, v.dhcp_pool, {}});
  }
  for (const Host& h : topo.hosts) {
    if (!h.address) continue;
    by_host_.emplace(h.id, *h.address);
    auto it = vlans_.find(h.vlan);
    if (it != vlans_.end() && it->second.subnet.contains(*h.address)) {
      it->second.allocated.insert(h.address->value -
                                  it->second.subnet.network().value);
    }
  }
}

Ipv4Addr AddressAllocator::assign(int vlan_id, const std::string& host_id) {
  if (by_host_.contains(host_id)) {
    throw AssignError(AssignError::Code::AlreadyAssigned,
                      "host " + host_id + " already holds an address");
  }
  auto it = vlans_.find(vlan_id);
  if (it == vlans_.end()) {
    throw AssignError(AssignError::Code::UnknownVlan,
                      "unknown VLAN " + std::to_string(vlan_id));
  }
  VlanState& state = it->second;
  for (std::uint32_t n = state.pool.first; n <= state.pool.last; ++n) {
    if (state.allocated.contains(n)) continue;
    state.allocated.insert(n);
    Ipv4Addr addr = state.subnet.host(n);
    by_host_.emplace(host_id, addr);
    return addr;
  }
  throw AssignError(AssignError::Code::PoolExhausted,
                    "dhcp pool of VLAN " + std::to_string(vlan_id) +
                        " is exhausted");
}

std::optional<Ipv4Addr> AddressAllocator::address_of(
    const std::string& host_id) const {
  auto it = by_host_.find(host_id);
  if (it == by_host_.end()) return std::nullopt;
  return it->second;
}

std::size_t AddressAllocator::allocated_count(int vlan_id) const {
  auto it = vlans_.find(vlan_id);
  return it == vlans_.end() ? 0 : it->second.allocated.size();
}

}  // namespace campusgate
