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

#ifndef CAMPUSGATE_TOPOLOGY_HPP_
#define CAMPUSGATE_TOPOLOGY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "campusgate/ipv4.hpp"

namespace campusgate {

/// Inclusive range of host numbers within a VLAN subnet that the DHCP
/// allocator may hand out. Host .1 is reserved for the gateway and must
/// not be part of the pool.
struct DhcpPool {
  std::uint32_t first = 10;
  std::uint32_t last = 250;
  auto operator<=>(const DhcpPool&) const = default;
};

struct Vlan {
  int id = 0;
  Ipv4Prefix subnet;
  bool management = false;
  DhcpPool dhcp_pool;
  auto operator<=>(const Vlan&) const = default;
};

struct Host {
  std::string id;
  int vlan = 0;
  std::optional<Ipv4Addr> address;  // unset until assigned
  auto operator<=>(const Host&) const = default;
};

enum class UplinkKind { BroadbandAdsl, DedicatedWireless };

struct Uplink {
  std::string id;
  UplinkKind kind = UplinkKind::BroadbandAdsl;
  int nominal_kbps = 0;
  int contention = 1;  // 1 means dedicated 1:1
  auto operator<=>(const Uplink&) const = default;
};

enum class ProxyMode { Sibling, Child, Parent };

/// Placement of one caching proxy: which uplink it fronts, how it
/// cooperates with its peers, and how many cache entries it may hold
/// (nullopt = unbounded).
struct ProxyNode {
  std::string id;
  std::string uplink;
  ProxyMode mode = ProxyMode::Sibling;
  std::optional<std::size_t> capacity_entries;
  auto operator<=>(const ProxyNode&) const = default;
};

/// The simulated campus: VLAN segments, end hosts, caching proxies and
/// the uplinks they front. Immutable once validated; mutable DHCP state
/// lives in AddressAllocator.
struct Topology {
  std::vector<Vlan> vlans;
  std::vector<Host> hosts;
  std::vector<ProxyNode> proxies;
  std::vector<Uplink> uplinks;

  const Vlan* find_vlan(int id) const;
  const Host* find_host(const std::string& id) const;
  const Uplink* find_uplink(const std::string& id) const;
  const ProxyNode* find_proxy(const std::string& id) const;
  const Vlan& management_vlan() const;

  bool operator==(const Topology&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  enum class Code {
    DuplicateVlanId,
    OverlappingSubnets,
    DanglingReference,
    MissingManagementVlan,
    Malformed,
  };
  ConfigError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Checks every structural invariant; throws ConfigError on the first
/// violation found.
void validate_topology(const Topology& topo);

/// Parses and validates a topology from the JSON scenario schema
/// (top-level keys: vlans, hosts, proxies, uplinks).
Topology load_topology(const std::string& config_text);

/// Canonical JSON form; load_topology(serialize_topology(t)) == t.
std::string serialize_topology(const Topology& topo);

/// Id of the unique VLAN whose subnet contains the address, if any.
std::optional<int> vlan_of(const Topology& topo, Ipv4Addr address);

class AssignError : public std::runtime_error {
 public:
  enum class Code { PoolExhausted, UnknownVlan, AlreadyAssigned };
  AssignError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Mutable DHCP state for one run. Leases are permanent for the lifetime
/// of the allocator; assignment is lowest-free, so a given call sequence
/// always produces the same addresses. Hosts that come pre-addressed in
/// the topology are seeded as already allocated.
class AddressAllocator {
 public:
  explicit AddressAllocator(const Topology& topo);

  /// Assigns the lowest unallocated pool address of the VLAN to the host.
  Ipv4Addr assign(int vlan_id, const std::string& host_id);

  std::optional<Ipv4Addr> address_of(const std::string& host_id) const;
  std::size_t allocated_count(int vlan_id) const;

 private:
  struct VlanState {
    Ipv4Prefix subnet;
    DhcpPool pool;
    std::set<std::uint32_t> allocated;  // host numbers
  };
  const Topology& topo_;
  std::map<int, VlanState> vlans_;
  std::map<std::string, Ipv4Addr> by_host_;
};

}  // namespace campusgate

#endif  // CAMPUSGATE_TOPOLOGY_HPP_
