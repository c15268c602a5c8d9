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

#ifndef CAMPUSGATE_ACL_HPP_
#define CAMPUSGATE_ACL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "campusgate/ipv4.hpp"
#include "campusgate/sim_time.hpp"

namespace campusgate {

enum class Protocol { Tcp, Udp };

struct PacketMeta {
  Ipv4Addr src;
  Ipv4Addr dst;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  Protocol protocol = Protocol::Tcp;
  std::uint64_t size_bytes = 0;
  auto operator<=>(const PacketMeta&) const = default;
};

enum class Verdict { Forward, Block, CaptureToPortal };

inline bool is_web_port(std::uint16_t port) {
  return port == 80 || port == 8080;
}

/// Ports dropped unconditionally (worm/broadcast-prone file sharing family).
inline bool is_netbios_port(std::uint16_t port) {
  return port == 137 || port == 138 || port == 139 || port == 445;
}

/// One admin-authored allow/deny rule. Empty match fields are wildcards.
struct AclRule {
  int order = 0;
  std::optional<int> src_vlan;
  std::set<std::uint16_t> dst_port_set;  // empty = any port
  std::optional<Protocol> protocol;
  Verdict action = Verdict::Forward;
  auto operator<=>(const AclRule&) const = default;
};

class RuleError : public std::runtime_error {
 public:
  enum class Code { DuplicateOrder, Malformed };
  RuleError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Ordered rule list with unique order numbers, evaluated first-match.
class RuleSet {
 public:
  void add(const AclRule& rule);  // throws RuleError::DuplicateOrder
  const std::vector<AclRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

 private:
  std::vector<AclRule> rules_;  // kept sorted by order
};

/// Parses rules from a JSON array (the scenario file's "acl_rules" value).
RuleSet parse_rules_json(const std::string& json_text);

// Classification order:
//   1. netbios-family ports are dropped no matter what rules say,
//   2. user rules, first match wins,
//   3. web ports are captured (no session) or forwarded (session),
//   4. default deny.
Verdict classify(const RuleSet& rules, const PacketMeta& pkt,
                 bool has_session, std::optional<int> src_vlan = std::nullopt);

struct NatBinding {
  Ipv4Addr internal_addr;
  std::uint16_t internal_port = 0;
  Ipv4Addr external_addr;
  std::uint16_t external_port = 0;
  SimTime created_at{0};
  auto operator<=>(const NatBinding&) const = default;
};

class NatError : public std::runtime_error {
 public:
  enum class Code { PortRangeExhausted };
  NatError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

enum class NatDirection { Outbound, Inbound };

/// Port-translation table for permitted non-web flows. Bindings never
/// expire within a run; external ports are allocated lowest-free and are
/// unique among live bindings.
class NatTable {
 public:
  NatTable(Ipv4Addr external_address, std::uint16_t first_port,
           std::uint16_t last_port);

  /// Returns the existing binding for the internal tuple, or creates one
  /// with the lowest free external port.
  const NatBinding& allocate(Ipv4Addr internal_addr,
                             std::uint16_t internal_port, SimTime now);

  std::optional<NatBinding> find_internal(Ipv4Addr addr,
                                          std::uint16_t port) const;
  std::optional<NatBinding> find_external(std::uint16_t port) const;

  /// Outbound rewrites src to the external tuple; inbound rewrites dst
  /// back to the internal tuple. nullopt means drop (no binding).
  std::optional<PacketMeta> translate(NatDirection direction,
                                      const PacketMeta& pkt) const;

  std::size_t size() const { return by_internal_.size(); }

 private:
  Ipv4Addr external_addr_;
  std::uint16_t first_port_;
  std::uint16_t last_port_;
  std::map<std::pair<std::uint32_t, std::uint16_t>, NatBinding> by_internal_;
  std::map<std::uint16_t, std::pair<std::uint32_t, std::uint16_t>>
      by_external_;
};

}  // namespace campusgate

#endif  // CAMPUSGATE_ACL_HPP_
