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

#include <doctest.h>

#include <random>

using namespace campusgate;

namespace {

PacketMeta packet(std::uint16_t dst_port, Protocol proto = Protocol::Tcp) {
  PacketMeta pkt;
  pkt.src = *Ipv4Addr::parse("192.168.2.10");
  pkt.dst = *Ipv4Addr::parse("203.0.113.10");
  pkt.src_port = 40000;
  pkt.dst_port = dst_port;
  pkt.protocol = proto;
  pkt.size_bytes = 300;
  return pkt;
}

}  // namespace

TEST_CASE("web traffic without a session is captured") {
  RuleSet rules;
  CHECK(classify(rules, packet(80), false) == Verdict::CaptureToPortal);
  CHECK(classify(rules, packet(8080), false) == Verdict::CaptureToPortal);
}

TEST_CASE("web traffic with a session is forwarded") {
  RuleSet rules;
  CHECK(classify(rules, packet(80), true) == Verdict::Forward);
  CHECK(classify(rules, packet(8080), true) == Verdict::Forward);
}

TEST_CASE("file-sharing ports are blocked even when a rule allows them") {
  RuleSet rules;
  AclRule allow;
  allow.order = 1;
  allow.dst_port_set = {137, 138, 139, 445};
  allow.action = Verdict::Forward;
  rules.add(allow);
  for (std::uint16_t port : {137, 138, 139, 445}) {
    CAPTURE(port);
    CHECK(classify(rules, packet(port, Protocol::Udp), true) == Verdict::Block);
    CHECK(classify(rules, packet(port, Protocol::Tcp), true) == Verdict::Block);
  }
}

TEST_CASE("unmatched ports fall through to default deny") {
  RuleSet rules;
  CHECK(classify(rules, packet(12345), true) == Verdict::Block);
  CHECK(classify(rules, packet(22), false) == Verdict::Block);
}

TEST_CASE("an allow rule forwards matching traffic") {
  RuleSet rules;
  AclRule ssh;
  ssh.order = 10;
  ssh.dst_port_set = {22};
  ssh.protocol = Protocol::Tcp;
  ssh.action = Verdict::Forward;
  rules.add(ssh);
  CHECK(classify(rules, packet(22), false) == Verdict::Forward);
  // Protocol must match too.
  CHECK(classify(rules, packet(22, Protocol::Udp), false) == Verdict::Block);
}

TEST_CASE("rules match on source VLAN when one is given") {
  RuleSet rules;
  AclRule lab_only;
  lab_only.order = 10;
  lab_only.src_vlan = 3;
  lab_only.dst_port_set = {22};
  lab_only.action = Verdict::Forward;
  rules.add(lab_only);
  CHECK(classify(rules, packet(22), false, 3) == Verdict::Forward);
  CHECK(classify(rules, packet(22), false, 2) == Verdict::Block);
  // Packet with no VLAN attribution cannot match a VLAN-scoped rule.
  CHECK(classify(rules, packet(22), false, std::nullopt) == Verdict::Block);
}

TEST_CASE("first match wins: a low-order block shadows a later allow") {
  RuleSet rules;
  AclRule deny;
  deny.order = 5;
  deny.dst_port_set = {22};
  deny.action = Verdict::Block;
  AclRule allow;
  allow.order = 10;
  allow.dst_port_set = {22};
  allow.action = Verdict::Forward;
  // Insert in reverse order to prove evaluation follows order numbers,
  // not insertion order.
  rules.add(allow);
  rules.add(deny);
  CHECK(classify(rules, packet(22), true) == Verdict::Block);
}

TEST_CASE("user rules outrank the built-in web handling") {
  RuleSet rules;
  AclRule deny_web;
  deny_web.order = 1;
  deny_web.dst_port_set = {80};
  deny_web.action = Verdict::Block;
  rules.add(deny_web);
  CHECK(classify(rules, packet(80), true) == Verdict::Block);
  CHECK(classify(rules, packet(80), false) == Verdict::Block);
  // Port 8080 is untouched by the rule and keeps the built-in behavior.
  CHECK(classify(rules, packet(8080), false) == Verdict::CaptureToPortal);
}

TEST_CASE("duplicate order numbers are rejected") {
  RuleSet rules;
  AclRule a;
  a.order = 10;
  a.action = Verdict::Forward;
  rules.add(a);
  AclRule b;
  b.order = 10;
  b.action = Verdict::Block;
  try {
    rules.add(b);
    FAIL("expected RuleError");
  } catch (const RuleError& e) {
    CHECK(e.code() == RuleError::Code::DuplicateOrder);
  }
}

TEST_CASE("rules parse from JSON") {
  RuleSet rules = parse_rules_json(R"([
    {"order": 10, "dst_port_set": [22], "protocol": "tcp", "action": "forward"},
    {"order": 20, "src_vlan": 3, "action": "block"}
  ])");
  REQUIRE(rules.rules().size() == 2);
  CHECK(rules.rules()[0].order == 10);
  CHECK(rules.rules()[0].dst_port_set == std::set<std::uint16_t>{22});
  CHECK(rules.rules()[0].protocol == Protocol::Tcp);
  CHECK(rules.rules()[0].action == Verdict::Forward);
  CHECK(rules.rules()[1].src_vlan == 3);
  CHECK(rules.rules()[1].dst_port_set.empty());
  CHECK(rules.rules()[1].action == Verdict::Block);
  CHECK_THROWS_AS(parse_rules_json("{not json"), RuleError);
}

TEST_CASE("with no rules, only web ports ever leave the gateway") {
  RuleSet rules;
  std::mt19937 rng(11);
  for (int i = 0; i < 2000; ++i) {
    PacketMeta pkt = packet(static_cast<std::uint16_t>(rng() % 65536),
                            rng() % 2 ? Protocol::Tcp : Protocol::Udp);
    const bool session = rng() % 2 == 0;
    const Verdict verdict = classify(rules, pkt, session);
    if (is_netbios_port(pkt.dst_port)) {
      CHECK(verdict == Verdict::Block);
    } else if (is_web_port(pkt.dst_port)) {
      CHECK(verdict == (session ? Verdict::Forward : Verdict::CaptureToPortal));
    } else {
      CHECK(verdict == Verdict::Block);
    }
  }
}

TEST_CASE("NAT allocates the lowest free port and is idempotent") {
  NatTable nat(*Ipv4Addr::parse("198.51.100.1"), 20000, 29999);
  const Ipv4Addr host = *Ipv4Addr::parse("192.168.2.10");
  const NatBinding& first = nat.allocate(host, 5000, SimTime{0});
  CHECK(first.external_port == 20000);
  CHECK(first.external_addr.to_string() == "198.51.100.1");
  const NatBinding& again = nat.allocate(host, 5000, SimTime{1000});
  CHECK(again.external_port == 20000);
  CHECK(nat.size() == 1);
  const NatBinding& second = nat.allocate(host, 5001, SimTime{0});
  CHECK(second.external_port == 20001);
  CHECK(nat.size() == 2);
}

TEST_CASE("NAT lookups find bindings from both sides") {
  NatTable nat(*Ipv4Addr::parse("198.51.100.1"), 20000, 29999);
  const Ipv4Addr host = *Ipv4Addr::parse("192.168.2.10");
  nat.allocate(host, 5000, SimTime{0});
  CHECK(nat.find_internal(host, 5000)->external_port == 20000);
  CHECK(nat.find_external(20000)->internal_port == 5000);
  CHECK_FALSE(nat.find_internal(host, 9999).has_value());
  CHECK_FALSE(nat.find_external(20001).has_value());
}

TEST_CASE("a one-port range exhausts on the second distinct flow") {
  NatTable nat(*Ipv4Addr::parse("198.51.100.1"), 20000, 20000);
  const Ipv4Addr host = *Ipv4Addr::parse("192.168.2.10");
  nat.allocate(host, 5000, SimTime{0});
  try {
    nat.allocate(host, 5001, SimTime{0});
    FAIL("expected NatError");
  } catch (const NatError& e) {
    CHECK(e.code() == NatError::Code::PortRangeExhausted);
  }
}

TEST_CASE("translation rewrites outbound source and inbound destination") {
  NatTable nat(*Ipv4Addr::parse("198.51.100.1"), 20000, 29999);
  const Ipv4Addr host = *Ipv4Addr::parse("192.168.2.10");
  nat.allocate(host, 5000, SimTime{0});

  PacketMeta out;
  out.src = host;
  out.src_port = 5000;
  out.dst = *Ipv4Addr::parse("203.0.113.10");
  out.dst_port = 22;
  auto rewritten = nat.translate(NatDirection::Outbound, out);
  REQUIRE(rewritten.has_value());
  CHECK(rewritten->src.to_string() == "198.51.100.1");
  CHECK(rewritten->src_port == 20000);
  CHECK(rewritten->dst == out.dst);
  CHECK(rewritten->dst_port == 22);

  PacketMeta back;
  back.src = out.dst;
  back.src_port = 22;
  back.dst = *Ipv4Addr::parse("198.51.100.1");
  back.dst_port = 20000;
  auto restored = nat.translate(NatDirection::Inbound, back);
  REQUIRE(restored.has_value());
  CHECK(restored->dst == host);
  CHECK(restored->dst_port == 5000);
}

TEST_CASE("unsolicited inbound packets have no binding and are dropped") {
  NatTable nat(*Ipv4Addr::parse("198.51.100.1"), 20000, 29999);
  PacketMeta stray;
  stray.src = *Ipv4Addr::parse("203.0.113.10");
  stray.src_port = 22;
  stray.dst = *Ipv4Addr::parse("198.51.100.1");
  stray.dst_port = 20077;
  CHECK_FALSE(nat.translate(NatDirection::Inbound, stray).has_value());
  PacketMeta unbound;
  unbound.src = *Ipv4Addr::parse("192.168.2.10");
  unbound.src_port = 6000;
  CHECK_FALSE(nat.translate(NatDirection::Outbound, unbound).has_value());
}

TEST_CASE("out-then-in round-trip restores the original tuple") {
  NatTable nat(*Ipv4Addr::parse("198.51.100.1"), 20000, 29999);
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    PacketMeta out;
    out.src = Ipv4Addr{0xC0A80200u + 10 + static_cast<std::uint32_t>(rng() % 100)};
    out.src_port = static_cast<std::uint16_t>(1024 + rng() % 50000);
    out.dst = *Ipv4Addr::parse("203.0.113.10");
    out.dst_port = 22;
    nat.allocate(out.src, out.src_port, SimTime{0});
    auto outer = nat.translate(NatDirection::Outbound, out);
    REQUIRE(outer.has_value());
    PacketMeta reply;
    reply.src = out.dst;
    reply.src_port = out.dst_port;
    reply.dst = outer->src;
    reply.dst_port = outer->src_port;
    auto inner = nat.translate(NatDirection::Inbound, reply);
    REQUIRE(inner.has_value());
    CHECK(inner->dst == out.src);
    CHECK(inner->dst_port == out.src_port);
  }
}
