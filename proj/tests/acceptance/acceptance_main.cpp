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

// End-to-end acceptance gate. Each criterion is exercised independently,
// prints exactly one PASS/FAIL line, and where a wall-clock budget applies
// the run must finish inside it. The process exits nonzero if any
// criterion fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "campusgate/acl.hpp"
#include "campusgate/balancer.hpp"
#include "campusgate/icp.hpp"
#include "campusgate/ipv4.hpp"
#include "campusgate/planner.hpp"
#include "campusgate/portal.hpp"
#include "campusgate/proxy_cache.hpp"
#include "campusgate/sim.hpp"
#include "campusgate/topology.hpp"
#include "campusgate/workload.hpp"

namespace {

using namespace campusgate;
namespace fs = std::filesystem;
using std::chrono::milliseconds;
using std::chrono::seconds;

struct CheckFailure : std::runtime_error {
  explicit CheckFailure(const std::string& what) : std::runtime_error(what) {}
};

void require(bool condition, const std::string& message) {
  if (!condition) throw CheckFailure(message);
}

fs::path source_dir() { return fs::path(CAMPUSGATE_SOURCE_DIR); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Ipv4Addr addr(const std::string& text) {
  auto parsed = Ipv4Addr::parse(text);
  require(parsed.has_value(), "bad address literal " + text);
  return *parsed;
}

// ---------------------------------------------------------------------------
// 1. Idle sign-off boundary: a session idle 601 s is closed with
//    IdleTimeout; a session idle exactly 600 s stays active.

void criterion_idle_signoff() {
  InMemoryCredentials creds;
  creds.add_user("alice", "wonder");
  creds.add_user("bob", "builder");

  SessionTable sessions;
  sessions.authenticate(creds, "alice", "wonder", addr("192.168.2.10"),
                        SimTime{0});
  sessions.authenticate(creds, "bob", "builder", addr("192.168.2.11"),
                        SimTime{0});
  Session* bob = sessions.active_by_user("bob");
  require(bob != nullptr, "bob must be active after login");
  account(*bob, 100, 2048, SimTime{seconds(1)});  // last activity at t = 1 s

  // At t = 601 s alice has been idle 601 s, bob exactly 600 s.
  auto closed = sessions.expire_idle(SimTime{seconds(601)});
  require(closed.size() == 1, "exactly one session must expire, got " +
                                  std::to_string(closed.size()));
  require(closed[0].user == "alice", "the 601 s idle session must close");
  require(closed[0].close_reason == CloseReason::IdleTimeout,
          "close reason must be idle timeout");
  require(sessions.active_by_user("alice") == nullptr,
          "alice must no longer be active");
  require(sessions.active_by_user("bob") != nullptr,
          "a session idle exactly 600 s must stay active");
  require(sessions.active_by_user("bob")->active, "bob must remain active");
}

// ---------------------------------------------------------------------------
// 2. Capture rule fuzz: with no sessions and no admin rules, every
//    web-port packet redirects to the login page and every other packet
//    is dropped by default-deny.

void criterion_capture_fuzz() {
  SessionTable sessions;  // nobody signed on
  RuleSet rules;          // empty admin rule list
  const std::string login_url = "http://gateway.campus/login";

  std::mt19937_64 rng(20260825);
  int web_packets = 0;
  int other_packets = 0;
  for (int i = 0; i < 10000; ++i) {
    PacketMeta pkt;
    pkt.src = Ipv4Addr{0xC0A80200u + static_cast<std::uint32_t>(rng() % 250)};
    pkt.dst = Ipv4Addr{static_cast<std::uint32_t>(rng())};
    pkt.src_port = static_cast<std::uint16_t>(1024 + rng() % 60000);
    switch (rng() % 4) {
      case 0: pkt.dst_port = 80; break;
      case 1: pkt.dst_port = 8080; break;
      default: pkt.dst_port = static_cast<std::uint16_t>(rng() % 65536);
    }
    pkt.protocol = (rng() % 2 == 0) ? Protocol::Tcp : Protocol::Udp;
    pkt.size_bytes = rng() % 4096;

    PortalAction action = intercept(pkt, sessions, rules, login_url);
    if (is_web_port(pkt.dst_port)) {
      ++web_packets;
      require(action.kind == PortalAction::Kind::RedirectToLogin,
              "unauthenticated web packet must redirect (port " +
                  std::to_string(pkt.dst_port) + ")");
      require(action.login_url == login_url, "redirect must carry login URL");
    } else {
      ++other_packets;
      require(action.kind == PortalAction::Kind::PassVerdict,
              "non-web packet must fall through to the access list");
      require(action.verdict == Verdict::Block,
              "default-deny must block port " + std::to_string(pkt.dst_port));
    }
  }
  require(web_packets > 1000 && other_packets > 1000,
          "fuzz must cover both packet classes");
}

// ---------------------------------------------------------------------------
// 3. Wire codec: 10,000 random messages survive encode/decode untouched,
//    and the three golden frames match an independently assembled
//    field-layout oracle.

void push8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }
void push16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}
void push32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

// Assembles a frame from first principles: opcode(1) version(1)
// length(2, big-endian, counts the whole frame) request-number(4)
// options(4) option-data(4) sender(4) [requester(4) for queries]
// url-bytes NUL.
std::vector<std::uint8_t> layout_oracle(const icp::Message& m) {
  std::vector<std::uint8_t> out;
  const bool is_query = m.opcode == icp::Opcode::Query;
  const std::size_t total =
      20 + (is_query ? 4 : 0) + m.url.size() + 1;
  push8(out, static_cast<std::uint8_t>(m.opcode));
  push8(out, 2);
  push16(out, static_cast<std::uint16_t>(total));
  push32(out, m.request_number);
  push32(out, m.options);
  push32(out, m.option_data);
  push32(out, m.sender.value);
  if (is_query) push32(out, m.requester.value);
  for (char c : m.url) out.push_back(static_cast<std::uint8_t>(c));
  push8(out, 0);
  return out;
}

void criterion_icp_codec() {
  using icp::Message;
  using icp::Opcode;

  const std::string url = "http://example.com/";

  Message query;
  query.opcode = Opcode::Query;
  query.request_number = 1;
  query.sender = addr("192.168.1.2");
  query.requester = addr("192.168.2.10");
  query.url = url;

  Message hit;
  hit.opcode = Opcode::Hit;
  hit.request_number = 1;
  hit.sender = addr("192.168.1.3");
  hit.url = url;

  Message miss;
  miss.opcode = Opcode::Miss;
  miss.request_number = 7;
  miss.sender = addr("192.168.1.4");
  miss.url = url;

  const std::vector<std::pair<std::string, Message>> goldens = {
      {"icp_query.hex", query}, {"icp_hit.hex", hit}, {"icp_miss.hex", miss}};
  for (const auto& [name, expected] : goldens) {
    const auto frame =
        icp::parse_hex(read_file(source_dir() / "tests" / "fixtures" / name));
    require(icp::decode(frame) == expected,
            name + " must decode to the known message");
    require(icp::encode(expected) == frame,
            name + " must re-encode byte-identically");
    require(layout_oracle(expected) == frame,
            name + " must match the independent field-layout oracle");
  }
  require(icp::encode(query).size() == 44,
          "the query frame must be 44 octets");

  const Opcode opcodes[] = {Opcode::Query,       Opcode::Hit,  Opcode::Miss,
                            Opcode::Err,         Opcode::MissNoFetch,
                            Opcode::Denied};
  const std::string charset =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789/:.-_?&=";
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 10000; ++i) {
    Message m;
    m.opcode = opcodes[rng() % 6];
    m.request_number = static_cast<std::uint32_t>(rng());
    m.sender = Ipv4Addr{static_cast<std::uint32_t>(rng())};
    if (m.opcode == Opcode::Query) {
      m.requester = Ipv4Addr{static_cast<std::uint32_t>(rng())};
    }
    const std::size_t len = rng() % 80;
    m.url.reserve(len);
    for (std::size_t j = 0; j < len; ++j) {
      m.url.push_back(charset[rng() % charset.size()]);
    }
    const auto frame = icp::encode(m);
    require(icp::decode(frame) == m,
            "round-trip mismatch at iteration " + std::to_string(i));
    require(layout_oracle(m) == frame,
            "layout oracle mismatch at iteration " + std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// 4. Cooperative caching: over a fixed Zipf trace with four unbounded
//    sibling caches, origin fetches collapse to one per distinct URL when
//    cooperation is on, and to one per (node, URL) when it is off. Both
//    counts must match a set-based replay oracle.

struct TraceItem {
  std::string url;
  int node = 0;  // request i is pinned to proxy i % 4
};

std::vector<TraceItem> zipf_trace(std::size_t n) {
  Rng rng(1101);
  ZipfSampler zipf(200, 1.0);
  std::vector<TraceItem> trace;
  trace.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t rank = zipf.sample(rng.uniform01());
    trace.push_back(
        {"http://origin.example/obj" + std::to_string(rank),
         static_cast<int>(i % 4)});
  }
  return trace;
}

ProxyCluster sibling_cluster(bool cooperation) {
  std::vector<ProxyNode> nodes;
  std::vector<Ipv4Addr> addresses;
  for (int i = 0; i < 4; ++i) {
    nodes.push_back({"p" + std::to_string(i + 1), "adsl" + std::to_string(i + 1),
                     ProxyMode::Sibling, std::nullopt});
    addresses.push_back(Ipv4Addr{0xC0A80164u + static_cast<std::uint32_t>(i)});
  }
  ProxyCluster::Config config;
  config.sibling_cooperation = cooperation;
  return ProxyCluster(std::move(nodes), config, std::move(addresses));
}

void criterion_coop_cache() {
  const auto trace = zipf_trace(1000);
  const UplinkResolver resolve = [](const ProxyNode& node) {
    return std::optional<std::string>(node.uplink);
  };

  // Independent replay oracle: a URL costs an origin fetch the first time
  // the cluster (cooperating) or the individual node (isolated) sees it.
  std::set<std::string> cluster_seen;
  std::vector<std::set<std::string>> node_seen(4);
  std::size_t oracle_coop = 0;
  std::size_t oracle_isolated = 0;
  for (const TraceItem& item : trace) {
    if (cluster_seen.insert(item.url).second) ++oracle_coop;
    if (node_seen[item.node].insert(item.url).second) ++oracle_isolated;
  }

  const auto run_trace = [&](bool cooperation) {
    ProxyCluster cluster = sibling_cluster(cooperation);
    std::size_t origin_fetches = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const auto result = cluster.handle_request(
          "p" + std::to_string(trace[i].node + 1), trace[i].url,
          SimTime{milliseconds(static_cast<std::int64_t>(i))}, resolve, 4096);
      if (result.source == ServeSource::OriginFetch) ++origin_fetches;
    }
    return origin_fetches;
  };

  const std::size_t coop_fetches = run_trace(true);
  const std::size_t isolated_fetches = run_trace(false);

  require(coop_fetches == cluster_seen.size(),
          "cooperating cluster must fetch each distinct URL once: " +
              std::to_string(coop_fetches) + " vs " +
              std::to_string(cluster_seen.size()));
  require(coop_fetches == oracle_coop, "replay oracle mismatch (cooperating)");
  std::size_t per_node_distinct = 0;
  for (const auto& seen : node_seen) per_node_distinct += seen.size();
  require(isolated_fetches == per_node_distinct,
          "isolated nodes must fetch once per (node, URL): " +
              std::to_string(isolated_fetches) + " vs " +
              std::to_string(per_node_distinct));
  require(isolated_fetches == oracle_isolated,
          "replay oracle mismatch (isolated)");
  require(coop_fetches < isolated_fetches,
          "cooperation must strictly reduce origin fetches on this trace");
}

// ---------------------------------------------------------------------------
// 5. Parent-child discipline: a child cache never fetches from the origin
//    itself while its parent is reachable, whatever the trace.

void criterion_parent_child() {
  const UplinkResolver resolve = [](const ProxyNode& node) {
    return std::optional<std::string>(node.uplink);
  };
  std::size_t child_origin_fetches = 0;
  std::size_t parent_fetches = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::vector<ProxyNode> nodes = {
        {"child", "adsl1", ProxyMode::Child, std::nullopt},
        {"parent", "wifi1", ProxyMode::Parent, std::nullopt}};
    std::vector<Ipv4Addr> addresses = {Ipv4Addr{0xC0A80102u},
                                       Ipv4Addr{0xC0A80103u}};
    ProxyCluster cluster(std::move(nodes), ProxyCluster::Config{},
                         std::move(addresses));
    Rng rng(seed);
    for (int i = 0; i < 200; ++i) {
      const std::string url = "http://origin.example/obj" +
                              std::to_string(rng.below(50));
      const auto result = cluster.handle_request(
          "child", url, SimTime{milliseconds(i)}, resolve, 2048);
      require(result.proxy == "child", "the child must serve its client");
      if (result.source == ServeSource::OriginFetch) ++child_origin_fetches;
      if (result.source == ServeSource::ParentFetch) ++parent_fetches;
    }
  }
  require(child_origin_fetches == 0,
          "child performed " + std::to_string(child_origin_fetches) +
              " origin fetches with a reachable parent");
  require(parent_fetches > 0, "misses must route through the parent");
}

// ---------------------------------------------------------------------------
// 6. Failover: with every broadband uplink scripted down at 300 s, all
//    upstream fetches move to the dedicated wireless link; once one
//    broadband uplink is restored at 450 s, new flows use it again within
//    one poll interval.

void criterion_failover() {
  const Scenario scenario = load_scenario(
      read_file(source_dir() / "data" / "scenarios" / "failover.json"));
  const Metrics metrics = run(scenario);

  std::size_t fetches_during_outage = 0;
  std::optional<std::int64_t> first_broadband_after_restore;
  for (const ServeRecord& rec : metrics.serve_log) {
    if (!rec.upstream_uplink) continue;
    const std::int64_t at = to_ms(rec.at);
    if (at >= 300000 && at < 450000) {
      ++fetches_during_outage;
      require(*rec.upstream_uplink == "wifi1",
              "upstream fetch at " + std::to_string(at) + " ms used " +
                  *rec.upstream_uplink + " during the broadband outage");
    }
    if (at >= 450000 && *rec.upstream_uplink == "adsl1" &&
        (!first_broadband_after_restore ||
         at < *first_broadband_after_restore)) {
      first_broadband_after_restore = at;
    }
  }
  require(fetches_during_outage > 0,
          "the outage window must still see upstream fetches");
  require(first_broadband_after_restore.has_value(),
          "restored broadband uplink never carried a new flow");
  require(*first_broadband_after_restore <= 450000 + 10000,
          "first broadband fetch after restore came at " +
              std::to_string(*first_broadband_after_restore) +
              " ms, outside one poll interval");
}

// ---------------------------------------------------------------------------
// 7. Planner optimality: the optimizer must agree with exhaustive
//    enumeration on the bundled price table and on 200 random offer sets,
//    and the cheap broadband mix must undercut a tenth of the cheapest
//    dedicated megabit offer.

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const std::vector<Offer>& offers,
                   const PlanConstraints& constraints)
      : constraints_(constraints) {
    std::map<std::string, int> slots;
    for (const Offer& offer : offers) {
      if (!offer.available) continue;
      usable_.push_back(offer);
      auto [it, inserted] =
          slots.emplace(offer.isp, static_cast<int>(slots.size()));
      slot_.push_back(it->second);
      per_copy_guaranteed_.push_back(
          offer.contention ? offer.nominal_kbps / *offer.contention : 0);
    }
    isp_active_.assign(slots.size(), 0);
  }

  std::optional<std::int64_t> min_cost() {
    best_.reset();
    descend(0, 0, 0, 0, false, 0);
    return best_;
  }

 private:
  void descend(std::size_t i, std::int64_t cost, long nominal, long guaranteed,
               bool dedicated, int distinct) {
    if (i == usable_.size()) {
      if (nominal < constraints_.min_nominal_kbps) return;
      if (guaranteed < constraints_.min_guaranteed_kbps) return;
      if (distinct < constraints_.min_distinct_isps) return;
      if (constraints_.require_dedicated && !dedicated) return;
      if (constraints_.budget_idr && cost > *constraints_.budget_idr) return;
      if (!best_ || cost < *best_) best_ = cost;
      return;
    }
    descend(i + 1, cost, nominal, guaranteed, dedicated, distinct);  // skip
    const Offer& offer = usable_[i];
    if (isp_active_[slot_[i]]++ == 0) ++distinct;
    const bool dedicated_here =
        dedicated || (offer.contention && *offer.contention == 1);
    for (int copies = 1; copies <= constraints_.max_multiplicity_per_offer;
         ++copies) {
      descend(i + 1, cost + copies * offer.monthly_cost,
              nominal + static_cast<long>(copies) * offer.nominal_kbps,
              guaranteed + static_cast<long>(copies) * per_copy_guaranteed_[i],
              dedicated_here, distinct);
    }
    --isp_active_[slot_[i]];
  }

  PlanConstraints constraints_;
  std::vector<Offer> usable_;
  std::vector<int> slot_;
  std::vector<int> per_copy_guaranteed_;
  std::vector<int> isp_active_;
  std::optional<std::int64_t> best_;
};

bool plan_satisfies(const Plan& plan, const PlanConstraints& c) {
  const PlanSummary s = evaluate(plan.items);
  return s.nominal_kbps >= c.min_nominal_kbps &&
         s.guaranteed_kbps >= c.min_guaranteed_kbps &&
         s.distinct_isps >= c.min_distinct_isps &&
         (!c.require_dedicated || s.has_dedicated) &&
         (!c.budget_idr || s.cost <= *c.budget_idr);
}

void check_against_exhaustive(const std::vector<Offer>& offers,
                              const PlanConstraints& constraints,
                              const std::string& label) {
  const auto plan = optimize(offers, constraints);
  const auto oracle = ExhaustiveSearch(offers, constraints).min_cost();
  require(plan.has_value() == oracle.has_value(),
          label + ": feasibility disagrees with exhaustive enumeration");
  if (!plan) return;
  require(plan->total_cost == *oracle,
          label + ": optimizer cost " + std::to_string(plan->total_cost) +
              " != exhaustive " + std::to_string(*oracle));
  const PlanSummary summary = evaluate(plan->items);
  require(summary.cost == plan->total_cost &&
              summary.nominal_kbps == plan->total_nominal_kbps &&
              summary.guaranteed_kbps == plan->total_guaranteed_kbps &&
              summary.distinct_isps == plan->distinct_isps &&
              summary.has_dedicated == plan->has_dedicated,
          label + ": reported totals disagree with the items");
  require(plan_satisfies(*plan, constraints),
          label + ": returned plan violates its own constraints");
  for (const PlanItem& item : plan->items) {
    require(item.offer.available, label + ": plan uses an unavailable offer");
    require(item.count >= 1 &&
                item.count <= constraints.max_multiplicity_per_offer,
            label + ": item count out of range");
  }
}

void criterion_planner() {
  const std::vector<Offer> table =
      load_offers(read_file(source_dir() / "data" / "table1.json"));
  require(table.size() == 10, "price table must list ten offers");

  // The four staple constraint sets over the bundled price table.
  {
    PlanConstraints c;
    c.min_nominal_kbps = 2000;
    c.min_distinct_isps = 2;
    check_against_exhaustive(table, c, "table/nominal-2000");
    const auto plan = optimize(table, c);
    require(plan && plan->total_cost == 2'800'000,
            "two-provider 2,000 kbps mix must cost 2,800,000");

    // Cheapest dedicated (1:1) offer of at least one megabit.
    std::optional<std::int64_t> dedicated_min;
    for (const Offer& offer : table) {
      if (!offer.available || !offer.contention || *offer.contention != 1 ||
          offer.nominal_kbps < 1000) {
        continue;
      }
      if (!dedicated_min || offer.monthly_cost < *dedicated_min) {
        dedicated_min = offer.monthly_cost;
      }
    }
    require(dedicated_min && *dedicated_min == 30'500'000,
            "cheapest dedicated megabit offer must cost 30,500,000");
    require(plan->total_cost * 10 < *dedicated_min,
            "broadband mix must cost under a tenth of the dedicated offer");
  }
  {
    PlanConstraints c;
    c.min_nominal_kbps = 7000;
    c.min_distinct_isps = 2;
    c.budget_idr = 9'000'000;
    check_against_exhaustive(table, c, "table/nominal-7000");
  }
  {
    PlanConstraints c;
    c.min_guaranteed_kbps = 2000;
    c.budget_idr = 9'000'000;
    check_against_exhaustive(table, c, "table/guaranteed-2000");
    require(!optimize(table, c).has_value(),
            "guaranteed 2,000 kbps under 9,000,000 must be infeasible");
  }
  {
    PlanConstraints c;
    c.min_nominal_kbps = 2000;
    c.min_distinct_isps = 2;
    c.require_dedicated = true;
    check_against_exhaustive(table, c, "table/dedicated");
  }

  // 200 random offer sets, capped so exhaustive enumeration stays exact.
  std::mt19937_64 rng(991);
  const LinkTechnology technologies[] = {
      LinkTechnology::Adsl, LinkTechnology::DedicatedWireless,
      LinkTechnology::BroadbandWireless, LinkTechnology::FiberOptic};
  const int nominals[] = {128, 256, 512, 1024, 2048, 4096};
  const int contentions[] = {1, 2, 4, 8};
  for (int trial = 0; trial < 200; ++trial) {
    const int cap = 1 + static_cast<int>(rng() % 4);
    const int max_offers = cap <= 2 ? 12 : (cap == 3 ? 10 : 9);
    const int n = 1 + static_cast<int>(rng() % max_offers);
    std::vector<Offer> offers;
    offers.reserve(n);
    for (int i = 0; i < n; ++i) {
      Offer o;
      o.isp = std::string(1, static_cast<char>('A' + rng() % 5));
      o.technology = technologies[rng() % 4];
      o.monthly_cost = static_cast<std::int64_t>(1 + rng() % 60) * 100'000;
      o.nominal_kbps = nominals[rng() % 6];
      if (rng() % 4 != 0) o.contention = contentions[rng() % 4];
      o.available = rng() % 10 != 0;
      offers.push_back(o);
    }
    PlanConstraints c;
    c.max_multiplicity_per_offer = cap;
    if (rng() % 2 == 0) c.min_nominal_kbps = static_cast<int>(rng() % 6001);
    if (rng() % 3 == 0) c.min_guaranteed_kbps = static_cast<int>(rng() % 1501);
    c.min_distinct_isps = static_cast<int>(rng() % 4);
    c.require_dedicated = rng() % 5 == 0;
    if (rng() % 2 == 0) {
      c.budget_idr = static_cast<std::int64_t>(1 + rng() % 100) * 100'000;
    }
    check_against_exhaustive(offers, c, "random-set-" + std::to_string(trial));
  }
}

// ---------------------------------------------------------------------------
// 8. Desk-scale load: the bundled 120-user scenario finishes quickly,
//    session concurrency stays within the population, every conservation
//    identity holds exactly, and no proxy bin exceeds its capacity.

void criterion_desk_scale() {
  const Scenario scenario = load_scenario(
      read_file(source_dir() / "data" / "scenarios" / "baseline.json"));

  const auto start = std::chrono::steady_clock::now();
  const Metrics m = run(scenario);
  const auto wall = std::chrono::duration_cast<milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  require(wall < 10000, "scenario took " + std::to_string(wall) + " ms");

  require(m.max_concurrent_sessions >= 1 && m.max_concurrent_sessions <= 120,
          "concurrent sessions out of range: " +
              std::to_string(m.max_concurrent_sessions));

  // Serve-source conservation.
  require(m.total_requests == m.local_hits + m.sibling_hits +
                                  m.parent_fetches + m.origin_fetches +
                                  m.no_path_requests,
          "serve sources must partition the requests");
  require(m.no_path_requests == 0, "the healthy scenario must drop nothing");
  require(m.serve_log.size() == m.total_requests - m.no_path_requests,
          "serve log must hold every served request");

  // Accounting conservation: session records carry exactly the bytes the
  // gateway moved, and the serve log carries the same downstream volume.
  std::uint64_t accounted_up = 0;
  std::uint64_t accounted_down = 0;
  for (const AccountingRecord& rec : m.accounting) {
    accounted_up += rec.bytes_up;
    accounted_down += rec.bytes_down;
  }
  require(accounted_up == m.gateway_bytes_up &&
              accounted_down == m.gateway_bytes_down,
          "accounting records must sum to the gateway totals");
  std::uint64_t served_bytes = 0;
  for (const ServeRecord& rec : m.serve_log) served_bytes += rec.bytes;
  require(served_bytes == m.gateway_bytes_down,
          "served bytes must equal gateway downstream bytes");
  require(m.gateway_bytes_up ==
              scenario.workload.request_bytes * m.serve_log.size(),
          "upstream bytes must be one request's worth per served object");

  // Per-proxy totals and capacity ceilings.
  for (const auto& [proxy_id, stats] : m.per_proxy) {
    std::uint64_t bin_requests = 0;
    std::uint64_t bin_bytes = 0;
    std::uint64_t bin_upstream = 0;
    for (const ProxyBin& bin : stats.bins) {
      bin_requests += bin.requests;
      bin_bytes += bin.bytes_served;
      bin_upstream += bin.upstream_bytes;
      const double kbps =
          static_cast<double>(bin.bytes_served) * 8.0 / m.bin_ms;
      require(kbps <= m.proxy_capacity_kbps,
              proxy_id + " exceeded its capacity in a bin: " +
                  std::to_string(kbps) + " kbps");
    }
    require(bin_requests == stats.requests && bin_bytes == stats.bytes_served &&
                bin_upstream == stats.upstream_bytes,
            proxy_id + ": bins must sum to the proxy totals");
  }
}

// ---------------------------------------------------------------------------
// 9. Determinism: the same scenario and seed must export byte-identical
//    CSV measurement files across two fresh runs.

void criterion_determinism() {
  const std::string text =
      read_file(source_dir() / "data" / "scenarios" / "failover.json");
  const Metrics first = run(load_scenario(text));
  const Metrics second = run(load_scenario(text));

  const fs::path root =
      fs::temp_directory_path() /
      ("campusgate_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const auto files_a = export_metrics(first, ExportFormat::Csv,
                                      (root / "a").string());
  const auto files_b = export_metrics(second, ExportFormat::Csv,
                                      (root / "b").string());
  require(files_a.size() == 5 && files_b.size() == 5,
          "CSV export must produce the five measurement files");
  for (std::size_t i = 0; i < files_a.size(); ++i) {
    const std::string name = fs::path(files_a[i]).filename().string();
    require(name == fs::path(files_b[i]).filename().string(),
            "export file lists must match");
    const std::string a = read_file(files_a[i]);
    const std::string b = read_file(files_b[i]);
    require(!a.empty(), name + " must not be empty");
    require(a == b, name + " differs between identical runs");
  }
  fs::remove_all(root);
}

// ---------------------------------------------------------------------------
// 10. Popularity sampler sanity: at exponent 1.0 over 100 URLs, the top
//     URL's observed share sits within 0.03 of 1/H(100).

void criterion_zipf_sanity() {
  ZipfSampler zipf(100, 1.0);
  Rng rng(2718);
  int top = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    if (zipf.sample(rng.uniform01()) == 1) ++top;
  }
  double h100 = 0.0;
  for (int k = 1; k <= 100; ++k) h100 += 1.0 / k;
  const double expected = 1.0 / h100;
  const double share = static_cast<double>(top) / draws;
  require(std::abs(share - expected) <= 0.03,
          "top-URL share " + std::to_string(share) + " vs expected " +
              std::to_string(expected));
  require(std::abs(zipf.probability(1) - expected) < 1e-12,
          "sampler's own top-rank probability must equal 1/H(100)");
}

// ---------------------------------------------------------------------------

struct Criterion {
  int number;
  std::string title;
  std::optional<std::int64_t> budget_ms;
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "idle sign-off: 601 s idle closes the session, 600 s stays active",
       1000, criterion_idle_signoff},
      {2,
       "capture rule: 10,000-packet fuzz, unauthenticated web traffic "
       "redirects and everything else is default-denied",
       5000, criterion_capture_fuzz},
      {3,
       "wire codec: 10,000 random round-trips and 3 golden frames against "
       "a field-layout oracle",
       5000, criterion_icp_codec},
      {4,
       "cooperative caching: cluster origin fetches equal distinct URLs "
       "cooperating, per-node distinct when isolated, both match a replay "
       "oracle",
       5000, criterion_coop_cache},
      {5, "parent-child: zero child origin fetches while the parent is "
          "reachable",
       std::nullopt, criterion_parent_child},
      {6,
       "failover: broadband outage moves all upstream fetches to the "
       "dedicated uplink; restore rejoins within one poll interval",
       std::nullopt, criterion_failover},
      {7,
       "planner optimality: price-table fixture and 200 random offer sets "
       "match exhaustive enumeration",
       60000, criterion_planner},
      {8,
       "desk-scale load: 120-user scenario in under 10 s with exact "
       "conservation and per-bin capacity ceilings",
       10000, criterion_desk_scale},
      {9, "determinism: equal seeds export byte-identical CSV files",
       std::nullopt, criterion_determinism},
      {10,
       "popularity sampler: top-URL share within 0.03 of the harmonic "
       "prediction",
       2000, criterion_zipf_sanity},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.body();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const auto elapsed = std::chrono::duration_cast<milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    if (failure.empty() && criterion.budget_ms &&
        elapsed >= *criterion.budget_ms) {
      failure = "exceeded the " + std::to_string(*criterion.budget_ms) +
                " ms budget (took " + std::to_string(elapsed) + " ms)";
    }
    if (failure.empty()) {
      std::cout << "PASS criterion " << criterion.number << ": "
                << criterion.title << " [" << elapsed << " ms]\n";
    } else {
      ++failures;
      std::cout << "FAIL criterion " << criterion.number << ": "
                << criterion.title << " -- " << failure << " [" << elapsed
                << " ms]\n";
    }
  }
  std::cout << "acceptance: " << (criteria.size() - failures) << "/"
            << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
