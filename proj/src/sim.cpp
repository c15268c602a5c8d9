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

#include "campusgate/sim.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace campusgate {

namespace {

using nlohmann::json;

std::string user_host_id(int user) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "user%03d", user);
  return buf;
}

std::vector<int> non_management_vlans(const Topology& topo) {
  std::vector<int> ids;
  for (const Vlan& v : topo.vlans) {
    if (!v.management) ids.push_back(v.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

void SimLinkProbe::set_status(const std::string& uplink_id,
                              LinkStatus status) {
  state_[uplink_id].status = status;
}

void SimLinkProbe::add_traffic(const std::string& uplink_id,
                               std::uint64_t rx_octets,
                               std::uint64_t tx_octets) {
  State& s = state_[uplink_id];
  s.rx += rx_octets;
  s.tx += tx_octets;
}

ProbeReading SimLinkProbe::read(const std::string& uplink_id) {
  const State& s = state_[uplink_id];
  return ProbeReading{s.status, static_cast<std::uint32_t>(s.rx),
                      static_cast<std::uint32_t>(s.tx)};
}

namespace {

enum class EventKind { Poll, Fault, Request };

struct Event {
  SimTime at{0};
  std::size_t seq = 0;  // insertion order breaks timestamp ties
  EventKind kind = EventKind::Poll;
  std::size_t index = 0;  // fault or request index
};

void check_scenario(const Scenario& s) {
  try {
    validate_topology(s.topology);
  } catch (const ConfigError& e) {
    throw ScenarioError(std::string("invalid topology: ") + e.what());
  }
  if (s.duration < SimDuration::zero()) {
    throw ScenarioError("duration must be non-negative");
  }
  for (const FaultEvent& f : s.faults) {
    if (s.topology.find_uplink(f.uplink) == nullptr) {
      throw ScenarioError("fault references unknown uplink " + f.uplink);
    }
    if (f.at < SimTime(0) || f.at > s.duration) {
      throw ScenarioError("fault time outside [0, duration] for " + f.uplink);
    }
  }
  if (s.workload.n_users > 0 && non_management_vlans(s.topology).empty()) {
    throw ScenarioError("workload users need a non-management VLAN");
  }
  if (s.poll_interval <= SimDuration::zero()) {
    throw ScenarioError("poll_interval must be positive");
  }
}

}  // namespace

Metrics run(const Scenario& scenario) {
  check_scenario(scenario);

  Metrics metrics;
  metrics.duration_ms = to_ms(scenario.duration);
  metrics.proxy_capacity_kbps = scenario.proxy_capacity_kbps;
  if (scenario.duration <= SimDuration::zero()) {
    return metrics;
  }

  const Topology& topo = scenario.topology;
  const std::vector<Request> trace =
      generate_workload(scenario.workload, scenario.seed, scenario.duration);

  // One address per workload user, assigned round-robin across the
  // non-management VLANs unless the scenario pinned the host explicitly.
  AddressAllocator allocator(topo);
  const std::vector<int> vlan_ids = non_management_vlans(topo);
  std::vector<Ipv4Addr> user_addr;
  std::vector<std::string> user_name;
  InMemoryCredentials credentials;
  for (int u = 0; u < scenario.workload.n_users; ++u) {
    const std::string host_id = user_host_id(u);
    Ipv4Addr addr;
    if (auto existing = allocator.address_of(host_id)) {
      addr = *existing;
    } else {
      const Host* host = topo.find_host(host_id);
      const int vlan = host != nullptr
                           ? host->vlan
                           : vlan_ids[static_cast<std::size_t>(u) %
                                      vlan_ids.size()];
      addr = allocator.assign(vlan, host_id);
    }
    user_addr.push_back(addr);
    user_name.push_back(host_id);
    credentials.add_user(host_id, "pw-" + host_id);
  }

  SessionTable sessions;
  SimLinkProbe probe;
  HealthView health(scenario.poll_interval);
  FlowBalancer balancer(scenario.policy);

  std::vector<Ipv4Addr> proxy_addrs;
  const Ipv4Prefix management = topo.management_vlan().subnet;
  for (std::size_t i = 0; i < topo.proxies.size(); ++i) {
    proxy_addrs.push_back(
        management.host(200 + static_cast<std::uint32_t>(i)));
  }
  ProxyCluster::Config cache_config;
  cache_config.ttl = scenario.cache_ttl;
  cache_config.sibling_cooperation = scenario.sibling_cooperation;
  cache_config.icp_timeout = scenario.icp_timeout;
  cache_config.icp_reply_latency = scenario.latencies.icp_reply;
  ProxyCluster cluster(topo.proxies, cache_config, proxy_addrs);

  std::vector<std::string> uplink_order;
  for (const Uplink& u : topo.uplinks) uplink_order.push_back(u.id);
  std::sort(uplink_order.begin(), uplink_order.end());

  // Build the schedule: polls first, then faults, then requests, so that
  // the stable sort resolves equal timestamps in exactly that order.
  std::vector<Event> events;
  std::size_t seq = 0;
  for (SimTime t{0}; t <= scenario.duration; t += scenario.poll_interval) {
    events.push_back(Event{t, seq++, EventKind::Poll, 0});
  }
  for (std::size_t i = 0; i < scenario.faults.size(); ++i) {
    events.push_back(Event{scenario.faults[i].at, seq++, EventKind::Fault, i});
  }
  for (std::size_t i = 0; i < trace.size(); ++i) {
    events.push_back(Event{trace[i].at, seq++, EventKind::Request, i});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) {
                     if (a.at != b.at) return a.at < b.at;
                     return a.seq < b.seq;
                   });

  std::map<std::pair<std::string, std::int64_t>, ProxyBin> bins;
  auto bin_of = [&](const std::string& proxy,
                    SimTime at) -> ProxyBin& {
    const std::int64_t start = to_ms(at) / metrics.bin_ms * metrics.bin_ms;
    auto [it, inserted] = bins.try_emplace(std::make_pair(proxy, start));
    if (inserted) {
      it->second.bin_start_ms = start;
    }
    return it->second;
  };

  for (const Event& event : events) {
    switch (event.kind) {
      case EventKind::Poll: {
        for (const std::string& uplink : uplink_order) {
          health.poll(uplink, event.at, probe);
        }
        sessions.expire_idle(event.at, scenario.idle_limit);
        metrics.online_series.push_back(
            OnlinePoint{to_ms(event.at), sessions.active_count()});
        break;
      }
      case EventKind::Fault: {
        const FaultEvent& fault = scenario.faults[event.index];
        probe.set_status(fault.uplink, fault.status);
        // Detection is immediate: the fault is observed by a poll taken
        // at the very same instant.
        health.poll(fault.uplink, event.at, probe);
        break;
      }
      case EventKind::Request: {
        const Request& request = trace[event.index];
        const Ipv4Addr client = user_addr[request.user];
        ++metrics.total_requests;

        PacketMeta pkt;
        pkt.src = client;
        pkt.dst = Ipv4Addr::parse("203.0.113.10").value();
        pkt.dst_port = 80;
        pkt.size_bytes = scenario.workload.request_bytes;

        PortalAction action =
            intercept(pkt, sessions, scenario.acl_rules, scenario.login_url,
                      vlan_of(topo, client));
        if (action.kind == PortalAction::Kind::RedirectToLogin) {
          // The simulated user always completes the login form and
          // immediately retries the request.
          const std::string& name = user_name[request.user];
          sessions.authenticate(credentials, name, "pw-" + name, client,
                                event.at);
          metrics.max_concurrent_sessions = std::max(
              metrics.max_concurrent_sessions, sessions.active_count());
          action.kind = PortalAction::Kind::ForwardToProxy;
        }
        if (action.kind != PortalAction::Kind::ForwardToProxy) {
          break;  // non-web verdicts cannot occur for generated requests
        }

        auto proxy = balancer.select_proxy(client, health, topo);
        if (!proxy) {
          ++metrics.no_path_requests;
          break;
        }
        auto resolver =
            [&](const ProxyNode& node) -> std::optional<std::string> {
          return reroute(node, health, topo.uplinks);
        };
        auto on_uplink = [&](const std::string& uplink,
                             std::uint64_t bytes_down,
                             std::uint64_t bytes_up) {
          probe.add_traffic(uplink, bytes_down,
                            bytes_up + scenario.workload.request_bytes);
        };

        ServeResult result;
        try {
          result = cluster.handle_request(*proxy, request.url, event.at,
                                          resolver, request.bytes, on_uplink);
        } catch (const UpstreamUnavailable&) {
          ++metrics.no_path_requests;
          break;
        }

        switch (result.source) {
          case ServeSource::LocalHit:
            ++metrics.local_hits;
            break;
          case ServeSource::SiblingHit:
            ++metrics.sibling_hits;
            break;
          case ServeSource::ParentFetch:
            ++metrics.parent_fetches;
            break;
          case ServeSource::OriginFetch:
            ++metrics.origin_fetches;
            break;
        }

        ProxyStats& stats = metrics.per_proxy[*proxy];
        stats.requests += 1;
        stats.bytes_served += result.bytes;
        ProxyBin& bin = bin_of(*proxy, event.at);
        bin.requests += 1;
        bin.bytes_served += result.bytes;
        if (result.upstream_bytes > 0) {
          const std::string& fetcher =
              result.source == ServeSource::ParentFetch && !result.peer.empty()
                  ? result.peer
                  : *proxy;
          metrics.per_proxy[fetcher].upstream_bytes += result.upstream_bytes;
          bin_of(fetcher, event.at).upstream_bytes += result.upstream_bytes;
        }

        Session* session = sessions.active_by_user(user_name[request.user]);
        account(*session, scenario.workload.request_bytes, result.bytes,
                event.at);
        metrics.gateway_bytes_up += scenario.workload.request_bytes;
        metrics.gateway_bytes_down += result.bytes;

        ServeRecord record;
        record.at = event.at;
        record.user = request.user;
        record.url = request.url;
        record.proxy = *proxy;
        record.source = result.source;
        record.bytes = result.bytes;
        record.upstream_uplink = result.upstream_uplink;
        metrics.serve_log.push_back(std::move(record));
        break;
      }
    }
  }

  sessions.close_all(scenario.duration, CloseReason::Shutdown);
  metrics.accounting = sessions.records();
  metrics.health_series = health.history();

  for (const ProxyNode& p : topo.proxies) {
    metrics.per_proxy.try_emplace(p.id);  // zero row for idle proxies
  }
  for (const auto& [key, bin] : bins) {
    metrics.per_proxy[key.first].bins.push_back(bin);
  }
  for (auto& [id, stats] : metrics.per_proxy) {
    std::sort(stats.bins.begin(), stats.bins.end(),
              [](const ProxyBin& a, const ProxyBin& b) {
                return a.bin_start_ms < b.bin_start_ms;
              });
  }
  return metrics;
}

Scenario load_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("bad JSON: ") + e.what());
  }

  Scenario scenario;
  try {
    scenario.topology = load_topology(json_text);
  } catch (const ConfigError& e) {
    throw ScenarioError(std::string("invalid topology: ") + e.what());
  }

  try {
    if (doc.contains("workload")) {
      const json& jw = doc.at("workload");
      scenario.workload.n_users = jw.value("n_users", 0);
      scenario.workload.arrival = jw.value("arrival", 0.0);
      scenario.workload.url_universe = jw.value("url_universe", 0);
      scenario.workload.popularity = jw.value("popularity", 1.0);
      scenario.workload.mean_object_bytes =
          jw.value("mean_object_bytes", std::uint64_t{8192});
      scenario.workload.min_object_bytes =
          jw.value("min_object_bytes", std::uint64_t{256});
      scenario.workload.max_object_bytes =
          jw.value("max_object_bytes", std::uint64_t{262144});
      scenario.workload.request_bytes =
          jw.value("request_bytes", std::uint64_t{300});
    }
    scenario.duration =
        std::chrono::seconds(doc.value("duration", std::int64_t{0}));
    scenario.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("policy")) {
      auto policy = parse_policy(doc.at("policy").get<std::string>());
      if (!policy) {
        throw ScenarioError("unknown policy: " +
                            doc.at("policy").get<std::string>());
      }
      scenario.policy = *policy;
    }
    for (const json& jf : doc.value("faults", json::array())) {
      FaultEvent fault;
      fault.at = std::chrono::seconds(jf.at("time").get<std::int64_t>());
      fault.uplink = jf.at("uplink").get<std::string>();
      const std::string status = jf.at("status").get<std::string>();
      if (status != "up" && status != "down") {
        throw ScenarioError("fault status must be up or down");
      }
      fault.status = status == "up" ? LinkStatus::Up : LinkStatus::Down;
      scenario.faults.push_back(fault);
    }
    if (doc.contains("acl_rules")) {
      scenario.acl_rules = parse_rules_json(doc.at("acl_rules").dump());
    }
    if (doc.contains("portal")) {
      const json& jp = doc.at("portal");
      scenario.idle_limit = std::chrono::seconds(
          jp.value("idle_limit_s", std::int64_t{600}));
      scenario.login_url = jp.value("login_url", scenario.login_url);
    }
    if (doc.contains("cache")) {
      const json& jc = doc.at("cache");
      scenario.cache_ttl =
          std::chrono::seconds(jc.value("ttl_s", std::int64_t{3600}));
    }
    if (doc.contains("icp")) {
      const json& ji = doc.at("icp");
      scenario.sibling_cooperation = ji.value("enabled", true);
      scenario.icp_timeout = std::chrono::milliseconds(
          ji.value("timeout_ms", std::int64_t{2000}));
    }
    if (doc.contains("latencies")) {
      const json& jl = doc.at("latencies");
      scenario.latencies.lan =
          std::chrono::milliseconds(jl.value("lan_ms", std::int64_t{1}));
      scenario.latencies.peer =
          std::chrono::milliseconds(jl.value("peer_ms", std::int64_t{2}));
      scenario.latencies.icp_reply = std::chrono::milliseconds(
          jl.value("icp_reply_ms", std::int64_t{5}));
      scenario.latencies.origin = std::chrono::milliseconds(
          jl.value("origin_ms", std::int64_t{200}));
    }
    scenario.poll_interval = std::chrono::seconds(
        doc.value("poll_interval_s", std::int64_t{10}));
    scenario.proxy_capacity_kbps = doc.value("proxy_capacity_kbps", 100000);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("bad scenario field: ") + e.what());
  }

  // List workload users as hosts so the topology reflects who is on the
  // network; addresses are handed out at run time.
  const std::vector<int> vlan_ids = non_management_vlans(scenario.topology);
  if (scenario.workload.n_users > 0 && vlan_ids.empty()) {
    throw ScenarioError("workload users need a non-management VLAN");
  }
  for (int u = 0; u < scenario.workload.n_users; ++u) {
    const std::string host_id = user_host_id(u);
    if (scenario.topology.find_host(host_id) == nullptr) {
      scenario.topology.hosts.push_back(
          Host{host_id,
               vlan_ids[static_cast<std::size_t>(u) % vlan_ids.size()],
               std::nullopt});
    }
  }

  check_scenario(scenario);
  return scenario;
}

}  // namespace campusgate
