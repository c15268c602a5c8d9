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

#ifndef CAMPUSGATE_SIM_HPP_
#define CAMPUSGATE_SIM_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "campusgate/acl.hpp"
#include "campusgate/balancer.hpp"
#include "campusgate/portal.hpp"
#include "campusgate/proxy_cache.hpp"
#include "campusgate/topology.hpp"
#include "campusgate/workload.hpp"

namespace campusgate {

/// Fixed per-segment delays; the virtual clock advances by these, never
/// by wall time.
struct LatencyModel {
  SimDuration lan = std::chrono::milliseconds(1);
  SimDuration peer = std::chrono::milliseconds(2);
  SimDuration icp_reply = std::chrono::milliseconds(5);
  SimDuration origin = std::chrono::milliseconds(200);
};

struct FaultEvent {
  SimTime at{0};
  std::string uplink;
  LinkStatus status = LinkStatus::Down;
  bool operator==(const FaultEvent&) const = default;
};

struct Scenario {
  Topology topology;
  WorkloadSpec workload;
  std::vector<FaultEvent> faults;
  SimDuration duration{0};
  std::uint64_t seed = 0;
  PolicyKind policy = PolicyKind::WeightedByBandwidth;
  RuleSet acl_rules;
  LatencyModel latencies;
  SimDuration idle_limit = kDefaultIdleLimit;
  SimDuration cache_ttl = kDefaultCacheTtl;
  SimDuration poll_interval = kDefaultPollInterval;
  SimDuration icp_timeout = std::chrono::seconds(2);
  bool sibling_cooperation = true;
  std::string login_url = "http://gateway.campus/login";
  // Serving-side NIC capacity per proxy, used by load reports.
  int proxy_capacity_kbps = 100000;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

struct ServeRecord {
  SimTime at{0};
  int user = 0;
  std::string url;
  std::string proxy;
  ServeSource source = ServeSource::OriginFetch;
  std::uint64_t bytes = 0;
  std::optional<std::string> upstream_uplink;
};

struct ProxyBin {
  std::int64_t bin_start_ms = 0;
  std::uint64_t requests = 0;
  std::uint64_t bytes_served = 0;
  std::uint64_t upstream_bytes = 0;
};

struct ProxyStats {
  std::uint64_t requests = 0;
  std::uint64_t bytes_served = 0;
  std::uint64_t upstream_bytes = 0;
  std::vector<ProxyBin> bins;
};

struct OnlinePoint {
  std::int64_t at_ms = 0;
  std::size_t active_sessions = 0;
};

struct Metrics {
  std::int64_t duration_ms = 0;
  std::int64_t bin_ms = 10000;
  int proxy_capacity_kbps = 100000;
  std::uint64_t total_requests = 0;
  std::uint64_t local_hits = 0;
  std::uint64_t sibling_hits = 0;
  std::uint64_t parent_fetches = 0;
  std::uint64_t origin_fetches = 0;
  std::uint64_t no_path_requests = 0;  // dropped: no usable uplink anywhere
  std::uint64_t gateway_bytes_up = 0;
  std::uint64_t gateway_bytes_down = 0;
  std::size_t max_concurrent_sessions = 0;
  std::map<std::string, ProxyStats> per_proxy;
  std::vector<OnlinePoint> online_series;
  std::vector<HealthSample> health_series;
  std::vector<AccountingRecord> accounting;
  std::vector<ServeRecord> serve_log;
};

/// Probe whose status and counters are driven by the simulator itself:
/// fault events flip status, upstream fetches add octets.
class SimLinkProbe : public LinkProbe {
 public:
  void set_status(const std::string& uplink_id, LinkStatus status);
  void add_traffic(const std::string& uplink_id, std::uint64_t rx_octets,
                   std::uint64_t tx_octets);
  ProbeReading read(const std::string& uplink_id) override;

 private:
  struct State {
    LinkStatus status = LinkStatus::Up;
    std::uint64_t rx = 0;  // cumulative; exposed modulo 2^32
    std::uint64_t tx = 0;
  };
  std::map<std::string, State> state_;
};

/// Executes the scenario on a single deterministic event clock and
/// returns the full measurement set.
Metrics run(const Scenario& scenario);

/// Parses a scenario file: the topology keys plus acl_rules, workload,
/// faults, duration, seed, policy and optional portal/cache/icp/latency
/// overrides. Synthesizes hosts for workload users not listed explicitly.
Scenario load_scenario(const std::string& json_text);

enum class ExportFormat { Csv, Json };

/// Writes metrics under dir: proxy_load.csv, online_users.csv,
/// uplink_health.csv, accounting.csv and summary.csv for Csv, or a single
/// metrics.json for Json. All writes are atomic (temp file + rename).
std::vector<std::string> export_metrics(const Metrics& metrics,
                                        ExportFormat format,
                                        const std::string& dir);

std::string metrics_to_json(const Metrics& metrics);

}  // namespace campusgate

#endif  // CAMPUSGATE_SIM_HPP_
