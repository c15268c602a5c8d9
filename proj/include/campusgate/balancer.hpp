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

#ifndef CAMPUSGATE_BALANCER_HPP_
#define CAMPUSGATE_BALANCER_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "campusgate/ipv4.hpp"
#include "campusgate/sim_time.hpp"
#include "campusgate/topology.hpp"

namespace campusgate {

inline constexpr SimDuration kDefaultPollInterval = std::chrono::seconds(10);

enum class LinkStatus { Up, Down };

std::string to_string(LinkStatus status);

struct HealthSample {
  std::string uplink;
  SimTime at{0};
  LinkStatus status = LinkStatus::Up;
  std::uint32_t rx_octets = 0;  // cumulative, wraps at 2^32
  std::uint32_t tx_octets = 0;
  bool operator==(const HealthSample&) const = default;
};

struct ProbeReading {
  LinkStatus status = LinkStatus::Up;
  std::uint32_t rx_octets = 0;
  std::uint32_t tx_octets = 0;
};

/// Source of per-uplink reachability and octet counters; the production
/// analogue would shell out to SNMP or ping, the simulator supplies one.
class LinkProbe {
 public:
  virtual ~LinkProbe() = default;
  virtual ProbeReading read(const std::string& uplink_id) = 0;
};

/// Difference of two wrap-around octet counters (modulo 2^32).
std::uint32_t counter_delta(std::uint32_t previous, std::uint32_t current);

/// Throughput implied by two samples of one counter, in kilobits/second.
double rate_kbps(std::uint32_t previous_octets, std::uint32_t current_octets,
                 SimDuration elapsed);

/// Latest-known state of every uplink, fed by periodic polls. An uplink
/// never polled counts as Up (optimistic until proven otherwise).
class HealthView {
 public:
  explicit HealthView(SimDuration poll_interval = kDefaultPollInterval)
      : poll_interval_(poll_interval) {}

  HealthSample poll(const std::string& uplink_id, SimTime now,
                    LinkProbe& probe);

  LinkStatus status_of(const std::string& uplink_id) const;
  std::optional<HealthSample> latest(const std::string& uplink_id) const;
  const std::vector<HealthSample>& history() const { return history_; }
  SimDuration poll_interval() const { return poll_interval_; }

 private:
  SimDuration poll_interval_;
  std::map<std::string, HealthSample> latest_;
  std::vector<HealthSample> history_;
};

enum class PolicyKind { RoundRobin, WeightedByBandwidth, HashClientAddress };

std::optional<PolicyKind> parse_policy(const std::string& name);
std::string to_string(PolicyKind policy);

/// Spreads client flows across proxies whose effective uplink is a live
/// broadband link. When no broadband uplink is up, flows fall back to a
/// proxy that can still reach a dedicated uplink; with nothing up at all
/// there is no path.
class FlowBalancer {
 public:
  explicit FlowBalancer(PolicyKind policy) : policy_(policy) {}

  /// Chooses the proxy for a new flow, or nullopt when no proxy has any
  /// usable uplink.
  std::optional<std::string> select_proxy(Ipv4Addr client,
                                          const HealthView& health,
                                          const Topology& topology);

  PolicyKind policy() const { return policy_; }

 private:
  PolicyKind policy_;
  std::size_t round_robin_cursor_ = 0;
  // Smooth weighted state, keyed by proxy id (WeightedByBandwidth only).
  std::map<std::string, std::int64_t> wrr_current_;
};

/// Uplink a proxy should use right now: its own when up, otherwise the
/// lowest-id live broadband uplink, otherwise any live dedicated uplink,
/// otherwise nullopt (no route).
std::optional<std::string> reroute(const ProxyNode& proxy,
                                   const HealthView& health,
                                   const std::vector<Uplink>& uplinks);

/// CSV with columns uplink, at, status, rx_octets, tx_octets (time in
/// milliseconds).
std::string health_csv(const std::vector<HealthSample>& samples);

}  // namespace campusgate

#endif  // CAMPUSGATE_BALANCER_HPP_
