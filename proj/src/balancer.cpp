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

#include "campusgate/balancer.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace campusgate {

std::string to_string(LinkStatus status) {
  return status == LinkStatus::Up ? "up" : "down";
}

std::uint32_t counter_delta(std::uint32_t previous, std::uint32_t current) {
  return current - previous;  // unsigned arithmetic wraps exactly as needed
}

double rate_kbps(std::uint32_t previous_octets, std::uint32_t current_octets,
                 SimDuration elapsed) {
  const auto ms = static_cast<double>(to_ms(elapsed));
  if (ms <= 0) return 0.0;
  // octets * 8 bits over milliseconds is bits/ms, i.e. kbit/s.
  return static_cast<double>(counter_delta(previous_octets, current_octets)) *
         8.0 / ms;
}

HealthSample HealthView::poll(const std::string& uplink_id, SimTime now,
                              LinkProbe& probe) {
  const ProbeReading reading = probe.read(uplink_id);
  HealthSample sample{uplink_id, now, reading.status, reading.rx_octets,
                      reading.tx_octets};
  latest_[uplink_id] = sample;
  history_.push_back(sample);
  return sample;
}

LinkStatus HealthView::status_of(const std::string& uplink_id) const {
  auto it = latest_.find(uplink_id);
  // Optimistic start: a never-polled uplink counts as Up.
  return it == latest_.end() ? LinkStatus::Up : it->second.status;
}

std::optional<HealthSample> HealthView::latest(
    const std::string& uplink_id) const {
  auto it = latest_.find(uplink_id);
  if (it == latest_.end()) return std::nullopt;
  return it->second;
}

std::optional<PolicyKind> parse_policy(const std::string& name) {
  if (name == "round_robin") return PolicyKind::RoundRobin;
  if (name == "weighted_by_bandwidth") return PolicyKind::WeightedByBandwidth;
  if (name == "hash_client_address") return PolicyKind::HashClientAddress;
  return std::nullopt;
}

std::string to_string(PolicyKind policy) {
  switch (policy) {
    case PolicyKind::RoundRobin:
      return "round_robin";
    case PolicyKind::WeightedByBandwidth:
      return "weighted_by_bandwidth";
    case PolicyKind::HashClientAddress:
      return "hash_client_address";
  }
  return "round_robin";
}

std::optional<std::string> reroute(const ProxyNode& proxy,
                                   const HealthView& health,
                                   const std::vector<Uplink>& uplinks) {
  if (health.status_of(proxy.uplink) == LinkStatus::Up) {
    return proxy.uplink;
  }
  std::vector<const Uplink*> sorted;
  sorted.reserve(uplinks.size());
  for (const Uplink& u : uplinks) sorted.push_back(&u);
  std::sort(sorted.begin(), sorted.end(),
            [](const Uplink* a, const Uplink* b) { return a->id < b->id; });
  for (const Uplink* u : sorted) {
    if (u->kind == UplinkKind::BroadbandAdsl &&
        health.status_of(u->id) == LinkStatus::Up) {
      return u->id;
    }
  }
  // The dedicated link is the last resort.
  for (const Uplink* u : sorted) {
    if (u->kind == UplinkKind::DedicatedWireless &&
        health.status_of(u->id) == LinkStatus::Up) {
      return u->id;
    }
  }
  return std::nullopt;
}

namespace {

struct Candidate {
  const ProxyNode* proxy;
  const Uplink* effective;
};

std::uint32_t fnv1a(Ipv4Addr address) {
  std::uint32_t hash = 2166136261u;
  for (int shift = 24; shift >= 0; shift -= 8) {
    hash ^= (address.value >> shift) & 0xffu;
    hash *= 16777619u;
  }
  return hash;
}

std::int64_t weights_gcd(const std::vector<Candidate>& candidates) {
  std::int64_t g = 0;
  for (const Candidate& c : candidates) {
    g = std::gcd(g, static_cast<std::int64_t>(c.effective->nominal_kbps));
  }
  return g == 0 ? 1 : g;
}

}  // namespace

std::optional<std::string> FlowBalancer::select_proxy(
    Ipv4Addr client, const HealthView& health, const Topology& topology) {
  std::vector<Candidate> broadband;
  std::vector<Candidate> dedicated;

  std::vector<const ProxyNode*> proxies;
  proxies.reserve(topology.proxies.size());
  for (const ProxyNode& p : topology.proxies) proxies.push_back(&p);
  std::sort(proxies.begin(), proxies.end(),
            [](const ProxyNode* a, const ProxyNode* b) {
              return a->id < b->id;
            });

  for (const ProxyNode* p : proxies) {
    auto effective = reroute(*p, health, topology.uplinks);
    if (!effective) continue;
    const Uplink* u = topology.find_uplink(*effective);
    if (u->kind == UplinkKind::BroadbandAdsl) {
      broadband.push_back(Candidate{p, u});
    } else {
      dedicated.push_back(Candidate{p, u});
    }
  }

  if (broadband.empty()) {
    if (dedicated.empty()) return std::nullopt;
    // All broadband paths are gone: flows go to the proxy attached to the
    // dedicated link itself when one exists.
    for (const Candidate& c : dedicated) {
      if (c.proxy->uplink == c.effective->id) return c.proxy->id;
    }
    return dedicated.front().proxy->id;
  }

  switch (policy_) {
    case PolicyKind::RoundRobin: {
      const std::size_t index = round_robin_cursor_ % broadband.size();
      ++round_robin_cursor_;
      return broadband[index].proxy->id;
    }
    case PolicyKind::HashClientAddress: {
      const std::size_t index = fnv1a(client) % broadband.size();
      return broadband[index].proxy->id;
    }
    case PolicyKind::WeightedByBandwidth: {
      // Smooth weighted selection: each pick adds every candidate's
      // weight to its running score, takes the highest score, and
      // subtracts the weight total from the winner. Over any window of
      // total/gcd picks the counts are exactly proportional.
      const std::int64_t g = weights_gcd(broadband);
      std::int64_t total = 0;
      for (const Candidate& c : broadband) {
        total += c.effective->nominal_kbps / g;
      }
      const Candidate* best = nullptr;
      for (const Candidate& c : broadband) {
        wrr_current_[c.proxy->id] += c.effective->nominal_kbps / g;
        if (best == nullptr ||
            wrr_current_[c.proxy->id] > wrr_current_[best->proxy->id]) {
          best = &c;
        }
      }
      wrr_current_[best->proxy->id] -= total;
      return best->proxy->id;
    }
  }
  return std::nullopt;
}

std::string health_csv(const std::vector<HealthSample>& samples) {
  std::ostringstream out;
  out << "uplink,at,status,rx_octets,tx_octets\n";
  for (const HealthSample& s : samples) {
    out << s.uplink << ',' << to_ms(s.at) << ',' << to_string(s.status) << ','
        << s.rx_octets << ',' << s.tx_octets << '\n';
  }
  return std::move(out).str();
}

}  // namespace campusgate
