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

#ifndef CAMPUSGATE_PROXY_CACHE_HPP_
#define CAMPUSGATE_PROXY_CACHE_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "campusgate/ipv4.hpp"
#include "campusgate/sim_time.hpp"
#include "campusgate/topology.hpp"

namespace campusgate {

inline constexpr SimDuration kDefaultCacheTtl = std::chrono::seconds(3600);

struct CacheEntry {
  std::string url;
  std::uint64_t size_bytes = 0;
  SimTime fetched_at{0};
  SimDuration ttl = kDefaultCacheTtl;
  SimTime last_access{0};
  bool operator==(const CacheEntry&) const = default;
};

enum class Freshness { Fresh, Stale, Absent };

struct LookupResult {
  Freshness freshness = Freshness::Absent;
  std::optional<CacheEntry> entry;  // populated only when Fresh
};

/// Bounded object store with least-recently-used eviction. An entry is
/// fresh while now - fetched_at <= ttl (the boundary instant is still
/// fresh). lookup() never mutates recency; callers touch() on a serve.
class CacheStore {
 public:
  explicit CacheStore(std::optional<std::size_t> capacity_entries);

  /// Inserts or replaces; replacing refreshes recency. Returns entries
  /// evicted to respect capacity, oldest first.
  std::vector<CacheEntry> insert(const CacheEntry& entry, SimTime now);

  LookupResult lookup(const std::string& url, SimTime now) const;
  bool contains_fresh(const std::string& url, SimTime now) const;

  /// Marks url most recently used (no-op when absent).
  void touch(const std::string& url, SimTime now);

  std::size_t size() const { return order_.size(); }
  std::optional<std::size_t> capacity() const { return capacity_; }

  /// Entries in recency order, most recent first (for inspection/tests).
  std::vector<CacheEntry> entries_by_recency() const;

 private:
  std::optional<std::size_t> capacity_;
  std::list<CacheEntry> order_;  // front = most recently used
  std::map<std::string, std::list<CacheEntry>::iterator> index_;
};

enum class ServeSource { LocalHit, SiblingHit, ParentFetch, OriginFetch };

std::string to_string(ServeSource source);

struct ServeResult {
  ServeSource source = ServeSource::OriginFetch;
  std::string proxy;                         // proxy that served the client
  std::string peer;                          // sibling/parent that supplied it
  std::uint64_t bytes = 0;                   // object size delivered
  std::uint64_t upstream_bytes = 0;          // bytes actually fetched upstream
  std::optional<std::string> upstream_uplink; // upstream path, when one exists
};

class UpstreamUnavailable : public std::runtime_error {
 public:
  explicit UpstreamUnavailable(const std::string& what)
      : std::runtime_error(what) {}
};

/// Maps a proxy to the uplink it should currently use, or nullopt when no
/// uplink is usable (the request then fails with UpstreamUnavailable).
using UplinkResolver = std::function<std::optional<std::string>(const ProxyNode&)>;

/// Observes real upstream fetches: bytes fetched down and request bytes up
/// on the named uplink.
using UplinkUsageFn =
    std::function<void(const std::string& uplink, std::uint64_t bytes_down,
                       std::uint64_t bytes_up)>;

/// A set of cooperating caches in front of the uplinks. Siblings resolve
/// misses between themselves over the cache protocol before going to the
/// origin; child-mode proxies forward misses to a parent-mode proxy.
class ProxyCluster {
 public:
  struct Config {
    SimDuration ttl = kDefaultCacheTtl;
    bool sibling_cooperation = true;
    SimDuration icp_timeout = std::chrono::seconds(2);
    SimDuration icp_reply_latency = std::chrono::milliseconds(5);
  };

  ProxyCluster(std::vector<ProxyNode> nodes, Config config,
               std::vector<Ipv4Addr> addresses);

  /// Serves url through proxy_id at time now. origin_bytes is the object
  /// size an origin fetch would produce. resolve maps a proxy to its
  /// effective uplink; on_uplink (optional) is told about real fetches.
  ServeResult handle_request(const std::string& proxy_id,
                             const std::string& url, SimTime now,
                             const UplinkResolver& resolve,
                             std::uint64_t origin_bytes,
                             const UplinkUsageFn& on_uplink = {});

  CacheStore& store(const std::string& proxy_id);
  const CacheStore& store(const std::string& proxy_id) const;

  /// Marks a proxy reachable/unreachable for sibling queries.
  void set_reachable(const std::string& proxy_id, bool reachable);

  const std::vector<ProxyNode>& nodes() const { return nodes_; }
  Ipv4Addr address_of(const std::string& proxy_id) const;
  std::uint32_t last_request_number() const { return request_number_; }

 private:
  struct Member {
    ProxyNode node;
    Ipv4Addr address;
    CacheStore store;
    bool reachable = true;
  };

  Member& member(const std::string& proxy_id);
  const Member& member(const std::string& proxy_id) const;
  std::optional<std::string> sibling_with_fresh(const Member& asking,
                                                const std::string& url,
                                                SimTime now);
  ServeResult fetch_via_uplink(Member& m, const std::string& url, SimTime now,
                               const UplinkResolver& resolve,
                               std::uint64_t origin_bytes,
                               const UplinkUsageFn& on_uplink,
                               ServeSource source);

  std::vector<ProxyNode> nodes_;
  Config config_;
  std::map<std::string, Member> members_;
  std::uint32_t request_number_ = 0;
};

}  // namespace campusgate

#endif  // CAMPUSGATE_PROXY_CACHE_HPP_
