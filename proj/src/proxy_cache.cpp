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

#include "campusgate/proxy_cache.hpp"

#include <stdexcept>

#include "campusgate/icp.hpp"

namespace campusgate {

CacheStore::CacheStore(std::optional<std::size_t> capacity_entries)
    : capacity_(capacity_entries) {}

std::vector<CacheEntry> CacheStore::insert(const CacheEntry& entry,
                                           SimTime now) {
  if (auto it = index_.find(entry.url); it != index_.end()) {
    order_.erase(it->second);
    index_.erase(it);
  }
  CacheEntry stored = entry;
  stored.last_access = now;
  order_.push_front(stored);
  index_[entry.url] = order_.begin();

  std::vector<CacheEntry> evicted;
  if (capacity_) {
    while (order_.size() > *capacity_) {
      evicted.push_back(order_.back());
      index_.erase(order_.back().url);
      order_.pop_back();
    }
  }
  return evicted;
}

LookupResult CacheStore::lookup(const std::string& url, SimTime now) const {
  auto it = index_.find(url);
  if (it == index_.end()) {
    return LookupResult{Freshness::Absent, std::nullopt};
  }
  const CacheEntry& entry = *it->second;
  // Fresh up to and including the instant the TTL elapses.
  if (now - entry.fetched_at <= entry.ttl) {
    return LookupResult{Freshness::Fresh, entry};
  }
  return LookupResult{Freshness::Stale, std::nullopt};
}

bool CacheStore::contains_fresh(const std::string& url, SimTime now) const {
  return lookup(url, now).freshness == Freshness::Fresh;
}

void CacheStore::touch(const std::string& url, SimTime now) {
  auto it = index_.find(url);
  if (it == index_.end()) return;
  it->second->last_access = now;
  order_.splice(order_.begin(), order_, it->second);
  it->second = order_.begin();
}

std::vector<CacheEntry> CacheStore::entries_by_recency() const {
  return {order_.begin(), order_.end()};
}

std::string to_string(ServeSource source) {
  switch (source) {
    case ServeSource::LocalHit:
      return "local_hit";
    case ServeSource::SiblingHit:
      return "sibling_hit";
    case ServeSource::ParentFetch:
      return "parent_fetch";
    case ServeSource::OriginFetch:
      return "origin_fetch";
  }
  return "origin_fetch";
}

ProxyCluster::ProxyCluster(std::vector<ProxyNode> nodes, Config config,
                           std::vector<Ipv4Addr> addresses)
    : nodes_(std::move(nodes)), config_(config) {
  if (addresses.size() != nodes_.size()) {
    throw std::invalid_argument(
        "one address per proxy node is required");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    members_.emplace(
        nodes_[i].id,
        Member{nodes_[i], addresses[i],
               CacheStore(nodes_[i].capacity_entries), true});
  }
}

ProxyCluster::Member& ProxyCluster::member(const std::string& proxy_id) {
  auto it = members_.find(proxy_id);
  if (it == members_.end()) {
    throw std::invalid_argument("unknown proxy: " + proxy_id);
  }
  return it->second;
}

const ProxyCluster::Member& ProxyCluster::member(
    const std::string& proxy_id) const {
  auto it = members_.find(proxy_id);
  if (it == members_.end()) {
    throw std::invalid_argument("unknown proxy: " + proxy_id);
  }
  return it->second;
}

CacheStore& ProxyCluster::store(const std::string& proxy_id) {
  return member(proxy_id).store;
}

const CacheStore& ProxyCluster::store(const std::string& proxy_id) const {
  return member(proxy_id).store;
}

void ProxyCluster::set_reachable(const std::string& proxy_id, bool reachable) {
  member(proxy_id).reachable = reachable;
}

Ipv4Addr ProxyCluster::address_of(const std::string& proxy_id) const {
  return member(proxy_id).address;
}

std::optional<std::string> ProxyCluster::sibling_with_fresh(
    const Member& asking, const std::string& url, SimTime now) {
  std::vector<icp::PeerEndpoint> peers;
  for (const ProxyNode& node : nodes_) {
    if (node.id == asking.node.id || node.mode != ProxyMode::Sibling) continue;
    const Member& peer = member(node.id);
    icp::PeerEndpoint endpoint;
    endpoint.id = node.id;
    endpoint.address = peer.address;
    endpoint.reachable = peer.reachable;
    endpoint.reply_latency = config_.icp_reply_latency;
    const CacheStore* peer_store = &peer.store;
    endpoint.holds_fresh = [peer_store, now](const std::string& u) {
      return peer_store->contains_fresh(u, now);
    };
    peers.push_back(std::move(endpoint));
  }
  ++request_number_;
  return icp::query_peers(asking.address, asking.address, request_number_, url,
                          peers, now, config_.icp_timeout)
      .sibling;
}

ServeResult ProxyCluster::fetch_via_uplink(Member& m, const std::string& url,
                                           SimTime now,
                                           const UplinkResolver& resolve,
                                           std::uint64_t origin_bytes,
                                           const UplinkUsageFn& on_uplink,
                                           ServeSource source) {
  std::optional<std::string> uplink =
      resolve ? resolve(m.node) : std::make_optional(m.node.uplink);
  if (!uplink) {
    throw UpstreamUnavailable("proxy " + m.node.id +
                              " has no usable uplink for " + url);
  }
  CacheEntry entry{url, origin_bytes, now, config_.ttl, now};
  m.store.insert(entry, now);
  if (on_uplink) {
    on_uplink(*uplink, origin_bytes, 0);
  }
  ServeResult result;
  result.source = source;
  result.proxy = m.node.id;
  result.bytes = origin_bytes;
  result.upstream_bytes = origin_bytes;
  result.upstream_uplink = *uplink;
  return result;
}

ServeResult ProxyCluster::handle_request(const std::string& proxy_id,
                                         const std::string& url, SimTime now,
                                         const UplinkResolver& resolve,
                                         std::uint64_t origin_bytes,
                                         const UplinkUsageFn& on_uplink) {
  Member& m = member(proxy_id);

  LookupResult local = m.store.lookup(url, now);
  if (local.freshness == Freshness::Fresh) {
    m.store.touch(url, now);
    ServeResult result;
    result.source = ServeSource::LocalHit;
    result.proxy = proxy_id;
    result.bytes = local.entry->size_bytes;
    return result;
  }

  if (m.node.mode == ProxyMode::Child) {
    for (const ProxyNode& node : nodes_) {
      if (node.mode != ProxyMode::Parent) continue;
      Member& parent = member(node.id);
      if (!parent.reachable) break;  // fall back to a direct fetch below

      LookupResult in_parent = parent.store.lookup(url, now);
      ServeResult result;
      result.source = ServeSource::ParentFetch;
      result.proxy = proxy_id;
      result.peer = parent.node.id;
      if (in_parent.freshness == Freshness::Fresh) {
        parent.store.touch(url, now);
        CacheEntry copy = *in_parent.entry;  // keeps the original age
        m.store.insert(copy, now);
        result.bytes = copy.size_bytes;
        result.upstream_uplink =
            resolve ? resolve(parent.node)
                    : std::make_optional(parent.node.uplink);
        if (!result.upstream_uplink) result.upstream_uplink = parent.node.uplink;
        return result;
      }
      // The parent itself goes to the origin on our behalf.
      ServeResult parent_fetch = fetch_via_uplink(
          parent, url, now, resolve, origin_bytes, on_uplink,
          ServeSource::ParentFetch);
      CacheEntry copy{url, origin_bytes, now, config_.ttl, now};
      m.store.insert(copy, now);
      result.bytes = origin_bytes;
      result.upstream_bytes = parent_fetch.upstream_bytes;
      result.upstream_uplink = parent_fetch.upstream_uplink;
      return result;
    }
  }

  if (m.node.mode == ProxyMode::Sibling && config_.sibling_cooperation) {
    if (auto peer_id = sibling_with_fresh(m, url, now)) {
      Member& peer = member(*peer_id);
      LookupResult in_peer = peer.store.lookup(url, now);
      peer.store.touch(url, now);  // a served entry counts as accessed
      CacheEntry copy = *in_peer.entry;  // keeps the original age
      m.store.insert(copy, now);
      ServeResult result;
      result.source = ServeSource::SiblingHit;
      result.proxy = proxy_id;
      result.peer = *peer_id;
      result.bytes = copy.size_bytes;
      return result;
    }
  }

  return fetch_via_uplink(m, url, now, resolve, origin_bytes, on_uplink,
                          ServeSource::OriginFetch);
}

}  // namespace campusgate
