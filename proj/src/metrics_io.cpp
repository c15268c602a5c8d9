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

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "campusgate/fileio.hpp"
#include "campusgate/sim.hpp"

namespace campusgate {

namespace {

using nlohmann::json;

std::string proxy_load_csv(const Metrics& metrics) {
  struct Row {
    std::int64_t bin = 0;
    std::string proxy;
    const ProxyBin* data = nullptr;
  };
  std::vector<Row> rows;
  for (const auto& [id, stats] : metrics.per_proxy) {
    for (const ProxyBin& bin : stats.bins) {
      rows.push_back(Row{bin.bin_start_ms, id, &bin});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.bin, a.proxy) < std::tie(b.bin, b.proxy);
  });
  std::ostringstream out;
  out << "bin_start_ms,proxy,requests,bytes_served,upstream_bytes\n";
  for (const Row& row : rows) {
    out << row.bin << ',' << row.proxy << ',' << row.data->requests << ','
        << row.data->bytes_served << ',' << row.data->upstream_bytes << '\n';
  }
  return std::move(out).str();
}

std::string online_users_csv(const Metrics& metrics) {
  std::ostringstream out;
  out << "at_ms,active_sessions\n";
  for (const OnlinePoint& p : metrics.online_series) {
    out << p.at_ms << ',' << p.active_sessions << '\n';
  }
  return std::move(out).str();
}

std::string summary_csv(const Metrics& m) {
  std::ostringstream out;
  out << "key,value\n";
  out << "duration_ms," << m.duration_ms << '\n';
  out << "bin_ms," << m.bin_ms << '\n';
  out << "proxy_capacity_kbps," << m.proxy_capacity_kbps << '\n';
  out << "total_requests," << m.total_requests << '\n';
  out << "local_hits," << m.local_hits << '\n';
  out << "sibling_hits," << m.sibling_hits << '\n';
  out << "parent_fetches," << m.parent_fetches << '\n';
  out << "origin_fetches," << m.origin_fetches << '\n';
  out << "no_path_requests," << m.no_path_requests << '\n';
  out << "gateway_bytes_up," << m.gateway_bytes_up << '\n';
  out << "gateway_bytes_down," << m.gateway_bytes_down << '\n';
  out << "max_concurrent_sessions," << m.max_concurrent_sessions << '\n';
  return std::move(out).str();
}

}  // namespace

std::string metrics_to_json(const Metrics& m) {
  json doc;
  doc["duration_ms"] = m.duration_ms;
  doc["bin_ms"] = m.bin_ms;
  doc["proxy_capacity_kbps"] = m.proxy_capacity_kbps;
  doc["total_requests"] = m.total_requests;
  doc["local_hits"] = m.local_hits;
  doc["sibling_hits"] = m.sibling_hits;
  doc["parent_fetches"] = m.parent_fetches;
  doc["origin_fetches"] = m.origin_fetches;
  doc["no_path_requests"] = m.no_path_requests;
  doc["gateway_bytes_up"] = m.gateway_bytes_up;
  doc["gateway_bytes_down"] = m.gateway_bytes_down;
  doc["max_concurrent_sessions"] = m.max_concurrent_sessions;

  doc["per_proxy"] = json::object();
  for (const auto& [id, stats] : m.per_proxy) {
    json js;
    js["requests"] = stats.requests;
    js["bytes_served"] = stats.bytes_served;
    js["upstream_bytes"] = stats.upstream_bytes;
    js["bins"] = json::array();
    for (const ProxyBin& bin : stats.bins) {
      json jb;
      jb["bin_start_ms"] = bin.bin_start_ms;
      jb["requests"] = bin.requests;
      jb["bytes_served"] = bin.bytes_served;
      jb["upstream_bytes"] = bin.upstream_bytes;
      js["bins"].push_back(jb);
    }
    doc["per_proxy"][id] = js;
  }

  doc["online_series"] = json::array();
  for (const OnlinePoint& p : m.online_series) {
    doc["online_series"].push_back(
        json{{"at_ms", p.at_ms}, {"active_sessions", p.active_sessions}});
  }

  doc["health_series"] = json::array();
  for (const HealthSample& s : m.health_series) {
    doc["health_series"].push_back(json{{"uplink", s.uplink},
                                        {"at_ms", to_ms(s.at)},
                                        {"status", to_string(s.status)},
                                        {"rx_octets", s.rx_octets},
                                        {"tx_octets", s.tx_octets}});
  }

  doc["accounting"] = json::array();
  for (const AccountingRecord& r : m.accounting) {
    doc["accounting"].push_back(
        json{{"user", r.user},
             {"address", r.address.to_string()},
             {"login_time_ms", to_ms(r.login_time)},
             {"logout_time_ms", to_ms(r.logout_time)},
             {"bytes_up", r.bytes_up},
             {"bytes_down", r.bytes_down},
             {"close_reason", to_string(r.close_reason)}});
  }

  doc["serve_log"] = json::array();
  for (const ServeRecord& r : m.serve_log) {
    json jr{{"at_ms", to_ms(r.at)},     {"user", r.user},
            {"url", r.url},             {"proxy", r.proxy},
            {"source", to_string(r.source)}, {"bytes", r.bytes}};
    if (r.upstream_uplink) {
      jr["upstream_uplink"] = *r.upstream_uplink;
    } else {
      jr["upstream_uplink"] = nullptr;
    }
    doc["serve_log"].push_back(jr);
  }
  return doc.dump(2) + "\n";
}

std::vector<std::string> export_metrics(const Metrics& metrics,
                                        ExportFormat format,
                                        const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir) / name;
    write_file_atomic(path, content);
    written.push_back(path.string());
  };
  if (format == ExportFormat::Json) {
    emit("metrics.json", metrics_to_json(metrics));
    return written;
  }
  emit("proxy_load.csv", proxy_load_csv(metrics));
  emit("online_users.csv", online_users_csv(metrics));
  emit("uplink_health.csv", health_csv(metrics.health_series));
  emit("accounting.csv", accounting_csv(metrics.accounting));
  emit("summary.csv", summary_csv(metrics));
  return written;
}

}  // namespace campusgate
