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

// Command-line front end: validate scenario files, run simulations,
// plan uplink subscriptions, decode cache-protocol frames, and summarize
// exported metrics.
//
// Exit codes: 0 success, 1 domain failure (infeasible plan, undecodable
// frame, no network path), 2 usage or configuration error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "campusgate/fileio.hpp"
#include "campusgate/icp.hpp"
#include "campusgate/planner.hpp"
#include "campusgate/sim.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitDomainFailure = 1;
constexpr int kExitUsage = 2;

int run_validate(const std::string& scenario_path) {
  campusgate::Scenario scenario;
  try {
    scenario =
        campusgate::load_scenario(campusgate::read_text_file(scenario_path));
  } catch (const std::exception& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return kExitUsage;
  }
  const campusgate::Topology& topo = scenario.topology;
  std::cout << "scenario OK: " << topo.vlans.size() << " vlans, "
            << topo.hosts.size() << " hosts, " << topo.proxies.size()
            << " proxies, " << topo.uplinks.size() << " uplinks, "
            << scenario.workload.n_users << " workload users, duration "
            << campusgate::to_ms(scenario.duration) / 1000 << " s\n";
  for (const campusgate::Vlan& v : topo.vlans) {
    std::cout << "  vlan " << v.id << " " << v.subnet.to_string()
              << (v.management ? " (management)" : "") << " pool "
              << v.dhcp_pool.first << "-" << v.dhcp_pool.last << "\n";
  }
  for (const campusgate::Uplink& u : topo.uplinks) {
    std::cout << "  uplink " << u.id << " " << u.nominal_kbps << " kbps 1:"
              << u.contention << "\n";
  }
  return kExitSuccess;
}

int run_simulate(const std::string& scenario_path, std::uint64_t seed,
                 const std::string& out_dir, const std::string& format) {
  campusgate::Scenario scenario;
  try {
    scenario =
        campusgate::load_scenario(campusgate::read_text_file(scenario_path));
  } catch (const std::exception& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return kExitUsage;
  }
  scenario.seed = seed;
  campusgate::Metrics metrics;
  try {
    metrics = campusgate::run(scenario);
  } catch (const campusgate::ScenarioError& e) {
    std::cerr << "scenario failed: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<std::string> files;
  if (format == "csv" || format == "both") {
    auto f = campusgate::export_metrics(metrics, campusgate::ExportFormat::Csv,
                                        out_dir);
    files.insert(files.end(), f.begin(), f.end());
  }
  if (format == "json" || format == "both") {
    auto f = campusgate::export_metrics(
        metrics, campusgate::ExportFormat::Json, out_dir);
    files.insert(files.end(), f.begin(), f.end());
  }
  std::cout << "simulated " << metrics.total_requests << " requests over "
            << metrics.duration_ms / 1000 << " s; local hits "
            << metrics.local_hits << ", sibling hits " << metrics.sibling_hits
            << ", parent fetches " << metrics.parent_fetches
            << ", origin fetches " << metrics.origin_fetches
            << ", dropped " << metrics.no_path_requests << "\n";
  for (const std::string& file : files) {
    std::cout << "wrote " << file << "\n";
  }
  return kExitSuccess;
}

int run_plan(const std::string& offers_path, int min_bandwidth,
             int min_guaranteed, int min_isps, bool require_dedicated,
             std::optional<std::int64_t> budget, int max_per_offer) {
  std::vector<campusgate::Offer> offers;
  try {
    offers =
        campusgate::load_offers(campusgate::read_text_file(offers_path));
  } catch (const std::exception& e) {
    std::cerr << "invalid offers file: " << e.what() << "\n";
    return kExitUsage;
  }
  campusgate::PlanConstraints constraints;
  constraints.min_nominal_kbps = min_bandwidth;
  constraints.min_guaranteed_kbps = min_guaranteed;
  constraints.min_distinct_isps = min_isps;
  constraints.require_dedicated = require_dedicated;
  constraints.budget_idr = budget;
  constraints.max_multiplicity_per_offer = max_per_offer;

  auto plan = campusgate::optimize(offers, constraints);
  if (!plan) {
    std::cerr << "infeasible: no subscription mix satisfies the constraints\n";
    return kExitDomainFailure;
  }
  std::cout << "count  isp  technology  kbps  IDR/month\n";
  for (const campusgate::PlanItem& item : plan->items) {
    std::cout << item.count << "x  " << item.offer.isp << "  "
              << campusgate::to_string(item.offer.technology) << "  "
              << item.offer.nominal_kbps << " kbps  "
              << item.offer.monthly_cost << " IDR\n";
  }
  std::cout << "total: " << plan->total_cost << " IDR/month, "
            << plan->total_nominal_kbps << " kbps nominal, "
            << plan->total_guaranteed_kbps << " kbps guaranteed, "
            << plan->distinct_isps << " ISP(s)\n";
  std::cout << campusgate::plan_to_json(*plan);
  return kExitSuccess;
}

int run_icp_decode(const std::string& hex_path) {
  std::vector<std::uint8_t> frame;
  try {
    frame = campusgate::icp::parse_hex(campusgate::read_text_file(hex_path));
  } catch (const std::exception& e) {
    std::cerr << "cannot read hex input: " << e.what() << "\n";
    return kExitUsage;
  }
  campusgate::icp::Message msg;
  try {
    msg = campusgate::icp::decode(frame);
  } catch (const campusgate::icp::DecodeError& e) {
    std::cerr << "undecodable frame: " << e.what() << "\n";
    return kExitDomainFailure;
  }
  std::cout << "opcode=" << campusgate::icp::to_string(msg.opcode) << "\n"
            << "version=" << static_cast<int>(msg.version) << "\n"
            << "length=" << frame.size() << "\n"
            << "request_number=" << msg.request_number << "\n"
            << "sender=" << msg.sender.to_string() << "\n";
  if (msg.opcode == campusgate::icp::Opcode::Query) {
    std::cout << "requester=" << msg.requester.to_string() << "\n";
  }
  std::cout << "url=" << msg.url << "\n";
  return kExitSuccess;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::istringstream in(campusgate::read_text_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

int run_report(const std::string& metrics_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(metrics_dir);
  std::vector<std::vector<std::string>> load;
  std::vector<std::vector<std::string>> online;
  try {
    load = read_csv((dir / "proxy_load.csv").string());
    online = read_csv((dir / "online_users.csv").string());
  } catch (const std::exception& e) {
    std::cerr << "cannot read metrics: " << e.what() << "\n";
    return kExitUsage;
  }

  std::cout << "# proxy load series (kbps = bytes_served * 8 / bin seconds)\n";
  std::cout << "bin_start_ms\tproxy\trequests\tbytes_served\tupstream_bytes\t"
               "kbps\n";
  std::map<std::string, std::pair<double, double>> peaks;  // proxy -> peak/sum
  std::map<std::string, std::size_t> bins_per_proxy;
  for (std::size_t i = 1; i < load.size(); ++i) {
    const auto& row = load[i];
    if (row.size() < 5) continue;
    const double bytes = std::stod(row[3]);
    const double kbps = bytes * 8.0 / 10000.0;  // 10 s bins, ms -> kbit/s
    std::cout << row[0] << '\t' << row[1] << '\t' << row[2] << '\t' << row[3]
              << '\t' << row[4] << '\t' << kbps << "\n";
    auto& [peak, sum] = peaks[row[1]];
    peak = std::max(peak, kbps);
    sum += kbps;
    ++bins_per_proxy[row[1]];
  }
  std::cout << "# per-proxy peaks\n";
  for (const auto& [proxy, stats] : peaks) {
    std::cout << proxy << ": peak " << stats.first << " kbps, mean "
              << stats.second / static_cast<double>(bins_per_proxy[proxy])
              << " kbps over " << bins_per_proxy[proxy] << " bins\n";
  }

  std::cout << "# online users series\n";
  std::cout << "at_ms\tactive_sessions\n";
  std::size_t peak_online = 0;
  for (std::size_t i = 1; i < online.size(); ++i) {
    const auto& row = online[i];
    if (row.size() < 2) continue;
    std::cout << row[0] << '\t' << row[1] << "\n";
    peak_online = std::max(peak_online,
                           static_cast<std::size_t>(std::stoull(row[1])));
  }
  std::cout << "# peak online users: " << peak_online << "\n";
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"campus gateway simulator and planning toolkit"};
  app.require_subcommand(1);

  std::string scenario_path;
  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();

  std::string sim_scenario;
  std::string sim_out;
  std::string sim_format = "csv";
  std::uint64_t sim_seed = 0;
  auto* simulate =
      app.add_subcommand("simulate", "run a scenario and export metrics");
  simulate->add_option("--scenario", sim_scenario, "scenario JSON file")
      ->required();
  simulate->add_option("--seed", sim_seed, "random seed (required)")
      ->required();
  simulate->add_option("--out", sim_out, "output directory")->required();
  simulate
      ->add_option("--format", sim_format, "csv, json, or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));

  std::string offers_path;
  int min_bandwidth = 0;
  int min_guaranteed = 0;
  int min_isps = 0;
  bool require_dedicated = false;
  int max_per_offer = 8;
  std::int64_t budget_value = 0;
  auto* plan =
      app.add_subcommand("plan", "choose a minimum-cost subscription mix");
  plan->add_option("--offers", offers_path, "offers JSON file")->required();
  plan->add_option("--min-bandwidth", min_bandwidth,
                   "minimum nominal kbps")
      ->required();
  plan->add_option("--min-guaranteed", min_guaranteed,
                   "minimum guaranteed (1:1-equivalent) kbps");
  plan->add_option("--min-isps", min_isps, "minimum distinct ISPs");
  plan->add_flag("--require-dedicated", require_dedicated,
                 "require at least one 1:1 subscription");
  auto* budget_opt =
      plan->add_option("--budget", budget_value, "monthly budget in IDR");
  plan->add_option("--max-per-offer", max_per_offer,
                   "multiplicity cap per offer");

  std::string hex_path;
  auto* icp_decode =
      app.add_subcommand("icp-decode", "decode a hex-encoded protocol frame");
  icp_decode->add_option("hexfile", hex_path, "file with hex octets")
      ->required();

  std::string metrics_dir;
  auto* report =
      app.add_subcommand("report", "summarize an exported metrics directory");
  report->add_option("--metrics", metrics_dir, "metrics directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (*validate) return run_validate(scenario_path);
    if (*simulate) {
      return run_simulate(sim_scenario, sim_seed, sim_out, sim_format);
    }
    if (*plan) {
      std::optional<std::int64_t> budget;
      if (budget_opt->count() > 0) budget = budget_value;
      return run_plan(offers_path, min_bandwidth, min_guaranteed, min_isps,
                      require_dedicated, budget, max_per_offer);
    }
    if (*icp_decode) return run_icp_decode(hex_path);
    if (*report) return run_report(metrics_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
