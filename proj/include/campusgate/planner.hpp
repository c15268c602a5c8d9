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

#ifndef CAMPUSGATE_PLANNER_HPP_
#define CAMPUSGATE_PLANNER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace campusgate {

enum class LinkTechnology { Adsl, DedicatedWireless, BroadbandWireless, FiberOptic };

std::string to_string(LinkTechnology technology);
std::optional<LinkTechnology> parse_technology(const std::string& name);

/// One subscribable service from an ISP's price list. contention is the
/// sharing ratio denominator (1 = dedicated, 4 = shared "1:4" service);
/// when the ISP quotes no ratio the guaranteed floor is unknown and the
/// offer contributes nothing to guaranteed-bandwidth constraints.
struct Offer {
  std::string isp;
  LinkTechnology technology = LinkTechnology::Adsl;
  std::int64_t monthly_cost = 0;  // IDR per month
  int nominal_kbps = 0;
  std::optional<int> contention;
  bool available = true;
  std::string note;
  bool operator==(const Offer&) const = default;
};

struct PlanConstraints {
  int min_nominal_kbps = 0;
  int min_guaranteed_kbps = 0;
  int min_distinct_isps = 0;
  bool require_dedicated = false;
  std::optional<std::int64_t> budget_idr;
  int max_multiplicity_per_offer = 8;
};

struct PlanItem {
  Offer offer;
  int count = 1;
  bool operator==(const PlanItem&) const = default;
};

struct Plan {
  std::vector<PlanItem> items;
  std::int64_t total_cost = 0;
  int total_nominal_kbps = 0;
  int total_guaranteed_kbps = 0;
  int distinct_isps = 0;
  bool has_dedicated = false;
};

struct PlanSummary {
  std::int64_t cost = 0;
  int nominal_kbps = 0;
  int guaranteed_kbps = 0;
  int distinct_isps = 0;
  bool has_dedicated = false;
  bool operator==(const PlanSummary&) const = default;
};

/// Aggregate cost/bandwidth/diversity figures for a set of plan items.
PlanSummary evaluate(const std::vector<PlanItem>& items);

/// Guaranteed kilobits/second one subscription contributes:
/// floor(nominal / contention), or 0 when the ratio is unknown.
int guaranteed_kbps(const Offer& offer);

/// Exact minimum-cost subscription mix meeting the constraints, over
/// available offers only, allowing up to max_multiplicity_per_offer
/// copies of each. Returns nullopt when no mix satisfies them. Ties on
/// cost break toward higher nominal bandwidth, then fewer subscriptions.
std::optional<Plan> optimize(const std::vector<Offer>& offers,
                             const PlanConstraints& constraints);

/// Parses a JSON array of offers (fields: isp, technology, monthly_cost,
/// nominal_kbps, contention, available, note).
std::vector<Offer> load_offers(const std::string& json_text);

std::string serialize_offers(const std::vector<Offer>& offers);
std::string plan_to_json(const Plan& plan);

}  // namespace campusgate

#endif  // CAMPUSGATE_PLANNER_HPP_
