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

#include "campusgate/planner.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace campusgate {

namespace {

using nlohmann::json;

}  // namespace

std::string to_string(LinkTechnology technology) {
  switch (technology) {
    case LinkTechnology::Adsl:
      return "adsl";
    case LinkTechnology::DedicatedWireless:
      return "dedicated_wireless";
    case LinkTechnology::BroadbandWireless:
      return "broadband_wireless";
    case LinkTechnology::FiberOptic:
      return "fiber_optic";
  }
  return "adsl";
}

std::optional<LinkTechnology> parse_technology(const std::string& name) {
  if (name == "adsl") return LinkTechnology::Adsl;
  if (name == "dedicated_wireless") return LinkTechnology::DedicatedWireless;
  if (name == "broadband_wireless") return LinkTechnology::BroadbandWireless;
  if (name == "fiber_optic") return LinkTechnology::FiberOptic;
  return std::nullopt;
}

int guaranteed_kbps(const Offer& offer) {
  if (!offer.contention) return 0;  // unknown ratio: no guaranteed floor
  return offer.nominal_kbps / *offer.contention;
}

PlanSummary evaluate(const std::vector<PlanItem>& items) {
  PlanSummary summary;
  std::map<std::string, int> isps;
  for (const PlanItem& item : items) {
    summary.cost += item.offer.monthly_cost * item.count;
    summary.nominal_kbps += item.offer.nominal_kbps * item.count;
    summary.guaranteed_kbps += guaranteed_kbps(item.offer) * item.count;
    if (item.count > 0) {
      isps[item.offer.isp] += item.count;
      if (item.offer.contention && *item.offer.contention == 1) {
        summary.has_dedicated = true;
      }
    }
  }
  summary.distinct_isps = static_cast<int>(isps.size());
  return summary;
}

namespace {

struct Indexed {
  Offer offer;
  std::size_t input_index;
  int per_unit_guaranteed;
};

struct SearchState {
  std::vector<int> counts;
  std::int64_t cost = 0;
  std::int64_t nominal = 0;
  std::int64_t guaranteed = 0;
  std::map<std::string, int> isp_counts;
  int items = 0;
  bool dedicated = false;
};

struct BestPlan {
  bool found = false;
  std::vector<int> counts;
  std::int64_t cost = 0;
  std::int64_t nominal = 0;
  int items = 0;
  std::vector<std::string> isp_multiset;     // sorted labels, one per unit
  std::vector<std::size_t> index_multiset;   // sorted input indices per unit
};

std::vector<std::string> isp_multiset_of(const std::vector<Indexed>& offers,
                                         const std::vector<int>& counts) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < offers.size(); ++i) {
    for (int k = 0; k < counts[i]; ++k) labels.push_back(offers[i].offer.isp);
  }
  std::sort(labels.begin(), labels.end());
  return labels;
}

std::vector<std::size_t> index_multiset_of(const std::vector<Indexed>& offers,
                                           const std::vector<int>& counts) {
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < offers.size(); ++i) {
    for (int k = 0; k < counts[i]; ++k) indices.push_back(offers[i].input_index);
  }
  std::sort(indices.begin(), indices.end());
  return indices;
}

/// true when the candidate beats the incumbent under the full tie order:
/// cost, then higher nominal, then fewer subscriptions, then ISP label
/// multiset, then original offer order.
bool improves(const BestPlan& incumbent, std::int64_t cost,
              std::int64_t nominal, int items,
              const std::vector<std::string>& isps,
              const std::vector<std::size_t>& indices) {
  if (!incumbent.found) return true;
  if (cost != incumbent.cost) return cost < incumbent.cost;
  if (nominal != incumbent.nominal) return nominal > incumbent.nominal;
  if (items != incumbent.items) return items < incumbent.items;
  if (isps != incumbent.isp_multiset) return isps < incumbent.isp_multiset;
  return indices < incumbent.index_multiset;
}

class Search {
 public:
  Search(std::vector<Indexed> offers, const PlanConstraints& constraints)
      : offers_(std::move(offers)), c_(constraints) {
    const std::size_t n = offers_.size();
    suffix_nominal_.assign(n + 1, 0);
    suffix_guaranteed_.assign(n + 1, 0);
    suffix_dedicated_.assign(n + 1, false);
    suffix_isps_.assign(n + 1, {});
    for (std::size_t i = n; i-- > 0;) {
      const Offer& o = offers_[i].offer;
      const auto cap = static_cast<std::int64_t>(c_.max_multiplicity_per_offer);
      suffix_nominal_[i] = suffix_nominal_[i + 1] + cap * o.nominal_kbps;
      suffix_guaranteed_[i] =
          suffix_guaranteed_[i + 1] + cap * offers_[i].per_unit_guaranteed;
      suffix_dedicated_[i] =
          suffix_dedicated_[i + 1] || (o.contention && *o.contention == 1);
      suffix_isps_[i] = suffix_isps_[i + 1];
      suffix_isps_[i].insert(o.isp);
    }
  }

  std::optional<std::vector<int>> run() {
    SearchState state;
    state.counts.assign(offers_.size(), 0);
    descend(0, state);
    if (!best_.found) return std::nullopt;
    return best_.counts;
  }

 private:
  bool feasible_leaf(const SearchState& s) const {
    if (s.nominal < c_.min_nominal_kbps) return false;
    if (s.guaranteed < c_.min_guaranteed_kbps) return false;
    if (static_cast<int>(s.isp_counts.size()) < c_.min_distinct_isps) {
      return false;
    }
    if (c_.require_dedicated && !s.dedicated) return false;
    return true;
  }

  void record_if_better(const SearchState& s) {
    auto isps = isp_multiset_of(offers_, s.counts);
    auto indices = index_multiset_of(offers_, s.counts);
    if (improves(best_, s.cost, s.nominal, s.items, isps, indices)) {
      best_.found = true;
      best_.counts = s.counts;
      best_.cost = s.cost;
      best_.nominal = s.nominal;
      best_.items = s.items;
      best_.isp_multiset = std::move(isps);
      best_.index_multiset = std::move(indices);
    }
  }

  void descend(std::size_t i, SearchState& s) {
    if (best_.found && s.cost > best_.cost) return;
    if (c_.budget_idr && s.cost > *c_.budget_idr) return;
    // Even taking every remaining offer at the cap cannot reach the
    // minima: abandon this branch.
    if (s.nominal + suffix_nominal_[i] < c_.min_nominal_kbps) return;
    if (s.guaranteed + suffix_guaranteed_[i] < c_.min_guaranteed_kbps) return;
    if (c_.require_dedicated && !s.dedicated && !suffix_dedicated_[i]) return;
    {
      std::size_t reachable = s.isp_counts.size();
      for (const std::string& isp : suffix_isps_[i]) {
        if (!s.isp_counts.contains(isp)) ++reachable;
      }
      if (static_cast<int>(reachable) < c_.min_distinct_isps) return;
    }

    if (i == offers_.size()) {
      if (feasible_leaf(s)) record_if_better(s);
      return;
    }

    const Offer& o = offers_[i].offer;
    const int unit_guaranteed = offers_[i].per_unit_guaranteed;
    const bool unit_dedicated = o.contention && *o.contention == 1;
    for (int count = 0; count <= c_.max_multiplicity_per_offer; ++count) {
      if (count > 0) {
        s.counts[i] = count;
        s.cost += o.monthly_cost;
        s.nominal += o.nominal_kbps;
        s.guaranteed += unit_guaranteed;
        s.items += 1;
        if (count == 1) {
          s.isp_counts[o.isp] += 1;
          if (unit_dedicated) s.dedicated = true;
        }
        if (best_.found && s.cost > best_.cost) break;
        if (c_.budget_idr && s.cost > *c_.budget_idr) break;
      }
      descend(i + 1, s);
      if (count == c_.max_multiplicity_per_offer) break;
    }
    // Undo whatever this frame accumulated.
    const int taken = s.counts[i];
    if (taken > 0) {
      s.cost -= static_cast<std::int64_t>(taken) * o.monthly_cost;
      s.nominal -= static_cast<std::int64_t>(taken) * o.nominal_kbps;
      s.guaranteed -= static_cast<std::int64_t>(taken) * unit_guaranteed;
      s.items -= taken;
      if (--s.isp_counts[o.isp] <= 0) {
        // The dedicated flag may have come from this offer alone.
        s.isp_counts.erase(o.isp);
      }
      if (unit_dedicated) {
        bool still = false;
        for (std::size_t j = 0; j < offers_.size(); ++j) {
          if (j == i) continue;
          const Offer& other = offers_[j].offer;
          if (s.counts[j] > 0 && other.contention && *other.contention == 1) {
            still = true;
            break;
          }
        }
        s.dedicated = still;
      }
      s.counts[i] = 0;
    }
  }

  std::vector<Indexed> offers_;
  PlanConstraints c_;
  std::vector<std::int64_t> suffix_nominal_;
  std::vector<std::int64_t> suffix_guaranteed_;
  std::vector<char> suffix_dedicated_;
  std::vector<std::set<std::string>> suffix_isps_;
  BestPlan best_;
};

}  // namespace

std::optional<Plan> optimize(const std::vector<Offer>& offers,
                             const PlanConstraints& constraints) {
  std::vector<Indexed> eligible;
  for (std::size_t i = 0; i < offers.size(); ++i) {
    if (!offers[i].available) continue;
    eligible.push_back(Indexed{offers[i], i, guaranteed_kbps(offers[i])});
  }
  // Search high-bandwidth offers first so feasibility bounds bite early;
  // result order is restored from input indices afterwards.
  std::sort(eligible.begin(), eligible.end(),
            [](const Indexed& a, const Indexed& b) {
              if (a.offer.nominal_kbps != b.offer.nominal_kbps) {
                return a.offer.nominal_kbps > b.offer.nominal_kbps;
              }
              return a.input_index < b.input_index;
            });

  Search search(eligible, constraints);
  auto counts = search.run();
  if (!counts) return std::nullopt;

  std::vector<std::pair<std::size_t, PlanItem>> picked;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    if ((*counts)[i] > 0) {
      picked.emplace_back(eligible[i].input_index,
                          PlanItem{eligible[i].offer, (*counts)[i]});
    }
  }
  std::sort(picked.begin(), picked.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Plan plan;
  for (auto& [index, item] : picked) plan.items.push_back(std::move(item));
  const PlanSummary summary = evaluate(plan.items);
  plan.total_cost = summary.cost;
  plan.total_nominal_kbps = summary.nominal_kbps;
  plan.total_guaranteed_kbps = summary.guaranteed_kbps;
  plan.distinct_isps = summary.distinct_isps;
  plan.has_dedicated = summary.has_dedicated;
  return plan;
}

std::vector<Offer> load_offers(const std::string& json_text) {
  const json doc = json::parse(json_text);
  if (!doc.is_array()) {
    throw std::invalid_argument("offers file must be a JSON array");
  }
  std::vector<Offer> offers;
  for (const json& jo : doc) {
    Offer o;
    o.isp = jo.at("isp").get<std::string>();
    auto tech = parse_technology(jo.at("technology").get<std::string>());
    if (!tech) {
      throw std::invalid_argument("unknown technology in offers file");
    }
    o.technology = *tech;
    o.monthly_cost = jo.at("monthly_cost").get<std::int64_t>();
    o.nominal_kbps = jo.at("nominal_kbps").get<int>();
    if (jo.contains("contention") && !jo.at("contention").is_null()) {
      o.contention = jo.at("contention").get<int>();
    }
    o.available = jo.value("available", true);
    o.note = jo.value("note", std::string());
    if (o.monthly_cost <= 0 || o.nominal_kbps <= 0 ||
        (o.contention && *o.contention < 1)) {
      throw std::invalid_argument("offer out of range: " + o.isp);
    }
    offers.push_back(std::move(o));
  }
  return offers;
}

namespace {

json offer_to_json(const Offer& o) {
  json jo;
  jo["isp"] = o.isp;
  jo["technology"] = to_string(o.technology);
  jo["monthly_cost"] = o.monthly_cost;
  jo["nominal_kbps"] = o.nominal_kbps;
  if (o.contention) {
    jo["contention"] = *o.contention;
  } else {
    jo["contention"] = nullptr;
  }
  jo["available"] = o.available;
  jo["note"] = o.note;
  return jo;
}

}  // namespace

std::string serialize_offers(const std::vector<Offer>& offers) {
  json doc = json::array();
  for (const Offer& o : offers) doc.push_back(offer_to_json(o));
  return doc.dump(2) + "\n";
}

std::string plan_to_json(const Plan& plan) {
  json doc;
  doc["items"] = json::array();
  for (const PlanItem& item : plan.items) {
    json ji;
    ji["offer"] = offer_to_json(item.offer);
    ji["count"] = item.count;
    doc["items"].push_back(ji);
  }
  doc["total_cost"] = plan.total_cost;
  doc["total_nominal_kbps"] = plan.total_nominal_kbps;
  doc["total_guaranteed_kbps"] = plan.total_guaranteed_kbps;
  doc["distinct_isps"] = plan.distinct_isps;
  doc["has_dedicated"] = plan.has_dedicated;
  return doc.dump(2) + "\n";
}

}  // namespace campusgate
