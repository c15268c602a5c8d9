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

#include "campusgate/workload.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace campusgate {

double Rng::uniform01() {
  // Top 53 bits of the engine output scaled into [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::exponential(double mean) {
  // log1p(-u) is exact near u = 0 and never takes log of zero.
  return -mean * std::log1p(-uniform01());
}

double Rng::normal(double mean, double stddev) {
  if (have_spare_) {
    have_spare_ = false;
    return mean + stddev * spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return mean + stddev * r * std::cos(theta);
}

std::uint64_t Rng::below(std::uint64_t n) {
  return n == 0 ? 0 : engine_() % n;
}

ZipfSampler::ZipfSampler(std::size_t universe, double exponent) {
  if (universe == 0) {
    throw std::invalid_argument("Zipf universe must be positive");
  }
  cdf_.resize(universe);
  double total = 0.0;
  for (std::size_t rank = 1; rank <= universe; ++rank) {
    total += 1.0 / std::pow(static_cast<double>(rank), exponent);
    cdf_[rank - 1] = total;
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;  // guard against accumulated rounding
}

std::size_t ZipfSampler::sample(double u01) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u01);
  if (it == cdf_.end()) --it;
  return static_cast<std::size_t>(it - cdf_.begin()) + 1;
}

double ZipfSampler::probability(std::size_t rank) const {
  if (rank < 1 || rank > cdf_.size()) return 0.0;
  const double below = rank == 1 ? 0.0 : cdf_[rank - 2];
  return cdf_[rank - 1] - below;
}

std::vector<Request> generate_workload(const WorkloadSpec& spec,
                                       std::uint64_t seed,
                                       SimDuration duration) {
  std::vector<Request> trace;
  if (spec.n_users <= 0 || spec.url_universe <= 0 || spec.arrival <= 0.0 ||
      duration <= SimDuration::zero()) {
    return trace;
  }

  Rng rng(seed);

  // One size per URL, so repeated requests for a URL agree on its size.
  // Log-normal around the configured mean, clamped to the configured range.
  const double sigma = 1.0;
  const double mu =
      std::log(static_cast<double>(spec.mean_object_bytes)) - sigma * sigma / 2;
  std::vector<std::uint64_t> sizes(static_cast<std::size_t>(spec.url_universe));
  for (std::uint64_t& size : sizes) {
    const double drawn = std::exp(rng.normal(mu, sigma));
    const double clamped =
        std::clamp(drawn, static_cast<double>(spec.min_object_bytes),
                   static_cast<double>(spec.max_object_bytes));
    size = static_cast<std::uint64_t>(std::llround(clamped));
  }

  ZipfSampler zipf(static_cast<std::size_t>(spec.url_universe),
                   spec.popularity);

  const double mean_gap_s = 1.0 / spec.arrival;
  using NextArrival = std::pair<double, int>;  // (time in ms, user)
  std::priority_queue<NextArrival, std::vector<NextArrival>,
                      std::greater<NextArrival>>
      heap;
  for (int user = 0; user < spec.n_users; ++user) {
    heap.emplace(rng.exponential(mean_gap_s) * 1000.0, user);
  }

  const double duration_ms = static_cast<double>(to_ms(duration));
  while (!heap.empty()) {
    const auto [at_ms, user] = heap.top();
    heap.pop();
    if (at_ms >= duration_ms) continue;  // this user is done

    const std::size_t rank = zipf.sample(rng.uniform01());
    Request request;
    request.at = SimTime(static_cast<std::int64_t>(std::llround(at_ms)));
    request.user = user;
    request.url = "http://origin.example/obj" + std::to_string(rank);
    request.bytes = sizes[rank - 1];
    trace.push_back(std::move(request));

    heap.emplace(at_ms + rng.exponential(mean_gap_s) * 1000.0, user);
  }
  return trace;
}

}  // namespace campusgate
