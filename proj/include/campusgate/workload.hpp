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

#ifndef CAMPUSGATE_WORKLOAD_HPP_
#define CAMPUSGATE_WORKLOAD_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "campusgate/sim_time.hpp"

namespace campusgate {

/// Deterministic random source with explicitly pinned transforms so that
/// traces never depend on standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();

  /// Exponential with the given mean (> 0).
  double exponential(double mean);

  /// Normal(mean, stddev) via Box-Muller.
  double normal(double mean, double stddev);

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Ranks 1..universe with probability proportional to 1 / rank^exponent.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t universe, double exponent);

  /// Maps a uniform [0,1) draw to a rank in [1, universe].
  std::size_t sample(double u01) const;

  double probability(std::size_t rank) const;
  std::size_t universe() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

struct WorkloadSpec {
  int n_users = 0;
  double arrival = 0.0;          // requests per second per user
  int url_universe = 0;
  double popularity = 1.0;       // Zipf exponent s
  std::uint64_t mean_object_bytes = 8192;
  std::uint64_t min_object_bytes = 256;
  std::uint64_t max_object_bytes = 262144;
  std::uint64_t request_bytes = 300;  // upstream bytes per client request
};

struct Request {
  SimTime at{0};
  int user = 0;        // index in [0, n_users)
  std::string url;
  std::uint64_t bytes = 0;  // object size an origin fetch would return
  bool operator==(const Request&) const = default;
};

/// Deterministic trace for (spec, seed): per-user exponential
/// inter-arrivals merged into one time-ordered stream, Zipf-popular URLs
/// ("http://origin.example/objNNNN"), and one log-normal size per URL
/// clamped to [min_object_bytes, max_object_bytes].
std::vector<Request> generate_workload(const WorkloadSpec& spec,
                                       std::uint64_t seed,
                                       SimDuration duration);

}  // namespace campusgate

#endif  // CAMPUSGATE_WORKLOAD_HPP_
