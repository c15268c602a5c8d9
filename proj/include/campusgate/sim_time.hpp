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

#ifndef CAMPUSGATE_SIM_TIME_HPP_
#define CAMPUSGATE_SIM_TIME_HPP_

#include <chrono>
#include <cstdint>

namespace campusgate {

// Simulation clock. Time zero is the start of a run. All timestamps and
// durations are integral milliseconds, so event ordering and boundary
// comparisons are exact.
using SimTime = std::chrono::milliseconds;
using SimDuration = std::chrono::milliseconds;

inline constexpr std::int64_t to_ms(SimDuration d) { return d.count(); }

}  // namespace campusgate

#endif  // CAMPUSGATE_SIM_TIME_HPP_
