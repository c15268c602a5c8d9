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

#ifndef CAMPUSGATE_IPV4_HPP_
#define CAMPUSGATE_IPV4_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace campusgate {

/// An IPv4 address held in host byte order.
struct Ipv4Addr {
  std::uint32_t value = 0;

  static std::optional<Ipv4Addr> parse(std::string_view text);
  std::string to_string() const;

  auto operator<=>(const Ipv4Addr&) const = default;
};

/// An IPv4 prefix, e.g. 192.168.2.0/24. The address is stored as given;
/// network() masks off the host bits.
struct Ipv4Prefix {
  Ipv4Addr address;
  int length = 0;  // mask length, 0..32

  static std::optional<Ipv4Prefix> parse(std::string_view text);
  std::string to_string() const;

  std::uint32_t mask() const;
  Ipv4Addr network() const;
  bool contains(Ipv4Addr a) const;
  bool overlaps(const Ipv4Prefix& other) const;

  /// Number of usable host numbers (excludes network and broadcast for
  /// prefixes shorter than /31).
  std::uint32_t host_count() const;
  /// Address of host number n within the prefix (n = 1 is the first host).
  Ipv4Addr host(std::uint32_t n) const;

  auto operator<=>(const Ipv4Prefix&) const = default;
};

}  // namespace campusgate

#endif  // CAMPUSGATE_IPV4_HPP_
