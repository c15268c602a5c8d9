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

#include "campusgate/ipv4.hpp"

#include <charconv>

namespace campusgate {

namespace {

// Parses a decimal integer in [0, limit] from text, advancing pos.
// Returns std::nullopt on malformed input.
std::optional<std::uint32_t> parse_number(std::string_view text,
                                          std::size_t& pos,
                                          std::uint32_t limit) {
  if (pos >= text.size()) return std::nullopt;
  std::uint32_t value = 0;
  const char* begin = text.data() + pos;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr == begin || value > limit) return std::nullopt;
  pos += static_cast<std::size_t>(ptr - begin);
  return value;
}

}  // namespace

std::optional<Ipv4Addr> Ipv4Addr::parse(std::string_view text) {
  std::size_t pos = 0;
  std::uint32_t value = 0;
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (pos >= text.size() || text[pos] != '.') return std::nullopt;
      ++pos;
    }
    auto part = parse_number(text, pos, 255);
    if (!part) return std::nullopt;
    value = (value << 8) | *part;
  }
  if (pos != text.size()) return std::nullopt;
  return Ipv4Addr{value};
}

std::string Ipv4Addr::to_string() const {
  std::string out;
  out.reserve(15);
  for (int shift = 24; shift >= 0; shift -= 8) {
    if (!out.empty()) out.push_back('.');
    out += std::to_string((value >> shift) & 0xffu);
  }
  return out;
}

std::optional<Ipv4Prefix> Ipv4Prefix::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto addr = Ipv4Addr::parse(text.substr(0, slash));
  if (!addr) return std::nullopt;
  std::string_view len_text = text.substr(slash + 1);
  std::size_t pos = 0;
  auto len = parse_number(len_text, pos, 32);
  if (!len || pos != len_text.size()) return std::nullopt;
  return Ipv4Prefix{*addr, static_cast<int>(*len)};
}

std::string Ipv4Prefix::to_string() const {
  return address.to_string() + "/" + std::to_string(length);
}

std::uint32_t Ipv4Prefix::mask() const {
  if (length <= 0) return 0;
  if (length >= 32) return 0xffffffffu;
  return ~((1u << (32 - length)) - 1u);
}

Ipv4Addr Ipv4Prefix::network() const {
  return Ipv4Addr{address.value & mask()};
}

bool Ipv4Prefix::contains(Ipv4Addr a) const {
  return (a.value & mask()) == network().value;
}

bool Ipv4Prefix::overlaps(const Ipv4Prefix& other) const {
  const Ipv4Prefix& shorter = length <= other.length ? *this : other;
  const Ipv4Prefix& longer = length <= other.length ? other : *this;
  return shorter.contains(longer.network());
}

std::uint32_t Ipv4Prefix::host_count() const {
  if (length >= 31) return length == 31 ? 2 : 1;
  return (1u << (32 - length)) - 2u;
}

Ipv4Addr Ipv4Prefix::host(std::uint32_t n) const {
  return Ipv4Addr{network().value + n};
}

}  // namespace campusgate
