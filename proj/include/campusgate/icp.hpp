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

#ifndef CAMPUSGATE_ICP_HPP_
#define CAMPUSGATE_ICP_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "campusgate/ipv4.hpp"
#include "campusgate/sim_time.hpp"

namespace campusgate::icp {

// Fixed header: opcode(1) version(1) length(2) request_number(4)
// options(4) option_data(4) sender(4). Multi-octet fields big-endian.
inline constexpr std::size_t kHeaderBytes = 20;
inline constexpr std::uint8_t kVersion = 2;

enum class Opcode : std::uint8_t {
  Query = 1,
  Hit = 2,
  Miss = 3,
  Err = 4,
  MissNoFetch = 14,
  Denied = 15,
};

std::string to_string(Opcode opcode);

struct Message {
  Opcode opcode = Opcode::Query;
  std::uint8_t version = kVersion;
  std::uint32_t request_number = 0;
  std::uint32_t options = 0;
  std::uint32_t option_data = 0;
  Ipv4Addr sender{};
  Ipv4Addr requester{};  // meaningful only for Query; zero otherwise
  std::string url;
  bool operator==(const Message&) const = default;
};

class EncodeError : public std::runtime_error {
 public:
  enum class Code { UrlTooLong };
  EncodeError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

class DecodeError : public std::runtime_error {
 public:
  enum class Code { Truncated, BadVersion, UnknownOpcode, MissingNul };
  DecodeError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Serializes a message; the header length field counts the whole frame
/// including the URL's trailing NUL.
std::vector<std::uint8_t> encode(const Message& message);

/// Parses a frame. Octets past the header length are ignored; a frame
/// shorter than its own length field is Truncated; the payload must end
/// with a NUL at length - 1.
Message decode(std::span<const std::uint8_t> frame);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_hex(const std::string& text);

/// One cache peer as seen by the query fan-out: whether it currently
/// holds a fresh copy of a URL, and how long its reply takes to arrive.
struct PeerEndpoint {
  std::string id;
  Ipv4Addr address{};
  bool reachable = true;
  std::function<bool(const std::string& url)> holds_fresh;
  SimDuration reply_latency = std::chrono::milliseconds(5);
};

struct PeerDecision {
  /// Peer chosen to supply the object; nullopt means every peer missed
  /// (or nothing arrived before the deadline).
  std::optional<std::string> sibling;
};

struct ReplyArrival {
  SimTime at{0};
  Message message;
  std::string peer_id;
};

/// Picks the winning reply for request_number: the first Hit to arrive
/// by (arrival time, then peer id); replies after sent_at + timeout and
/// replies carrying a different request number are ignored.
PeerDecision decide(std::uint32_t request_number,
                    std::vector<ReplyArrival> replies, SimTime sent_at,
                    SimDuration timeout);

/// Encodes a Query to every reachable peer, collects their replies as
/// real frames, and decides. Unreachable peers never answer.
PeerDecision query_peers(Ipv4Addr requester_address, Ipv4Addr sender_address,
                         std::uint32_t request_number, const std::string& url,
                         const std::vector<PeerEndpoint>& peers, SimTime now,
                         SimDuration timeout = std::chrono::seconds(2));

}  // namespace campusgate::icp

#endif  // CAMPUSGATE_ICP_HPP_
