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

#include "campusgate/icp.hpp"

#include <algorithm>
#include <cctype>

namespace campusgate::icp {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return (static_cast<std::uint32_t>(b[at]) << 24) |
         (static_cast<std::uint32_t>(b[at + 1]) << 16) |
         (static_cast<std::uint32_t>(b[at + 2]) << 8) |
         static_cast<std::uint32_t>(b[at + 3]);
}

bool known_opcode(std::uint8_t raw) {
  switch (raw) {
    case 1:
    case 2:
    case 3:
    case 4:
    case 14:
    case 15:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string to_string(Opcode opcode) {
  switch (opcode) {
    case Opcode::Query:
      return "Query";
    case Opcode::Hit:
      return "Hit";
    case Opcode::Miss:
      return "Miss";
    case Opcode::Err:
      return "Err";
    case Opcode::MissNoFetch:
      return "MissNoFetch";
    case Opcode::Denied:
      return "Denied";
  }
  return "Unknown";
}

std::vector<std::uint8_t> encode(const Message& message) {
  const bool is_query = message.opcode == Opcode::Query;
  const std::size_t total = kHeaderBytes + (is_query ? 4 : 0) +
                            message.url.size() + 1;
  if (total > 0xffff) {
    throw EncodeError(EncodeError::Code::UrlTooLong,
                      "encoded frame would exceed 65535 octets");
  }
  std::vector<std::uint8_t> out;
  out.reserve(total);
  out.push_back(static_cast<std::uint8_t>(message.opcode));
  out.push_back(message.version);
  put_u16(out, static_cast<std::uint16_t>(total));
  put_u32(out, message.request_number);
  put_u32(out, message.options);
  put_u32(out, message.option_data);
  put_u32(out, message.sender.value);
  if (is_query) {
    put_u32(out, message.requester.value);
  }
  out.insert(out.end(), message.url.begin(), message.url.end());
  out.push_back(0);
  return out;
}

Message decode(std::span<const std::uint8_t> frame) {
  if (frame.size() < kHeaderBytes) {
    throw DecodeError(DecodeError::Code::Truncated,
                      "frame shorter than the 20-octet header");
  }
  const std::uint8_t raw_opcode = frame[0];
  const std::uint8_t version = frame[1];
  const std::uint16_t length = get_u16(frame, 2);
  if (version != kVersion) {
    throw DecodeError(DecodeError::Code::BadVersion,
                      "unsupported version " + std::to_string(version));
  }
  if (!known_opcode(raw_opcode)) {
    throw DecodeError(DecodeError::Code::UnknownOpcode,
                      "unknown opcode " + std::to_string(raw_opcode));
  }
  Message msg;
  msg.opcode = static_cast<Opcode>(raw_opcode);
  msg.version = version;
  const bool is_query = msg.opcode == Opcode::Query;
  const std::size_t min_length = kHeaderBytes + (is_query ? 4 : 0) + 1;
  if (length < min_length || frame.size() < length) {
    throw DecodeError(DecodeError::Code::Truncated,
                      "frame shorter than its length field");
  }
  msg.request_number = get_u32(frame, 4);
  msg.options = get_u32(frame, 8);
  msg.option_data = get_u32(frame, 12);
  msg.sender = Ipv4Addr{get_u32(frame, 16)};
  std::size_t url_begin = kHeaderBytes;
  if (is_query) {
    msg.requester = Ipv4Addr{get_u32(frame, 20)};
    url_begin += 4;
  }
  if (frame[length - 1] != 0) {
    throw DecodeError(DecodeError::Code::MissingNul,
                      "payload does not end with NUL");
  }
  msg.url.assign(frame.begin() + static_cast<std::ptrdiff_t>(url_begin),
                 frame.begin() + static_cast<std::ptrdiff_t>(length - 1));
  if (msg.url.find('\0') != std::string::npos) {
    throw DecodeError(DecodeError::Code::MissingNul,
                      "embedded NUL before end of payload");
  }
  return msg;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::vector<std::uint8_t> parse_hex(const std::string& text) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::vector<std::uint8_t> out;
  int pending = -1;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int v = nibble(c);
    if (v < 0) {
      throw std::invalid_argument("invalid hex character in input");
    }
    if (pending < 0) {
      pending = v;
    } else {
      out.push_back(static_cast<std::uint8_t>((pending << 4) | v));
      pending = -1;
    }
  }
  if (pending >= 0) {
    throw std::invalid_argument("odd number of hex digits");
  }
  return out;
}

PeerDecision decide(std::uint32_t request_number,
                    std::vector<ReplyArrival> replies, SimTime sent_at,
                    SimDuration timeout) {
  const SimTime deadline = sent_at + timeout;
  std::stable_sort(replies.begin(), replies.end(),
                   [](const ReplyArrival& a, const ReplyArrival& b) {
                     if (a.at != b.at) return a.at < b.at;
                     return a.peer_id < b.peer_id;
                   });
  for (const ReplyArrival& reply : replies) {
    if (reply.at > deadline) break;
    if (reply.message.request_number != request_number) continue;
    if (reply.message.opcode == Opcode::Hit) {
      return PeerDecision{reply.peer_id};
    }
  }
  return PeerDecision{std::nullopt};
}

PeerDecision query_peers(Ipv4Addr requester_address, Ipv4Addr sender_address,
                         std::uint32_t request_number, const std::string& url,
                         const std::vector<PeerEndpoint>& peers, SimTime now,
                         SimDuration timeout) {
  Message query;
  query.opcode = Opcode::Query;
  query.request_number = request_number;
  query.sender = sender_address;
  query.requester = requester_address;
  query.url = url;
  const std::vector<std::uint8_t> query_frame = encode(query);

  std::vector<ReplyArrival> replies;
  for (const PeerEndpoint& peer : peers) {
    if (!peer.reachable) continue;  // the query is lost; no reply ever comes
    const Message received = decode(query_frame);
    Message reply;
    reply.opcode = peer.holds_fresh && peer.holds_fresh(received.url)
                       ? Opcode::Hit
                       : Opcode::Miss;
    reply.request_number = received.request_number;
    reply.sender = peer.address;
    reply.url = received.url;
    const std::vector<std::uint8_t> reply_frame = encode(reply);
    replies.push_back(
        ReplyArrival{now + peer.reply_latency, decode(reply_frame), peer.id});
  }
  return decide(request_number, std::move(replies), now, timeout);
}

}  // namespace campusgate::icp
