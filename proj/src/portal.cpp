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

#include "campusgate/portal.hpp"

#include <sstream>

namespace campusgate {

void InMemoryCredentials::add_user(const std::string& username,
                                   const std::string& password) {
  passwords_[username] = password;
}

bool InMemoryCredentials::verify(const std::string& username,
                                 const std::string& password) const {
  if (!available_) {
    throw AuthError(AuthError::Code::BackendUnavailable,
                    "credential database is offline");
  }
  auto it = passwords_.find(username);
  return it != passwords_.end() && it->second == password;
}

std::optional<Profile> InMemoryCredentials::lookup(
    const std::string& username) const {
  if (!available_) {
    throw AuthError(AuthError::Code::BackendUnavailable,
                    "credential database is offline");
  }
  if (!passwords_.contains(username)) return std::nullopt;
  return Profile{username, {}};
}

void DirectoryCredentials::add_entry(
    const std::string& username, const std::string& password,
    std::map<std::string, std::string> attributes) {
  entries_[username] = Entry{password, std::move(attributes)};
}

bool DirectoryCredentials::verify(const std::string& username,
                                  const std::string& password) const {
  if (!available_) {
    throw AuthError(AuthError::Code::BackendUnavailable,
                    "directory is offline");
  }
  auto it = entries_.find(username);
  return it != entries_.end() && it->second.password == password;
}

std::optional<Profile> DirectoryCredentials::lookup(
    const std::string& username) const {
  if (!available_) {
    throw AuthError(AuthError::Code::BackendUnavailable,
                    "directory is offline");
  }
  auto it = entries_.find(username);
  if (it == entries_.end()) return std::nullopt;
  return Profile{username, it->second.attributes};
}

std::string to_string(CloseReason reason) {
  switch (reason) {
    case CloseReason::Logout:
      return "logout";
    case CloseReason::IdleTimeout:
      return "idle_timeout";
    case CloseReason::Shutdown:
      return "shutdown";
  }
  return "logout";
}

void account(Session& session, std::uint64_t bytes_up,
             std::uint64_t bytes_down, SimTime now) {
  if (!session.active) {
    throw StateError(StateError::Code::NotActive,
                     "cannot account traffic to a closed session");
  }
  session.bytes_up += bytes_up;
  session.bytes_down += bytes_down;
  session.last_activity = now;
}

namespace {

AccountingRecord make_record(const Session& s, SimTime now,
                             CloseReason reason) {
  return AccountingRecord{s.user,     s.address,    s.login_time, now,
                          s.bytes_up, s.bytes_down, reason};
}

}  // namespace

Session& SessionTable::authenticate(const CredentialBackend& backend,
                                    const std::string& username,
                                    const std::string& password,
                                    Ipv4Addr address, SimTime now) {
  if (!backend.verify(username, password)) {
    throw AuthError(AuthError::Code::InvalidCredentials,
                    "bad credentials for " + username);
  }
  if (auto it = active_.find(username); it != active_.end()) {
    records_.push_back(make_record(it->second, now, CloseReason::Logout));
    by_address_.erase(it->second.address);
    active_.erase(it);
  }
  // A different user still signed on from this address is displaced: the
  // address can only carry one session.
  if (auto addr_it = by_address_.find(address); addr_it != by_address_.end()) {
    auto old = active_.find(addr_it->second);
    if (old != active_.end()) {
      records_.push_back(make_record(old->second, now, CloseReason::Logout));
      active_.erase(old);
    }
    by_address_.erase(addr_it);
  }
  Session session;
  session.user = username;
  session.address = address;
  session.login_time = now;
  session.last_activity = now;
  auto [it, inserted] = active_.emplace(username, std::move(session));
  by_address_[address] = username;
  return it->second;
}

const Session* SessionTable::active_by_address(Ipv4Addr address) const {
  auto it = by_address_.find(address);
  if (it == by_address_.end()) return nullptr;
  auto sit = active_.find(it->second);
  return sit == active_.end() ? nullptr : &sit->second;
}

Session* SessionTable::active_by_user(const std::string& username) {
  auto it = active_.find(username);
  return it == active_.end() ? nullptr : &it->second;
}

const Session* SessionTable::active_by_user(const std::string& username) const {
  auto it = active_.find(username);
  return it == active_.end() ? nullptr : &it->second;
}

std::vector<AccountingRecord> SessionTable::expire_idle(
    SimTime now, SimDuration idle_limit) {
  std::vector<AccountingRecord> closed;
  for (auto it = active_.begin(); it != active_.end();) {
    // "More than" the limit: a session idle exactly idle_limit stays on.
    if (now - it->second.last_activity > idle_limit) {
      closed.push_back(make_record(it->second, now, CloseReason::IdleTimeout));
      by_address_.erase(it->second.address);
      it = active_.erase(it);
    } else {
      ++it;
    }
  }
  records_.insert(records_.end(), closed.begin(), closed.end());
  return closed;
}

AccountingRecord SessionTable::close(const std::string& username, SimTime now,
                                     CloseReason reason) {
  auto it = active_.find(username);
  if (it == active_.end()) {
    throw StateError(StateError::Code::NotActive,
                     "no active session for " + username);
  }
  AccountingRecord record = make_record(it->second, now, reason);
  by_address_.erase(it->second.address);
  active_.erase(it);
  records_.push_back(record);
  return record;
}

std::vector<AccountingRecord> SessionTable::close_all(SimTime now,
                                                      CloseReason reason) {
  std::vector<AccountingRecord> closed;
  for (const auto& [user, session] : active_) {
    closed.push_back(make_record(session, now, reason));
  }
  active_.clear();
  by_address_.clear();
  records_.insert(records_.end(), closed.begin(), closed.end());
  return closed;
}

OnlineSnapshot SessionTable::snapshot_online() const {
  OnlineSnapshot snap;
  snap.count = active_.size();
  for (const auto& [user, session] : active_) {
    snap.users.push_back(user);  // map iteration keeps users sorted
  }
  return snap;
}

std::pair<std::uint64_t, std::uint64_t> SessionTable::total_bytes() const {
  std::uint64_t up = 0;
  std::uint64_t down = 0;
  for (const auto& [user, session] : active_) {
    up += session.bytes_up;
    down += session.bytes_down;
  }
  for (const AccountingRecord& r : records_) {
    up += r.bytes_up;
    down += r.bytes_down;
  }
  return {up, down};
}

PortalAction intercept(const PacketMeta& pkt, const SessionTable& sessions,
                       const RuleSet& rules, const std::string& login_url,
                       std::optional<int> src_vlan) {
  if (is_web_port(pkt.dst_port)) {
    if (sessions.active_by_address(pkt.src) != nullptr) {
      return PortalAction{PortalAction::Kind::ForwardToProxy, "",
                          Verdict::Forward};
    }
    return PortalAction{PortalAction::Kind::RedirectToLogin, login_url,
                        Verdict::CaptureToPortal};
  }
  const bool has_session = sessions.active_by_address(pkt.src) != nullptr;
  return PortalAction{PortalAction::Kind::PassVerdict, "",
                      classify(rules, pkt, has_session, src_vlan)};
}

std::string accounting_csv(const std::vector<AccountingRecord>& records) {
  std::ostringstream out;
  out << "user,address,login_time,logout_time,bytes_up,bytes_down,"
         "close_reason\n";
  for (const AccountingRecord& r : records) {
    out << r.user << ',' << r.address.to_string() << ','
        << to_ms(r.login_time) << ',' << to_ms(r.logout_time) << ','
        << r.bytes_up << ',' << r.bytes_down << ','
        << to_string(r.close_reason) << '\n';
  }
  return std::move(out).str();
}

}  // namespace campusgate
