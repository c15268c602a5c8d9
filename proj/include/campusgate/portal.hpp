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

#ifndef CAMPUSGATE_PORTAL_HPP_
#define CAMPUSGATE_PORTAL_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "campusgate/acl.hpp"
#include "campusgate/ipv4.hpp"
#include "campusgate/sim_time.hpp"

namespace campusgate {

// A user stays signed on while active; the portal signs them off after
// more than this much idle time.
inline constexpr SimDuration kDefaultIdleLimit = std::chrono::seconds(600);

struct Profile {
  std::string username;
  std::map<std::string, std::string> attributes;
};

class AuthError : public std::runtime_error {
 public:
  enum class Code { InvalidCredentials, BackendUnavailable };
  AuthError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Where usernames and passwords live. verify() must be a pure function
/// of backend state; it throws AuthError::BackendUnavailable when the
/// backend is offline.
class CredentialBackend {
 public:
  virtual ~CredentialBackend() = default;
  virtual bool verify(const std::string& username,
                      const std::string& password) const = 0;
  virtual std::optional<Profile> lookup(const std::string& username) const = 0;
};

/// Plain username/password table ("database mode").
class InMemoryCredentials : public CredentialBackend {
 public:
  void add_user(const std::string& username, const std::string& password);
  void set_available(bool available) { available_ = available; }

  bool verify(const std::string& username,
              const std::string& password) const override;
  std::optional<Profile> lookup(const std::string& username) const override;

 private:
  std::map<std::string, std::string> passwords_;
  bool available_ = true;
};

/// Directory-style backend ("directory mode"): entries carry arbitrary
/// attributes next to the password.
class DirectoryCredentials : public CredentialBackend {
 public:
  void add_entry(const std::string& username, const std::string& password,
                 std::map<std::string, std::string> attributes = {});
  void set_available(bool available) { available_ = available; }

  bool verify(const std::string& username,
              const std::string& password) const override;
  std::optional<Profile> lookup(const std::string& username) const override;

 private:
  struct Entry {
    std::string password;
    std::map<std::string, std::string> attributes;
  };
  std::map<std::string, Entry> entries_;
  bool available_ = true;
};

enum class CloseReason { Logout, IdleTimeout, Shutdown };

std::string to_string(CloseReason reason);

struct Session {
  std::string user;
  Ipv4Addr address;
  SimTime login_time{0};
  SimTime last_activity{0};
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  bool active = true;
  CloseReason close_reason = CloseReason::Logout;  // meaningful when !active
};

struct AccountingRecord {
  std::string user;
  Ipv4Addr address;
  SimTime login_time{0};
  SimTime logout_time{0};
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  CloseReason close_reason = CloseReason::Logout;
  bool operator==(const AccountingRecord&) const = default;
};

class StateError : public std::runtime_error {
 public:
  enum class Code { NotActive };
  StateError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Adds traffic to an active session and advances its activity clock.
void account(Session& session, std::uint64_t bytes_up, std::uint64_t bytes_down,
             SimTime now);

struct OnlineSnapshot {
  std::size_t count = 0;
  std::vector<std::string> users;  // sorted
};

/// Live session state plus the accounting log of everything that closed.
/// At most one active session per username; a re-login closes and
/// replaces the old session.
class SessionTable {
 public:
  Session& authenticate(const CredentialBackend& backend,
                        const std::string& username,
                        const std::string& password, Ipv4Addr address,
                        SimTime now);

  const Session* active_by_address(Ipv4Addr address) const;
  Session* active_by_user(const std::string& username);
  const Session* active_by_user(const std::string& username) const;

  /// Closes every session idle strictly longer than idle_limit. A session
  /// idle exactly idle_limit stays on.
  std::vector<AccountingRecord> expire_idle(
      SimTime now, SimDuration idle_limit = kDefaultIdleLimit);

  AccountingRecord close(const std::string& username, SimTime now,
                         CloseReason reason);
  std::vector<AccountingRecord> close_all(SimTime now, CloseReason reason);

  OnlineSnapshot snapshot_online() const;
  std::size_t active_count() const { return active_.size(); }
  const std::vector<AccountingRecord>& records() const { return records_; }

  /// Total bytes over active sessions and closed records combined.
  std::pair<std::uint64_t, std::uint64_t> total_bytes() const;

 private:
  std::map<std::string, Session> active_;
  std::map<Ipv4Addr, std::string> by_address_;
  std::vector<AccountingRecord> records_;
};

struct PortalAction {
  enum class Kind { RedirectToLogin, ForwardToProxy, PassVerdict };
  Kind kind = Kind::PassVerdict;
  std::string login_url;               // set for RedirectToLogin
  Verdict verdict = Verdict::Block;    // set for PassVerdict
};

/// Gateway-side decision for one packet: web traffic is forwarded to the
/// proxy tier when the source has a session and captured to the login
/// page otherwise; everything else falls through to the access list.
PortalAction intercept(const PacketMeta& pkt, const SessionTable& sessions,
                       const RuleSet& rules, const std::string& login_url,
                       std::optional<int> src_vlan = std::nullopt);

/// CSV with columns user, address, login_time, logout_time, bytes_up,
/// bytes_down, close_reason (times in milliseconds).
std::string accounting_csv(const std::vector<AccountingRecord>& records);

}  // namespace campusgate

#endif  // CAMPUSGATE_PORTAL_HPP_
