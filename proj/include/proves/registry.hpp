// Copyright 2026 The proves Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>

#include "proves/crypto.hpp"
#include "proves/errors.hpp"
#include "proves/types.hpp"
#include "proves/util.hpp"

namespace proves {

struct RegistryEntry {
  Bytes public_key;
  // A signing date strictly after this UTC timestamp is refused.
  std::optional<uint64_t> revoked_effective;
};

inline void validate_device_id(const std::string& id) {
  if (id.empty() || id.size() > kMaxDeviceIdBytes)
    fail(Errc::invalid_argument, "device_id length out of range");
  for (char c : id)
    if (static_cast<unsigned char>(c) < 0x20)
      fail(Errc::invalid_argument, "device_id contains control characters");
}

// Device trust store. Optionally backed by an append-only log file with one
// tab-separated record per line:
//   REG <device_id> <base64 SEC1 public key>
//   REV <device_id> <ISO-8601 effective date>
class TrustRegistry {
 public:
  TrustRegistry() = default;

  explicit TrustRegistry(const std::string& log_path) : log_path_(log_path) {
    load_log();
    log_.open(log_path_, std::ios::app);
    if (!log_) fail(Errc::io_error, "cannot open registry log " + log_path_);
  }

  void register_device(const std::string& device_id, const Bytes& public_key) {
    validate_device_id(device_id);
    validate_public_key(public_key);
    std::unique_lock lock(mu_);
    if (entries_.count(device_id)) fail(Errc::duplicate_device, device_id);
    entries_[device_id] = RegistryEntry{public_key, std::nullopt};
    append_log("REG\t" + device_id + "\t" + base64_encode(public_key));
  }

  // Idempotent; repeated revocations keep the earliest effective date.
  void revoke_device(const std::string& device_id, uint64_t effective) {
    std::unique_lock lock(mu_);
    auto it = entries_.find(device_id);
    if (it == entries_.end()) fail(Errc::unknown_device, device_id);
    uint64_t eff = effective;
    if (it->second.revoked_effective) eff = std::min(eff, *it->second.revoked_effective);
    it->second.revoked_effective = eff;
    append_log("REV\t" + device_id + "\t" + format_iso8601(effective));
  }

  RevocationStatus revocation_status(const std::string& device_id, uint64_t signed_at) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(device_id);
    if (it == entries_.end()) return RevocationStatus::Refused;
    if (it->second.revoked_effective) {
      if (signed_at > *it->second.revoked_effective) return RevocationStatus::Refused;
      return RevocationStatus::SignedBeforeRevocation;
    }
    return RevocationStatus::Trusted;
  }

  std::optional<RegistryEntry> lookup(const std::string& device_id) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(device_id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  size_t size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
  }

 private:
  void append_log(const std::string& line) {
    if (log_path_.empty()) return;
    log_ << line << '\n';
    log_.flush();
    if (!log_) fail(Errc::io_error, "cannot append to registry log " + log_path_);
  }

  void load_log() {
    std::ifstream in(log_path_);
    if (!in) return;  // first boot
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::string action, id, value;
      if (!std::getline(ss, action, '\t') || !std::getline(ss, id, '\t') ||
          !std::getline(ss, value))
        fail(Errc::io_error, "malformed registry log line " + std::to_string(lineno));
      if (action == "REG") {
        Bytes pub = base64_decode(value);
        validate_public_key(pub);
        if (entries_.count(id))
          fail(Errc::io_error, "duplicate registration in log line " + std::to_string(lineno));
        entries_[id] = RegistryEntry{pub, std::nullopt};
      } else if (action == "REV") {
        auto it = entries_.find(id);
        if (it == entries_.end())
          fail(Errc::io_error, "revocation of unknown device in log line " + std::to_string(lineno));
        uint64_t eff = parse_iso8601(value);
        if (it->second.revoked_effective) eff = std::min(eff, *it->second.revoked_effective);
        it->second.revoked_effective = eff;
      } else {
        fail(Errc::io_error, "unknown registry log action in line " + std::to_string(lineno));
      }
    }
  }

  mutable std::shared_mutex mu_;
  std::map<std::string, RegistryEntry> entries_;
  std::string log_path_;
  std::ofstream log_;
};

}  // namespace proves
