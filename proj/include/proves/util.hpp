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

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "proves/errors.hpp"

namespace proves {

using Bytes = std::vector<uint8_t>;

// ---------------------------------------------------------------------------
// Big-endian scalar packing. All wire formats in this project are big-endian.
// ---------------------------------------------------------------------------

inline void put_u16(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void put_u32(Bytes& out, uint32_t v) {
  for (int sh = 24; sh >= 0; sh -= 8) out.push_back(static_cast<uint8_t>(v >> sh));
}

inline void put_u64(Bytes& out, uint64_t v) {
  for (int sh = 56; sh >= 0; sh -= 8) out.push_back(static_cast<uint8_t>(v >> sh));
}

inline void put_f64(Bytes& out, double v) {
  put_u64(out, std::bit_cast<uint64_t>(v));
}

// Cursor-style reader that throws on truncation.
class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const Bytes& b) : ByteReader(b.data(), b.size()) {}

  size_t remaining() const { return size_ - pos_; }
  bool done() const { return pos_ == size_; }

  uint8_t u8() { return check(1), data_[pos_++]; }

  uint16_t u16() {
    check(2);
    uint16_t v = (uint16_t(data_[pos_]) << 8) | data_[pos_ + 1];
    pos_ += 2;
    return v;
  }

  uint32_t u32() {
    check(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 4;
    return v;
  }

  uint64_t u64() {
    check(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 8;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  Bytes bytes(size_t n) {
    check(n);
    Bytes b(data_ + pos_, data_ + pos_ + n);
    pos_ += n;
    return b;
  }

  std::string str(size_t n) {
    check(n);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
    pos_ += n;
    return s;
  }

 private:
  void check(size_t n) const {
    if (size_ - pos_ < n) fail(Errc::malformed_container, "truncated input");
  }

  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Hex / base64
// ---------------------------------------------------------------------------

inline std::string to_hex(const uint8_t* data, size_t size) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(size * 2);
  for (size_t i = 0; i < size; ++i) {
    s.push_back(digits[data[i] >> 4]);
    s.push_back(digits[data[i] & 0xf]);
  }
  return s;
}

inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }

inline Bytes from_hex(const std::string& s) {
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (s.size() % 2 != 0) fail(Errc::invalid_argument, "odd hex length");
  Bytes out;
  out.reserve(s.size() / 2);
  for (size_t i = 0; i < s.size(); i += 2) {
    int hi = nib(s[i]), lo = nib(s[i + 1]);
    if (hi < 0 || lo < 0) fail(Errc::invalid_argument, "bad hex digit");
    out.push_back(static_cast<uint8_t>(hi << 4 | lo));
  }
  return out;
}

// Standard alphabet, '=' padded.
inline std::string base64_encode(const uint8_t* data, size_t size) {
  static const char* tab = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((size + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= size; i += 3) {
    uint32_t v = (uint32_t(data[i]) << 16) | (uint32_t(data[i + 1]) << 8) | data[i + 2];
    out.push_back(tab[v >> 18]);
    out.push_back(tab[(v >> 12) & 63]);
    out.push_back(tab[(v >> 6) & 63]);
    out.push_back(tab[v & 63]);
  }
  size_t rem = size - i;
  if (rem == 1) {
    uint32_t v = uint32_t(data[i]) << 16;
    out.push_back(tab[v >> 18]);
    out.push_back(tab[(v >> 12) & 63]);
    out += "==";
  } else if (rem == 2) {
    uint32_t v = (uint32_t(data[i]) << 16) | (uint32_t(data[i + 1]) << 8);
    out.push_back(tab[v >> 18]);
    out.push_back(tab[(v >> 12) & 63]);
    out.push_back(tab[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

inline std::string base64_encode(const Bytes& b) { return base64_encode(b.data(), b.size()); }

inline Bytes base64_decode(const std::string& s) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (s.size() % 4 != 0) fail(Errc::invalid_argument, "base64 length not a multiple of 4");
  Bytes out;
  out.reserve(s.size() / 4 * 3);
  for (size_t i = 0; i < s.size(); i += 4) {
    int pad = 0;
    uint32_t v = 0;
    for (size_t j = 0; j < 4; ++j) {
      char c = s[i + j];
      if (c == '=') {
        if (i + 4 != s.size() || j < 2) fail(Errc::invalid_argument, "misplaced base64 padding");
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) fail(Errc::invalid_argument, "data after base64 padding");
      int d = val(c);
      if (d < 0) fail(Errc::invalid_argument, "bad base64 character");
      v = (v << 6) | uint32_t(d);
    }
    out.push_back(static_cast<uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<uint8_t>(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// UTC timestamps. ISO-8601 at seconds precision, trailing 'Z'.
// ---------------------------------------------------------------------------

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian date.
inline int64_t days_from_civil(int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

inline void civil_from_days(int64_t z, int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

}  // namespace detail

inline std::string format_iso8601(uint64_t epoch_seconds) {
  int64_t t = static_cast<int64_t>(epoch_seconds);
  int64_t days = t / 86400;
  int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int64_t y;
  unsigned m, d;
  detail::civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>(rem / 60 % 60), static_cast<long long>(rem % 60));
  return buf;
}

// Strict "YYYY-MM-DDTHH:MM:SSZ".
inline uint64_t parse_iso8601(const std::string& s) {
  auto bad = [&]() { fail(Errc::invalid_argument, "bad ISO-8601 timestamp: " + s); };
  if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':' || s[19] != 'Z')
    bad();
  auto num = [&](size_t pos, size_t len) -> int64_t {
    int64_t v = 0;
    for (size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') bad();
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  int64_t y = num(0, 4);
  unsigned mo = static_cast<unsigned>(num(5, 2));
  unsigned d = static_cast<unsigned>(num(8, 2));
  int64_t hh = num(11, 2), mm = num(14, 2), ss = num(17, 2);
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || hh > 23 || mm > 59 || ss > 60) bad();
  int64_t t = detail::days_from_civil(y, mo, d) * 86400 + hh * 3600 + mm * 60 + ss;
  if (t < 0) bad();
  return static_cast<uint64_t>(t);
}

// ---------------------------------------------------------------------------
// Deterministic hashing helpers for synthetic rendering / noise.
// ---------------------------------------------------------------------------

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t v) {
  return splitmix64(seed ^ (v + 0x9E3779B97F4A7C15ull + (seed << 6) + (seed >> 2)));
}

// Uniform double in [0, 1) from a hash stream.
inline double hash_unit(uint64_t h) {
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

// ---------------------------------------------------------------------------
// Small file helpers
// ---------------------------------------------------------------------------

inline Bytes read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::io_error, "cannot open " + path);
  f.seekg(0, std::ios::end);
  std::streamoff n = f.tellg();
  f.seekg(0);
  Bytes b(static_cast<size_t>(n));
  if (n > 0) f.read(reinterpret_cast<char*>(b.data()), n);
  if (!f) fail(Errc::io_error, "cannot read " + path);
  return b;
}

inline void write_file(const std::string& path, const uint8_t* data, size_t size) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Errc::io_error, "cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!f) fail(Errc::io_error, "cannot write " + path);
}

inline void write_file(const std::string& path, const Bytes& b) {
  write_file(path, b.data(), b.size());
}

inline void write_file(const std::string& path, const std::string& s) {
  write_file(path, reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

}  // namespace proves
