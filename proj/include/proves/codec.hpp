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

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "proves/errors.hpp"
#include "proves/types.hpp"
#include "proves/util.hpp"

namespace proves {

// Canonical payload layout, all fields big-endian:
//   u32 width | u32 height | u8 scene | u64 signed_at
//   u16 device_id length | device_id bytes
//   u16 face count
//   per face: f64 x_min | f64 y_min | f64 x_max | f64 y_max
//             u16 dimension | dimension * f64 components
// Doubles are IEEE-754 binary64, byte order big-endian. The encoding is
// injective on valid payloads; decode consumes every byte or rejects.

inline Bytes encode_payload(const SemanticPayload& p) {
  validate_payload(p);
  if (p.faces.size() > std::numeric_limits<uint16_t>::max())
    fail(Errc::field_overflow, "face count exceeds u16");
  Bytes out;
  put_u32(out, p.width);
  put_u32(out, p.height);
  out.push_back(static_cast<uint8_t>(p.scene));
  put_u64(out, p.signed_at);
  put_u16(out, static_cast<uint16_t>(p.device_id.size()));
  out.insert(out.end(), p.device_id.begin(), p.device_id.end());
  put_u16(out, static_cast<uint16_t>(p.faces.size()));
  for (const auto& f : p.faces) {
    if (f.feature.size() > std::numeric_limits<uint16_t>::max())
      fail(Errc::field_overflow, "feature dimension exceeds u16");
    put_f64(out, f.bbox.x_min);
    put_f64(out, f.bbox.y_min);
    put_f64(out, f.bbox.x_max);
    put_f64(out, f.bbox.y_max);
    put_u16(out, static_cast<uint16_t>(f.feature.size()));
    for (double v : f.feature) put_f64(out, v);
  }
  return out;
}

inline SemanticPayload decode_payload(const Bytes& bytes) {
  ByteReader r(bytes);
  SemanticPayload p;
  try {
    p.width = r.u32();
    p.height = r.u32();
    uint8_t scene = r.u8();
    if (scene > 1) fail(Errc::malformed_container, "unknown scene label");
    p.scene = static_cast<SceneLabel>(scene);
    p.signed_at = r.u64();
    uint16_t id_len = r.u16();
    if (id_len == 0 || id_len > kMaxDeviceIdBytes)
      fail(Errc::malformed_container, "device_id length out of range");
    p.device_id = r.str(id_len);
    uint16_t count = r.u16();
    p.faces.reserve(count);
    for (uint16_t i = 0; i < count; ++i) {
      FaceRecord f;
      f.bbox.x_min = r.f64();
      f.bbox.y_min = r.f64();
      f.bbox.x_max = r.f64();
      f.bbox.y_max = r.f64();
      uint16_t dim = r.u16();
      if (dim == 0) fail(Errc::malformed_container, "zero feature dimension");
      f.feature.resize(dim);
      for (uint16_t j = 0; j < dim; ++j) f.feature[j] = r.f64();
      p.faces.push_back(std::move(f));
    }
  } catch (const Error& e) {
    if (e.code() == Errc::malformed_container) throw;
    fail(Errc::malformed_container, e.what());
  }
  if (!r.done()) fail(Errc::malformed_container, "trailing bytes after payload");
  try {
    validate_payload(p);
  } catch (const Error& e) {
    fail(Errc::malformed_container, e.what());
  }
  return p;
}

// ---------------------------------------------------------------------------
// Signature container:
//   magic "PROVSIG1" | u8 version (=1) | u32 payload length | payload bytes
//   | u16 signature length | DER ECDSA signature bytes
// ---------------------------------------------------------------------------

constexpr char kContainerMagic[9] = "PROVSIG1";
constexpr uint8_t kContainerVersion = 1;

struct SignatureContainer {
  uint8_t version = kContainerVersion;
  Bytes payload_bytes;
  Bytes signature;

  bool operator==(const SignatureContainer&) const = default;
};

inline Bytes encode_container(const SignatureContainer& c) {
  if (c.payload_bytes.size() > std::numeric_limits<uint32_t>::max())
    fail(Errc::field_overflow, "payload length exceeds u32");
  if (c.signature.empty()) fail(Errc::malformed_container, "empty signature");
  if (c.signature.size() > std::numeric_limits<uint16_t>::max())
    fail(Errc::field_overflow, "signature length exceeds u16");
  Bytes out;
  out.insert(out.end(), kContainerMagic, kContainerMagic + 8);
  out.push_back(c.version);
  put_u32(out, static_cast<uint32_t>(c.payload_bytes.size()));
  out.insert(out.end(), c.payload_bytes.begin(), c.payload_bytes.end());
  put_u16(out, static_cast<uint16_t>(c.signature.size()));
  out.insert(out.end(), c.signature.begin(), c.signature.end());
  return out;
}

inline SignatureContainer decode_container(const Bytes& bytes) {
  ByteReader r(bytes);
  SignatureContainer c;
  std::string magic = r.str(8);
  if (magic != kContainerMagic) fail(Errc::malformed_container, "bad container magic");
  c.version = r.u8();
  if (c.version != kContainerVersion) fail(Errc::malformed_container, "unsupported container version");
  uint32_t payload_len = r.u32();
  c.payload_bytes = r.bytes(payload_len);
  uint16_t sig_len = r.u16();
  if (sig_len == 0) fail(Errc::malformed_container, "empty signature");
  c.signature = r.bytes(sig_len);
  if (!r.done()) fail(Errc::malformed_container, "trailing bytes after container");
  return c;
}

}  // namespace proves
