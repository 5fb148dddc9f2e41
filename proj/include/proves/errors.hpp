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

#include <stdexcept>
#include <string>

namespace proves {

enum class Errc {
  invalid_argument,
  invalid_payload,
  field_overflow,
  unsupported_format,
  no_signature,
  malformed_container,
  signature_invalid,
  duplicate_device,
  unknown_device,
  device_revoked,
  self_check_failed,
  glyph_overlap,
  degenerate_region,
  dimension_mismatch,
  underdetermined,
  degenerate_transform,
  invalid_config,
  io_error,
  network_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument:     return "InvalidArgument";
    case Errc::invalid_payload:      return "InvalidPayload";
    case Errc::field_overflow:       return "FieldOverflow";
    case Errc::unsupported_format:   return "UnsupportedFormat";
    case Errc::no_signature:         return "NoSignature";
    case Errc::malformed_container:  return "MalformedContainer";
    case Errc::signature_invalid:    return "SignatureInvalid";
    case Errc::duplicate_device:     return "DuplicateDevice";
    case Errc::unknown_device:       return "UnknownDevice";
    case Errc::device_revoked:       return "DeviceRevoked";
    case Errc::self_check_failed:    return "SelfCheckFailed";
    case Errc::glyph_overlap:        return "GlyphOverlap";
    case Errc::degenerate_region:    return "DegenerateRegion";
    case Errc::dimension_mismatch:   return "DimensionMismatch";
    case Errc::underdetermined:      return "Underdetermined";
    case Errc::degenerate_transform: return "DegenerateTransform";
    case Errc::invalid_config:       return "InvalidConfig";
    case Errc::io_error:             return "IoError";
    case Errc::network_error:        return "NetworkError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace proves
