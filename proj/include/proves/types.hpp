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
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proves/errors.hpp"

namespace proves {

// Pinned protocol constants.
constexpr uint32_t kMaxImageDim = 16384;
constexpr size_t kMaxDeviceIdBytes = 128;
constexpr double kMinFaceAreaFraction = 0.005;  // signing-time bbox filter
constexpr double kDefaultTheta = 0.7;
constexpr double kDefaultGamma = 0.7;
constexpr size_t kDefaultMinSeedPairs = 2;
constexpr uint32_t kMinGlyphSizePx = 16;

// Row-major interleaved RGB, 8 bits per channel.
struct ImageBuffer {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> pixels;

  ImageBuffer() = default;

  ImageBuffer(uint32_t w, uint32_t h) : width(w), height(h) {
    validate_dims(w, h);
    pixels.assign(size_t(w) * h * 3, 0);
  }

  static void validate_dims(uint32_t w, uint32_t h) {
    if (w < 1 || h < 1 || w > kMaxImageDim || h > kMaxImageDim)
      fail(Errc::invalid_argument, "image dimensions out of range");
  }

  size_t offset(uint32_t x, uint32_t y) const { return (size_t(y) * width + x) * 3; }

  uint8_t* px(uint32_t x, uint32_t y) { return pixels.data() + offset(x, y); }
  const uint8_t* px(uint32_t x, uint32_t y) const { return pixels.data() + offset(x, y); }

  bool same_pixels(const ImageBuffer& o) const {
    return width == o.width && height == o.height && pixels == o.pixels;
  }
};

// Axis-aligned box in sub-pixel image coordinates; min-corner inclusive.
struct BBox {
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

  BBox() = default;
  BBox(double x0, double y0, double x1, double y1) : x_min(x0), y_min(y0), x_max(x1), y_max(y1) {}

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double cx() const { return (x_min + x_max) / 2; }
  double cy() const { return (y_min + y_max) / 2; }
  double diagonal() const { return std::hypot(width(), height()); }

  bool valid() const {
    return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
           std::isfinite(y_max) && x_min < x_max && y_min < y_max;
  }

  BBox translated(double dx, double dy) const {
    return {x_min + dx, y_min + dy, x_max + dx, y_max + dy};
  }

  double intersection_area(const BBox& o) const {
    double w = std::min(x_max, o.x_max) - std::max(x_min, o.x_min);
    double h = std::min(y_max, o.y_max) - std::max(y_min, o.y_min);
    if (w <= 0 || h <= 0) return 0.0;
    return w * h;
  }

  double iou(const BBox& o) const {
    double inter = intersection_area(o);
    double uni = area() + o.area() - inter;
    return uni > 0 ? inter / uni : 0.0;
  }

  bool operator==(const BBox&) const = default;
};

using FeatureVector = std::vector<double>;

inline void validate_feature(const FeatureVector& f) {
  if (f.empty()) fail(Errc::invalid_payload, "empty feature vector");
  double norm2 = 0;
  for (double v : f) {
    if (!std::isfinite(v)) fail(Errc::invalid_payload, "non-finite feature component");
    norm2 += v * v;
  }
  if (norm2 <= 0) fail(Errc::invalid_payload, "zero-norm feature vector");
}

enum class SceneLabel : uint8_t { Indoor = 0, Outdoor = 1 };

struct FaceRecord {
  BBox bbox;
  FeatureVector feature;

  bool operator==(const FaceRecord&) const = default;
};

// The content that gets canonically serialized and signed.
struct SemanticPayload {
  uint32_t width = 0;
  uint32_t height = 0;
  SceneLabel scene = SceneLabel::Indoor;
  uint64_t signed_at = 0;  // UTC seconds since epoch
  std::string device_id;
  std::vector<FaceRecord> faces;

  bool operator==(const SemanticPayload&) const = default;
};

// Structural validity: everything the codec enforces on both directions.
inline void validate_payload(const SemanticPayload& p) {
  ImageBuffer::validate_dims(p.width, p.height);
  if (p.device_id.empty() || p.device_id.size() > kMaxDeviceIdBytes)
    fail(Errc::invalid_payload, "device_id length out of range");
  for (const auto& f : p.faces) {
    if (!f.bbox.valid()) fail(Errc::invalid_payload, "invalid face bbox");
    validate_feature(f.feature);
  }
}

// Sort order applied at signing: top-to-bottom, then left-to-right.
inline void sort_faces_canonical(std::vector<FaceRecord>& faces) {
  std::sort(faces.begin(), faces.end(), [](const FaceRecord& a, const FaceRecord& b) {
    if (a.bbox.y_min != b.bbox.y_min) return a.bbox.y_min < b.bbox.y_min;
    if (a.bbox.x_min != b.bbox.x_min) return a.bbox.x_min < b.bbox.x_min;
    return a.bbox.x_max < b.bbox.x_max;
  });
}

enum class FaceOutcomeKind : uint8_t { Verified, VerifiedPartial, Tampered, Cropped };

inline const char* face_outcome_name(FaceOutcomeKind k) {
  switch (k) {
    case FaceOutcomeKind::Verified:        return "Verified";
    case FaceOutcomeKind::VerifiedPartial: return "VerifiedPartial";
    case FaceOutcomeKind::Tampered:        return "Tampered";
    case FaceOutcomeKind::Cropped:         return "Cropped";
  }
  return "Unknown";
}

struct FaceOutcome {
  FaceOutcomeKind kind = FaceOutcomeKind::Cropped;
  std::optional<BBox> bbox_in_current;  // absent for Cropped
  std::optional<double> similarity;     // in [-1, 1] when present
};

enum class SceneOutcome : uint8_t { Verified, Failed, LowConfidence };

inline const char* scene_outcome_name(SceneOutcome s) {
  switch (s) {
    case SceneOutcome::Verified:      return "Verified";
    case SceneOutcome::Failed:        return "Failed";
    case SceneOutcome::LowConfidence: return "LowConfidence";
  }
  return "Unknown";
}

enum class RevocationStatus : uint8_t { Trusted, SignedBeforeRevocation, Refused };

inline const char* revocation_status_name(RevocationStatus s) {
  switch (s) {
    case RevocationStatus::Trusted:                return "Trusted";
    case RevocationStatus::SignedBeforeRevocation: return "SignedBeforeRevocation";
    case RevocationStatus::Refused:                return "Refused";
  }
  return "Unknown";
}

struct VerificationReport {
  RevocationStatus revocation_status = RevocationStatus::Trusted;
  // One outcome per signed face, in payload order. Empty when Refused.
  std::vector<FaceOutcome> face_outcomes;
  size_t cropped_count = 0;
  std::vector<BBox> unmatched_new_faces;
  std::optional<SceneOutcome> scene_outcome;  // absent when Refused
  std::vector<std::string> warnings;
};

}  // namespace proves
