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
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "proves/errors.hpp"
#include "proves/imaging.hpp"
#include "proves/perception.hpp"
#include "proves/types.hpp"
#include "proves/util.hpp"

namespace proves {

// ---------------------------------------------------------------------------
// Benign edits. Applied in the fixed order scale, translate (vacated areas
// cropped / filled), rotate, tone.
// ---------------------------------------------------------------------------

struct BenignTransformSpec {
  double scale = 1.0;
  double translate_x = 0.0;  // fraction of width
  double translate_y = 0.0;  // fraction of height
  double rotate_deg = 0.0;
  double contrast = 1.0;
  double brightness = 1.0;
  double color = 1.0;
  uint64_t rng_seed = 0;

  // rotation_mode 0 leaves images unrotated; mode 5 rotates by a full +/-5
  // degrees with random sign (the worst case of the tolerated range).
  static BenignTransformSpec random(uint64_t seed, int rotation_mode = 0) {
    std::mt19937_64 rng(splitmix64(seed));
    std::uniform_real_distribution<double> factor(0.85, 1.15);
    std::uniform_real_distribution<double> shift(-0.15, 0.15);
    BenignTransformSpec s;
    s.scale = factor(rng);
    s.translate_x = shift(rng);
    s.translate_y = shift(rng);
    if (rotation_mode == 5) {
      s.rotate_deg = (rng() & 1) ? 5.0 : -5.0;
    } else if (rotation_mode != 0) {
      fail(Errc::invalid_argument, "rotation mode must be 0 or 5");
    }
    s.contrast = factor(rng);
    s.brightness = factor(rng);
    s.color = factor(rng);
    s.rng_seed = seed;
    return s;
  }
};

// Maps original (sub-pixel) coordinates into the transformed image:
// q = R_phi(s*p + d - C) + C, with C the center of the post-scale canvas.
struct GroundTruthMap {
  double s = 1.0;
  double dx = 0.0, dy = 0.0;
  double phi_rad = 0.0;
  double cx = 0.0, cy = 0.0;

  std::array<double, 2> map(double x, double y) const {
    double px = s * x + dx - cx, py = s * y + dy - cy;
    double c = std::cos(phi_rad), sn = std::sin(phi_rad);
    return {c * px - sn * py + cx, sn * px + c * py + cy};
  }

  // Corners of bbox b mapped forward; not axis-aligned once rotated.
  std::array<std::array<double, 2>, 4> map_box_corners(const BBox& b) const {
    return {map(b.x_min, b.y_min), map(b.x_max, b.y_min), map(b.x_max, b.y_max),
            map(b.x_min, b.y_max)};
  }
};

namespace transform_detail {

inline ImageBuffer scale_image(const ImageBuffer& in, double s) {
  uint32_t ow = std::max<uint32_t>(1, static_cast<uint32_t>(std::lround(in.width * s)));
  uint32_t oh = std::max<uint32_t>(1, static_cast<uint32_t>(std::lround(in.height * s)));
  ImageBuffer out(ow, oh);
  for (uint32_t y = 0; y < oh; ++y)
    for (uint32_t x = 0; x < ow; ++x) {
      auto rgb = bilinear_rgb(in, (x + 0.5) / s - 0.5, (y + 0.5) / s - 0.5);
      uint8_t* p = out.px(x, y);
      p[0] = clamp_u8(rgb[0]);
      p[1] = clamp_u8(rgb[1]);
      p[2] = clamp_u8(rgb[2]);
    }
  return out;
}

inline ImageBuffer translate_image(const ImageBuffer& in, int dx, int dy) {
  ImageBuffer out(in.width, in.height);
  auto fill = median_color(in);
  for (uint32_t y = 0; y < in.height; ++y)
    for (uint32_t x = 0; x < in.width; ++x) {
      int sx = int(x) - dx, sy = int(y) - dy;
      uint8_t* p = out.px(x, y);
      if (sx < 0 || sy < 0 || sx >= int(in.width) || sy >= int(in.height)) {
        p[0] = fill[0];
        p[1] = fill[1];
        p[2] = fill[2];
      } else {
        const uint8_t* q = in.px(uint32_t(sx), uint32_t(sy));
        p[0] = q[0];
        p[1] = q[1];
        p[2] = q[2];
      }
    }
  return out;
}

inline ImageBuffer rotate_image(const ImageBuffer& in, double phi_rad) {
  ImageBuffer out(in.width, in.height);
  double cx = in.width / 2.0, cy = in.height / 2.0;
  double c = std::cos(-phi_rad), sn = std::sin(-phi_rad);
  for (uint32_t y = 0; y < in.height; ++y)
    for (uint32_t x = 0; x < in.width; ++x) {
      double qx = (x + 0.5) - cx, qy = (y + 0.5) - cy;
      double sx = c * qx - sn * qy + cx - 0.5;
      double sy = sn * qx + c * qy + cy - 0.5;
      auto rgb = bilinear_rgb(in, sx, sy);
      uint8_t* p = out.px(x, y);
      p[0] = clamp_u8(rgb[0]);
      p[1] = clamp_u8(rgb[1]);
      p[2] = clamp_u8(rgb[2]);
    }
  return out;
}

// Contrast pivots at mid-gray, then brightness, then a color cast that warms
// (red up, blue down) or cools. Order fixed so specs reproduce bytewise.
inline void tone_adjust(ImageBuffer& img, double contrast, double brightness, double color) {
  std::array<uint8_t, 256> lut_r, lut_g, lut_b;
  for (int v = 0; v < 256; ++v) {
    double t = (v - 128.0) * contrast + 128.0;
    t *= brightness;
    lut_g[v] = clamp_u8(t);
    lut_r[v] = clamp_u8(t * color);
    lut_b[v] = clamp_u8(t / color);
  }
  size_t n = size_t(img.width) * img.height;
  for (size_t i = 0; i < n; ++i) {
    uint8_t* p = &img.pixels[i * 3];
    p[0] = lut_r[p[0]];
    p[1] = lut_g[p[1]];
    p[2] = lut_b[p[2]];
  }
}

}  // namespace transform_detail

struct BenignResult {
  ImageBuffer image;
  GroundTruthMap truth;
};

inline BenignResult apply_benign(const ImageBuffer& in, const BenignTransformSpec& spec) {
  using namespace transform_detail;
  if (!(spec.scale > 0.01 && spec.scale < 100))
    fail(Errc::invalid_argument, "scale factor out of range");
  BenignResult out;
  ImageBuffer img = spec.scale != 1.0 ? scale_image(in, spec.scale) : in;
  int dx = static_cast<int>(std::lround(spec.translate_x * img.width));
  int dy = static_cast<int>(std::lround(spec.translate_y * img.height));
  if (dx != 0 || dy != 0) img = translate_image(img, dx, dy);
  double phi = spec.rotate_deg * std::numbers::pi / 180.0;
  if (spec.rotate_deg != 0.0) img = rotate_image(img, phi);
  if (spec.contrast != 1.0 || spec.brightness != 1.0 || spec.color != 1.0)
    tone_adjust(img, spec.contrast, spec.brightness, spec.color);

  out.truth.s = spec.scale;
  out.truth.dx = dx;
  out.truth.dy = dy;
  out.truth.phi_rad = phi;
  out.truth.cx = img.width / 2.0;
  out.truth.cy = img.height / 2.0;
  out.image = std::move(img);
  return out;
}

// ---------------------------------------------------------------------------
// Attacks. Each edits pixels only inside the declared target boxes (CropOut
// excepted) so tests can assert bytewise equality elsewhere.
// ---------------------------------------------------------------------------

enum class AttackKind : uint8_t { Replace, Swap, Remove, Occlude, CropOut };

inline const char* attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::Replace: return "Replace";
    case AttackKind::Swap: return "Swap";
    case AttackKind::Remove: return "Remove";
    case AttackKind::Occlude: return "Occlude";
    case AttackKind::CropOut: return "CropOut";
  }
  return "?";
}

inline AttackKind attack_kind_from_name(const std::string& s) {
  if (s == "replace" || s == "Replace") return AttackKind::Replace;
  if (s == "swap" || s == "Swap") return AttackKind::Swap;
  if (s == "remove" || s == "Remove") return AttackKind::Remove;
  if (s == "occlude" || s == "Occlude") return AttackKind::Occlude;
  if (s == "cropout" || s == "CropOut") return AttackKind::CropOut;
  fail(Errc::invalid_argument, "unknown attack kind: " + s);
}

constexpr double kMaxNoiseBudget = 4.0 / 255.0;

struct AttackSpec {
  AttackKind kind = AttackKind::Replace;
  std::vector<size_t> targets;
  double noise_budget = 0.0;  // per-channel, as a fraction of full scale
  uint64_t rng_seed = 0;

  void validate(size_t face_count) const {
    if (!(noise_budget >= 0.0 && noise_budget <= kMaxNoiseBudget + 1e-12))
      fail(Errc::invalid_argument, "noise budget exceeds 4/255");
    if (targets.empty()) fail(Errc::invalid_argument, "attack needs at least one target");
    for (size_t t : targets)
      if (t >= face_count) fail(Errc::invalid_argument, "attack target index out of range");
    if (kind == AttackKind::Swap && targets.size() != 2)
      fail(Errc::invalid_argument, "swap takes exactly two targets");
  }
};

namespace attack_detail {

struct IntRect {
  int x0, y0, x1, y1;
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
};

inline IntRect clip_rect(const BBox& b, const ImageBuffer& img) {
  int x0 = std::max(0, static_cast<int>(std::floor(b.x_min)));
  int y0 = std::max(0, static_cast<int>(std::floor(b.y_min)));
  int x1 = std::min(int(img.width), static_cast<int>(std::ceil(b.x_max)));
  int y1 = std::min(int(img.height), static_cast<int>(std::ceil(b.y_max)));
  if (x1 <= x0 || y1 <= y0) fail(Errc::invalid_argument, "attack target outside image");
  return {x0, y0, x1, y1};
}

inline void add_noise(ImageBuffer& img, const IntRect& r, double budget, std::mt19937_64& rng) {
  if (budget <= 0) return;
  double amp = budget * 255.0;
  std::uniform_real_distribution<double> u(-amp, amp);
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) {
      uint8_t* p = img.px(uint32_t(x), uint32_t(y));
      for (int c = 0; c < 3; ++c) p[c] = clamp_u8(p[c] + u(rng));
    }
}

// Per-channel median of a one-box-wide ring just outside the rect; the local
// background estimate used by Remove.
inline std::array<uint8_t, 3> ring_median(const ImageBuffer& img, const IntRect& r) {
  std::vector<uint8_t> ch[3];
  int pad = std::max(3, r.width() / 4);
  for (int y = r.y0 - pad; y < r.y1 + pad; ++y)
    for (int x = r.x0 - pad; x < r.x1 + pad; ++x) {
      if (x >= r.x0 && x < r.x1 && y >= r.y0 && y < r.y1) continue;
      if (x < 0 || y < 0 || x >= int(img.width) || y >= int(img.height)) continue;
      const uint8_t* p = img.px(uint32_t(x), uint32_t(y));
      for (int c = 0; c < 3; ++c) ch[c].push_back(p[c]);
    }
  std::array<uint8_t, 3> out{128, 128, 128};
  for (int c = 0; c < 3; ++c) {
    if (ch[c].empty()) continue;
    size_t mid = ch[c].size() / 2;
    std::nth_element(ch[c].begin(), ch[c].begin() + mid, ch[c].end());
    out[c] = ch[c][mid];
  }
  return out;
}

inline std::vector<uint8_t> copy_rect(const ImageBuffer& img, const IntRect& r) {
  std::vector<uint8_t> buf(size_t(r.width()) * r.height() * 3);
  for (int y = 0; y < r.height(); ++y)
    for (int x = 0; x < r.width(); ++x) {
      const uint8_t* p = img.px(uint32_t(r.x0 + x), uint32_t(r.y0 + y));
      uint8_t* q = &buf[(size_t(y) * r.width() + x) * 3];
      q[0] = p[0];
      q[1] = p[1];
      q[2] = p[2];
    }
  return buf;
}

// Writes src (sw x sh) into dst rect with bilinear resampling; handles the
// size mismatch when two swapped glyphs differ in scale.
inline void paste_resampled(ImageBuffer& img, const IntRect& dst, const std::vector<uint8_t>& src,
                            int sw, int sh) {
  for (int y = 0; y < dst.height(); ++y)
    for (int x = 0; x < dst.width(); ++x) {
      double u = (x + 0.5) * sw / dst.width() - 0.5;
      double v = (y + 0.5) * sh / dst.height() - 0.5;
      double gu = std::clamp(u, 0.0, double(sw - 1));
      double gv = std::clamp(v, 0.0, double(sh - 1));
      int x0 = std::min(int(gu), sw - 2 < 0 ? 0 : sw - 2);
      int y0 = std::min(int(gv), sh - 2 < 0 ? 0 : sh - 2);
      double fx = gu - x0, fy = gv - y0;
      uint8_t* p = img.px(uint32_t(dst.x0 + x), uint32_t(dst.y0 + y));
      for (int c = 0; c < 3; ++c) {
        auto at = [&](int xx, int yy) {
          return double(src[(size_t(yy) * sw + xx) * 3 + c]);
        };
        int x1 = std::min(x0 + 1, sw - 1), y1 = std::min(y0 + 1, sh - 1);
        double top = at(x0, y0) * (1 - fx) + at(x1, y0) * fx;
        double bot = at(x0, y1) * (1 - fx) + at(x1, y1) * fx;
        p[c] = clamp_u8(top * (1 - fy) + bot * fy);
      }
    }
}

constexpr uint8_t kOccluderGray = 168;

}  // namespace attack_detail

// Applies the attack against faces located at `boxes` (canonical detector
// order). Returns the edited image; CropOut changes dimensions.
inline ImageBuffer apply_attack(const ImageBuffer& in, const std::vector<BBox>& boxes,
                                const AttackSpec& spec) {
  using namespace attack_detail;
  spec.validate(boxes.size());
  std::mt19937_64 rng(splitmix64(spec.rng_seed));
  ImageBuffer img = in;

  switch (spec.kind) {
    case AttackKind::Replace: {
      for (size_t t : spec.targets) {
        IntRect r = clip_rect(boxes[t], img);
        GlyphFaceSpec imposter;
        imposter.identity_seed = hash_combine(spec.rng_seed, 0x7265706cull + t);
        imposter.cx = boxes[t].cx();
        imposter.cy = boxes[t].cy();
        imposter.size = std::min(boxes[t].width(), boxes[t].height());
        paint_glyph(img, imposter);
        add_noise(img, r, spec.noise_budget, rng);
      }
      break;
    }
    case AttackKind::Swap: {
      IntRect ra = clip_rect(boxes[spec.targets[0]], img);
      IntRect rb = clip_rect(boxes[spec.targets[1]], img);
      auto bufa = copy_rect(img, ra);
      auto bufb = copy_rect(img, rb);
      paste_resampled(img, ra, bufb, rb.width(), rb.height());
      paste_resampled(img, rb, bufa, ra.width(), ra.height());
      add_noise(img, ra, spec.noise_budget, rng);
      add_noise(img, rb, spec.noise_budget, rng);
      break;
    }
    case AttackKind::Remove: {
      for (size_t t : spec.targets) {
        IntRect r = clip_rect(boxes[t], img);
        auto fill = ring_median(img, r);
        for (int y = r.y0; y < r.y1; ++y)
          for (int x = r.x0; x < r.x1; ++x) {
            uint8_t* p = img.px(uint32_t(x), uint32_t(y));
            double n = render_detail::noise_pm(spec.rng_seed, uint32_t(x), uint32_t(y), 6.0);
            p[0] = clamp_u8(fill[0] + n);
            p[1] = clamp_u8(fill[1] + n);
            p[2] = clamp_u8(fill[2] + n);
          }
        add_noise(img, r, spec.noise_budget, rng);
      }
      break;
    }
    case AttackKind::Occlude: {
      for (size_t t : spec.targets) {
        IntRect r = clip_rect(boxes[t], img);
        for (int y = r.y0; y < r.y1; ++y)
          for (int x = r.x0; x < r.x1; ++x) {
            uint8_t* p = img.px(uint32_t(x), uint32_t(y));
            p[0] = p[1] = p[2] = kOccluderGray;
          }
        add_noise(img, r, spec.noise_budget, rng);
      }
      break;
    }
    case AttackKind::CropOut: {
      // Keep the largest edge-aligned window that excludes every target.
      int x0 = 0, y0 = 0, x1 = int(img.width), y1 = int(img.height);
      for (size_t t : spec.targets) {
        const BBox& b = boxes[t];
        struct Option {
          int x0, y0, x1, y1;
        };
        Option opts[4] = {
            {x0, y0, std::min(x1, int(std::floor(b.x_min))), y1},  // keep left
            {std::max(x0, int(std::ceil(b.x_max))), y0, x1, y1},   // keep right
            {x0, y0, x1, std::min(y1, int(std::floor(b.y_min)))},  // keep top
            {x0, std::max(y0, int(std::ceil(b.y_max))), x1, y1},   // keep bottom
        };
        int64_t best = -1;
        Option chosen{x0, y0, x0, y0};
        for (const auto& o : opts) {
          int64_t area = int64_t(std::max(0, o.x1 - o.x0)) * std::max(0, o.y1 - o.y0);
          if (area > best) {
            best = area;
            chosen = o;
          }
        }
        x0 = chosen.x0;
        y0 = chosen.y0;
        x1 = chosen.x1;
        y1 = chosen.y1;
      }
      if (x1 - x0 < 1 || y1 - y0 < 1)
        fail(Errc::invalid_argument, "crop removes the whole image");
      ImageBuffer cropped(uint32_t(x1 - x0), uint32_t(y1 - y0));
      for (uint32_t y = 0; y < cropped.height; ++y)
        for (uint32_t x = 0; x < cropped.width; ++x) {
          const uint8_t* p = img.px(uint32_t(x0 + int(x)), uint32_t(y0 + int(y)));
          uint8_t* q = cropped.px(x, y);
          q[0] = p[0];
          q[1] = p[1];
          q[2] = p[2];
        }
      return cropped;
    }
  }
  return img;
}

// Crops to the given window; callers use this to stage partial-visibility and
// crop-accounting scenarios with exact control over what survives.
inline ImageBuffer crop_window(const ImageBuffer& in, int x0, int y0, int x1, int y1) {
  x0 = std::clamp(x0, 0, int(in.width));
  y0 = std::clamp(y0, 0, int(in.height));
  x1 = std::clamp(x1, 0, int(in.width));
  y1 = std::clamp(y1, 0, int(in.height));
  if (x1 - x0 < 1 || y1 - y0 < 1) fail(Errc::invalid_argument, "empty crop window");
  ImageBuffer out(uint32_t(x1 - x0), uint32_t(y1 - y0));
  for (uint32_t y = 0; y < out.height; ++y)
    for (uint32_t x = 0; x < out.width; ++x) {
      const uint8_t* p = in.px(uint32_t(x0 + int(x)), uint32_t(y0 + int(y)));
      uint8_t* q = out.px(x, y);
      q[0] = p[0];
      q[1] = p[1];
      q[2] = p[2];
    }
  return out;
}

}  // namespace proves
