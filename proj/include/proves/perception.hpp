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
#include <functional>
#include <string>
#include <vector>

#include "proves/errors.hpp"
#include "proves/imaging.hpp"
#include "proves/types.hpp"
#include "proves/util.hpp"

namespace proves {

// A synthetic face: a dark-bordered square whose interior carries an 8x8
// high-contrast identity pattern. The border is kGlyphBorderPx wide at render
// resolution; the interior pattern is bilinearly stretched to fill the rest.
struct GlyphFaceSpec {
  uint64_t identity_seed = 0;
  double cx = 0, cy = 0;  // sub-pixel center
  double size = kMinGlyphSizePx;

  BBox box() const { return {cx - size / 2, cy - size / 2, cx + size / 2, cy + size / 2}; }
};

constexpr double kGlyphBorderPx = 3.0;
constexpr int kPatternCells = 8;
constexpr size_t kEmbeddingDim = 64;
constexpr double kGlyphMaxOverlap = 0.20;  // of the smaller box area

constexpr double kGlyphBorderGray = 12.0;
constexpr double kGlyphDarkGray = 25.0;
constexpr double kGlyphLightGray = 235.0;

// Identity pattern: 64 cells, each dark or light, derived from the seed.
// Regenerated with an incremented salt until both tones appear at least 12
// times; keeps every pattern usable for contrast normalization.
inline std::array<double, 64> glyph_pattern(uint64_t identity_seed) {
  for (uint64_t salt = 0;; ++salt) {
    std::array<double, 64> cells{};
    int ones = 0;
    uint64_t base = hash_combine(identity_seed, salt);
    for (int i = 0; i < 64; ++i) {
      bool bit = (hash_combine(base, static_cast<uint64_t>(i)) >> 63) != 0;
      cells[i] = bit ? kGlyphLightGray : kGlyphDarkGray;
      ones += bit;
    }
    if (ones >= 12 && ones <= 52) return cells;
  }
}

namespace render_detail {

inline double pattern_bilinear(const std::array<double, 64>& cells, double cu, double cv) {
  // cu, cv in cell units with cell centers at integer coordinates.
  double gx = std::clamp(cu, 0.0, 7.0), gy = std::clamp(cv, 0.0, 7.0);
  int x0 = std::min(static_cast<int>(gx), 6), y0 = std::min(static_cast<int>(gy), 6);
  double fx = gx - x0, fy = gy - y0;
  double top = cells[y0 * 8 + x0] * (1 - fx) + cells[y0 * 8 + x0 + 1] * fx;
  double bot = cells[(y0 + 1) * 8 + x0] * (1 - fx) + cells[(y0 + 1) * 8 + x0 + 1] * fx;
  return top * (1 - fy) + bot * fy;
}

inline double noise_pm(uint64_t seed, uint32_t x, uint32_t y, double amp) {
  uint64_t h = hash_combine(hash_combine(seed, x), y);
  return (hash_unit(h) * 2.0 - 1.0) * amp;
}

inline void paint_indoor(ImageBuffer& img, uint64_t seed) {
  // Warm, low-saturation interior: gradient base plus a few wall panels.
  for (uint32_t y = 0; y < img.height; ++y) {
    double t = img.height > 1 ? double(y) / (img.height - 1) : 0.0;
    double r = 178 - 16 * t, g = 147 - 17 * t, b = 116 - 17 * t;
    for (uint32_t x = 0; x < img.width; ++x) {
      double n = noise_pm(seed, x, y, 7.0);
      uint8_t* p = img.px(x, y);
      p[0] = clamp_u8(r + n);
      p[1] = clamp_u8(g + n);
      p[2] = clamp_u8(b + n);
    }
  }
  int panels = 2 + static_cast<int>(splitmix64(seed) % 3);
  for (int i = 0; i < panels; ++i) {
    uint64_t h = hash_combine(seed, 0x70616eull + i);
    uint32_t pw = static_cast<uint32_t>(img.width * (0.15 + 0.20 * hash_unit(splitmix64(h))));
    uint32_t ph = static_cast<uint32_t>(img.height * (0.20 + 0.30 * hash_unit(splitmix64(h + 1))));
    uint32_t px0 = static_cast<uint32_t>((img.width - pw) * hash_unit(splitmix64(h + 2)));
    uint32_t py0 = static_cast<uint32_t>((img.height - ph) * hash_unit(splitmix64(h + 3)));
    double r = 152 + 40 * hash_unit(splitmix64(h + 4));
    double g = r - 30 - 6 * hash_unit(splitmix64(h + 5));
    double b = r - 56 - 8 * hash_unit(splitmix64(h + 6));
    for (uint32_t y = py0; y < std::min(py0 + ph, img.height); ++y)
      for (uint32_t x = px0; x < std::min(px0 + pw, img.width); ++x) {
        double n = noise_pm(seed, x, y, 6.0);
        uint8_t* p = img.px(x, y);
        p[0] = clamp_u8(r + n);
        p[1] = clamp_u8(g + n);
        p[2] = clamp_u8(b + n);
      }
  }
}

inline void paint_outdoor(ImageBuffer& img, uint64_t seed) {
  // Sky over ground, mean hue firmly in the blue-green band.
  uint32_t horizon = static_cast<uint32_t>(img.height * 0.55);
  for (uint32_t y = 0; y < img.height; ++y) {
    bool sky = y < horizon;
    double t = sky ? (horizon > 1 ? double(y) / horizon : 0.0)
                   : double(y - horizon) / std::max<uint32_t>(1, img.height - horizon);
    double r = sky ? 110 + 26 * t : 82 - 12 * t;
    double g = sky ? 164 + 18 * t : 148 - 16 * t;
    double b = sky ? 224 + 6 * t : 96 - 14 * t;
    for (uint32_t x = 0; x < img.width; ++x) {
      double n = noise_pm(seed, x, y, 7.0);
      uint8_t* p = img.px(x, y);
      p[0] = clamp_u8(r + n);
      p[1] = clamp_u8(g + n);
      p[2] = clamp_u8(b + n);
    }
  }
}

}  // namespace render_detail

inline void paint_glyph(ImageBuffer& img, const GlyphFaceSpec& g) {
  auto cells = glyph_pattern(g.identity_seed);
  BBox b = g.box();
  int x0 = std::max(0, static_cast<int>(std::floor(b.x_min)));
  int y0 = std::max(0, static_cast<int>(std::floor(b.y_min)));
  int x1 = std::min(static_cast<int>(img.width), static_cast<int>(std::ceil(b.x_max)));
  int y1 = std::min(static_cast<int>(img.height), static_cast<int>(std::ceil(b.y_max)));
  double interior = g.size - 2 * kGlyphBorderPx;
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      double u = (x + 0.5) - b.x_min;
      double v = (y + 0.5) - b.y_min;
      if (u < 0 || v < 0 || u >= g.size || v >= g.size) continue;
      double value;
      if (u < kGlyphBorderPx || v < kGlyphBorderPx || u >= g.size - kGlyphBorderPx ||
          v >= g.size - kGlyphBorderPx || interior <= 0) {
        value = kGlyphBorderGray;
      } else {
        double cu = (u - kGlyphBorderPx) / interior * kPatternCells - 0.5;
        double cv = (v - kGlyphBorderPx) / interior * kPatternCells - 0.5;
        value = render_detail::pattern_bilinear(cells, cu, cv);
      }
      uint8_t* p = img.px(static_cast<uint32_t>(x), static_cast<uint32_t>(y));
      p[0] = p[1] = p[2] = clamp_u8(value);
    }
}

inline ImageBuffer render_scene(uint32_t width, uint32_t height, SceneLabel scene,
                                const std::vector<GlyphFaceSpec>& glyphs, uint64_t rng_seed) {
  ImageBuffer img(width, height);
  BBox frame{0, 0, double(width), double(height)};
  for (size_t i = 0; i < glyphs.size(); ++i) {
    if (glyphs[i].size < kMinGlyphSizePx)
      fail(Errc::invalid_argument, "glyph size below minimum");
    if (glyphs[i].box().intersection_area(frame) <= 0)
      fail(Errc::invalid_argument, "glyph entirely outside image");
    for (size_t j = i + 1; j < glyphs.size(); ++j) {
      BBox a = glyphs[i].box(), b = glyphs[j].box();
      double smaller = std::min(a.area(), b.area());
      if (a.intersection_area(b) > kGlyphMaxOverlap * smaller)
        fail(Errc::glyph_overlap, "glyphs overlap beyond tolerance");
    }
  }

  if (scene == SceneLabel::Indoor)
    render_detail::paint_indoor(img, rng_seed);
  else
    render_detail::paint_outdoor(img, rng_seed);

  for (const auto& g : glyphs) paint_glyph(img, g);
  return img;
}

// ---------------------------------------------------------------------------
// Reference detector: dark-mask connected components propose candidate boxes,
// then a border-band template scan over relative scales {0.5, 0.71, 1, 1.41, 2}
// validates each candidate before it is accepted.
// ---------------------------------------------------------------------------

namespace detect_detail {

constexpr double kRelScales[5] = {0.5, 0.71, 1.0, 1.41, 2.0};

struct Component {
  int min_x, min_y, max_x, max_y;
  uint64_t count;
  int width() const { return max_x - min_x + 1; }
  int height() const { return max_y - min_y + 1; }
};

// Fraction of sampled points in the border band of a square (side s centered
// at c) that are dark. The band spans the outer 12% of the side so a ring
// rotated by a few degrees still lands inside it.
inline double band_dark_fraction(const std::vector<uint8_t>& mask, uint32_t w, uint32_t h,
                                 double cx, double cy, double side) {
  double half = side / 2;
  double band = std::max(3.0, 0.12 * side);
  int samples = 0, dark = 0;
  int steps = std::max(8, static_cast<int>(side / 2));
  for (int i = 0; i < steps; ++i) {
    double t = (i + 0.5) / steps * side;
    for (int layer = 0; layer < 3; ++layer) {
      double depth = band * (layer + 0.5) / 3.0;
      double pts[4][2] = {{cx - half + t, cy - half + depth},
                          {cx - half + t, cy + half - depth},
                          {cx - half + depth, cy - half + t},
                          {cx + half - depth, cy - half + t}};
      for (auto& pt : pts) {
        int x = static_cast<int>(pt[0]), y = static_cast<int>(pt[1]);
        if (x < 0 || y < 0 || x >= static_cast<int>(w) || y >= static_cast<int>(h)) continue;
        ++samples;
        dark += mask[size_t(y) * w + x];
      }
    }
  }
  return samples > 0 ? double(dark) / samples : 0.0;
}

}  // namespace detect_detail

inline std::vector<BBox> reference_detect(const ImageBuffer& img) {
  using namespace detect_detail;
  const uint32_t w = img.width, h = img.height;
  std::vector<uint8_t> lum(size_t(w) * h);
  std::array<uint64_t, 256> hist{};
  for (uint32_t y = 0; y < h; ++y)
    for (uint32_t x = 0; x < w; ++x) {
      uint8_t v = static_cast<uint8_t>(luma_at(img, x, y));
      lum[size_t(y) * w + x] = v;
      ++hist[v];
    }
  uint64_t half = size_t(w) * h / 2, acc = 0;
  int median = 0;
  for (int v = 0; v < 256; ++v) {
    acc += hist[v];
    if (acc >= half) {
      median = v;
      break;
    }
  }
  double threshold = std::clamp(0.5 * median, 30.0, 90.0);

  std::vector<uint8_t> mask(size_t(w) * h);
  for (size_t i = 0; i < mask.size(); ++i) mask[i] = lum[i] < threshold;

  // 8-connected components over the dark mask.
  std::vector<uint8_t> seen(size_t(w) * h, 0);
  std::vector<Component> comps;
  std::vector<std::pair<int, int>> stack;
  for (uint32_t sy = 0; sy < h; ++sy)
    for (uint32_t sx = 0; sx < w; ++sx) {
      size_t si = size_t(sy) * w + sx;
      if (!mask[si] || seen[si]) continue;
      Component c{int(sx), int(sy), int(sx), int(sy), 0};
      stack.clear();
      stack.emplace_back(sx, sy);
      seen[si] = 1;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        ++c.count;
        c.min_x = std::min(c.min_x, x);
        c.max_x = std::max(c.max_x, x);
        c.min_y = std::min(c.min_y, y);
        c.max_y = std::max(c.max_y, y);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= int(w) || ny >= int(h)) continue;
            size_t ni = size_t(ny) * w + nx;
            if (mask[ni] && !seen[ni]) {
              seen[ni] = 1;
              stack.emplace_back(nx, ny);
            }
          }
      }
      comps.push_back(c);
    }

  std::vector<Component> candidates;
  for (const auto& c : comps) {
    int cw = c.width(), ch = c.height();
    if (cw < 10 || ch < 10) continue;
    double aspect = double(cw) / ch;
    if (aspect < 0.6 || aspect > 1.67) continue;
    double ring = double(cw) * ch - std::max(0, cw - 6) * double(std::max(0, ch - 6));
    if (double(c.count) < 0.5 * ring) continue;
    candidates.push_back(c);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Component& a, const Component& b) {
              return int64_t(a.width()) * a.height() > int64_t(b.width()) * b.height();
            });

  std::vector<BBox> accepted;
  for (const auto& c : candidates) {
    BBox box{double(c.min_x), double(c.min_y), double(c.max_x + 1), double(c.max_y + 1)};
    bool contained = false;
    for (const auto& a : accepted)
      if (box.intersection_area(a) > 0.8 * box.area()) {
        contained = true;
        break;
      }
    if (contained) continue;
    double side = std::max(box.width(), box.height());
    double best = 0.0;
    for (double rel : kRelScales)
      best = std::max(best, band_dark_fraction(mask, w, h, box.cx(), box.cy(), side * rel));
    if (best < 0.25) continue;
    accepted.push_back(box);
  }
  std::sort(accepted.begin(), accepted.end(), [](const BBox& a, const BBox& b) {
    if (a.y_min != b.y_min) return a.y_min < b.y_min;
    if (a.x_min != b.x_min) return a.x_min < b.x_min;
    return a.x_max < b.x_max;
  });
  return accepted;
}

// ---------------------------------------------------------------------------
// Reference embedder: strip the border band, box-average the interior to an
// 8x8 grayscale patch, normalize contrast, flatten to a unit vector (D = 64).
// ---------------------------------------------------------------------------

constexpr double kEmbedInsetFraction = 0.16;

inline FeatureVector reference_embed(const ImageBuffer& img, const BBox& bbox) {
  if (!bbox.valid()) fail(Errc::invalid_argument, "invalid bbox");
  BBox frame{0, 0, double(img.width), double(img.height)};
  double vis_w = std::min(bbox.x_max, frame.x_max) - std::max(bbox.x_min, frame.x_min);
  double vis_h = std::min(bbox.y_max, frame.y_max) - std::max(bbox.y_min, frame.y_min);
  if (vis_w < 4 || vis_h < 4) fail(Errc::degenerate_region, "fewer than 4x4 visible pixels");

  double ix0 = bbox.x_min + kEmbedInsetFraction * bbox.width();
  double ix1 = bbox.x_max - kEmbedInsetFraction * bbox.width();
  double iy0 = bbox.y_min + kEmbedInsetFraction * bbox.height();
  double iy1 = bbox.y_max - kEmbedInsetFraction * bbox.height();
  double cw = (ix1 - ix0) / kPatternCells, ch = (iy1 - iy0) / kPatternCells;

  FeatureVector f(kEmbeddingDim);
  for (int j = 0; j < kPatternCells; ++j)
    for (int i = 0; i < kPatternCells; ++i)
      f[j * kPatternCells + i] =
          box_avg_luma(img, ix0 + i * cw, iy0 + j * ch, ix0 + (i + 1) * cw, iy0 + (j + 1) * ch);

  double mean = 0;
  for (double v : f) mean += v;
  mean /= f.size();
  double var = 0;
  for (double& v : f) {
    v -= mean;
    var += v * v;
  }
  var /= f.size();
  if (var < 1e-12) fail(Errc::degenerate_region, "zero-variance region");
  double inv = 1.0 / (std::sqrt(var) + 1e-8);
  double norm2 = 0;
  for (double& v : f) {
    v *= inv;
    norm2 += v * v;
  }
  double inv_norm = 1.0 / std::sqrt(norm2);
  for (double& v : f) v *= inv_norm;
  return f;
}

// ---------------------------------------------------------------------------
// Reference scene classifier: P(Indoor) as a logistic over a tone-invariant
// warmth statistic. Neutral (gray) pixels contribute nothing, so glyphs do
// not shift the score.
// ---------------------------------------------------------------------------

constexpr double kSceneLogisticScale = 8.0;
constexpr double kSceneLogisticMidpoint = 0.2;

inline double reference_scene_prob(const ImageBuffer& img) {
  double num = 0, den = 0;
  uint32_t step = std::max<uint32_t>(1, std::min(img.width, img.height) / 256);
  for (uint32_t y = 0; y < img.height; y += step)
    for (uint32_t x = 0; x < img.width; x += step) {
      const uint8_t* p = img.px(x, y);
      double l = luma(p[0], p[1], p[2]);
      num += double(p[0]) - double(p[2]);
      den += std::abs(p[0] - l) + std::abs(p[1] - l) + std::abs(p[2] - l);
    }
  double warmth = num / (den + 1e-6);
  return 1.0 / (1.0 + std::exp(-kSceneLogisticScale * (warmth - kSceneLogisticMidpoint)));
}

// ---------------------------------------------------------------------------
// Backend bundle
// ---------------------------------------------------------------------------

struct PerceptionBackend {
  std::function<std::vector<BBox>(const ImageBuffer&)> detect;
  std::function<FeatureVector(const ImageBuffer&, const BBox&)> embed;
  std::function<double(const ImageBuffer&)> scene_prob;  // P(Indoor)
  size_t dimension = kEmbeddingDim;
};

inline PerceptionBackend make_perception(const std::string& name) {
  if (name != "reference") fail(Errc::invalid_config, "unknown perception backend: " + name);
  PerceptionBackend b;
  b.detect = [](const ImageBuffer& img) { return reference_detect(img); };
  b.embed = [](const ImageBuffer& img, const BBox& box) { return reference_embed(img, box); };
  b.scene_prob = [](const ImageBuffer& img) { return reference_scene_prob(img); };
  b.dimension = kEmbeddingDim;
  return b;
}

}  // namespace proves
