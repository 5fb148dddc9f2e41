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

#include "proves/types.hpp"

namespace proves {

// Continuous image coordinates put pixel (i, j) at center (i + 0.5, j + 0.5).

inline double luma(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

inline double luma_at(const ImageBuffer& img, uint32_t x, uint32_t y) {
  const uint8_t* p = img.px(x, y);
  return luma(p[0], p[1], p[2]);
}

inline std::array<double, 3> bilinear_rgb(const ImageBuffer& img, double x, double y) {
  double gx = x - 0.5, gy = y - 0.5;
  int x0 = static_cast<int>(std::floor(gx)), y0 = static_cast<int>(std::floor(gy));
  double fx = gx - x0, fy = gy - y0;
  auto cx = [&](int v) { return std::clamp(v, 0, static_cast<int>(img.width) - 1); };
  auto cy = [&](int v) { return std::clamp(v, 0, static_cast<int>(img.height) - 1); };
  const uint8_t* p00 = img.px(cx(x0), cy(y0));
  const uint8_t* p10 = img.px(cx(x0 + 1), cy(y0));
  const uint8_t* p01 = img.px(cx(x0), cy(y0 + 1));
  const uint8_t* p11 = img.px(cx(x0 + 1), cy(y0 + 1));
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) {
    double top = p00[c] * (1 - fx) + p10[c] * fx;
    double bot = p01[c] * (1 - fx) + p11[c] * fx;
    out[c] = top * (1 - fy) + bot * fy;
  }
  return out;
}

// Area-weighted luminance average over [x0,x1) x [y0,y1). Out-of-image area
// clamps to the nearest edge pixel, so the filter never reads out of bounds
// and partially visible rects still produce a value.
inline double box_avg_luma(const ImageBuffer& img, double x0, double y0, double x1, double y1) {
  if (x1 <= x0 || y1 <= y0) return 0.0;
  int ix0 = static_cast<int>(std::floor(x0));
  int ix1 = static_cast<int>(std::ceil(x1));
  int iy0 = static_cast<int>(std::floor(y0));
  int iy1 = static_cast<int>(std::ceil(y1));
  double total = 0.0, weight = 0.0;
  for (int y = iy0; y < iy1; ++y) {
    double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
    if (wy <= 0) continue;
    uint32_t cyy = static_cast<uint32_t>(std::clamp(y, 0, static_cast<int>(img.height) - 1));
    for (int x = ix0; x < ix1; ++x) {
      double wx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
      if (wx <= 0) continue;
      uint32_t cxx = static_cast<uint32_t>(std::clamp(x, 0, static_cast<int>(img.width) - 1));
      total += wx * wy * luma_at(img, cxx, cyy);
      weight += wx * wy;
    }
  }
  return weight > 0 ? total / weight : 0.0;
}

// Per-channel median over a coarse grid, used as a neutral fill color.
inline std::array<uint8_t, 3> median_color(const ImageBuffer& img) {
  std::array<std::array<uint32_t, 256>, 3> hist{};
  uint32_t step = std::max<uint32_t>(1, std::min(img.width, img.height) / 64);
  uint64_t n = 0;
  for (uint32_t y = 0; y < img.height; y += step)
    for (uint32_t x = 0; x < img.width; x += step) {
      const uint8_t* p = img.px(x, y);
      for (int c = 0; c < 3; ++c) ++hist[c][p[c]];
      ++n;
    }
  std::array<uint8_t, 3> out{};
  for (int c = 0; c < 3; ++c) {
    uint64_t acc = 0;
    for (int v = 0; v < 256; ++v) {
      acc += hist[c][v];
      if (acc * 2 >= n) {
        out[c] = static_cast<uint8_t>(v);
        break;
      }
    }
  }
  return out;
}

inline uint8_t clamp_u8(double v) {
  return static_cast<uint8_t>(std::clamp(v, 0.0, 255.0) + 0.5);
}

}  // namespace proves
