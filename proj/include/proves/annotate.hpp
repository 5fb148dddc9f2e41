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
#include <string>

#include "proves/imaging.hpp"
#include "proves/types.hpp"

namespace proves {

constexpr std::array<uint8_t, 3> kAnnotateBlue = {0, 0, 255};
constexpr std::array<uint8_t, 3> kAnnotateRed = {255, 0, 0};
constexpr int kAnnotateStroke = 3;

inline void draw_box(ImageBuffer& img, const BBox& b, const std::array<uint8_t, 3>& color,
                     int stroke = kAnnotateStroke) {
  int x0 = static_cast<int>(std::floor(b.x_min));
  int y0 = static_cast<int>(std::floor(b.y_min));
  int x1 = static_cast<int>(std::ceil(b.x_max));
  int y1 = static_cast<int>(std::ceil(b.y_max));
  for (int y = y0 - stroke; y < y1 + stroke; ++y)
    for (int x = x0 - stroke; x < x1 + stroke; ++x) {
      bool on_edge = (x < x0 || x >= x1 || y < y0 || y >= y1);
      if (!on_edge) continue;
      if (x < 0 || y < 0 || x >= int(img.width) || y >= int(img.height)) continue;
      uint8_t* p = img.px(uint32_t(x), uint32_t(y));
      p[0] = color[0];
      p[1] = color[1];
      p[2] = color[2];
    }
}

namespace font_detail {

// 5x7 glyphs, one byte per row, low 5 bits used.
inline const uint8_t* glyph_rows(char c) {
  static constexpr uint8_t digits[10][7] = {
      {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
      {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
      {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
      {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
      {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
      {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
      {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
      {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
      {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
      {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
  };
  static constexpr uint8_t c_lo[7] = {0x00, 0x00, 0x0E, 0x10, 0x10, 0x11, 0x0E};
  static constexpr uint8_t r_lo[7] = {0x00, 0x00, 0x16, 0x19, 0x10, 0x10, 0x10};
  static constexpr uint8_t o_lo[7] = {0x00, 0x00, 0x0E, 0x11, 0x11, 0x11, 0x0E};
  static constexpr uint8_t p_lo[7] = {0x00, 0x00, 0x1E, 0x11, 0x1E, 0x10, 0x10};
  static constexpr uint8_t e_lo[7] = {0x00, 0x00, 0x0E, 0x11, 0x1F, 0x10, 0x0E};
  static constexpr uint8_t d_lo[7] = {0x01, 0x01, 0x0F, 0x11, 0x11, 0x11, 0x0F};
  static constexpr uint8_t colon[7] = {0x00, 0x04, 0x00, 0x00, 0x04, 0x00, 0x00};
  static constexpr uint8_t blank[7] = {0, 0, 0, 0, 0, 0, 0};
  if (c >= '0' && c <= '9') return digits[c - '0'];
  switch (c) {
    case 'c': return c_lo;
    case 'r': return r_lo;
    case 'o': return o_lo;
    case 'p': return p_lo;
    case 'e': return e_lo;
    case 'd': return d_lo;
    case ':': return colon;
    default: return blank;
  }
}

}  // namespace font_detail

inline void draw_text(ImageBuffer& img, int x, int y, const std::string& text,
                      const std::array<uint8_t, 3>& color, int scale = 2) {
  int cursor = x;
  for (char c : text) {
    const uint8_t* rows = font_detail::glyph_rows(c);
    for (int ry = 0; ry < 7; ++ry)
      for (int rx = 0; rx < 5; ++rx) {
        if (!((rows[ry] >> (4 - rx)) & 1)) continue;
        for (int sy = 0; sy < scale; ++sy)
          for (int sx = 0; sx < scale; ++sx) {
            int px = cursor + rx * scale + sx, py = y + ry * scale + sy;
            if (px < 0 || py < 0 || px >= int(img.width) || py >= int(img.height)) continue;
            uint8_t* p = img.px(uint32_t(px), uint32_t(py));
            p[0] = color[0];
            p[1] = color[1];
            p[2] = color[2];
          }
      }
    cursor += 6 * scale;
  }
}

// Blue boxes on verified faces, red on tampered ones, and a cropped-count
// overlay in the top left corner.
inline ImageBuffer annotate_report(const ImageBuffer& image, const VerificationReport& report) {
  ImageBuffer out = image;
  for (const FaceOutcome& f : report.face_outcomes) {
    if (!f.bbox_in_current) continue;
    if (f.kind == FaceOutcomeKind::Verified || f.kind == FaceOutcomeKind::VerifiedPartial)
      draw_box(out, *f.bbox_in_current, kAnnotateBlue);
    else if (f.kind == FaceOutcomeKind::Tampered)
      draw_box(out, *f.bbox_in_current, kAnnotateRed);
  }
  draw_text(out, 6, 6, "cropped: " + std::to_string(report.cropped_count), kAnnotateRed);
  return out;
}

}  // namespace proves
