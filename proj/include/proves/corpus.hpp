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
#include <random>
#include <vector>

#include "proves/errors.hpp"
#include "proves/perception.hpp"
#include "proves/types.hpp"
#include "proves/util.hpp"

namespace proves {

struct CorpusSpec {
  uint64_t seed = 0;
  size_t face_count = 1;
  uint32_t width = 512;
  uint32_t height = 384;
  std::optional<SceneLabel> scene;  // unset: drawn from the seed
};

struct SyntheticImage {
  ImageBuffer image;
  SceneLabel scene;
  std::vector<GlyphFaceSpec> glyphs;  // sorted like detector output
};

// Deterministic scene builder. Glyph sizes stay above the 0.5% signing-area
// floor at typical canvas sizes and placement keeps a clear gap between
// glyphs and a margin to the frame so benign shifts rarely clip them.
inline SyntheticImage make_synthetic_image(const CorpusSpec& spec) {
  if (spec.face_count > 32) fail(Errc::invalid_argument, "too many faces requested");
  ImageBuffer::validate_dims(spec.width, spec.height);

  std::mt19937_64 rng(splitmix64(hash_combine(spec.seed, 0x636f7270ull)));
  SceneLabel scene = spec.scene ? *spec.scene
                                : ((rng() & 1) ? SceneLabel::Indoor : SceneLabel::Outdoor);

  double area = double(spec.width) * spec.height;
  double min_side = std::max(44.0, std::ceil(std::sqrt(0.005 * area)) + 4.0);
  double max_side = 92.0;
  if (spec.face_count > 0) {
    double budget = std::sqrt(area * 0.30 / double(spec.face_count));
    max_side = std::clamp(budget, min_side + 4.0, 92.0);
  }

  const double margin = 10.0;
  const double gap = 8.0;
  std::vector<GlyphFaceSpec> glyphs;
  std::uniform_real_distribution<double> usize(min_side, max_side);
  for (size_t i = 0; i < spec.face_count; ++i) {
    double size = usize(rng);
    bool placed = false;
    for (int attempt = 0; attempt < 400 && !placed; ++attempt) {
      if (attempt > 0 && attempt % 100 == 0 && size > min_side)
        size = std::max(min_side, size * 0.85);
      double lo_x = margin + size / 2, hi_x = spec.width - margin - size / 2;
      double lo_y = margin + size / 2, hi_y = spec.height - margin - size / 2;
      if (lo_x >= hi_x || lo_y >= hi_y) break;
      GlyphFaceSpec g;
      g.identity_seed = hash_combine(spec.seed, 0x69640000ull + i);
      g.size = size;
      g.cx = lo_x + (hi_x - lo_x) * hash_unit(rng());
      g.cy = lo_y + (hi_y - lo_y) * hash_unit(rng());
      BBox nb = g.box();
      bool clear = true;
      for (const auto& other : glyphs) {
        BBox ob = other.box();
        BBox grown{ob.x_min - gap, ob.y_min - gap, ob.x_max + gap, ob.y_max + gap};
        if (nb.intersection_area(grown) > 0) {
          clear = false;
          break;
        }
      }
      if (clear) {
        glyphs.push_back(g);
        placed = true;
      }
    }
    if (!placed) fail(Errc::glyph_overlap, "could not place all glyphs without overlap");
  }

  std::sort(glyphs.begin(), glyphs.end(), [](const GlyphFaceSpec& a, const GlyphFaceSpec& b) {
    BBox ba = a.box(), bb = b.box();
    if (ba.y_min != bb.y_min) return ba.y_min < bb.y_min;
    if (ba.x_min != bb.x_min) return ba.x_min < bb.x_min;
    return ba.x_max < bb.x_max;
  });

  SyntheticImage out;
  out.scene = scene;
  out.glyphs = glyphs;
  out.image = render_scene(spec.width, spec.height, scene, glyphs,
                           hash_combine(spec.seed, 0x62670000ull));
  return out;
}

}  // namespace proves
