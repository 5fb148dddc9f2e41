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

#include <catch_amalgamated.hpp>

#include <cstring>

#include "proves/corpus.hpp"
#include "proves/transforms.hpp"

using namespace proves;

namespace {

ImageBuffer sample_scene(uint64_t seed, size_t faces = 3) {
  CorpusSpec spec;
  spec.seed = seed;
  spec.face_count = faces;
  spec.width = 320;
  spec.height = 240;
  return make_synthetic_image(spec).image;
}

std::vector<BBox> sample_boxes(uint64_t seed, size_t faces = 3) {
  CorpusSpec spec;
  spec.seed = seed;
  spec.face_count = faces;
  spec.width = 320;
  spec.height = 240;
  std::vector<BBox> out;
  for (const auto& g : make_synthetic_image(spec).glyphs) out.push_back(g.box());
  return out;
}

bool inside_any(int x, int y, const std::vector<BBox>& boxes, const std::vector<size_t>& targets) {
  for (size_t t : targets) {
    const BBox& b = boxes[t];
    if (x >= int(std::floor(b.x_min)) && x < int(std::ceil(b.x_max)) &&
        y >= int(std::floor(b.y_min)) && y < int(std::ceil(b.y_max)))
      return true;
  }
  return false;
}

// Pixels outside the union of target rects must be bytewise untouched.
void check_locality(const ImageBuffer& before, const ImageBuffer& after,
                    const std::vector<BBox>& boxes, const std::vector<size_t>& targets) {
  REQUIRE(before.width == after.width);
  REQUIRE(before.height == after.height);
  size_t changed_outside = 0;
  for (uint32_t y = 0; y < before.height; ++y)
    for (uint32_t x = 0; x < before.width; ++x) {
      if (inside_any(int(x), int(y), boxes, targets)) continue;
      if (std::memcmp(before.px(x, y), after.px(x, y), 3) != 0) ++changed_outside;
    }
  CHECK(changed_outside == 0);
}

}  // namespace

TEST_CASE("identity benign spec leaves the image bytewise unchanged") {
  ImageBuffer img = sample_scene(5);
  BenignTransformSpec spec;  // all defaults
  BenignResult out = apply_benign(img, spec);
  CHECK(out.image.same_pixels(img));
  CHECK(out.truth.s == 1.0);
  CHECK(out.truth.dx == 0.0);
  CHECK(out.truth.phi_rad == 0.0);
}

TEST_CASE("random benign specs are reproducible and in range") {
  BenignTransformSpec a = BenignTransformSpec::random(9, 5);
  BenignTransformSpec b = BenignTransformSpec::random(9, 5);
  CHECK(a.scale == b.scale);
  CHECK(a.translate_x == b.translate_x);
  CHECK(a.rotate_deg == b.rotate_deg);

  for (uint64_t seed = 0; seed < 200; ++seed) {
    BenignTransformSpec s = BenignTransformSpec::random(seed, seed % 2 ? 5 : 0);
    CHECK(s.scale >= 0.85);
    CHECK(s.scale <= 1.15);
    CHECK(std::abs(s.translate_x) <= 0.15);
    CHECK(std::abs(s.translate_y) <= 0.15);
    CHECK((s.rotate_deg == 0.0 || std::abs(s.rotate_deg) == 5.0));
    CHECK(s.contrast >= 0.85);
    CHECK(s.contrast <= 1.15);
    CHECK(s.brightness >= 0.85);
    CHECK(s.brightness <= 1.15);
    CHECK(s.color >= 0.85);
    CHECK(s.color <= 1.15);
  }
  CHECK_THROWS_AS(BenignTransformSpec::random(1, 3), Error);
}

TEST_CASE("scaling changes dimensions by the expected factor") {
  ImageBuffer img = sample_scene(6);
  BenignTransformSpec spec;
  spec.scale = 1.15;
  BenignResult out = apply_benign(img, spec);
  CHECK(out.image.width == uint32_t(std::lround(320 * 1.15)));
  CHECK(out.image.height == uint32_t(std::lround(240 * 1.15)));
  CHECK(out.truth.cx == out.image.width / 2.0);
  CHECK(out.truth.cy == out.image.height / 2.0);
}

TEST_CASE("the ground truth map tracks a glyph center through all stages") {
  CorpusSpec cs;
  cs.seed = 8;
  cs.face_count = 1;
  cs.width = 320;
  cs.height = 240;
  SyntheticImage scene = make_synthetic_image(cs);
  GlyphFaceSpec g = scene.glyphs[0];

  BenignTransformSpec spec;
  spec.scale = 1.1;
  spec.translate_x = 0.05;
  spec.translate_y = -0.04;
  spec.rotate_deg = 5.0;
  spec.contrast = 1.1;
  spec.brightness = 0.9;
  spec.color = 1.05;
  BenignResult out = apply_benign(scene.image, spec);

  // The mapped center must land where the detector still sees the glyph.
  auto q = out.truth.map(g.cx, g.cy);
  REQUIRE(q[0] >= 0);
  REQUIRE(q[1] >= 0);
  REQUIRE(q[0] < out.image.width);
  REQUIRE(q[1] < out.image.height);
  auto dets = reference_detect(out.image);
  double best_dist = 1e9;
  for (const auto& d : dets) best_dist = std::min(best_dist, std::hypot(d.cx() - q[0], d.cy() - q[1]));
  CHECK(best_dist < 4.0);

  // The map must agree with composing the stages by hand.
  double s = spec.scale;
  double dx = std::lround(spec.translate_x * std::lround(320 * s));
  double dy = std::lround(spec.translate_y * std::lround(240 * s));
  double cx = std::lround(320 * s) / 2.0, cy = std::lround(240 * s) / 2.0;
  double phi = spec.rotate_deg * std::numbers::pi / 180.0;
  double px = s * g.cx + dx - cx, py = s * g.cy + dy - cy;
  double ex = std::cos(phi) * px - std::sin(phi) * py + cx;
  double ey = std::sin(phi) * px + std::cos(phi) * py + cy;
  CHECK_THAT(q[0], Catch::Matchers::WithinAbs(ex, 1e-9));
  CHECK_THAT(q[1], Catch::Matchers::WithinAbs(ey, 1e-9));
}

TEST_CASE("translation fills vacated area with the median color") {
  // Majority color everywhere except a thin minority stripe; the fill must be
  // the majority (median), not the stripe.
  ImageBuffer img(40, 30);
  for (uint32_t y = 0; y < img.height; ++y)
    for (uint32_t x = 0; x < img.width; ++x) {
      uint8_t* p = img.px(x, y);
      bool stripe = x >= 36;
      p[0] = stripe ? 10 : 200;
      p[1] = stripe ? 20 : 100;
      p[2] = stripe ? 30 : 50;
    }
  ImageBuffer out = transform_detail::translate_image(img, -10, 0);
  const uint8_t* vacated = out.px(35, 15);
  CHECK(vacated[0] == 200);
  CHECK(vacated[1] == 100);
  CHECK(vacated[2] == 50);
  const uint8_t* moved = out.px(15, 15);
  CHECK(moved[0] == 200);
  const uint8_t* moved_stripe = out.px(27, 15);
  CHECK(moved_stripe[0] == 10);
}

TEST_CASE("tone identity is the identity LUT") {
  ImageBuffer img = sample_scene(7);
  ImageBuffer copy = img;
  transform_detail::tone_adjust(copy, 1.0, 1.0, 1.0);
  CHECK(copy.same_pixels(img));
}

TEST_CASE("tone adjustment moves channels in the documented directions") {
  ImageBuffer img(2, 2);
  for (auto& b : img.pixels) b = 100;
  transform_detail::tone_adjust(img, 1.0, 1.0, 1.1);
  const uint8_t* p = img.px(0, 0);
  CHECK(p[0] > p[1]);  // warmer: red up
  CHECK(p[2] < p[1]);  // blue down
  CHECK(p[1] == 100);
}

TEST_CASE("attack spec validation") {
  AttackSpec spec;
  spec.kind = AttackKind::Replace;
  spec.targets = {0};
  CHECK_NOTHROW(spec.validate(3));

  spec.noise_budget = kMaxNoiseBudget + 0.01;
  CHECK_THROWS_AS(spec.validate(3), Error);
  spec.noise_budget = 0.0;

  spec.targets = {5};
  CHECK_THROWS_AS(spec.validate(3), Error);

  spec.targets = {};
  CHECK_THROWS_AS(spec.validate(3), Error);

  spec.kind = AttackKind::Swap;
  spec.targets = {0};
  CHECK_THROWS_AS(spec.validate(3), Error);
  spec.targets = {0, 1};
  CHECK_NOTHROW(spec.validate(3));
}

TEST_CASE("attack kind names round trip") {
  for (AttackKind k : {AttackKind::Replace, AttackKind::Swap, AttackKind::Remove,
                       AttackKind::Occlude, AttackKind::CropOut}) {
    CHECK(attack_kind_from_name(attack_kind_name(k)) == k);
  }
  CHECK(attack_kind_from_name("swap") == AttackKind::Swap);
  CHECK_THROWS_AS(attack_kind_from_name("melt"), Error);
}

TEST_CASE("attacks edit only the targeted regions") {
  ImageBuffer img = sample_scene(21);
  std::vector<BBox> boxes = sample_boxes(21);
  REQUIRE(boxes.size() == 3);

  SECTION("replace") {
    AttackSpec spec{AttackKind::Replace, {1}, 0.0, 99};
    ImageBuffer out = apply_attack(img, boxes, spec);
    check_locality(img, out, boxes, {1});
  }
  SECTION("replace with noise") {
    AttackSpec spec{AttackKind::Replace, {0, 2}, kMaxNoiseBudget, 99};
    ImageBuffer out = apply_attack(img, boxes, spec);
    check_locality(img, out, boxes, {0, 2});
  }
  SECTION("swap") {
    AttackSpec spec{AttackKind::Swap, {0, 1}, 0.0, 99};
    ImageBuffer out = apply_attack(img, boxes, spec);
    check_locality(img, out, boxes, {0, 1});
  }
  SECTION("remove") {
    AttackSpec spec{AttackKind::Remove, {2}, 0.0, 99};
    ImageBuffer out = apply_attack(img, boxes, spec);
    check_locality(img, out, boxes, {2});
  }
  SECTION("occlude") {
    AttackSpec spec{AttackKind::Occlude, {0}, 0.0, 99};
    ImageBuffer out = apply_attack(img, boxes, spec);
    check_locality(img, out, boxes, {0});
    auto r = attack_detail::clip_rect(boxes[0], out);
    const uint8_t* p = out.px(uint32_t(r.x0 + r.width() / 2), uint32_t(r.y0 + r.height() / 2));
    CHECK(p[0] == attack_detail::kOccluderGray);
    CHECK(p[1] == attack_detail::kOccluderGray);
  }
}

TEST_CASE("swap exchanges the two regions") {
  ImageBuffer img = sample_scene(22);
  std::vector<BBox> boxes = sample_boxes(22);
  AttackSpec spec{AttackKind::Swap, {0, 1}, 0.0, 5};
  ImageBuffer out = apply_attack(img, boxes, spec);

  // Center pixel of region 0 after the swap matches what region 1 held
  // before (up to resampling when the rects differ in size).
  auto r0 = attack_detail::clip_rect(boxes[0], img);
  auto r1 = attack_detail::clip_rect(boxes[1], img);
  if (r0.width() == r1.width() && r0.height() == r1.height()) {
    CHECK(std::memcmp(out.px(uint32_t(r0.x0 + 2), uint32_t(r0.y0 + 2)),
                      img.px(uint32_t(r1.x0 + 2), uint32_t(r1.y0 + 2)), 3) == 0);
  }
  // It must at least have changed both regions.
  CHECK_FALSE(out.same_pixels(img));
}

TEST_CASE("replace repaints a different identity in place") {
  ImageBuffer img = sample_scene(23, 1);
  std::vector<BBox> boxes = sample_boxes(23, 1);
  AttackSpec spec{AttackKind::Replace, {0}, 0.0, 7};
  ImageBuffer out = apply_attack(img, boxes, spec);
  CHECK_FALSE(out.same_pixels(img));
  // Still looks glyph-like: a detector should keep finding a box there.
  auto dets = reference_detect(out);
  REQUIRE_FALSE(dets.empty());
  CHECK(dets[0].iou(boxes[0]) > 0.5);
}

TEST_CASE("remove erases the glyph from the detector's view") {
  ImageBuffer img = sample_scene(24, 1);
  std::vector<BBox> boxes = sample_boxes(24, 1);
  REQUIRE(reference_detect(img).size() == 1);
  AttackSpec spec{AttackKind::Remove, {0}, 0.0, 7};
  ImageBuffer out = apply_attack(img, boxes, spec);
  CHECK(reference_detect(out).empty());
}

TEST_CASE("crop out excludes the target and changes dimensions") {
  ImageBuffer img = sample_scene(25);
  std::vector<BBox> boxes = sample_boxes(25);
  AttackSpec spec{AttackKind::CropOut, {0}, 0.0, 7};
  ImageBuffer out = apply_attack(img, boxes, spec);
  CHECK((out.width < img.width || out.height < img.height));
  CHECK(int64_t(out.width) * out.height > 0);
}

TEST_CASE("crop window validates bounds") {
  ImageBuffer img = sample_scene(26);
  ImageBuffer out = crop_window(img, 10, 20, 110, 140);
  CHECK(out.width == 100);
  CHECK(out.height == 120);
  CHECK(std::memcmp(out.px(0, 0), img.px(10, 20), 3) == 0);
  CHECK_THROWS_AS(crop_window(img, 50, 50, 50, 60), Error);
}
