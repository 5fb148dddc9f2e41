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

#include <optional>

#include "proves/png.hpp"

using namespace proves;

namespace {

// Reference files produced by an unrelated PNG encoder (Pillow).
constexpr const char* kGray4x3Hex =
    "89504e470d0a1a0a0000000d4948445200000004000000030800000000919ff11a000000174944415478"
    "9c63e432323262e2e2e2e262e2e2e2e20200096000f6d12996160000000049454e44ae426082";
constexpr const char* kRgba2x2Hex =
    "89504e470d0a1a0a0000000d494844520000000200000002080600000072b60d240000001a4944415478"
    "9c63f8cfc0f09fe13f43030303c37f060d239b1300385705db316227540000000049454e44ae426082";

template <typename F>
std::optional<Errc> errc_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Structurally valid single-IDAT PNG with arbitrary header fields, all-zero
// scanline bytes. Used to probe header validation.
Bytes make_png(uint32_t w, uint32_t h, uint8_t depth, uint8_t color, int channels,
               uint8_t interlace) {
  Bytes out(png_detail::kPngSig, png_detail::kPngSig + 8);
  Bytes ihdr;
  put_u32(ihdr, w);
  put_u32(ihdr, h);
  ihdr.push_back(depth);
  ihdr.push_back(color);
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(interlace);
  png_detail::append_chunk(out, "IHDR", ihdr.data(), ihdr.size());

  size_t stride = size_t(w) * channels * (depth / 8);
  Bytes raw((stride + 1) * h, 0);
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  Bytes compressed(bound);
  REQUIRE(compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) ==
          Z_OK);
  compressed.resize(bound);
  png_detail::append_chunk(out, "IDAT", compressed.data(), compressed.size());
  png_detail::append_chunk(out, "IEND", nullptr, 0);
  return out;
}

ImageBuffer test_image(uint32_t w, uint32_t h, uint64_t seed) {
  ImageBuffer img(w, h);
  uint64_t s = seed;
  for (auto& b : img.pixels) {
    s = splitmix64(s);
    b = static_cast<uint8_t>(s >> 32);
  }
  return img;
}

SignatureContainer test_container(uint8_t tag) {
  SemanticPayload p;
  p.width = 100;
  p.height = 100;
  p.scene = SceneLabel::Indoor;
  p.signed_at = 1;
  p.device_id = "d";
  SignatureContainer c;
  c.payload_bytes = encode_payload(p);
  c.signature = {0xde, 0xad, tag};
  return c;
}

}  // namespace

TEST_CASE("decodes grayscale reference file") {
  ImageBuffer img = decode_png(from_hex(kGray4x3Hex));
  REQUIRE(img.width == 4);
  REQUIRE(img.height == 3);
  const int expected[3][4] = {{10, 60, 110, 160}, {20, 70, 120, 170}, {30, 80, 130, 180}};
  for (uint32_t y = 0; y < 3; ++y)
    for (uint32_t x = 0; x < 4; ++x) {
      const uint8_t* px = img.px(x, y);
      CHECK(px[0] == expected[y][x]);
      CHECK(px[1] == expected[y][x]);
      CHECK(px[2] == expected[y][x]);
    }
}

TEST_CASE("decodes RGBA reference file dropping alpha") {
  ImageBuffer img = decode_png(from_hex(kRgba2x2Hex));
  REQUIRE(img.width == 2);
  REQUIRE(img.height == 2);
  const int expected[4][3] = {{255, 0, 0}, {0, 255, 0}, {0, 0, 255}, {40, 50, 60}};
  for (int i = 0; i < 4; ++i) {
    const uint8_t* px = img.px(i % 2, i / 2);
    CHECK(px[0] == expected[i][0]);
    CHECK(px[1] == expected[i][1]);
    CHECK(px[2] == expected[i][2]);
  }
}

TEST_CASE("encode decode round trip is lossless") {
  for (auto [w, h] : {std::pair<uint32_t, uint32_t>{1, 1}, {33, 17}, {64, 64}, {3, 200}}) {
    ImageBuffer img = test_image(w, h, w * 1000 + h);
    ImageBuffer back = decode_png(encode_png(img));
    CHECK(back.same_pixels(img));
  }
}

TEST_CASE("rejects unsupported PNG variants") {
  CHECK(errc_of([] { decode_png(make_png(2, 2, 8, 3, 1, 0)); }) == Errc::unsupported_format);
  CHECK(errc_of([] { decode_png(make_png(2, 2, 16, 0, 1, 0)); }) == Errc::unsupported_format);
  CHECK(errc_of([] { decode_png(make_png(2, 2, 8, 2, 3, 1)); }) == Errc::unsupported_format);
  CHECK(errc_of([] { decode_png(make_png(2, 2, 4, 0, 1, 0)); }) == Errc::unsupported_format);
}

TEST_CASE("rejects corrupted files") {
  Bytes good = encode_png(test_image(16, 16, 7));

  SECTION("not a PNG") {
    Bytes text{'h', 'e', 'l', 'l', 'o'};
    CHECK_FALSE(is_png(text));
    CHECK(errc_of([&] { decode_png(text); }) == Errc::unsupported_format);
  }
  SECTION("flipped byte inside IDAT fails CRC") {
    Bytes bad = good;
    bad[bad.size() - 20] ^= 0xff;  // inside IDAT payload, before IEND
    CHECK(errc_of([&] { decode_png(bad); }) == Errc::unsupported_format);
  }
  SECTION("truncated file") {
    Bytes cut(good.begin(), good.begin() + good.size() / 2);
    CHECK_THROWS_AS(decode_png(cut), Error);
  }
  SECTION("oversized dims rejected before inflating") {
    Bytes huge(png_detail::kPngSig, png_detail::kPngSig + 8);
    Bytes ihdr;
    put_u32(ihdr, 20000);
    put_u32(ihdr, 20000);
    for (uint8_t b : {8, 0, 0, 0, 0}) ihdr.push_back(b);
    png_detail::append_chunk(huge, "IHDR", ihdr.data(), ihdr.size());
    Bytes stub{0, 0, 0};
    png_detail::append_chunk(huge, "IDAT", stub.data(), stub.size());
    png_detail::append_chunk(huge, "IEND", nullptr, 0);
    CHECK_THROWS_AS(decode_png(huge), Error);
  }
}

TEST_CASE("signature chunk embed and extract") {
  ImageBuffer img = test_image(24, 18, 42);
  Bytes plain = encode_png(img);
  SignatureContainer c1 = test_container(1);

  Bytes with_sig = embed_signature_png(plain, c1);
  CHECK(is_png(with_sig));
  CHECK(decode_png(with_sig).same_pixels(img));
  CHECK(extract_signature_png(with_sig) == c1);

  SECTION("pixel data bytes are copied verbatim") {
    // The embedded file must contain the original IDAT region unchanged.
    auto before = png_detail::parse_chunks(plain);
    auto after = png_detail::parse_chunks(with_sig);
    const png_detail::Chunk* idat_before = nullptr;
    const png_detail::Chunk* idat_after = nullptr;
    for (const auto& c : before)
      if (c.type == "IDAT") idat_before = &c;
    for (const auto& c : after)
      if (c.type == "IDAT") idat_after = &c;
    REQUIRE(idat_before != nullptr);
    REQUIRE(idat_after != nullptr);
    REQUIRE(idat_before->length == idat_after->length);
    CHECK(std::memcmp(plain.data() + idat_before->data_offset,
                      with_sig.data() + idat_after->data_offset, idat_before->length) == 0);
  }

  SECTION("re-embedding replaces the existing chunk") {
    SignatureContainer c2 = test_container(2);
    Bytes replaced = embed_signature_png(with_sig, c2);
    CHECK(extract_signature_png(replaced) == c2);
    int text_chunks = 0;
    for (const auto& c : png_detail::parse_chunks(replaced))
      if (c.type == "tEXt") ++text_chunks;
    CHECK(text_chunks == 1);
    CHECK(decode_png(replaced).same_pixels(img));
  }

  SECTION("missing signature reports NoSignature") {
    CHECK(errc_of([&] { extract_signature_png(plain); }) == Errc::no_signature);
  }

  SECTION("garbage under the signature keyword reports MalformedContainer") {
    Bytes bad(plain.begin(), plain.end() - 12);  // strip IEND
    const char payload[] = "provsig\0!not-base64!";
    png_detail::append_chunk(bad, "tEXt", reinterpret_cast<const uint8_t*>(payload),
                             sizeof(payload) - 1);
    png_detail::append_chunk(bad, "IEND", nullptr, 0);
    CHECK(errc_of([&] { extract_signature_png(bad); }) == Errc::malformed_container);
  }

  SECTION("valid base64 of a non-container reports MalformedContainer") {
    Bytes bad(plain.begin(), plain.end() - 12);
    std::string payload = std::string("provsig") + '\0' + base64_encode({1, 2, 3});
    png_detail::append_chunk(bad, "tEXt", reinterpret_cast<const uint8_t*>(payload.data()),
                             payload.size());
    png_detail::append_chunk(bad, "IEND", nullptr, 0);
    CHECK(errc_of([&] { extract_signature_png(bad); }) == Errc::malformed_container);
  }
}

TEST_CASE("sidecar path naming") {
  CHECK(sidecar_path("shot.png") == "shot.png.provsig");
  CHECK(sidecar_path("/a/b/c.png") == "/a/b/c.png.provsig");
}
