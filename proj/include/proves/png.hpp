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

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "proves/codec.hpp"
#include "proves/errors.hpp"
#include "proves/types.hpp"
#include "proves/util.hpp"

namespace proves {

// Signature attachments live in a tEXt chunk with this keyword. The chunk is
// inserted immediately before IEND; IDAT bytes are never rewritten.
constexpr const char* kSignatureTextKey = "provsig";
constexpr const char* kSidecarSuffix = ".provsig";

namespace png_detail {

constexpr uint8_t kPngSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};

struct Chunk {
  std::string type;
  size_t data_offset;  // into the file buffer
  uint32_t length;
};

inline uint32_t be32(const uint8_t* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | p[3];
}

inline std::vector<Chunk> parse_chunks(const Bytes& file) {
  if (file.size() < 8 || std::memcmp(file.data(), kPngSig, 8) != 0)
    fail(Errc::unsupported_format, "not a PNG file");
  std::vector<Chunk> chunks;
  size_t pos = 8;
  while (pos + 12 <= file.size()) {
    uint32_t len = be32(file.data() + pos);
    if (pos + 12 + size_t(len) > file.size())
      fail(Errc::unsupported_format, "truncated PNG chunk");
    Chunk c;
    c.type.assign(reinterpret_cast<const char*>(file.data() + pos + 4), 4);
    c.data_offset = pos + 8;
    c.length = len;
    uint32_t crc_stored = be32(file.data() + pos + 8 + len);
    uint32_t crc = ::crc32(0, file.data() + pos + 4, len + 4);
    if (crc != crc_stored) fail(Errc::unsupported_format, "PNG chunk CRC mismatch");
    chunks.push_back(c);
    pos += 12 + size_t(len);
    if (c.type == "IEND") break;
  }
  if (chunks.empty() || chunks.front().type != "IHDR" || chunks.back().type != "IEND")
    fail(Errc::unsupported_format, "missing IHDR or IEND");
  return chunks;
}

inline void append_chunk(Bytes& out, const char* type, const uint8_t* data, size_t len) {
  put_u32(out, static_cast<uint32_t>(len));
  size_t type_pos = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data, data + len);
  uint32_t crc = ::crc32(0, out.data() + type_pos, static_cast<uInt>(len + 4));
  put_u32(out, crc);
}

inline uint8_t paeth(int a, int b, int c) {
  int p = a + b - c;
  int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<uint8_t>(a);
  if (pb <= pc) return static_cast<uint8_t>(b);
  return static_cast<uint8_t>(c);
}

}  // namespace png_detail

inline bool is_png(const Bytes& file) {
  return file.size() >= 8 && std::memcmp(file.data(), png_detail::kPngSig, 8) == 0;
}

// Supports 8-bit depth, color types 0 (gray), 2 (RGB), 6 (RGBA, alpha dropped),
// non-interlaced. Everything else is UnsupportedFormat.
inline ImageBuffer decode_png(const Bytes& file) {
  using namespace png_detail;
  auto chunks = parse_chunks(file);
  const Chunk& ihdr = chunks.front();
  if (ihdr.length != 13) fail(Errc::unsupported_format, "bad IHDR length");
  const uint8_t* h = file.data() + ihdr.data_offset;
  uint32_t w = be32(h), ht = be32(h + 4);
  uint8_t depth = h[8], color = h[9], interlace = h[12];
  if (depth != 8 || (color != 0 && color != 2 && color != 6) || interlace != 0)
    fail(Errc::unsupported_format, "unsupported PNG variant");
  ImageBuffer::validate_dims(w, ht);
  int channels = color == 0 ? 1 : (color == 2 ? 3 : 4);

  Bytes compressed;
  for (const auto& c : chunks)
    if (c.type == "IDAT")
      compressed.insert(compressed.end(), file.begin() + c.data_offset,
                        file.begin() + c.data_offset + c.length);
  if (compressed.empty()) fail(Errc::unsupported_format, "no IDAT data");

  size_t stride = size_t(w) * channels;
  Bytes raw((stride + 1) * ht);
  uLongf raw_len = static_cast<uLongf>(raw.size());
  if (::uncompress(raw.data(), &raw_len, compressed.data(),
                   static_cast<uLong>(compressed.size())) != Z_OK ||
      raw_len != raw.size())
    fail(Errc::unsupported_format, "PNG inflate failed");

  // Undo per-row filters in place.
  std::vector<uint8_t> prev(stride, 0);
  ImageBuffer img(w, ht);
  for (uint32_t y = 0; y < ht; ++y) {
    uint8_t filter = raw[(stride + 1) * y];
    uint8_t* row = raw.data() + (stride + 1) * y + 1;
    for (size_t i = 0; i < stride; ++i) {
      int a = i >= size_t(channels) ? row[i - channels] : 0;
      int b = prev[i];
      int c = i >= size_t(channels) ? prev[i - channels] : 0;
      switch (filter) {
        case 0: break;
        case 1: row[i] = static_cast<uint8_t>(row[i] + a); break;
        case 2: row[i] = static_cast<uint8_t>(row[i] + b); break;
        case 3: row[i] = static_cast<uint8_t>(row[i] + (a + b) / 2); break;
        case 4: row[i] = static_cast<uint8_t>(row[i] + paeth(a, b, c)); break;
        default: fail(Errc::unsupported_format, "bad PNG filter type");
      }
    }
    std::memcpy(prev.data(), row, stride);
    uint8_t* dst = img.px(0, y);
    if (channels == 3) {
      std::memcpy(dst, row, stride);
    } else if (channels == 1) {
      for (uint32_t x = 0; x < w; ++x) dst[x * 3] = dst[x * 3 + 1] = dst[x * 3 + 2] = row[x];
    } else {
      for (uint32_t x = 0; x < w; ++x) {
        dst[x * 3] = row[x * 4];
        dst[x * 3 + 1] = row[x * 4 + 1];
        dst[x * 3 + 2] = row[x * 4 + 2];
      }
    }
  }
  return img;
}

inline Bytes encode_png(const ImageBuffer& img) {
  using namespace png_detail;
  Bytes out(kPngSig, kPngSig + 8);

  Bytes ihdr;
  put_u32(ihdr, img.width);
  put_u32(ihdr, img.height);
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // color type RGB
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  append_chunk(out, "IHDR", ihdr.data(), ihdr.size());

  size_t stride = size_t(img.width) * 3;
  Bytes raw((stride + 1) * img.height);
  for (uint32_t y = 0; y < img.height; ++y) {
    raw[(stride + 1) * y] = 0;  // filter: none
    std::memcpy(raw.data() + (stride + 1) * y + 1, img.px(0, y), stride);
  }
  uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
  Bytes compressed(bound);
  if (::compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    fail(Errc::io_error, "PNG deflate failed");
  compressed.resize(bound);
  append_chunk(out, "IDAT", compressed.data(), compressed.size());
  append_chunk(out, "IEND", nullptr, 0);
  return out;
}

// Rebuilds the file with a tEXt chunk carrying the base64 container inserted
// before IEND. An existing chunk under the same keyword is replaced. All other
// chunks, including IDAT, are copied verbatim.
inline Bytes embed_signature_png(const Bytes& file, const SignatureContainer& container) {
  using namespace png_detail;
  auto chunks = parse_chunks(file);
  std::string text = std::string(kSignatureTextKey) + '\0' + base64_encode(encode_container(container));
  Bytes out(kPngSig, kPngSig + 8);
  for (const auto& c : chunks) {
    if (c.type == "tEXt") {
      const char* d = reinterpret_cast<const char*>(file.data() + c.data_offset);
      size_t keylen = strnlen(d, c.length);
      if (keylen < c.length && std::string(d, keylen) == kSignatureTextKey) continue;
    }
    if (c.type == "IEND")
      append_chunk(out, "tEXt", reinterpret_cast<const uint8_t*>(text.data()), text.size());
    append_chunk(out, c.type.c_str(), file.data() + c.data_offset, c.length);
  }
  return out;
}

// NoSignature when the keyword is absent; MalformedContainer when present but
// undecodable.
inline SignatureContainer extract_signature_png(const Bytes& file) {
  using namespace png_detail;
  auto chunks = parse_chunks(file);
  for (const auto& c : chunks) {
    if (c.type != "tEXt") continue;
    const char* d = reinterpret_cast<const char*>(file.data() + c.data_offset);
    size_t keylen = strnlen(d, c.length);
    if (keylen == c.length || std::string(d, keylen) != kSignatureTextKey) continue;
    std::string b64(d + keylen + 1, c.length - keylen - 1);
    Bytes raw;
    try {
      raw = base64_decode(b64);
    } catch (const Error&) {
      fail(Errc::malformed_container, "signature chunk is not valid base64");
    }
    return decode_container(raw);
  }
  fail(Errc::no_signature, "no signature chunk present");
}

inline std::string sidecar_path(const std::string& image_path) {
  return image_path + kSidecarSuffix;
}

}  // namespace proves
