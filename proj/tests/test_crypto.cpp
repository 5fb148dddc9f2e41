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
#include <filesystem>

#include "proves/crypto.hpp"

using namespace proves;

namespace {

// RFC 6979 A.2.5 (P-256, SHA-256) key and signatures; DER forms frozen via an
// independent implementation in tests/make_goldens.py.
constexpr const char* kRfcPrivHex =
    "c9afa9d845ba75166b5c215767b1d6934e50c3db36e89b127b8a622b120f6721";
constexpr const char* kRfcPubHex =
    "0460fed4ba255a9d31c961eb74c6356d68c049b8923b61fa6ce669622e60f29fb6"
    "7903fe1008b8bc99a41ae9e95628bc64f2f1b20c2d7e9f5177a3c294d4462299";
constexpr const char* kRfcSampleDer =
    "3046022100efd48b2aacb6a8fd1140dd9cd45e81d69d2c877b56aaf991c34d0ea84eaf3716"
    "022100f7cb1c942d657c41d436c7a1b6e29f65f3e900dbb9aff4064dc4ab2f843acda8";
constexpr const char* kRfcTestDer =
    "3045022100f1abb023518351cd71d881567b1ea663ed3efcf6c5132b354f28d3b0b7d38367"
    "0220019f4113742a2b14bd25926b49c649155f267e60d3814b4c0cc84250e46f0083";

PrivateKey priv_from_hex(const char* hex) {
  Bytes raw = from_hex(hex);
  REQUIRE(raw.size() == 32);
  PrivateKey k{};
  std::copy(raw.begin(), raw.end(), k.begin());
  return k;
}

Bytes ascii(const char* s) { return Bytes(s, s + std::strlen(s)); }

}  // namespace

TEST_CASE("SHA-256 standard vectors") {
  auto empty = sha256(nullptr, 0);
  CHECK(to_hex(empty.data(), empty.size()) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  auto abc = sha256(ascii("abc"));
  CHECK(to_hex(abc.data(), abc.size()) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("deterministic nonce signatures match RFC 6979 vectors") {
  PrivateKey priv = priv_from_hex(kRfcPrivHex);
  CHECK(to_hex(public_key_from_private(priv)) == kRfcPubHex);

  CHECK(to_hex(ecdsa_sign(priv, ascii("sample"))) == kRfcSampleDer);
  CHECK(to_hex(ecdsa_sign(priv, ascii("test"))) == kRfcTestDer);

  Bytes pub = from_hex(kRfcPubHex);
  CHECK(ecdsa_verify(pub, ascii("sample"), from_hex(kRfcSampleDer)));
  CHECK(ecdsa_verify(pub, ascii("test"), from_hex(kRfcTestDer)));
  CHECK_FALSE(ecdsa_verify(pub, ascii("sample"), from_hex(kRfcTestDer)));
}

TEST_CASE("signing is byte-for-byte repeatable") {
  KeyPair kp = deterministic_keypair(99);
  Bytes msg = ascii("the same message");
  CHECK(ecdsa_sign(kp.private_key, msg) == ecdsa_sign(kp.private_key, msg));
}

TEST_CASE("sign verify round trips with mutation rejection") {
  for (uint64_t i = 0; i < 50; ++i) {
    KeyPair kp = deterministic_keypair(1000 + i);
    Bytes msg(1 + (i * 37) % 300);
    for (size_t j = 0; j < msg.size(); ++j)
      msg[j] = static_cast<uint8_t>(splitmix64(i * 1000 + j) >> 24);

    Bytes sig = ecdsa_sign(kp.private_key, msg);
    REQUIRE(ecdsa_verify(kp.public_key, msg, sig));

    // One flipped bit anywhere in the signature must break it.
    size_t byte = size_t(splitmix64(i + 7)) % sig.size();
    int bit = int(splitmix64(i + 13)) & 7;
    Bytes bad_sig = sig;
    bad_sig[byte] ^= uint8_t(1u << bit);
    CHECK_FALSE(ecdsa_verify(kp.public_key, msg, bad_sig));

    // Same for the message.
    Bytes bad_msg = msg;
    bad_msg[size_t(splitmix64(i + 21)) % msg.size()] ^= 0x01;
    CHECK_FALSE(ecdsa_verify(kp.public_key, bad_msg, sig));

    // And a signature from a different key.
    KeyPair other = deterministic_keypair(5000 + i);
    CHECK_FALSE(ecdsa_verify(other.public_key, msg, sig));
  }
}

TEST_CASE("verify is robust to malformed DER") {
  KeyPair kp = deterministic_keypair(4);
  Bytes msg = ascii("m");
  Bytes sig = ecdsa_sign(kp.private_key, msg);

  CHECK_FALSE(ecdsa_verify(kp.public_key, msg, Bytes{}));
  CHECK_FALSE(ecdsa_verify(kp.public_key, msg, Bytes{0x30}));

  Bytes trailing = sig;
  trailing.push_back(0x00);
  CHECK_FALSE(ecdsa_verify(kp.public_key, msg, trailing));

  Bytes truncated(sig.begin(), sig.end() - 1);
  CHECK_FALSE(ecdsa_verify(kp.public_key, msg, truncated));
}

TEST_CASE("public key validation") {
  Bytes good = from_hex(kRfcPubHex);
  CHECK_NOTHROW(validate_public_key(good));

  Bytes short_key(good.begin(), good.end() - 1);
  CHECK_THROWS_AS(validate_public_key(short_key), Error);

  Bytes bad_prefix = good;
  bad_prefix[0] = 0x02;
  CHECK_THROWS_AS(validate_public_key(bad_prefix), Error);

  Bytes off_curve = good;
  off_curve[64] ^= 0x01;  // perturb y coordinate
  CHECK_THROWS_AS(validate_public_key(off_curve), Error);

  CHECK_THROWS_AS(validate_public_key(Bytes{}), Error);
}

TEST_CASE("deterministic keypairs are stable and distinct") {
  KeyPair a1 = deterministic_keypair(1);
  KeyPair a2 = deterministic_keypair(1);
  KeyPair b = deterministic_keypair(2);
  CHECK(a1 == a2);
  CHECK(a1.public_key != b.public_key);
  CHECK_NOTHROW(validate_public_key(a1.public_key));
}

TEST_CASE("key file round trip") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "proves_test_key.tmp";
  KeyPair kp = deterministic_keypair(31337);
  save_keypair(path.string(), kp);
  KeyPair back = load_keypair(path.string());
  CHECK(back == kp);

  SECTION("mismatched halves are rejected") {
    KeyPair corrupt = kp;
    corrupt.public_key = deterministic_keypair(1).public_key;
    save_keypair(path.string(), corrupt);
    CHECK_THROWS_AS(load_keypair(path.string()), Error);
  }
  SECTION("garbage file is rejected") {
    write_file(path.string(), std::string("not a key file"));
    CHECK_THROWS_AS(load_keypair(path.string()), Error);
  }
  fs::remove(path);
}
