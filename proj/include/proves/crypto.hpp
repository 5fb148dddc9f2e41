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

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/ecdsa.h>
#include <openssl/evp.h>
#include <openssl/obj_mac.h>
#include <openssl/core_names.h>
#include <openssl/params.h>

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "proves/errors.hpp"
#include "proves/util.hpp"

namespace proves {

using Sha256Digest = std::array<uint8_t, 32>;
using PrivateKey = std::array<uint8_t, 32>;  // big-endian scalar

inline Sha256Digest sha256(const uint8_t* data, size_t size) {
  Sha256Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data, size, out.data(), &len, EVP_sha256(), nullptr) != 1 || len != 32)
    fail(Errc::io_error, "SHA-256 failed");
  return out;
}

inline Sha256Digest sha256(const Bytes& b) { return sha256(b.data(), b.size()); }

namespace ec_detail {

struct BnDeleter {
  void operator()(BIGNUM* p) const { BN_free(p); }
};
struct BnCtxDeleter {
  void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct PointDeleter {
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct SigDeleter {
  void operator()(ECDSA_SIG* p) const { ECDSA_SIG_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;
using SigPtr = std::unique_ptr<ECDSA_SIG, SigDeleter>;

// Named-curve groups are immutable after creation and safe to share.
inline const EC_GROUP* p256() {
  static EC_GROUP* group = [] {
    EC_GROUP* g = EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
    if (!g) fail(Errc::io_error, "cannot create P-256 group");
    return g;
  }();
  return group;
}

inline const BIGNUM* order() { return EC_GROUP_get0_order(p256()); }

inline BnPtr bn_from_bytes(const uint8_t* data, size_t size) {
  BnPtr bn(BN_bin2bn(data, static_cast<int>(size), nullptr));
  if (!bn) fail(Errc::io_error, "BN_bin2bn failed");
  return bn;
}

inline std::array<uint8_t, 32> bn_to_32(const BIGNUM* bn) {
  std::array<uint8_t, 32> out{};
  if (BN_bn2binpad(bn, out.data(), 32) != 32) fail(Errc::io_error, "BN_bn2binpad failed");
  return out;
}

inline Sha256Digest hmac_sha256(const uint8_t* key, size_t key_len,
                                const std::vector<Bytes>& parts) {
  static EVP_MAC* mac = [] {
    EVP_MAC* m = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
    if (!m) fail(Errc::io_error, "cannot fetch HMAC");
    return m;
  }();
  std::unique_ptr<EVP_MAC_CTX, decltype(&EVP_MAC_CTX_free)> ctx(EVP_MAC_CTX_new(mac),
                                                                EVP_MAC_CTX_free);
  if (!ctx) fail(Errc::io_error, "EVP_MAC_CTX_new failed");
  char digest_name[] = "SHA256";
  OSSL_PARAM params[] = {OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest_name, 0),
                         OSSL_PARAM_construct_end()};
  if (EVP_MAC_init(ctx.get(), key, key_len, params) != 1)
    fail(Errc::io_error, "EVP_MAC_init failed");
  for (const auto& p : parts)
    if (!p.empty() && EVP_MAC_update(ctx.get(), p.data(), p.size()) != 1)
      fail(Errc::io_error, "EVP_MAC_update failed");
  Sha256Digest out{};
  size_t out_len = 0;
  if (EVP_MAC_final(ctx.get(), out.data(), &out_len, out.size()) != 1 || out_len != 32)
    fail(Errc::io_error, "EVP_MAC_final failed");
  return out;
}

// Deterministic nonce derivation (HMAC-SHA256 DRBG construction). For P-256
// with SHA-256 both hash and group order are 256 bits, so bits2int is the
// identity on the 32-byte strings involved.
inline BnPtr derive_nonce(const PrivateKey& x, const Sha256Digest& h1, BN_CTX* ctx) {
  const BIGNUM* q = order();
  BnPtr z(BN_bin2bn(h1.data(), 32, nullptr));
  BnPtr z_mod(BN_new());
  if (!z || !z_mod || !BN_nnmod(z_mod.get(), z.get(), q, ctx))
    fail(Errc::io_error, "nonce derivation failed");
  std::array<uint8_t, 32> h_oct = bn_to_32(z_mod.get());

  Bytes x_part(x.begin(), x.end());
  Bytes h_part(h_oct.begin(), h_oct.end());
  Sha256Digest V{}, K{};
  V.fill(0x01);
  K.fill(0x00);
  auto vb = [&] { return Bytes(V.begin(), V.end()); };

  K = hmac_sha256(K.data(), 32, {vb(), Bytes{0x00}, x_part, h_part});
  V = hmac_sha256(K.data(), 32, {vb()});
  K = hmac_sha256(K.data(), 32, {vb(), Bytes{0x01}, x_part, h_part});
  V = hmac_sha256(K.data(), 32, {vb()});

  for (;;) {
    V = hmac_sha256(K.data(), 32, {vb()});
    BnPtr k(BN_bin2bn(V.data(), 32, nullptr));
    if (!k) fail(Errc::io_error, "nonce derivation failed");
    if (!BN_is_zero(k.get()) && BN_cmp(k.get(), q) < 0) return k;
    K = hmac_sha256(K.data(), 32, {vb(), Bytes{0x00}});
    V = hmac_sha256(K.data(), 32, {vb()});
  }
}

}  // namespace ec_detail

struct KeyPair {
  PrivateKey private_key{};
  Bytes public_key;  // 65-byte uncompressed SEC1 point

  bool operator==(const KeyPair&) const = default;
};

inline Bytes public_key_from_private(const PrivateKey& priv) {
  using namespace ec_detail;
  const EC_GROUP* g = p256();
  BnCtxPtr ctx(BN_CTX_new());
  BnPtr d = bn_from_bytes(priv.data(), priv.size());
  if (BN_is_zero(d.get()) || BN_cmp(d.get(), order()) >= 0)
    fail(Errc::invalid_argument, "private key scalar out of range");
  PointPtr Q(EC_POINT_new(g));
  if (!Q || EC_POINT_mul(g, Q.get(), d.get(), nullptr, nullptr, ctx.get()) != 1)
    fail(Errc::io_error, "point multiplication failed");
  Bytes out(65);
  if (EC_POINT_point2oct(g, Q.get(), POINT_CONVERSION_UNCOMPRESSED, out.data(), out.size(),
                         ctx.get()) != 65)
    fail(Errc::io_error, "point serialization failed");
  return out;
}

inline KeyPair keypair_from_private(const PrivateKey& priv) {
  return KeyPair{priv, public_key_from_private(priv)};
}

inline KeyPair generate_keypair() {
  using namespace ec_detail;
  BnPtr d(BN_new());
  if (!d) fail(Errc::io_error, "BN_new failed");
  do {
    if (BN_rand_range(d.get(), order()) != 1) fail(Errc::io_error, "BN_rand_range failed");
  } while (BN_is_zero(d.get()));
  return keypair_from_private(bn_to_32(d.get()));
}

// Reproducible keypair for tests and benchmarks. The top byte is masked so
// the scalar stays below the curve order; the low bit is forced so it stays
// nonzero.
inline KeyPair deterministic_keypair(uint64_t seed) {
  PrivateKey priv{};
  for (size_t i = 0; i < priv.size(); ++i)
    priv[i] = static_cast<uint8_t>(splitmix64(seed + i) >> 32);
  priv[0] &= 0x7f;
  priv[31] |= 0x01;
  return keypair_from_private(priv);
}

inline void validate_public_key(const Bytes& pub) {
  using namespace ec_detail;
  if (pub.size() != 65 || pub[0] != 0x04)
    fail(Errc::invalid_argument, "public key must be 65-byte uncompressed SEC1");
  const EC_GROUP* g = p256();
  BnCtxPtr ctx(BN_CTX_new());
  PointPtr Q(EC_POINT_new(g));
  if (!Q || EC_POINT_oct2point(g, Q.get(), pub.data(), pub.size(), ctx.get()) != 1 ||
      EC_POINT_is_on_curve(g, Q.get(), ctx.get()) != 1)
    fail(Errc::invalid_argument, "public key point not on curve");
}

// Deterministic ECDSA over sha256(message); identical inputs produce
// byte-identical DER signatures.
inline Bytes ecdsa_sign(const PrivateKey& priv, const uint8_t* msg, size_t msg_len) {
  using namespace ec_detail;
  const EC_GROUP* g = p256();
  const BIGNUM* q = order();
  BnCtxPtr ctx(BN_CTX_new());
  Sha256Digest h1 = sha256(msg, msg_len);

  BnPtr d = bn_from_bytes(priv.data(), priv.size());
  if (BN_is_zero(d.get()) || BN_cmp(d.get(), q) >= 0)
    fail(Errc::invalid_argument, "private key scalar out of range");
  BnPtr z(BN_bin2bn(h1.data(), 32, nullptr));
  BnPtr e(BN_new());
  if (!z || !e || !BN_nnmod(e.get(), z.get(), q, ctx.get()))
    fail(Errc::io_error, "digest reduction failed");

  Sha256Digest h_retry = h1;
  for (;;) {
    BnPtr k = derive_nonce(priv, h_retry, ctx.get());
    PointPtr R(EC_POINT_new(g));
    BnPtr rx(BN_new()), r(BN_new());
    if (!R || !rx || !r || EC_POINT_mul(g, R.get(), k.get(), nullptr, nullptr, ctx.get()) != 1 ||
        EC_POINT_get_affine_coordinates(g, R.get(), rx.get(), nullptr, ctx.get()) != 1 ||
        !BN_nnmod(r.get(), rx.get(), q, ctx.get()))
      fail(Errc::io_error, "nonce point failed");
    if (BN_is_zero(r.get())) {
      h_retry = sha256(h_retry.data(), h_retry.size());
      continue;
    }
    BnPtr kinv(BN_mod_inverse(nullptr, k.get(), q, ctx.get()));
    BnPtr rd(BN_new()), sum(BN_new()), s(BN_new());
    if (!kinv || !rd || !sum || !s ||
        !BN_mod_mul(rd.get(), r.get(), d.get(), q, ctx.get()) ||
        !BN_mod_add(sum.get(), e.get(), rd.get(), q, ctx.get()) ||
        !BN_mod_mul(s.get(), kinv.get(), sum.get(), q, ctx.get()))
      fail(Errc::io_error, "signature equation failed");
    if (BN_is_zero(s.get())) {
      h_retry = sha256(h_retry.data(), h_retry.size());
      continue;
    }
    SigPtr sig(ECDSA_SIG_new());
    if (!sig || ECDSA_SIG_set0(sig.get(), r.release(), s.release()) != 1)
      fail(Errc::io_error, "signature assembly failed");
    int der_len = i2d_ECDSA_SIG(sig.get(), nullptr);
    if (der_len <= 0) fail(Errc::io_error, "DER encoding failed");
    Bytes der(static_cast<size_t>(der_len));
    uint8_t* p = der.data();
    i2d_ECDSA_SIG(sig.get(), &p);
    return der;
  }
}

inline Bytes ecdsa_sign(const PrivateKey& priv, const Bytes& msg) {
  return ecdsa_sign(priv, msg.data(), msg.size());
}

// Returns false on any malformed or non-verifying signature; throws only for
// an invalid public key.
inline bool ecdsa_verify(const Bytes& pub, const uint8_t* msg, size_t msg_len, const Bytes& der) {
  using namespace ec_detail;
  validate_public_key(pub);
  const EC_GROUP* g = p256();
  const BIGNUM* q = order();

  const uint8_t* p = der.data();
  SigPtr sig(d2i_ECDSA_SIG(nullptr, &p, static_cast<long>(der.size())));
  if (!sig || p != der.data() + der.size()) return false;
  const BIGNUM *r = nullptr, *s = nullptr;
  ECDSA_SIG_get0(sig.get(), &r, &s);
  if (BN_is_zero(r) || BN_is_negative(r) || BN_cmp(r, q) >= 0) return false;
  if (BN_is_zero(s) || BN_is_negative(s) || BN_cmp(s, q) >= 0) return false;

  BnCtxPtr ctx(BN_CTX_new());
  Sha256Digest h1 = sha256(msg, msg_len);
  BnPtr z(BN_bin2bn(h1.data(), 32, nullptr));
  BnPtr e(BN_new());
  BnPtr w(BN_mod_inverse(nullptr, s, q, ctx.get()));
  BnPtr u1(BN_new()), u2(BN_new());
  if (!z || !e || !w || !u1 || !u2 || !BN_nnmod(e.get(), z.get(), q, ctx.get()) ||
      !BN_mod_mul(u1.get(), e.get(), w.get(), q, ctx.get()) ||
      !BN_mod_mul(u2.get(), r, w.get(), q, ctx.get()))
    return false;

  PointPtr Q(EC_POINT_new(g)), R(EC_POINT_new(g));
  if (!Q || !R || EC_POINT_oct2point(g, Q.get(), pub.data(), pub.size(), ctx.get()) != 1)
    return false;
  if (EC_POINT_mul(g, R.get(), u1.get(), Q.get(), u2.get(), ctx.get()) != 1) return false;
  if (EC_POINT_is_at_infinity(g, R.get())) return false;
  BnPtr rx(BN_new()), v(BN_new());
  if (!rx || !v || EC_POINT_get_affine_coordinates(g, R.get(), rx.get(), nullptr, ctx.get()) != 1 ||
      !BN_nnmod(v.get(), rx.get(), q, ctx.get()))
    return false;
  return BN_cmp(v.get(), r) == 0;
}

inline bool ecdsa_verify(const Bytes& pub, const Bytes& msg, const Bytes& der) {
  return ecdsa_verify(pub, msg.data(), msg.size(), der);
}

// ---------------------------------------------------------------------------
// Key file format: three lines of text, hex-encoded key material.
// ---------------------------------------------------------------------------

constexpr const char* kKeyFileHeader = "PROVES-KEY-V1";

inline void save_keypair(const std::string& path, const KeyPair& kp) {
  std::string text = std::string(kKeyFileHeader) + "\nprivate=" +
                     to_hex(kp.private_key.data(), kp.private_key.size()) +
                     "\npublic=" + to_hex(kp.public_key) + "\n";
  write_file(path, text);
}

inline KeyPair load_keypair(const std::string& path) {
  Bytes raw = read_file(path);
  std::string text(raw.begin(), raw.end());
  auto line_after = [&](const std::string& prefix) -> std::string {
    size_t pos = text.find(prefix);
    if (pos == std::string::npos) fail(Errc::io_error, "malformed key file " + path);
    size_t start = pos + prefix.size();
    size_t end = text.find('\n', start);
    return text.substr(start, end == std::string::npos ? std::string::npos : end - start);
  };
  if (text.rfind(kKeyFileHeader, 0) != 0) fail(Errc::io_error, "malformed key file " + path);
  Bytes priv = from_hex(line_after("private="));
  Bytes pub = from_hex(line_after("public="));
  if (priv.size() != 32) fail(Errc::io_error, "bad private key length in " + path);
  KeyPair kp;
  std::copy(priv.begin(), priv.end(), kp.private_key.begin());
  kp.public_key = pub;
  validate_public_key(kp.public_key);
  if (public_key_from_private(kp.private_key) != kp.public_key)
    fail(Errc::io_error, "key file public/private mismatch in " + path);
  return kp;
}

}  // namespace proves
