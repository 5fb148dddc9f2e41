#!/usr/bin/env python3
# Copyright 2026 The proves Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the golden vectors frozen into the C++ tests.

Implements the canonical payload/container layouts independently of the
library so encoder bugs cannot leak into the expected values, and checks the
deterministic-ECDSA reference vectors against an independent crypto stack.
"""

import hashlib
import struct

from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec, utils


def encode_payload(width, height, scene, signed_at, device_id, faces):
    out = struct.pack(">IIBQ", width, height, scene, signed_at)
    raw_id = device_id.encode()
    out += struct.pack(">H", len(raw_id)) + raw_id
    out += struct.pack(">H", len(faces))
    for bbox, feature in faces:
        out += struct.pack(">dddd", *bbox)
        out += struct.pack(">H", len(feature))
        for v in feature:
            out += struct.pack(">d", v)
    return out


def encode_container(payload, signature):
    return (
        b"PROVSIG1"
        + bytes([1])
        + struct.pack(">I", len(payload))
        + payload
        + struct.pack(">H", len(signature))
        + signature
    )


def main():
    zero_face = encode_payload(100, 100, 0, 1, "d", [])
    print("payload_zero_face =", zero_face.hex())

    one_face = encode_payload(
        640,
        480,
        1,
        1700000000,
        "cam-7",
        [((10.5, 20.25, 110.5, 120.25), [1.0, -0.5, 0.25])],
    )
    print("payload_one_face =", one_face.hex())

    container = encode_container(zero_face, bytes([0xDE, 0xAD, 0xBE, 0xEF]))
    print("container_zero_face =", container.hex())

    print("sha256_empty =", hashlib.sha256(b"").hexdigest())
    print("sha256_abc =", hashlib.sha256(b"abc").hexdigest())

    # Deterministic-nonce ECDSA reference vectors (P-256 / SHA-256, messages
    # "sample" and "test"). Validated against an independent implementation
    # before being frozen.
    d = 0xC9AFA9D845BA75166B5C215767B1D6934E50C3DB36E89B127B8A622B120F6721
    ux = 0x60FED4BA255A9D31C961EB74C6356D68C049B8923B61FA6CE669622E60F29FB6
    uy = 0x7903FE1008B8BC99A41AE9E95628BC64F2F1B20C2D7E9F5177A3C294D4462299
    pub = ec.EllipticCurvePublicNumbers(ux, uy, ec.SECP256R1()).public_key()
    priv = ec.derive_private_key(d, ec.SECP256R1())
    got = priv.public_key().public_numbers()
    assert (got.x, got.y) == (ux, uy), "private key does not match reference public key"

    vectors = {
        b"sample": (
            0xEFD48B2AACB6A8FD1140DD9CD45E81D69D2C877B56AAF991C34D0EA84EAF3716,
            0xF7CB1C942D657C41D436C7A1B6E29F65F3E900DBB9AFF4064DC4AB2F843ACDA8,
        ),
        b"test": (
            0xF1ABB023518351CD71D881567B1EA663ED3EFCF6C5132B354F28D3B0B7D38367,
            0x019F4113742A2B14BD25926B49C649155F267E60D3814B4C0CC84250E46F0083,
        ),
    }
    print("rfc6979_private =", f"{d:064x}")
    print("rfc6979_public = 04" + f"{ux:064x}" + f"{uy:064x}")
    for msg, (r, s) in vectors.items():
        der = utils.encode_dss_signature(r, s)
        pub.verify(der, msg, ec.ECDSA(hashes.SHA256()))  # raises if (r, s) is wrong
        print(f"rfc6979_{msg.decode()}_der =", der.hex())


if __name__ == "__main__":
    main()
