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

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "proves/codec.hpp"
#include "proves/crypto.hpp"
#include "proves/errors.hpp"
#include "proves/perception.hpp"
#include "proves/registry.hpp"
#include "proves/types.hpp"
#include "proves/verify.hpp"

namespace proves {

using Clock = std::function<uint64_t()>;  // unix seconds, UTC

inline uint64_t system_clock_now() {
  return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::seconds>(
                                   std::chrono::system_clock::now().time_since_epoch())
                                   .count());
}

struct NotaryOptions {
  EngineConfig config;
  std::string data_dir;  // empty: in-memory registry, ephemeral key
  Clock clock = system_clock_now;
  uint64_t key_seed = 0;  // nonzero: deterministic notary key (tests)
};

// Signing and verification wrapped around one notary keypair, a trust
// registry, and a perception backend. Stateless across calls except for
// registry mutations; safe to share across request threads.
class NotaryCore {
 public:
  explicit NotaryCore(NotaryOptions opts)
      : options_(std::move(opts)), perception_(make_perception(options_.config.perception_backend)) {
    options_.config.validate();
    if (!options_.clock) options_.clock = system_clock_now;
    if (options_.data_dir.empty()) {
      registry_ = std::make_unique<TrustRegistry>();
      keypair_ = make_key();
    } else {
      std::filesystem::create_directories(options_.data_dir);
      registry_ = std::make_unique<TrustRegistry>(options_.data_dir + "/registry.log");
      std::string key_path = options_.data_dir + "/notary.key";
      if (std::filesystem::exists(key_path)) {
        keypair_ = load_keypair(key_path);
      } else {
        keypair_ = make_key();
        save_keypair(key_path, keypair_);
      }
    }
  }

  const Bytes& public_key() const { return keypair_.public_key; }
  const EngineConfig& config() const { return options_.config; }
  const PerceptionBackend& perception() const { return perception_; }
  TrustRegistry& registry() { return *registry_; }
  const TrustRegistry& registry() const { return *registry_; }
  uint64_t now() const { return options_.clock(); }

  void register_device(const std::string& device_id, const Bytes& device_public_key) {
    registry_->register_device(device_id, device_public_key);
  }

  void revoke_device(const std::string& device_id, uint64_t effective) {
    registry_->revoke_device(device_id, effective);
  }

  struct SignResult {
    SignatureContainer container;
    bool self_check = false;
    size_t face_count = 0;
  };

  // Produces a semantic signature for the image: detect, filter small boxes,
  // embed, classify the scene, sign the canonical payload, then verify the
  // produced container against the untouched input before returning it.
  SignResult sign_image(const std::string& device_id, const ImageBuffer& image,
                        const Bytes& device_signature) const {
    auto entry = registry_->lookup(device_id);
    if (!entry) fail(Errc::unknown_device, "device not registered: " + device_id);
    if (registry_->revocation_status(device_id, options_.clock()) != RevocationStatus::Trusted)
      fail(Errc::device_revoked, "device revoked: " + device_id);
    if (!ecdsa_verify(entry->public_key, image.pixels, device_signature))
      fail(Errc::signature_invalid, "device signature does not cover these pixels");

    SemanticPayload payload;
    payload.width = image.width;
    payload.height = image.height;
    payload.signed_at = options_.clock();
    payload.device_id = device_id;

    double min_area = kMinFaceAreaFraction * double(image.width) * image.height;
    for (const BBox& box : perception_.detect(image)) {
      if (box.area() < min_area) continue;
      try {
        payload.faces.push_back(FaceRecord{box, perception_.embed(image, box)});
      } catch (const Error& e) {
        if (e.code() != Errc::degenerate_region) throw;
      }
    }
    sort_faces_canonical(payload.faces);
    payload.scene =
        perception_.scene_prob(image) >= 0.5 ? SceneLabel::Indoor : SceneLabel::Outdoor;

    SignResult result;
    result.face_count = payload.faces.size();
    Bytes payload_bytes = encode_payload(payload);
    result.container.version = kContainerVersion;
    result.container.payload_bytes = payload_bytes;
    result.container.signature = ecdsa_sign(keypair_.private_key, payload_bytes);

    VerificationReport check = verify(image, result.container);
    for (const FaceOutcome& f : check.face_outcomes)
      if (f.kind != FaceOutcomeKind::Verified)
        fail(Errc::self_check_failed, "freshly signed face failed verification");
    if (check.scene_outcome && *check.scene_outcome == SceneOutcome::Failed)
      fail(Errc::self_check_failed, "freshly signed scene label failed verification");
    result.self_check = true;
    return result;
  }

  VerificationReport verify(const ImageBuffer& image, const SignatureContainer& container) const {
    return verify_image(image, container, keypair_.public_key, *registry_, perception_,
                        options_.config);
  }

 private:
  KeyPair make_key() const {
    return options_.key_seed != 0 ? deterministic_keypair(options_.key_seed) : generate_keypair();
  }

  NotaryOptions options_;
  PerceptionBackend perception_;
  std::unique_ptr<TrustRegistry> registry_;
  KeyPair keypair_;
};

}  // namespace proves
