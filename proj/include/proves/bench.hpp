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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "proves/codec.hpp"
#include "proves/corpus.hpp"
#include "proves/crypto.hpp"
#include "proves/notary.hpp"
#include "proves/transforms.hpp"
#include "proves/types.hpp"
#include "proves/verify.hpp"

namespace proves {

struct BenchOptions {
  size_t images = 0;  // benign trials
  size_t faces_min = 1;
  size_t faces_max = 10;
  int rotation_mode = 0;  // 0 or 5
  size_t attack_trials = 0;  // per attack kind
  std::vector<AttackKind> attack_kinds = {AttackKind::Replace, AttackKind::Swap,
                                          AttackKind::Remove};
  uint64_t seed = 1;
  uint32_t width = 512;
  uint32_t height = 384;
  EngineConfig config;
};

// Signing and verification entry points for a bench run; either thin wrappers
// over an in-process NotaryCore or a NotaryClient speaking to a live service.
// Both paths must yield identical reports for identical inputs.
struct BenchHooks {
  std::function<SignatureContainer(const ImageBuffer&)> sign;
  std::function<VerificationReport(const ImageBuffer&, const SignatureContainer&)> verify;
};

struct AttackStats {
  AttackKind kind = AttackKind::Replace;
  size_t trials = 0;
  size_t attacked_faces = 0;
  size_t verified = 0;  // attacked faces that still verified (must stay 0)
  size_t tampered = 0;
  size_t alerts = 0;  // flagged some other way (cropped / missing)

  double rejection_pct() const {
    return attacked_faces ? 100.0 * (attacked_faces - verified) / attacked_faces : 0.0;
  }
  double tampered_pct() const {
    return attacked_faces ? 100.0 * tampered / attacked_faces : 0.0;
  }
};

// Similarity histogram: 40 bins of width 0.05 spanning [-1, 1].
struct SimilarityHistogram {
  std::array<uint64_t, 40> bins{};

  void add(double sim) {
    int idx = static_cast<int>(std::floor((sim + 1.0) / 0.05));
    bins[std::clamp(idx, 0, 39)]++;
  }
  static double bin_lo(size_t i) { return -1.0 + 0.05 * double(i); }
};

struct BenchStats {
  size_t images = 0;
  size_t faces_total = 0;
  size_t in_frame = 0;
  size_t verified = 0;
  size_t verified_partial = 0;
  size_t fail_to_verify = 0;
  size_t out_of_frame = 0;
  size_t cropped_reported = 0;  // out-of-frame faces the report counted as cropped
  size_t partial_faces = 0;     // ground truth partially visible
  size_t partial_verified = 0;
  std::vector<AttackStats> attacks;
  SimilarityHistogram hist_benign;
  SimilarityHistogram hist_attack;
  double elapsed_seconds = 0;

  double verified_pct() const { return in_frame ? 100.0 * verified / in_frame : 0.0; }
  double verified_partial_pct() const {
    return in_frame ? 100.0 * verified_partial / in_frame : 0.0;
  }
  double fail_to_verify_pct() const { return in_frame ? 100.0 * fail_to_verify / in_frame : 0.0; }
};

namespace bench_detail {

// Ground-truth visibility of a glyph after the benign transform: all mapped
// corners in frame means fully visible; a mapped bounding hull that misses
// the frame entirely means cropped out.
enum class Visibility { Full, Partial, Gone };

inline Visibility classify_truth(const GroundTruthMap& truth, const BBox& box, uint32_t w,
                                 uint32_t h) {
  auto corners = truth.map_box_corners(box);
  bool all_in = true;
  double min_x = corners[0][0], max_x = corners[0][0];
  double min_y = corners[0][1], max_y = corners[0][1];
  for (const auto& c : corners) {
    if (c[0] < 0 || c[1] < 0 || c[0] > double(w) || c[1] > double(h)) all_in = false;
    min_x = std::min(min_x, c[0]);
    max_x = std::max(max_x, c[0]);
    min_y = std::min(min_y, c[1]);
    max_y = std::max(max_y, c[1]);
  }
  if (all_in) return Visibility::Full;
  if (max_x <= 0 || max_y <= 0 || min_x >= double(w) || min_y >= double(h))
    return Visibility::Gone;
  return Visibility::Partial;
}

inline size_t match_glyph(const std::vector<GlyphFaceSpec>& glyphs, const BBox& payload_box) {
  size_t best = glyphs.size();
  double best_iou = 0.3;
  for (size_t i = 0; i < glyphs.size(); ++i) {
    double iou = payload_box.iou(glyphs[i].box());
    if (iou > best_iou) {
      best_iou = iou;
      best = i;
    }
  }
  return best;  // glyphs.size() when nothing overlaps enough
}

}  // namespace bench_detail

inline BenchStats run_bench(const BenchOptions& opt, const BenchHooks& hooks) {
  if (opt.faces_min < 1 || opt.faces_max < opt.faces_min)
    fail(Errc::invalid_argument, "bad face count range");
  auto t0 = std::chrono::steady_clock::now();
  BenchStats stats;
  for (size_t i = 0; i < opt.images; ++i) {
    uint64_t base = hash_combine(opt.seed, i);
    size_t span = opt.faces_max - opt.faces_min + 1;
    CorpusSpec cspec;
    cspec.seed = hash_combine(base, 1);
    cspec.face_count = opt.faces_min + size_t(splitmix64(base) % span);
    cspec.width = opt.width;
    cspec.height = opt.height;
    SyntheticImage synth = make_synthetic_image(cspec);

    SignatureContainer container = hooks.sign(synth.image);
    SemanticPayload payload = decode_payload(container.payload_bytes);

    BenignTransformSpec tspec =
        BenignTransformSpec::random(hash_combine(base, 2), opt.rotation_mode);
    BenignResult benign = apply_benign(synth.image, tspec);
    VerificationReport report = hooks.verify(benign.image, container);

    stats.images++;
    for (size_t j = 0; j < payload.faces.size(); ++j) {
      size_t g = bench_detail::match_glyph(synth.glyphs, payload.faces[j].bbox);
      if (g == synth.glyphs.size()) continue;
      auto vis = bench_detail::classify_truth(benign.truth, synth.glyphs[g].box(),
                                              benign.image.width, benign.image.height);
      const FaceOutcome& outcome = report.face_outcomes[j];
      stats.faces_total++;
      if (outcome.similarity) stats.hist_benign.add(*outcome.similarity);
      switch (vis) {
        case bench_detail::Visibility::Full:
          stats.in_frame++;
          if (outcome.kind == FaceOutcomeKind::Verified)
            stats.verified++;
          else if (outcome.kind == FaceOutcomeKind::VerifiedPartial)
            stats.verified_partial++;
          else
            stats.fail_to_verify++;
          break;
        case bench_detail::Visibility::Gone:
          stats.out_of_frame++;
          if (outcome.kind == FaceOutcomeKind::Cropped) stats.cropped_reported++;
          break;
        case bench_detail::Visibility::Partial:
          stats.partial_faces++;
          if (outcome.kind == FaceOutcomeKind::Verified ||
              outcome.kind == FaceOutcomeKind::VerifiedPartial)
            stats.partial_verified++;
          break;
      }
    }
  }

  for (size_t ki = 0; ki < opt.attack_kinds.size(); ++ki) {
    AttackKind kind = opt.attack_kinds[ki];
    AttackStats as;
    as.kind = kind;
    for (size_t t = 0; t < opt.attack_trials; ++t) {
      uint64_t base = hash_combine(opt.seed, 0xa77ac4ull + ki * 1000003 + t);
      CorpusSpec cspec;
      cspec.seed = hash_combine(base, 1);
      cspec.face_count =
          kind == AttackKind::Swap ? 2 + size_t(splitmix64(base) % 3) : 1 + size_t(splitmix64(base) % 5);
      cspec.width = opt.width;
      cspec.height = opt.height;
      SyntheticImage synth = make_synthetic_image(cspec);

      SignatureContainer container = hooks.sign(synth.image);
      SemanticPayload payload = decode_payload(container.payload_bytes);
      if (payload.faces.empty()) continue;

      AttackSpec aspec;
      aspec.kind = kind;
      aspec.rng_seed = hash_combine(base, 3);
      aspec.noise_budget = hash_unit(splitmix64(base + 7)) * kMaxNoiseBudget;
      size_t n = payload.faces.size();
      if (kind == AttackKind::Swap) {
        if (n < 2) continue;
        size_t a = size_t(splitmix64(base + 8) % n);
        size_t b = (a + 1 + size_t(splitmix64(base + 9) % (n - 1))) % n;
        aspec.targets = {a, b};
      } else {
        aspec.targets = {size_t(splitmix64(base + 8) % n)};
      }

      std::vector<BBox> boxes;
      for (const auto& f : payload.faces) boxes.push_back(f.bbox);
      ImageBuffer attacked = apply_attack(synth.image, boxes, aspec);
      VerificationReport report = hooks.verify(attacked, container);

      as.trials++;
      for (size_t target : aspec.targets) {
        const FaceOutcome& outcome = report.face_outcomes[target];
        as.attacked_faces++;
        if (outcome.similarity) stats.hist_attack.add(*outcome.similarity);
        if (outcome.kind == FaceOutcomeKind::Verified ||
            outcome.kind == FaceOutcomeKind::VerifiedPartial)
          as.verified++;
        else if (outcome.kind == FaceOutcomeKind::Tampered)
          as.tampered++;
        else
          as.alerts++;
      }
    }
    stats.attacks.push_back(as);
  }

  stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return stats;
}

inline BenchHooks make_local_hooks(NotaryCore& core, const KeyPair& device,
                                   const std::string& device_id) {
  BenchHooks h;
  h.sign = [&core, device, device_id](const ImageBuffer& img) {
    Bytes sig = ecdsa_sign(device.private_key, img.pixels);
    return core.sign_image(device_id, img, sig).container;
  };
  h.verify = [&core](const ImageBuffer& img, const SignatureContainer& c) {
    return core.verify(img, c);
  };
  return h;
}

// Self-contained local run: fresh in-memory notary, one registered device.
inline BenchStats run_bench(const BenchOptions& opt) {
  NotaryOptions nopt;
  nopt.config = opt.config;
  nopt.key_seed = hash_combine(opt.seed, 0x6e6f7461ull);
  NotaryCore core(nopt);
  KeyPair device = deterministic_keypair(hash_combine(opt.seed, 0x64657669ull));
  const std::string device_id = "bench-device";
  core.register_device(device_id, device.public_key);
  return run_bench(opt, make_local_hooks(core, device, device_id));
}

inline std::string bench_table(const BenchStats& s) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return std::string(buf);
  };
  std::string out;
  out += "Images\t" + std::to_string(s.images) + "\n";
  out += "FacesTotal\t" + std::to_string(s.faces_total) + "\n";
  out += "InFrameFaces\t" + std::to_string(s.in_frame) + "\n";
  out += "Verified%\t" + fmt(s.verified_pct()) + "\n";
  out += "VerifiedPartial%\t" + fmt(s.verified_partial_pct()) + "\n";
  out += "FailToVerify%\t" + fmt(s.fail_to_verify_pct()) + "\n";
  out += "OutOfFrameFaces\t" + std::to_string(s.out_of_frame) + "\n";
  out += "CroppedReported\t" + std::to_string(s.cropped_reported) + "\n";
  out += "PartialFaces\t" + std::to_string(s.partial_faces) + "\n";
  out += "PartialVerified\t" + std::to_string(s.partial_verified) + "\n";
  for (const auto& a : s.attacks) {
    std::string kind = attack_kind_name(a.kind);
    out += "AttackTrials\t" + kind + "\t" + std::to_string(a.trials) + "\n";
    out += "AttackedFaces\t" + kind + "\t" + std::to_string(a.attacked_faces) + "\n";
    out += "AttackVerified\t" + kind + "\t" + std::to_string(a.verified) + "\n";
    out += "AttackRejection%\t" + kind + "\t" + fmt(a.rejection_pct()) + "\n";
    out += "AttackTampered%\t" + kind + "\t" + fmt(a.tampered_pct()) + "\n";
  }
  for (size_t i = 0; i < s.hist_benign.bins.size(); ++i)
    if (s.hist_benign.bins[i])
      out += "Hist\tbenign\t" + fmt(SimilarityHistogram::bin_lo(i)) + "\t" +
             std::to_string(s.hist_benign.bins[i]) + "\n";
  for (size_t i = 0; i < s.hist_attack.bins.size(); ++i)
    if (s.hist_attack.bins[i])
      out += "Hist\tattack\t" + fmt(SimilarityHistogram::bin_lo(i)) + "\t" +
             std::to_string(s.hist_attack.bins[i]) + "\n";
  out += "ElapsedSeconds\t" + fmt(s.elapsed_seconds) + "\n";
  return out;
}

}  // namespace proves
