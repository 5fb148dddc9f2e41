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
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "proves/codec.hpp"
#include "proves/crypto.hpp"
#include "proves/errors.hpp"
#include "proves/perception.hpp"
#include "proves/registry.hpp"
#include "proves/types.hpp"
#include "proves/util.hpp"

namespace proves {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct EngineConfig {
  double theta = kDefaultTheta;
  double gamma = kDefaultGamma;
  // Relative offsets for the discrete translation search, as fractions of the
  // expected box side, applied per axis.
  std::vector<double> jitter_fractions = {-0.10, -0.05, 0.0, 0.05, 0.10};
  size_t min_seed_pairs = kDefaultMinSeedPairs;
  std::string perception_backend = "reference";

  void validate() const {
    if (!(theta > 0 && theta < 1)) fail(Errc::invalid_config, "theta must be in (0,1)");
    if (!(gamma >= 0.5 && gamma < 1)) fail(Errc::invalid_config, "gamma must be in [0.5,1)");
    if (jitter_fractions.empty()) fail(Errc::invalid_config, "jitter_fractions must be nonempty");
    for (double f : jitter_fractions)
      if (!std::isfinite(f) || std::abs(f) > 0.5)
        fail(Errc::invalid_config, "jitter fraction out of range");
    if (min_seed_pairs < 1) fail(Errc::invalid_config, "min_seed_pairs must be >= 1");
  }

  // Flat key=value text; '#' starts a comment.
  static EngineConfig from_string(const std::string& text) {
    EngineConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
        line.pop_back();
      size_t start = line.find_first_not_of(" \t");
      if (start == std::string::npos) continue;
      line.erase(0, start);
      size_t eq = line.find('=');
      if (eq == std::string::npos) fail(Errc::invalid_config, "expected key=value: " + line);
      auto trim = [](std::string s) {
        size_t b = s.find_first_not_of(" \t");
        size_t e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
      auto to_double = [&](const std::string& s) {
        try {
          size_t used = 0;
          double v = std::stod(s, &used);
          if (used != s.size()) throw std::invalid_argument(s);
          return v;
        } catch (...) {
          fail(Errc::invalid_config, "bad numeric value for " + key);
        }
      };
      if (key == "theta") {
        cfg.theta = to_double(value);
      } else if (key == "gamma") {
        cfg.gamma = to_double(value);
      } else if (key == "min_seed_pairs") {
        cfg.min_seed_pairs = static_cast<size_t>(to_double(value));
      } else if (key == "perception.backend") {
        cfg.perception_backend = value;
      } else if (key == "jitter_fractions") {
        cfg.jitter_fractions.clear();
        std::istringstream vs(value);
        std::string item;
        while (std::getline(vs, item, ',')) cfg.jitter_fractions.push_back(to_double(item));
      } else {
        fail(Errc::invalid_config, "unknown config key: " + key);
      }
    }
    cfg.validate();
    return cfg;
  }

  static EngineConfig from_file(const std::string& path) {
    Bytes raw = read_file(path);
    return from_string(std::string(raw.begin(), raw.end()));
  }
};

// ---------------------------------------------------------------------------
// Similarity and seed matching
// ---------------------------------------------------------------------------

inline double cosine_similarity(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size()) fail(Errc::dimension_mismatch, "feature dimensions differ");
  if (a.empty()) fail(Errc::dimension_mismatch, "empty feature vectors");
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0 || nb <= 0) fail(Errc::dimension_mismatch, "zero-norm feature vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

struct SeedPair {
  size_t original_index;
  size_t current_index;
  double similarity;
};

// For each original face, the best-matching current face by cosine similarity,
// kept only when the similarity clears theta. Ties keep the lowest current
// index; a current face may serve several originals.
inline std::vector<SeedPair> match_seeds(const std::vector<FaceRecord>& originals,
                                         const std::vector<FaceRecord>& currents, double theta) {
  std::vector<SeedPair> seeds;
  for (size_t k = 0; k < originals.size(); ++k) {
    double best = -2.0;
    size_t best_l = 0;
    for (size_t l = 0; l < currents.size(); ++l) {
      if (originals[k].feature.size() != currents[l].feature.size()) continue;
      double sim = cosine_similarity(originals[k].feature, currents[l].feature);
      if (sim > best) {
        best = sim;
        best_l = l;
      }
    }
    if (best >= theta) seeds.push_back(SeedPair{k, best_l, best});
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// Similarity transform fit: p' = s*p + (alpha, beta)
// ---------------------------------------------------------------------------

struct TransformParams {
  double s = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
};

struct PointPair {
  double x, y;    // original
  double xp, yp;  // current
};

struct TransformFit {
  TransformParams params;
  double residual_rms = 0.0;  // over all 2N scalar equations
};

inline BBox apply_transform(const TransformParams& w, const BBox& b) {
  return {w.s * b.x_min + w.alpha, w.s * b.y_min + w.beta, w.s * b.x_max + w.alpha,
          w.s * b.y_max + w.beta};
}

// Least squares over the stacked rows [x 1 0; y 0 1] * [s a b]^T = [x'; y'].
// Underdetermined for too few or coincident points; DegenerateTransform when
// the fitted scale leaves (0.01, 100).
inline TransformFit fit_similarity_transform(const std::vector<PointPair>& pairs,
                                             size_t min_pairs = kDefaultMinSeedPairs) {
  if (pairs.size() < min_pairs || pairs.size() < 2)
    fail(Errc::underdetermined, "need at least two point pairs");

  double a00 = 0, a01 = 0, a02 = 0, a11 = 0, a22 = 0;
  double b0 = 0, b1 = 0, b2 = 0;
  for (const auto& p : pairs) {
    a00 += p.x * p.x + p.y * p.y;
    a01 += p.x;
    a02 += p.y;
    b0 += p.x * p.xp + p.y * p.yp;
    b1 += p.xp;
    b2 += p.yp;
  }
  a11 = a22 = static_cast<double>(pairs.size());

  // Normal equations, symmetric 3x3; solved with partial pivoting.
  double A[3][4] = {{a00, a01, a02, b0}, {a01, a11, 0, b1}, {a02, 0, a22, b2}};
  double scale = 0;
  for (auto& row : A)
    for (int c = 0; c < 3; ++c) scale = std::max(scale, std::abs(row[c]));
  if (scale <= 0) fail(Errc::underdetermined, "degenerate point set");
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-12 * scale)
      fail(Errc::underdetermined, "coincident centers; transform not identifiable");
    if (piv != col) std::swap(A[piv], A[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      double f = A[r][col] / A[col][col];
      for (int c = col; c < 4; ++c) A[r][c] -= f * A[col][c];
    }
  }
  TransformFit fit;
  fit.params.s = A[0][3] / A[0][0];
  fit.params.alpha = A[1][3] / A[1][1];
  fit.params.beta = A[2][3] / A[2][2];
  if (!(fit.params.s > 0.01 && fit.params.s < 100) || !std::isfinite(fit.params.s) ||
      !std::isfinite(fit.params.alpha) || !std::isfinite(fit.params.beta))
    fail(Errc::degenerate_transform, "fitted scale out of range");

  double ss = 0;
  for (const auto& p : pairs) {
    double rx = fit.params.s * p.x + fit.params.alpha - p.xp;
    double ry = fit.params.s * p.y + fit.params.beta - p.yp;
    ss += rx * rx + ry * ry;
  }
  fit.residual_rms = std::sqrt(ss / (2.0 * pairs.size()));
  return fit;
}

// ---------------------------------------------------------------------------
// Region classification and per-face verification
// ---------------------------------------------------------------------------

enum class RegionClass : uint8_t { Inside, Partial, Outside };

inline RegionClass classify_region(const BBox& b, uint32_t width, uint32_t height) {
  BBox frame{0, 0, double(width), double(height)};
  if (b.intersection_area(frame) <= 0) return RegionClass::Outside;
  if (b.x_min >= 0 && b.y_min >= 0 && b.x_max <= frame.x_max && b.y_max <= frame.y_max)
    return RegionClass::Inside;
  return RegionClass::Partial;
}

// A partially visible face is attempted only when at least this fraction of
// the transformed box remains in frame.
constexpr double kPartialAttemptMinVisible = 0.25;

// Detected boxes are admitted as extra search candidates only inside this
// gate, sized to cover the residual a <=5 degree benign rotation leaves after
// the rotation-free transform fit while staying far below the displacement a
// face swap produces.
constexpr double kCandidateGateSlope = 0.095;
constexpr double kCandidateGateSlack = 0.20;  // of expected box side

struct DetectionCandidates {
  const std::vector<BBox>* boxes = nullptr;
  double centroid_x = 0, centroid_y = 0;  // of seed-matched current centers
};

inline FaceOutcome verify_face(const ImageBuffer& current, const FaceRecord& original,
                               const TransformParams& w, const PerceptionBackend& backend,
                               const EngineConfig& cfg,
                               const DetectionCandidates& detections = {}) {
  FaceOutcome out;
  BBox expected = apply_transform(w, original.bbox);
  RegionClass rc = classify_region(expected, current.width, current.height);
  if (rc == RegionClass::Outside) {
    out.kind = FaceOutcomeKind::Cropped;
    return out;
  }
  BBox frame{0, 0, double(current.width), double(current.height)};
  double visible = expected.intersection_area(frame) / expected.area();
  if (rc == RegionClass::Partial && visible < kPartialAttemptMinVisible) {
    out.kind = FaceOutcomeKind::Cropped;
    return out;
  }

  std::vector<BBox> candidates;
  candidates.reserve(cfg.jitter_fractions.size() * cfg.jitter_fractions.size() + 4);
  for (double fy : cfg.jitter_fractions)
    for (double fx : cfg.jitter_fractions)
      candidates.push_back(expected.translated(fx * expected.width(), fy * expected.height()));
  if (detections.boxes) {
    double side = (expected.width() + expected.height()) / 2;
    for (const BBox& d : *detections.boxes) {
      double dist = std::hypot(d.cx() - expected.cx(), d.cy() - expected.cy());
      double reach = std::hypot(d.cx() - detections.centroid_x, d.cy() - detections.centroid_y);
      if (dist <= kCandidateGateSlope * reach + kCandidateGateSlack * side)
        candidates.push_back(d);
    }
  }

  double best = -2.0;
  BBox best_box;
  bool scored = false;
  for (const BBox& c : candidates) {
    FeatureVector f;
    try {
      f = backend.embed(current, c);
    } catch (const Error& e) {
      if (e.code() == Errc::degenerate_region) continue;
      throw;
    }
    if (f.size() != original.feature.size()) continue;
    double sim = cosine_similarity(f, original.feature);
    if (sim > best) {
      best = sim;
      best_box = c;
    }
    scored = true;
  }

  if (scored && best >= cfg.theta) {
    out.kind = rc == RegionClass::Inside ? FaceOutcomeKind::Verified
                                         : FaceOutcomeKind::VerifiedPartial;
    out.similarity = best;
    out.bbox_in_current = best_box;
    return out;
  }
  if (rc == RegionClass::Partial) {
    out.kind = FaceOutcomeKind::Cropped;
    return out;
  }
  out.kind = FaceOutcomeKind::Tampered;
  out.bbox_in_current = expected;
  if (scored) out.similarity = best;
  return out;
}

// ---------------------------------------------------------------------------
// Scene decision rule
// ---------------------------------------------------------------------------

inline SceneOutcome verify_scene(double q_indoor, SceneLabel signed_label, double gamma) {
  std::optional<SceneLabel> decided;
  if (q_indoor >= gamma)
    decided = SceneLabel::Indoor;
  else if (1.0 - q_indoor > gamma)
    decided = SceneLabel::Outdoor;
  if (!decided) return SceneOutcome::LowConfidence;
  return *decided == signed_label ? SceneOutcome::Verified : SceneOutcome::Failed;
}

// ---------------------------------------------------------------------------
// Full verification pipeline
// ---------------------------------------------------------------------------

namespace verify_detail {

struct FittedTransform {
  TransformParams params;
  bool identity_fallback = false;
  std::vector<std::string> warnings;
};

inline TransformParams single_pair_estimate(const FaceRecord& original, const BBox& current_box) {
  double d0 = original.bbox.diagonal();
  double s = d0 > 0 ? current_box.diagonal() / d0 : 1.0;
  if (!(s > 0.01 && s < 100)) s = 1.0;
  return TransformParams{s, current_box.cx() - s * original.bbox.cx(),
                         current_box.cy() - s * original.bbox.cy()};
}

// Fallback ladder: full least squares with one outlier-drop retry, a
// single-pair scale/offset estimate when only one seed exists, and the
// identity transform when nothing reliable is available. The identity (not
// single-pair) fallback after a degenerate multi-pair fit matters: a swapped
// two-face image fits "perfectly" onto a negative scale, and a single-pair
// estimate would then relocate every box onto the swapped content.
inline FittedTransform fit_from_seeds(const std::vector<FaceRecord>& originals,
                                      const std::vector<FaceRecord>& currents,
                                      const std::vector<SeedPair>& seeds,
                                      const EngineConfig& cfg) {
  FittedTransform out;
  if (seeds.empty()) {
    out.identity_fallback = true;
    out.warnings.push_back("no seed matches; verification used identity transform");
    return out;
  }
  if (seeds.size() == 1) {
    const auto& s = seeds.front();
    out.params = single_pair_estimate(originals[s.original_index], currents[s.current_index].bbox);
    out.warnings.push_back("transform estimated from a single seed pair");
    return out;
  }

  std::vector<PointPair> pairs;
  std::vector<double> sides;  // current box mean side, sizes the drop gate
  pairs.reserve(seeds.size());
  sides.reserve(seeds.size());
  double mean_diag = 0;
  for (const auto& s : seeds) {
    const BBox& o = originals[s.original_index].bbox;
    const BBox& c = currents[s.current_index].bbox;
    pairs.push_back(PointPair{o.cx(), o.cy(), c.cx(), c.cy()});
    sides.push_back((c.width() + c.height()) / 2);
    mean_diag += c.diagonal();
  }
  mean_diag /= seeds.size();

  try {
    TransformFit fit = fit_similarity_transform(pairs, cfg.min_seed_pairs);
    if (fit.residual_rms > 0.1 * mean_diag) {
      // One bad correspondence among several can be outvoted: drop the worst
      // pair and refit. The refit is trusted only while the dropped pair
      // still lies inside the rotation-residual gate. Unmodelled rotation
      // displaces a face by at most 2 sin(2.5 deg) of its reach no matter the
      // scale; content relocated to another face's box is off by the full
      // inter-face distance, and a subset fit chosen to follow it would
      // relocate every remaining box with it.
      size_t worst = 0;
      double worst_r = -1;
      for (size_t i = 0; i < pairs.size(); ++i) {
        double rx = fit.params.s * pairs[i].x + fit.params.alpha - pairs[i].xp;
        double ry = fit.params.s * pairs[i].y + fit.params.beta - pairs[i].yp;
        double r = rx * rx + ry * ry;
        if (r > worst_r) {
          worst_r = r;
          worst = i;
        }
      }
      if (pairs.size() >= 3) {
        std::vector<PointPair> kept;
        double kcx = 0, kcy = 0;
        for (size_t i = 0; i < pairs.size(); ++i) {
          if (i == worst) continue;
          kept.push_back(pairs[i]);
          kcx += pairs[i].xp;
          kcy += pairs[i].yp;
        }
        kcx /= kept.size();
        kcy /= kept.size();
        TransformFit refit =
            fit_similarity_transform(kept, std::min(cfg.min_seed_pairs, kept.size()));
        double rx = refit.params.s * pairs[worst].x + refit.params.alpha - pairs[worst].xp;
        double ry = refit.params.s * pairs[worst].y + refit.params.beta - pairs[worst].yp;
        double reach = std::hypot(pairs[worst].xp - kcx, pairs[worst].yp - kcy);
        double allowed = kCandidateGateSlope * reach + kCandidateGateSlack * sides[worst];
        if (std::hypot(rx, ry) <= allowed) {
          out.warnings.push_back("dropped one outlier seed pair during transform fit");
          out.params = refit.params;
          return out;
        }
      }
      out.identity_fallback = true;
      out.warnings.push_back(
          "seed matches are geometrically inconsistent; verification used identity transform");
      return out;
    }
    out.params = fit.params;
    return out;
  } catch (const Error& e) {
    if (e.code() != Errc::underdetermined && e.code() != Errc::degenerate_transform) throw;
    out.identity_fallback = true;
    out.warnings.push_back("transform fit degenerate; verification used identity transform");
    return out;
  }
}

}  // namespace verify_detail

// Throws SignatureInvalid when the container does not verify against the
// notary key, MalformedContainer when the payload does not decode. Every
// other condition lands in the report.
inline VerificationReport verify_image(const ImageBuffer& current,
                                       const SignatureContainer& container,
                                       const Bytes& notary_public_key,
                                       const TrustRegistry& registry,
                                       const PerceptionBackend& backend,
                                       const EngineConfig& cfg) {
  if (!ecdsa_verify(notary_public_key, container.payload_bytes, container.signature))
    fail(Errc::signature_invalid, "payload signature does not verify");
  SemanticPayload payload = decode_payload(container.payload_bytes);

  VerificationReport report;
  report.revocation_status = registry.revocation_status(payload.device_id, payload.signed_at);
  if (report.revocation_status == RevocationStatus::Refused) {
    report.warnings.push_back("device unknown or signing date after revocation; refused");
    return report;
  }
  if (report.revocation_status == RevocationStatus::SignedBeforeRevocation)
    report.warnings.push_back("device revoked; image signed before the effective date");

  std::vector<FaceRecord> currents;
  std::vector<BBox> boxes = backend.detect(current);
  currents.reserve(boxes.size());
  for (const BBox& b : boxes) {
    try {
      currents.push_back(FaceRecord{b, backend.embed(current, b)});
    } catch (const Error& e) {
      if (e.code() != Errc::degenerate_region) throw;
    }
  }

  bool dim_mismatch = false;
  for (const auto& f : payload.faces)
    if (f.feature.size() != backend.dimension) dim_mismatch = true;
  if (dim_mismatch)
    report.warnings.push_back("feature dimension mismatch between signature and backend");

  std::vector<SeedPair> seeds = match_seeds(payload.faces, currents, cfg.theta);
  verify_detail::FittedTransform fitted =
      verify_detail::fit_from_seeds(payload.faces, currents, seeds, cfg);
  for (auto& w : fitted.warnings) report.warnings.push_back(std::move(w));

  DetectionCandidates detections;
  std::vector<BBox> detection_boxes;
  if (!seeds.empty()) {
    double cx = 0, cy = 0;
    for (const auto& s : seeds) {
      cx += currents[s.current_index].bbox.cx();
      cy += currents[s.current_index].bbox.cy();
    }
    detections.centroid_x = cx / seeds.size();
    detections.centroid_y = cy / seeds.size();
    for (const auto& c : currents) detection_boxes.push_back(c.bbox);
    detections.boxes = &detection_boxes;
  }

  for (const auto& face : payload.faces) {
    report.face_outcomes.push_back(
        verify_face(current, face, fitted.params, backend, cfg, detections));
  }
  report.cropped_count = static_cast<size_t>(
      std::count_if(report.face_outcomes.begin(), report.face_outcomes.end(),
                    [](const FaceOutcome& o) { return o.kind == FaceOutcomeKind::Cropped; }));

  std::vector<bool> used(currents.size(), false);
  for (const auto& s : seeds) used[s.current_index] = true;
  for (size_t l = 0; l < currents.size(); ++l)
    if (!used[l]) report.unmatched_new_faces.push_back(currents[l].bbox);
  if (!report.unmatched_new_faces.empty())
    report.warnings.push_back(std::to_string(report.unmatched_new_faces.size()) +
                              " detected face(s) not present at signing");

  report.scene_outcome = verify_scene(backend.scene_prob(current), payload.scene, cfg.gamma);
  return report;
}

// ---------------------------------------------------------------------------
// Report wire format: tab-separated lines, doubles via %.17g so values
// round-trip exactly. Local and remote verification serialize identically.
// ---------------------------------------------------------------------------

namespace report_detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_box(const BBox& b) {
  return fmt_double(b.x_min) + "," + fmt_double(b.y_min) + "," + fmt_double(b.x_max) + "," +
         fmt_double(b.y_max);
}

inline BBox parse_box(const std::string& s) {
  BBox b;
  double* fields[4] = {&b.x_min, &b.y_min, &b.x_max, &b.y_max};
  std::istringstream ss(s);
  std::string item;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(ss, item, ',')) fail(Errc::malformed_container, "bad box in report");
    *fields[i] = std::stod(item);
  }
  if (std::getline(ss, item, ',')) fail(Errc::malformed_container, "bad box in report");
  return b;
}

}  // namespace report_detail

inline std::string serialize_report(const VerificationReport& r) {
  using report_detail::fmt_box;
  using report_detail::fmt_double;
  std::string out;
  out += std::string("status\t") + revocation_status_name(r.revocation_status) + "\n";
  out += std::string("scene\t") + (r.scene_outcome ? scene_outcome_name(*r.scene_outcome) : "-") +
         "\n";
  out += "cropped\t" + std::to_string(r.cropped_count) + "\n";
  for (size_t i = 0; i < r.face_outcomes.size(); ++i) {
    const FaceOutcome& f = r.face_outcomes[i];
    out += "face\t" + std::to_string(i) + "\t" + face_outcome_name(f.kind) + "\t" +
           (f.similarity ? fmt_double(*f.similarity) : "-") + "\t" +
           (f.bbox_in_current ? fmt_box(*f.bbox_in_current) : "-") + "\n";
  }
  for (const BBox& b : r.unmatched_new_faces) out += "unmatched\t" + fmt_box(b) + "\n";
  for (const std::string& w : r.warnings) out += "warning\t" + w + "\n";
  return out;
}

inline VerificationReport parse_report(const std::string& text) {
  VerificationReport r;
  std::istringstream in(text);
  std::string line;
  bool have_status = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    std::getline(ss, tag, '\t');
    auto next = [&]() {
      std::string v;
      if (!std::getline(ss, v, '\t')) fail(Errc::malformed_container, "short report line: " + line);
      return v;
    };
    auto rest = [&]() {
      std::string v;
      std::getline(ss, v);
      return v;
    };
    if (tag == "status") {
      std::string v = rest();
      have_status = true;
      if (v == "Trusted") r.revocation_status = RevocationStatus::Trusted;
      else if (v == "SignedBeforeRevocation") r.revocation_status = RevocationStatus::SignedBeforeRevocation;
      else if (v == "Refused") r.revocation_status = RevocationStatus::Refused;
      else fail(Errc::malformed_container, "bad status: " + v);
    } else if (tag == "scene") {
      std::string v = rest();
      if (v == "-") r.scene_outcome.reset();
      else if (v == "Verified") r.scene_outcome = SceneOutcome::Verified;
      else if (v == "Failed") r.scene_outcome = SceneOutcome::Failed;
      else if (v == "LowConfidence") r.scene_outcome = SceneOutcome::LowConfidence;
      else fail(Errc::malformed_container, "bad scene outcome: " + v);
    } else if (tag == "cropped") {
      r.cropped_count = static_cast<size_t>(std::stoull(rest()));
    } else if (tag == "face") {
      size_t idx = static_cast<size_t>(std::stoull(next()));
      if (idx != r.face_outcomes.size())
        fail(Errc::malformed_container, "face indices out of order");
      FaceOutcome f;
      std::string kind = next();
      if (kind == "Verified") f.kind = FaceOutcomeKind::Verified;
      else if (kind == "VerifiedPartial") f.kind = FaceOutcomeKind::VerifiedPartial;
      else if (kind == "Tampered") f.kind = FaceOutcomeKind::Tampered;
      else if (kind == "Cropped") f.kind = FaceOutcomeKind::Cropped;
      else fail(Errc::malformed_container, "bad face outcome: " + kind);
      std::string sim = next();
      if (sim != "-") f.similarity = std::stod(sim);
      std::string box = rest();
      if (box != "-") f.bbox_in_current = report_detail::parse_box(box);
      r.face_outcomes.push_back(f);
    } else if (tag == "unmatched") {
      r.unmatched_new_faces.push_back(report_detail::parse_box(rest()));
    } else if (tag == "warning") {
      r.warnings.push_back(rest());
    } else {
      fail(Errc::malformed_container, "unknown report line: " + line);
    }
  }
  if (!have_status) fail(Errc::malformed_container, "report missing status line");
  return r;
}

}  // namespace proves
