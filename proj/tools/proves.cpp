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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proves/annotate.hpp"
#include "proves/bench.hpp"
#include "proves/codec.hpp"
#include "proves/corpus.hpp"
#include "proves/crypto.hpp"
#include "proves/notary.hpp"
#include "proves/perception.hpp"
#include "proves/png.hpp"
#include "proves/service.hpp"
#include "proves/transforms.hpp"
#include "proves/verify.hpp"

namespace {

using namespace proves;

// Exit codes shared by sign/verify; other subcommands use 0/1/2.
constexpr int kExitOk = 0;
constexpr int kExitNotVerified = 1;
constexpr int kExitNetwork = 2;
constexpr int kExitRejected = 3;
constexpr int kExitSelfCheck = 4;
constexpr int kExitUnsupported = 5;
constexpr int kExitRefused = 6;
constexpr int kExitSceneFailed = 7;
constexpr int kExitNoSignature = 8;

std::string default_addr() {
  const char* env = std::getenv("PROVES_ADDR");
  return env && *env ? env : "127.0.0.1:8471";
}

int fail_with(int code, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return code;
}

// --- keygen ---------------------------------------------------------------

int cmd_keygen(const std::string& out, uint64_t seed) {
  KeyPair kp = seed ? deterministic_keypair(seed) : generate_keypair();
  save_keypair(out, kp);
  std::cout << "public_key=" << base64_encode(kp.public_key) << "\n";
  return kExitOk;
}

// --- register / revoke ----------------------------------------------------

int cmd_register(const std::string& addr, const std::string& device, const std::string& key_path) {
  try {
    KeyPair kp = load_keypair(key_path);
    NotaryClient client(addr);
    client.register_device(device, kp.public_key);
    std::cout << "registered " << device << "\n";
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() == Errc::network_error) return fail_with(kExitNetwork, e.what());
    return fail_with(1, e.what());
  }
}

int cmd_revoke(const std::string& addr, const std::string& device, const std::string& effective) {
  try {
    NotaryClient client(addr);
    client.revoke(device, parse_iso8601(effective));
    std::cout << "revoked " << device << " effective " << effective << "\n";
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() == Errc::network_error) return fail_with(kExitNetwork, e.what());
    return fail_with(1, e.what());
  }
}

// --- sign -------------------------------------------------------------------

int cmd_sign(const std::string& addr, const std::string& image_path, const std::string& device,
             const std::string& key_path, bool sidecar, std::string out_path) {
  Bytes image_bytes;
  try {
    image_bytes = read_file(image_path);
  } catch (const Error& e) {
    return fail_with(1, e.what());
  }
  if (!is_png(image_bytes))
    return fail_with(kExitUnsupported, "only PNG images can be signed (pixel access required)");

  try {
    ImageBuffer image = decode_png(image_bytes);
    KeyPair kp = load_keypair(key_path);
    Bytes device_sig = ecdsa_sign(kp.private_key, image.pixels);

    NotaryClient client(addr);
    ClientSignResult r = client.sign(device, image_bytes, device_sig);
    if (!r.self_check) return fail_with(kExitSelfCheck, "notary self-check failed");

    if (out_path.empty()) {
      std::filesystem::path p(image_path);
      out_path = (p.parent_path() / (p.stem().string() + ".signed" + p.extension().string()))
                     .string();
    }
    Bytes container_bytes = encode_container(r.container);
    if (sidecar) {
      write_file(out_path, image_bytes);
      write_file(sidecar_path(out_path), container_bytes);
    } else {
      write_file(out_path, embed_signature_png(image_bytes, r.container));
    }
    std::cout << "signed " << image_path << " -> " << out_path << " (" << r.face_count
              << " face(s))\n";
    return kExitOk;
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::network_error: return fail_with(kExitNetwork, e.what());
      case Errc::unknown_device:
      case Errc::device_revoked:
      case Errc::signature_invalid: return fail_with(kExitRejected, e.what());
      case Errc::self_check_failed: return fail_with(kExitSelfCheck, e.what());
      case Errc::unsupported_format: return fail_with(kExitUnsupported, e.what());
      default: return fail_with(1, e.what());
    }
  }
}

// --- verify -----------------------------------------------------------------

int report_exit_code(const VerificationReport& report) {
  if (report.revocation_status == RevocationStatus::Refused) return kExitRefused;
  for (const FaceOutcome& f : report.face_outcomes)
    if (f.kind == FaceOutcomeKind::Tampered) return kExitNotVerified;
  if (report.scene_outcome && *report.scene_outcome == SceneOutcome::Failed)
    return kExitSceneFailed;
  return kExitOk;
}

int cmd_verify(const std::string& addr, const std::string& image_path,
               const std::string& annotate_path) {
  Bytes image_bytes;
  try {
    image_bytes = read_file(image_path);
  } catch (const Error& e) {
    return fail_with(1, e.what());
  }

  Bytes container_bytes;
  std::string side = sidecar_path(image_path);
  if (std::filesystem::exists(side)) {
    try {
      container_bytes = read_file(side);
    } catch (const Error& e) {
      return fail_with(1, e.what());
    }
  }

  try {
    NotaryClient client(addr);
    std::string text = client.verify_text(image_bytes, container_bytes);
    std::cout << text;
    VerificationReport report = parse_report(text);
    if (!annotate_path.empty()) {
      ImageBuffer image = decode_png(image_bytes);
      write_file(annotate_path, encode_png(annotate_report(image, report)));
    }
    return report_exit_code(report);
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::network_error: return fail_with(kExitNetwork, e.what());
      case Errc::no_signature: return fail_with(kExitNoSignature, e.what());
      default: return fail_with(kExitNotVerified, e.what());
    }
  }
}

// --- transform ----------------------------------------------------------------

// Benign spec text: comma-separated k=v with keys scale, tx, ty, rot,
// contrast, brightness, color; or "random" to draw the full suite.
BenignTransformSpec parse_benign(const std::string& text, uint64_t seed, int rotation_mode) {
  if (text == "random") return BenignTransformSpec::random(seed, rotation_mode);
  BenignTransformSpec s;
  s.rng_seed = seed;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    size_t eq = item.find('=');
    if (eq == std::string::npos) fail(Errc::invalid_argument, "expected k=v in spec: " + item);
    std::string key = item.substr(0, eq);
    double value = std::stod(item.substr(eq + 1));
    if (key == "scale") s.scale = value;
    else if (key == "tx") s.translate_x = value;
    else if (key == "ty") s.translate_y = value;
    else if (key == "rot") s.rotate_deg = value;
    else if (key == "contrast") s.contrast = value;
    else if (key == "brightness") s.brightness = value;
    else if (key == "color") s.color = value;
    else fail(Errc::invalid_argument, "unknown benign spec key: " + key);
  }
  return s;
}

// Attack spec text: kind:index[,index], e.g. "swap:0,1".
AttackSpec parse_attack(const std::string& text, double noise, uint64_t seed) {
  size_t colon = text.find(':');
  if (colon == std::string::npos)
    fail(Errc::invalid_argument, "attack spec must be kind:targets");
  AttackSpec a;
  a.kind = attack_kind_from_name(text.substr(0, colon));
  std::istringstream in(text.substr(colon + 1));
  std::string item;
  while (std::getline(in, item, ',')) a.targets.push_back(std::stoull(item));
  a.noise_budget = noise / 255.0;
  a.rng_seed = seed;
  return a;
}

int cmd_transform(const std::string& image_path, const std::string& out_path,
                  const std::string& benign, const std::string& attack, double noise,
                  uint64_t seed, int rotation_mode) {
  try {
    ImageBuffer image = decode_png(read_file(image_path));
    ImageBuffer result;
    if (!benign.empty()) {
      result = apply_benign(image, parse_benign(benign, seed, rotation_mode)).image;
    } else if (!attack.empty()) {
      PerceptionBackend backend = make_perception("reference");
      std::vector<BBox> boxes = backend.detect(image);
      result = apply_attack(image, boxes, parse_attack(attack, noise, seed));
    } else {
      return fail_with(1, "one of --benign or --attack is required");
    }
    write_file(out_path, encode_png(result));
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() == Errc::unsupported_format) return fail_with(kExitUnsupported, e.what());
    return fail_with(1, e.what());
  }
}

// --- bench ---------------------------------------------------------------------

int cmd_bench(size_t images, size_t faces, int rotation, size_t trials, uint64_t seed,
              bool local, const std::string& addr, const std::string& config_path) {
  try {
    BenchOptions opt;
    opt.images = images;
    if (faces > 0) opt.faces_min = opt.faces_max = faces;
    opt.rotation_mode = rotation;
    opt.attack_trials = trials;
    opt.seed = seed;
    if (!config_path.empty()) opt.config = EngineConfig::from_file(config_path);

    BenchStats stats;
    if (local) {
      stats = run_bench(opt);
    } else {
      NotaryClient client(addr);
      KeyPair device = deterministic_keypair(hash_combine(seed, 0x64657669ull));
      std::string device_id = "bench-device-" + std::to_string(splitmix64(seed) & 0xffffff);
      client.register_device(device_id, device.public_key);
      BenchHooks hooks;
      hooks.sign = [&](const ImageBuffer& img) {
        Bytes png = encode_png(img);
        Bytes sig = ecdsa_sign(device.private_key, img.pixels);
        return client.sign(device_id, png, sig).container;
      };
      hooks.verify = [&](const ImageBuffer& img, const SignatureContainer& c) {
        return client.verify(encode_png(img), encode_container(c));
      };
      stats = run_bench(opt, hooks);
    }
    std::cout << bench_table(stats);
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() == Errc::network_error) return fail_with(kExitNetwork, e.what());
    return fail_with(1, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic image signing and verification"};
  app.require_subcommand(1);
  std::string addr = default_addr();

  auto* keygen = app.add_subcommand("keygen", "generate a device keypair");
  std::string keygen_out = "device.key";
  uint64_t keygen_seed = 0;
  keygen->add_option("--out", keygen_out, "output key file");
  keygen->add_option("--seed", keygen_seed, "deterministic seed (0 = random)");

  auto* reg = app.add_subcommand("register", "register a device with the notary");
  std::string reg_device, reg_key;
  reg->add_option("--device", reg_device, "device id")->required();
  reg->add_option("--key", reg_key, "device key file")->required();
  reg->add_option("--addr", addr, "notary address host:port");

  auto* sign = app.add_subcommand("sign", "request a semantic signature");
  std::string sign_image, sign_device, sign_key, sign_out;
  bool sign_sidecar = false;
  sign->add_option("image", sign_image, "input PNG")->required();
  sign->add_option("--device", sign_device, "device id")->required();
  sign->add_option("--key", sign_key, "device key file")->required();
  sign->add_option("--out", sign_out, "output path (default <stem>.signed.png)");
  sign->add_flag("--sidecar", sign_sidecar, "write the signature to <out>.provsig");
  sign->add_option("--addr", addr, "notary address host:port");

  auto* verify = app.add_subcommand("verify", "verify a signed image");
  std::string verify_image, verify_annotate;
  verify->add_option("image", verify_image, "input image")->required();
  verify->add_option("--annotate", verify_annotate, "write an annotated PNG");
  verify->add_option("--addr", addr, "notary address host:port");

  auto* transform = app.add_subcommand("transform", "apply a benign edit or an attack");
  std::string tr_image, tr_out = "transformed.png", tr_benign, tr_attack;
  double tr_noise = 0.0;
  uint64_t tr_seed = 1;
  int tr_rotation = 0;
  transform->add_option("image", tr_image, "input PNG")->required();
  transform->add_option("--out", tr_out, "output path");
  transform->add_option("--benign", tr_benign, "benign spec (k=v,... or 'random')");
  transform->add_option("--attack", tr_attack, "attack spec kind:targets");
  transform->add_option("--noise", tr_noise, "attack noise amplitude, /255 units (max 4)");
  transform->add_option("--seed", tr_seed, "rng seed");
  transform->add_option("--rotation", tr_rotation, "rotation mode for random specs (0 or 5)");

  auto* bench = app.add_subcommand("bench", "run the statistics suite");
  size_t bench_images = 100, bench_faces = 0, bench_trials = 0;
  int bench_rotation = 0;
  uint64_t bench_seed = 1;
  bool bench_local = false;
  std::string bench_config;
  bench->add_option("--images", bench_images, "benign trial count");
  bench->add_option("--faces-per-image", bench_faces, "fixed face count (0 = mixed 1..10)");
  bench->add_option("--rotation", bench_rotation, "0 or 5 degrees");
  bench->add_option("--trials", bench_trials, "attack trials per kind");
  bench->add_option("--seed", bench_seed, "rng seed");
  bench->add_flag("--local", bench_local, "run in-process instead of over HTTP");
  bench->add_option("--config", bench_config, "engine config file");
  bench->add_option("--addr", addr, "notary address host:port");

  auto* revoke = app.add_subcommand("revoke", "revoke a device");
  std::string rev_device, rev_effective;
  revoke->add_option("--device", rev_device, "device id")->required();
  revoke->add_option("--effective", rev_effective, "effective date, ISO 8601 UTC")->required();
  revoke->add_option("--addr", addr, "notary address host:port");

  CLI11_PARSE(app, argc, argv);

  try {
    if (keygen->parsed()) return cmd_keygen(keygen_out, keygen_seed);
    if (reg->parsed()) return cmd_register(addr, reg_device, reg_key);
    if (sign->parsed())
      return cmd_sign(addr, sign_image, sign_device, sign_key, sign_sidecar, sign_out);
    if (verify->parsed()) return cmd_verify(addr, verify_image, verify_annotate);
    if (transform->parsed())
      return cmd_transform(tr_image, tr_out, tr_benign, tr_attack, tr_noise, tr_seed,
                           tr_rotation);
    if (bench->parsed())
      return cmd_bench(bench_images, bench_faces, bench_rotation, bench_trials, bench_seed,
                       bench_local, addr, bench_config);
    if (revoke->parsed()) return cmd_revoke(addr, rev_device, rev_effective);
  } catch (const Error& e) {
    return fail_with(1, e.what());
  } catch (const std::exception& e) {
    return fail_with(1, e.what());
  }
  return 1;
}
