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

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>

#include "proves/codec.hpp"
#include "proves/errors.hpp"
#include "proves/notary.hpp"
#include "proves/png.hpp"
#include "proves/util.hpp"
#include "proves/verify.hpp"

namespace proves {

// ---------------------------------------------------------------------------
// Request/response framing: 4-byte big-endian part count, then per part a
// 4-byte big-endian length and the raw bytes. Parts are ordered (metadata,
// image, container) where an endpoint uses them.
// ---------------------------------------------------------------------------

namespace multipart {

inline Bytes encode(const std::vector<Bytes>& parts) {
  Bytes out;
  put_u32(out, static_cast<uint32_t>(parts.size()));
  for (const Bytes& p : parts) {
    put_u32(out, static_cast<uint32_t>(p.size()));
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

inline std::vector<Bytes> decode(const uint8_t* data, size_t size) {
  ByteReader r(data, size);
  uint32_t count = r.u32();
  if (count > 16) fail(Errc::malformed_container, "too many multipart parts");
  std::vector<Bytes> parts;
  parts.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t len = r.u32();
    parts.push_back(r.bytes(len));
  }
  if (!r.done()) fail(Errc::malformed_container, "trailing bytes after multipart body");
  return parts;
}

inline std::vector<Bytes> decode(const std::string& body) {
  return decode(reinterpret_cast<const uint8_t*>(body.data()), body.size());
}

}  // namespace multipart

// Metadata parts are flat key=value lines.
inline Bytes encode_meta(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string s;
  for (const auto& [k, v] : fields) s += k + "=" + v + "\n";
  return Bytes(s.begin(), s.end());
}

inline std::map<std::string, std::string> parse_meta(const Bytes& part) {
  std::map<std::string, std::string> out;
  std::istringstream in(std::string(part.begin(), part.end()));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(Errc::malformed_container, "metadata line missing '='");
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Server
// ---------------------------------------------------------------------------

class NotaryService {
 public:
  explicit NotaryService(NotaryCore& core) : core_(core) { routes(); }

  ~NotaryService() { stop(); }

  // Binds and serves on a background thread; port 0 picks a free port.
  void start(const std::string& host, int port) {
    host_ = host;
    if (port == 0) {
      port_ = server_.bind_to_any_port(host);
      if (port_ < 0) fail(Errc::network_error, "could not bind " + host);
    } else {
      if (!server_.bind_to_port(host, port))
        fail(Errc::network_error, "could not bind " + host + ":" + std::to_string(port));
      port_ = port;
    }
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }

  int port() const { return port_; }
  const std::string& host() const { return host_; }

 private:
  static void send_error(httplib::Response& res, int status, const Error& e) {
    res.status = status;
    res.set_content(std::string("error=") + errc_name(e.code()) + "\nmessage=" + e.what() + "\n",
                    "text/plain");
  }

  static std::string required(const std::map<std::string, std::string>& meta,
                              const std::string& key) {
    auto it = meta.find(key);
    if (it == meta.end()) fail(Errc::malformed_container, "missing metadata field: " + key);
    return it->second;
  }

  void routes() {
    server_.Post("/v1/register", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        auto parts = multipart::decode(req.body);
        if (parts.empty()) fail(Errc::malformed_container, "register expects a metadata part");
        auto meta = parse_meta(parts[0]);
        Bytes key = base64_decode(required(meta, "public_key"));
        core_.register_device(required(meta, "device_id"), key);
        res.status = 201;
        res.set_content("registered=1\n", "text/plain");
      } catch (const Error& e) {
        send_error(res, e.code() == Errc::duplicate_device ? 409 : 400, e);
      }
    });

    server_.Post("/v1/sign", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        auto parts = multipart::decode(req.body);
        if (parts.size() < 2) fail(Errc::malformed_container, "sign expects metadata and image");
        auto meta = parse_meta(parts[0]);
        std::string device_id = required(meta, "device_id");
        Bytes device_sig = base64_decode(required(meta, "device_signature"));
        ImageBuffer image = decode_png(parts[1]);
        NotaryCore::SignResult r = core_.sign_image(device_id, image, device_sig);
        Bytes meta_part = encode_meta({{"self_check", r.self_check ? "1" : "0"},
                                       {"face_count", std::to_string(r.face_count)}});
        res.status = 200;
        Bytes body = multipart::encode({meta_part, encode_container(r.container)});
        res.set_content(std::string(body.begin(), body.end()), "application/octet-stream");
      } catch (const Error& e) {
        int status = 400;
        switch (e.code()) {
          case Errc::unknown_device: status = 401; break;
          case Errc::device_revoked: status = 403; break;
          case Errc::signature_invalid: status = 422; break;
          case Errc::self_check_failed: status = 500; break;
          default: break;
        }
        send_error(res, status, e);
      }
    });

    server_.Post("/v1/verify", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        auto parts = multipart::decode(req.body);
        if (parts.size() < 2) fail(Errc::malformed_container, "verify expects metadata and image");
        const Bytes& image_bytes = parts[1];
        SignatureContainer container;
        if (parts.size() >= 3 && !parts[2].empty()) {
          container = decode_container(parts[2]);
        } else {
          if (!is_png(image_bytes))
            fail(Errc::no_signature, "no container part and image carries no signature");
          container = extract_signature_png(image_bytes);
        }
        ImageBuffer image = decode_png(image_bytes);
        VerificationReport report = core_.verify(image, container);
        res.status = 200;
        res.set_content(serialize_report(report), "text/plain");
      } catch (const Error& e) {
        int status = 400;
        switch (e.code()) {
          case Errc::no_signature: status = 404; break;
          case Errc::signature_invalid: status = 422; break;
          default: break;
        }
        send_error(res, status, e);
      }
    });

    server_.Post("/v1/revoke", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        auto parts = multipart::decode(req.body);
        if (parts.empty()) fail(Errc::malformed_container, "revoke expects a metadata part");
        auto meta = parse_meta(parts[0]);
        core_.revoke_device(required(meta, "device_id"),
                            parse_iso8601(required(meta, "effective")));
        res.status = 200;
        res.set_content("revoked=1\n", "text/plain");
      } catch (const Error& e) {
        send_error(res, e.code() == Errc::unknown_device ? 404 : 400, e);
      }
    });
  }

  NotaryCore& core_;
  httplib::Server server_;
  std::thread thread_;
  std::string host_;
  int port_ = 0;
};

// ---------------------------------------------------------------------------
// Client
// ---------------------------------------------------------------------------

struct ClientSignResult {
  SignatureContainer container;
  bool self_check = false;
  size_t face_count = 0;
};

class NotaryClient {
 public:
  // addr is "host:port".
  explicit NotaryClient(const std::string& addr) : cli_(make_client(addr)) {
    cli_.set_connection_timeout(5, 0);
    cli_.set_read_timeout(120, 0);
    cli_.set_write_timeout(120, 0);
  }

  void register_device(const std::string& device_id, const Bytes& public_key) {
    Bytes body = multipart::encode(
        {encode_meta({{"device_id", device_id}, {"public_key", base64_encode(public_key)}})});
    auto [status, text] = post("/v1/register", body);
    if (status != 201) throw_from_response(status, text);
  }

  ClientSignResult sign(const std::string& device_id, const Bytes& png_bytes,
                        const Bytes& device_signature) {
    Bytes meta = encode_meta(
        {{"device_id", device_id}, {"device_signature", base64_encode(device_signature)}});
    auto [status, text] = post("/v1/sign", multipart::encode({meta, png_bytes}));
    if (status != 200) throw_from_response(status, text);
    auto parts = multipart::decode(text);
    if (parts.size() != 2) fail(Errc::malformed_container, "unexpected sign response layout");
    auto rmeta = parse_meta(parts[0]);
    ClientSignResult r;
    r.container = decode_container(parts[1]);
    r.self_check = rmeta.count("self_check") && rmeta.at("self_check") == "1";
    r.face_count = rmeta.count("face_count") ? std::stoull(rmeta.at("face_count")) : 0;
    return r;
  }

  VerificationReport verify(const Bytes& image_bytes, const Bytes& container_bytes = {}) {
    Bytes body = multipart::encode({encode_meta({}), image_bytes, container_bytes});
    auto [status, text] = post("/v1/verify", body);
    if (status != 200) throw_from_response(status, text);
    return parse_report(text);
  }

  // Raw report text, for byte-exact comparison against local serialization.
  std::string verify_text(const Bytes& image_bytes, const Bytes& container_bytes = {}) {
    Bytes body = multipart::encode({encode_meta({}), image_bytes, container_bytes});
    auto [status, text] = post("/v1/verify", body);
    if (status != 200) throw_from_response(status, text);
    return text;
  }

  void revoke(const std::string& device_id, uint64_t effective) {
    Bytes body = multipart::encode(
        {encode_meta({{"device_id", device_id}, {"effective", format_iso8601(effective)}})});
    auto [status, text] = post("/v1/revoke", body);
    if (status != 200) throw_from_response(status, text);
  }

 private:
  static httplib::Client make_client(const std::string& addr) {
    size_t colon = addr.rfind(':');
    if (colon == std::string::npos)
      fail(Errc::invalid_argument, "address must be host:port: " + addr);
    int port = 0;
    try {
      port = std::stoi(addr.substr(colon + 1));
    } catch (...) {
      fail(Errc::invalid_argument, "bad port in address: " + addr);
    }
    return httplib::Client(addr.substr(0, colon), port);
  }

  std::pair<int, std::string> post(const std::string& path, const Bytes& body) {
    auto res = cli_.Post(path, std::string(body.begin(), body.end()), "application/octet-stream");
    if (!res) fail(Errc::network_error, "no response from notary (" + path + ")");
    return {res->status, res->body};
  }

  [[noreturn]] static void throw_from_response(int status, const std::string& body) {
    std::string name = "NetworkError", message = "HTTP " + std::to_string(status);
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("error=", 0) == 0) name = line.substr(6);
      if (line.rfind("message=", 0) == 0) message = line.substr(8);
    }
    Errc code = Errc::network_error;
    switch (status) {
      case 400: code = Errc::malformed_container; break;
      case 401: code = Errc::unknown_device; break;
      case 403: code = Errc::device_revoked; break;
      case 404: code = name == "UnknownDevice" ? Errc::unknown_device : Errc::no_signature; break;
      case 409: code = Errc::duplicate_device; break;
      case 422: code = Errc::signature_invalid; break;
      case 500: code = Errc::self_check_failed; break;
      default: break;
    }
    fail(code, message);
  }

  httplib::Client cli_;
};

}  // namespace proves
