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

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "proves/notary.hpp"
#include "proves/service.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

}  // namespace

int main() {
  using namespace proves;
  std::string addr = env_or("PROVES_ADDR", "127.0.0.1:8471");
  std::string data_dir = env_or("PROVES_DATA_DIR", "proves-data");
  std::string config_path = env_or("PROVES_CONFIG", "");

  size_t colon = addr.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "PROVES_ADDR must be host:port\n";
    return 1;
  }

  try {
    NotaryOptions opts;
    opts.data_dir = data_dir;
    if (!config_path.empty()) opts.config = EngineConfig::from_file(config_path);
    NotaryCore core(opts);
    NotaryService service(core);
    service.start(addr.substr(0, colon), std::stoi(addr.substr(colon + 1)));
    std::cout << "listening on " << service.host() << ":" << service.port() << " (data: "
              << data_dir << ")\n";

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
    return 0;
  } catch (const Error& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
}
