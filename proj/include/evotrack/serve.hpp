/*
 * Copyright (c) 2026 The evotrack Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <sys/socket.h>

#include <filesystem>
#include <optional>
#include <string>

#include <httplib.h>

#include "evotrack/error.hpp"

namespace evotrack {

// Read-only static file server over an emitted bundle directory, with the
// explorer UI assets optionally mounted under /ui/.
class BundleServer {
 public:
  explicit BundleServer(const std::filesystem::path& bundle_dir,
                        const std::optional<std::filesystem::path>& ui_dir = std::nullopt) {
    std::error_code ec;
    const bool has_bundle = std::filesystem::is_regular_file(bundle_dir / "comparison.json", ec) ||
                            std::filesystem::is_regular_file(bundle_dir / "exploration.json", ec);
    if (!has_bundle) {
      throw Error(ErrorKind::MissingBundle,
                  bundle_dir.string() + " holds neither comparison.json nor exploration.json");
    }
    // Plain SO_REUSEADDR: a second server on a live port must fail to bind.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    if (ui_dir && !server_.set_mount_point("/ui", ui_dir->string())) {
      throw Error(ErrorKind::MissingBundle, "UI directory " + ui_dir->string() + " not found");
    }
    server_.set_mount_point("/", bundle_dir.string());
  }

  // Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port) {
    if (port == 0) {
      port = server_.bind_to_any_port(host);
      if (port < 0) throw Error(ErrorKind::PortInUse, "no free port on " + host);
    } else if (!server_.bind_to_port(host, port)) {
      throw Error(ErrorKind::PortInUse, host + ":" + std::to_string(port));
    }
    return port;
  }

  // Blocks until stop() is called.
  bool listen() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  bool running() const { return server_.is_running(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  httplib::Server server_;
};

}  // namespace evotrack
