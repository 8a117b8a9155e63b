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

#include <csignal>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "evotrack/pipeline.hpp"
#include "evotrack/serve.hpp"

namespace {

evotrack::BundleServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evotrack: track GUI, call-graph and source changes between application versions"};
  app.require_subcommand(1);

  std::string project, old_project, new_project, out_dir, format = "text", bundle_dir, ui_dir;
  std::string host = "127.0.0.1";
  int port = 8080;

  auto* explore = app.add_subcommand("explore", "Slice every handler of one project");
  explore->add_option("project", project, "Project manifest")->required();
  explore->add_option("-o,--out", out_dir, "Output directory")->required();

  auto* compare = app.add_subcommand("compare", "Compare two project versions");
  compare->add_option("old", old_project, "Older project manifest")->required();
  compare->add_option("new", new_project, "Newer project manifest")->required();
  compare->add_option("-o,--out", out_dir, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Print the regression-focus report");
  report->add_option("old", old_project, "Older project manifest")->required();
  report->add_option("new", new_project, "Newer project manifest")->required();
  report->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* validate = app.add_subcommand("validate", "Check a project's artifacts");
  validate->add_option("project", project, "Project manifest")->required();

  auto* serve = app.add_subcommand("serve", "Serve a bundle directory over HTTP");
  serve->add_option("dir", bundle_dir, "Bundle directory")->required();
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--ui", ui_dir, "Explorer UI assets, served under /ui/");

  CLI11_PARSE(app, argc, argv);

  if (*explore) return evotrack::cmd_explore(project, out_dir, std::cerr);
  if (*compare) return evotrack::cmd_compare(old_project, new_project, out_dir, std::cerr);
  if (*report) {
    const auto fmt = format == "json" ? evotrack::ReportFormat::Json : evotrack::ReportFormat::Text;
    return evotrack::cmd_report(old_project, new_project, fmt, std::cout, std::cerr);
  }
  if (*validate) return evotrack::cmd_validate(project, std::cout, std::cerr);

  try {
    std::optional<std::filesystem::path> ui;
    if (!ui_dir.empty()) ui = ui_dir;
    evotrack::BundleServer server(bundle_dir, ui);
    const int bound = server.bind(host, port);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "serving " << bundle_dir << " on http://" << host << ":" << bound << "/\n";
    server.listen();
    g_server = nullptr;
    return 0;
  } catch (const evotrack::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == evotrack::ErrorKind::MissingBundle ? 2 : 1;
  }
}
