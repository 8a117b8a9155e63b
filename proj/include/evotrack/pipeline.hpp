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

// End-to-end exploration and comparison pipelines and the bundle writer.

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "evotrack/bundle.hpp"
#include "evotrack/classify.hpp"
#include "evotrack/condense.hpp"
#include "evotrack/dot.hpp"
#include "evotrack/graph_diff.hpp"
#include "evotrack/gui_match.hpp"
#include "evotrack/slicer.hpp"
#include "evotrack/textdiff.hpp"
#include "evotrack/validate.hpp"

namespace evotrack {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitMissingArtifact = 2;

// Raised when a pipeline cannot start; carries the CLI exit code.
class PipelineFailure : public std::runtime_error {
 public:
  PipelineFailure(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

struct LoadedProject {
  Project project;
  GuiModel gui;
  CategorizedCallGraph graph;
  ClassificationRules rules;
  std::vector<ValidationIssue> warnings;
};

// Loads and validates a project. Error-level issues abort with exit code 2
// when an artifact is missing or unreadable and 1 otherwise; every issue is
// written to `diag`.
inline LoadedProject load_checked(const std::filesystem::path& manifest, std::ostream& diag) {
  LoadedProject out;
  try {
    out.project = load_project(manifest);
  } catch (const Error& e) {
    diag << "error: " << manifest.string() << ": " << e.what() << "\n";
    throw PipelineFailure(e.kind() == ErrorKind::IoError ? kExitMissingArtifact : kExitInvalid,
                          e.what());
  }
  auto issues = validate_project(out.project);
  for (const auto& issue : issues) diag << out.project.version_label << ": " << issue.to_string() << "\n";
  if (has_errors(issues)) {
    throw PipelineFailure(has_missing_artifact(issues) ? kExitMissingArtifact : kExitInvalid,
                          "project " + manifest.string() + " failed validation");
  }
  for (auto& issue : issues) out.warnings.push_back(std::move(issue));
  out.gui = load_gui_model(out.project.gui_model_path);
  out.rules = load_project_rules(out.project);
  out.graph = annotate_graph(load_call_graph(out.project.call_graph_path), out.rules);
  return out;
}

inline bool sliceable(const CategorizedCallGraph& cg, const MethodSig& handler) {
  return cg.graph.contains(handler) && cg.category(handler) == Category::Application;
}

// File name -> contents.
using BundleFiles = std::map<std::string, std::string>;

// Writes all files into a fresh sibling directory, then swaps it into place
// so readers never observe a partial bundle.
inline void write_bundle_atomically(const std::filesystem::path& out_dir, const BundleFiles& files) {
  namespace fs = std::filesystem;
  const fs::path target = fs::absolute(out_dir).lexically_normal();
  const fs::path parent = target.parent_path();
  fs::create_directories(parent);
  std::random_device rd;
  const std::string suffix = to_hex16((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
  const fs::path staging = parent / ("." + target.filename().string() + ".tmp-" + suffix);
  const fs::path backup = parent / ("." + target.filename().string() + ".old-" + suffix);
  fs::create_directories(staging);
  try {
    for (const auto& [name, content] : files) {
      const fs::path file = staging / name;
      fs::create_directories(file.parent_path());
      std::ofstream out(file, std::ios::binary);
      out << content;
      if (!out) throw Error(ErrorKind::IoError, "cannot write " + file.string());
    }
    if (fs::exists(target)) fs::rename(target, backup);
    fs::rename(staging, target);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  std::error_code ec;
  fs::remove_all(backup, ec);
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Exploration

struct Exploration {
  json bundle;
  BundleFiles dot_files;
  std::vector<std::string> warnings;
};

inline Exploration explore(const LoadedProject& p) {
  Exploration out;
  for (const auto& w : p.warnings) out.warnings.push_back(w.to_string());

  // Distinct application handlers and the widgets carrying them.
  std::map<MethodSig, std::vector<std::string>> handlers;
  for (const auto& win : p.gui.windows) {
    for_each_widget(win.root, [&](const Widget& w) {
      for (const auto& h : w.handlers) {
        if (sliceable(p.graph, h)) handlers[h].push_back(w.id);
      }
    });
  }

  json slices = json::array();
  std::set<MethodSig> shown;
  for (const auto& [handler, widgets] : handlers) {
    const auto s = slice(p.graph, handler);
    const auto dot_name = slice_dot_name(handler);
    out.dot_files[dot_name] = export_dot(s);
    slices.push_back({{"handler", handler.text()},
                      {"widgets", widgets},
                      {"dot", dot_name},
                      {"slice", to_json(s)}});
    shown.insert(s.app_nodes.begin(), s.app_nodes.end());
  }

  json sources = json::object();
  if (p.project.source_root) {
    for (const auto& sig : shown) {
      const auto* rec = p.graph.graph.find(sig);
      if (!rec || !rec->source) continue;
      try {
        const auto view = extract_method_source(*p.project.source_root, *rec);
        sources[sig.text()] = {{"lines", view.lines},
                               {"origin",
                                {{"path", view.origin.path},
                                 {"start_line", view.origin.start_line},
                                 {"end_line", view.origin.end_line}}}};
      } catch (const Error& e) {
        out.warnings.push_back(std::string("warning source: ") + e.what());
      }
    }
  }

  out.bundle = {{"version_label", p.project.version_label},
                {"gui_model", gui_model_to_json(p.gui)},
                {"slices", std::move(slices)},
                {"sources", std::move(sources)},
                {"warnings", out.warnings}};
  return out;
}

// ---------------------------------------------------------------------------
// Comparison

struct Comparison {
  ComparisonBundle bundle;
  std::vector<std::string> warnings;
};

namespace detail {

class SliceCache {
 public:
  explicit SliceCache(const CategorizedCallGraph& cg) : cg_(cg) {}

  const HandlerSlice& get(const MethodSig& handler) {
    auto it = cache_.find(handler);
    if (it == cache_.end()) it = cache_.emplace(handler, slice(cg_, handler)).first;
    return it->second;
  }

 private:
  const CategorizedCallGraph& cg_;
  std::map<MethodSig, HandlerSlice> cache_;
};

inline std::map<std::string, const Widget*> index_widgets(const GuiModel& model) {
  std::map<std::string, const Widget*> out;
  for (const auto& win : model.windows) {
    for_each_widget(win.root, [&](const Widget& w) { out.emplace(w.id, &w); });
  }
  return out;
}

inline bool lists_handler(const Widget* w, const MethodSig& h) {
  return w && std::find(w->handlers.begin(), w->handlers.end(), h) != w->handlers.end();
}

}  // namespace detail

inline Comparison compare(const LoadedProject& old_p, const LoadedProject& new_p) {
  Comparison out;
  auto& b = out.bundle;
  b.versions = {old_p.project.version_label, new_p.project.version_label};

  const auto& key_props = new_p.project.rules_path || !old_p.project.rules_path
                              ? new_p.rules.match_properties
                              : old_p.rules.match_properties;
  const auto match = match_gui(old_p.gui, new_p.gui, key_props);
  auto tree = build_merged_tree(match, old_p.gui, new_p.gui);

  const auto old_widgets = detail::index_widgets(old_p.gui);
  const auto new_widgets = detail::index_widgets(new_p.gui);
  const auto old_fp = fingerprints_of(old_p.graph.graph);
  const auto new_fp = fingerprints_of(new_p.graph.graph);
  detail::SliceCache old_slices(old_p.graph);
  detail::SliceCache new_slices(new_p.graph);
  std::set<HandlerDiffKey> untracked;

  for_each_merged(tree, [&](const MergedWindow&, const MergedNode& node, const std::vector<int>&) {
    const Widget* ow = node.old_id ? old_widgets.at(*node.old_id) : nullptr;
    const Widget* nw = node.new_id ? new_widgets.at(*node.new_id) : nullptr;
    for (const auto& h : node.handlers) {
      const HandlerDiffKey key{node.merged_id, h};
      const bool in_old = detail::lists_handler(ow, h) && sliceable(old_p.graph, h);
      const bool in_new = detail::lists_handler(nw, h) && sliceable(new_p.graph, h);
      if (in_old && in_new) {
        b.handler_diffs.emplace(key, diff_slices(old_slices.get(h), new_slices.get(h), old_fp, new_fp));
      } else if (in_old) {
        b.handler_diffs.emplace(key, unmatched_handler_diff(old_slices.get(h), Side::Old));
      } else if (in_new) {
        b.handler_diffs.emplace(key, unmatched_handler_diff(new_slices.get(h), Side::New));
      } else {
        untracked.insert(key);
      }
    }
  });

  b.merged_tree = propagate_to_widgets(std::move(tree), b.handler_diffs, untracked);
  for (const auto& [key, diff] : b.handler_diffs) b.condensed.emplace(key, collapse_unchanged(diff));

  std::set<MethodSig> changed;
  for (const auto& [key, diff] : b.handler_diffs) {
    for (const auto& [node, status] : diff.nodes) {
      if (status == DiffNodeStatus::Changed) changed.insert(canonical_sig(node));
    }
  }
  for (const auto& sig : changed) {
    const auto* old_rec = old_p.graph.graph.find(sig);
    const auto* new_rec = new_p.graph.graph.find(sig);
    if (!old_rec || !new_rec || !old_rec->source || !new_rec->source) continue;
    if (!old_p.project.source_root || !new_p.project.source_root) continue;
    try {
      const auto before = extract_method_source(*old_p.project.source_root, *old_rec);
      const auto after = extract_method_source(*new_p.project.source_root, *new_rec);
      b.source_diffs.emplace(sig, line_diff(before.lines, after.lines));
    } catch (const Error& e) {
      out.warnings.push_back(std::string("warning source: ") + e.what());
    }
  }

  b.report = build_report(b.merged_tree, b.handler_diffs);
  for (const auto& [window, ids] : ambiguous_match_keys(old_p.gui, key_props)) {
    out.warnings.push_back("warning AmbiguousMatchKey: " + old_p.project.version_label +
                           " window '" + window + "' has " + std::to_string(ids.size()) +
                           " widgets sharing one key");
  }
  for (const auto& [window, ids] : ambiguous_match_keys(new_p.gui, key_props)) {
    out.warnings.push_back("warning AmbiguousMatchKey: " + new_p.project.version_label +
                           " window '" + window + "' has " + std::to_string(ids.size()) +
                           " widgets sharing one key");
  }
  return out;
}

inline BundleFiles comparison_files(const ComparisonBundle& b) {
  BundleFiles files;
  files["comparison.json"] = dump_json(to_json(b));
  files["report.txt"] = report_text(b.report, b.versions);
  for (const auto& [key, diff] : b.handler_diffs) files[diff_dot_name(key)] = export_dot(diff);
  return files;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_explore(const std::filesystem::path& project_path,
                       const std::filesystem::path& out_dir, std::ostream& diag) {
  try {
    const auto p = load_checked(project_path, diag);
    auto result = explore(p);
    for (const auto& w : result.warnings) {
      if (w.rfind("warning source", 0) == 0) diag << w << "\n";
    }
    BundleFiles files = std::move(result.dot_files);
    files["exploration.json"] = dump_json(result.bundle);
    write_bundle_atomically(out_dir, files);
    return kExitOk;
  } catch (const PipelineFailure& f) {
    return f.exit_code();
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

inline int cmd_compare(const std::filesystem::path& old_path, const std::filesystem::path& new_path,
                       const std::filesystem::path& out_dir, std::ostream& diag) {
  try {
    const auto old_p = load_checked(old_path, diag);
    const auto new_p = load_checked(new_path, diag);
    const auto result = compare(old_p, new_p);
    for (const auto& w : result.warnings) diag << w << "\n";
    write_bundle_atomically(out_dir, comparison_files(result.bundle));
    return kExitOk;
  } catch (const PipelineFailure& f) {
    return f.exit_code();
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

enum class ReportFormat { Text, Json };

inline int cmd_report(const std::filesystem::path& old_path, const std::filesystem::path& new_path,
                      ReportFormat format, std::ostream& out, std::ostream& diag) {
  try {
    const auto old_p = load_checked(old_path, diag);
    const auto new_p = load_checked(new_path, diag);
    const auto result = compare(old_p, new_p);
    for (const auto& w : result.warnings) diag << w << "\n";
    if (format == ReportFormat::Json) {
      out << dump_json(to_json(result.bundle.report));
    } else {
      out << report_text(result.bundle.report, result.bundle.versions);
    }
    return kExitOk;
  } catch (const PipelineFailure& f) {
    return f.exit_code();
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

inline int cmd_validate(const std::filesystem::path& project_path, std::ostream& out,
                        std::ostream& diag) {
  Project project;
  try {
    project = load_project(project_path);
  } catch (const Error& e) {
    diag << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::IoError ? kExitMissingArtifact : kExitInvalid;
  }
  const auto issues = validate_project(project);
  for (const auto& issue : issues) out << issue.to_string() << "\n";
  if (issues.empty()) out << "ok: " << project.version_label << "\n";
  if (!has_errors(issues)) return kExitOk;
  return has_missing_artifact(issues) ? kExitMissingArtifact : kExitInvalid;
}

}  // namespace evotrack
