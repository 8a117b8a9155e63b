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

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evotrack/classify.hpp"
#include "evotrack/gui_match.hpp"
#include "evotrack/model.hpp"

namespace evotrack {

enum class Severity { Warning, Error };

enum class IssueKind {
  MissingArtifact,
  SchemaError,
  MalformedSignature,
  DuplicateWidgetId,
  UnknownEndpoint,
  DuplicateEdge,
  DanglingHandler,
  NonApplicationHandler,
  MissingSourceRoot,
  AmbiguousMatchKey,
};

inline std::string_view to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

inline std::string_view to_string(IssueKind k) {
  switch (k) {
    case IssueKind::MissingArtifact: return "MissingArtifact";
    case IssueKind::SchemaError: return "SchemaError";
    case IssueKind::MalformedSignature: return "MalformedSignature";
    case IssueKind::DuplicateWidgetId: return "DuplicateWidgetId";
    case IssueKind::UnknownEndpoint: return "UnknownEndpoint";
    case IssueKind::DuplicateEdge: return "DuplicateEdge";
    case IssueKind::DanglingHandler: return "DanglingHandler";
    case IssueKind::NonApplicationHandler: return "NonApplicationHandler";
    case IssueKind::MissingSourceRoot: return "MissingSourceRoot";
    case IssueKind::AmbiguousMatchKey: return "AmbiguousMatchKey";
  }
  return "Unknown";
}

struct ValidationIssue {
  Severity severity = Severity::Error;
  IssueKind kind = IssueKind::SchemaError;
  std::string message;

  std::string to_string() const {
    return std::string(evotrack::to_string(severity)) + " " +
           std::string(evotrack::to_string(kind)) + ": " + message;
  }
};

inline bool has_errors(const std::vector<ValidationIssue>& issues) {
  for (const auto& i : issues) {
    if (i.severity == Severity::Error) return true;
  }
  return false;
}

inline bool has_missing_artifact(const std::vector<ValidationIssue>& issues) {
  for (const auto& i : issues) {
    if (i.kind == IssueKind::MissingArtifact) return true;
  }
  return false;
}

inline IssueKind issue_kind_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IoError:
    case ErrorKind::FileNotFound: return IssueKind::MissingArtifact;
    case ErrorKind::MalformedSignature: return IssueKind::MalformedSignature;
    case ErrorKind::DuplicateWidgetId: return IssueKind::DuplicateWidgetId;
    case ErrorKind::UnknownEndpoint: return IssueKind::UnknownEndpoint;
    case ErrorKind::DuplicateEdge: return IssueKind::DuplicateEdge;
    default: return IssueKind::SchemaError;
  }
}

// Warnings that need both artifacts: handlers absent from the call graph
// (platform-attached) and handlers categorized outside application code.
inline std::vector<ValidationIssue> handler_issues(const GuiModel& gui, const CallGraph& graph,
                                                   const ClassificationRules& rules) {
  std::vector<ValidationIssue> issues;
  std::set<MethodSig> reported;
  for (const auto& win : gui.windows) {
    for_each_widget(win.root, [&](const Widget& w) {
      for (const auto& h : w.handlers) {
        if (!reported.insert(h).second) continue;
        if (!graph.contains(h)) {
          issues.push_back({Severity::Warning, IssueKind::DanglingHandler,
                            h.text() + " (widget '" + w.id + "') is not in the call graph"});
        } else if (const auto cat = categorize(h, rules); cat != Category::Application) {
          issues.push_back({Severity::Warning, IssueKind::NonApplicationHandler,
                            h.text() + " (widget '" + w.id + "') is categorized " +
                                std::string(to_string(cat))});
        }
      }
    });
  }
  return issues;
}

inline std::vector<ValidationIssue> validate_project(const Project& project) {
  std::vector<ValidationIssue> issues;
  auto capture = [&](const std::filesystem::path& path, const char* what, auto&& load) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      issues.push_back({Severity::Error, IssueKind::MissingArtifact,
                        std::string(what) + " not found: " + path.string()});
      return false;
    }
    try {
      load();
      return true;
    } catch (const Error& e) {
      issues.push_back({Severity::Error, issue_kind_for(e.kind()),
                        std::string(what) + " " + path.string() + ": " + e.what()});
    }
    return false;
  };

  GuiModel gui;
  CallGraph graph;
  ClassificationRules rules;
  const bool gui_ok = capture(project.gui_model_path, "GUI model",
                              [&] { gui = load_gui_model(project.gui_model_path); });
  const bool graph_ok = capture(project.call_graph_path, "call graph",
                                [&] { graph = load_call_graph(project.call_graph_path); });
  bool rules_ok = true;
  if (project.rules_path) {
    rules_ok = capture(*project.rules_path, "rules file",
                       [&] { rules = load_rules(*project.rules_path); });
  }
  if (project.source_root) {
    std::error_code ec;
    if (!std::filesystem::is_directory(*project.source_root, ec)) {
      issues.push_back({Severity::Warning, IssueKind::MissingSourceRoot,
                        "source root not found: " + project.source_root->string()});
    }
  }
  if (gui_ok && graph_ok && rules_ok) {
    auto more = handler_issues(gui, graph, rules);
    issues.insert(issues.end(), more.begin(), more.end());
  }
  if (gui_ok && rules_ok) {
    for (const auto& [window, ids] : ambiguous_match_keys(gui, rules.match_properties)) {
      std::string joined;
      for (const auto& id : ids) joined += (joined.empty() ? "" : ", ") + id;
      issues.push_back({Severity::Warning, IssueKind::AmbiguousMatchKey,
                        "window '" + window + "': widgets {" + joined +
                            "} share a match key and pair by preorder position"});
    }
  }
  return issues;
}

}  // namespace evotrack
