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

// Comparison and exploration bundles, the regression-focus report, and their
// JSON / text encodings.

#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "evotrack/condense.hpp"
#include "evotrack/graph_diff.hpp"
#include "evotrack/gui_match.hpp"
#include "evotrack/model.hpp"
#include "evotrack/textdiff.hpp"

namespace evotrack {

struct ReportCounts {
  int added = 0;
  int removed = 0;
  int handler_changed = 0;
  int unchanged = 0;

  int total() const { return added + removed + handler_changed + unchanged; }
  friend bool operator==(const ReportCounts&, const ReportCounts&) = default;
};

struct FocusEntry {
  std::string window;
  std::vector<int> path;
  WidgetStatus status = WidgetStatus::Unchanged;
  std::vector<MethodSig> handlers;

  friend bool operator==(const FocusEntry&, const FocusEntry&) = default;
};

struct RegressionReport {
  ReportCounts counts;
  std::vector<FocusEntry> focus_list;

  friend bool operator==(const RegressionReport&, const RegressionReport&) = default;
};

struct VersionLabels {
  std::string old_label;
  std::string new_label;
};

struct ComparisonBundle {
  VersionLabels versions;
  MergedGuiTree merged_tree;
  HandlerDiffMap handler_diffs;
  std::map<HandlerDiffKey, CondensedGraph> condensed;
  std::map<MethodSig, std::vector<DiffHunk>> source_diffs;
  RegressionReport report;
};

// Counts every merged node; focus entries are the non-unchanged ones in
// preorder. Added/removed widgets list all their handlers, handler-changed
// widgets only the handlers whose diff has changes.
inline RegressionReport build_report(const MergedGuiTree& tree, const HandlerDiffMap& diffs) {
  RegressionReport report;
  for_each_merged(tree, [&](const MergedWindow& win, const MergedNode& node,
                            const std::vector<int>& path) {
    switch (node.status) {
      case WidgetStatus::Added: ++report.counts.added; break;
      case WidgetStatus::Removed: ++report.counts.removed; break;
      case WidgetStatus::HandlerChanged: ++report.counts.handler_changed; break;
      case WidgetStatus::Unchanged: ++report.counts.unchanged; return;
    }
    FocusEntry entry{win.title, path, node.status, {}};
    for (const auto& h : node.handlers) {
      if (node.status != WidgetStatus::HandlerChanged) {
        entry.handlers.push_back(h);
      } else if (auto it = diffs.find({node.merged_id, h}); it != diffs.end() && has_changes(it->second)) {
        entry.handlers.push_back(h);
      }
    }
    report.focus_list.push_back(std::move(entry));
  });
  return report;
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const HandlerSlice& s) {
  json j;
  j["root"] = s.root.text();
  j["app_nodes"] = json::array();
  for (const auto& n : s.app_nodes) j["app_nodes"].push_back(n.text());
  j["app_edges"] = json::array();
  for (const auto& [a, b] : s.app_edges) j["app_edges"].push_back({a.text(), b.text()});
  j["abstraction_edges"] = json::array();
  for (const auto& [a, cat] : s.abstraction_edges) {
    j["abstraction_edges"].push_back({a.text(), std::string(category_label(cat))});
  }
  return j;
}

inline json to_json(const SliceDiff& d) {
  json j;
  j["root"] = d.root.text();
  j["nodes"] = json::object();
  for (const auto& [key, status] : d.nodes) j["nodes"][key] = to_string(status);
  j["edges"] = json::array();
  for (const auto& [e, status] : d.edges) {
    j["edges"].push_back({{"from", e.first}, {"to", e.second}, {"status", to_string(status)}});
  }
  return j;
}

inline SliceDiff slice_diff_from_json(const json& j) {
  SliceDiff d;
  d.root = canonical_sig(j.at("root").get<std::string>());
  for (const auto& [key, status] : j.at("nodes").items()) {
    d.nodes.emplace(key, parse_node_status(status.get<std::string>()));
  }
  for (const auto& e : j.at("edges")) {
    d.edges.emplace(EdgeKey{e.at("from").get<std::string>(), e.at("to").get<std::string>()},
                    parse_edge_status(e.at("status").get<std::string>()));
  }
  return d;
}

inline json to_json(const CondensedGraph& c) {
  json j;
  j["root"] = c.root.text();
  j["visible_nodes"] = json::object();
  for (const auto& [key, status] : c.visible_nodes) j["visible_nodes"][key] = to_string(status);
  j["super_nodes"] = json::array();
  for (const auto& sn : c.super_nodes) {
    json s{{"id", sn.id}, {"label", sn.label}};
    s["members"] = json::array();
    for (const auto& m : sn.members) s["members"].push_back(m.text());
    s["internal_edge_statuses"] = json::array();
    for (auto st : sn.internal_edge_statuses) s["internal_edge_statuses"].push_back(to_string(st));
    j["super_nodes"].push_back(std::move(s));
  }
  j["edges"] = json::array();
  for (const auto& [e, statuses] : c.edges) {
    json st = json::array();
    for (auto s : statuses) st.push_back(to_string(s));
    j["edges"].push_back({{"from", e.first}, {"to", e.second}, {"statuses", std::move(st)}});
  }
  return j;
}

inline json to_json(const MergedNode& node) {
  json j;
  j["merged_id"] = node.merged_id;
  j["status"] = to_string(node.status);
  if (node.old_id) j["old_id"] = *node.old_id;
  if (node.new_id) j["new_id"] = *node.new_id;
  j["widget_class"] = node.widget_class;
  j["properties"] = json::object();
  for (const auto& [k, v] : node.properties) j["properties"][k] = v;
  j["handlers"] = json::array();
  for (const auto& h : node.handlers) j["handlers"].push_back(h.text());
  if (node.screenshot) j["screenshot"] = *node.screenshot;
  j["children"] = json::array();
  for (const auto& c : node.children) j["children"].push_back(to_json(c));
  return j;
}

inline json to_json(const MergedGuiTree& tree) {
  json j;
  j["windows"] = json::array();
  for (const auto& w : tree.windows) {
    j["windows"].push_back(
        {{"title", w.title}, {"window_class", w.window_class}, {"root", to_json(w.root)}});
  }
  return j;
}

inline json to_json(const std::vector<DiffHunk>& hunks) {
  json j = json::array();
  for (const auto& h : hunks) j.push_back({{"op", to_string(h.op)}, {"lines", h.lines}});
  return j;
}

inline json to_json(const RegressionReport& r) {
  json j;
  j["counts"] = {{"added", r.counts.added},
                 {"removed", r.counts.removed},
                 {"handler_changed", r.counts.handler_changed},
                 {"unchanged", r.counts.unchanged}};
  j["focus_list"] = json::array();
  for (const auto& e : r.focus_list) {
    json handlers = json::array();
    for (const auto& h : e.handlers) handlers.push_back(h.text());
    j["focus_list"].push_back({{"window", e.window},
                               {"path", e.path},
                               {"status", to_string(e.status)},
                               {"handlers", std::move(handlers)}});
  }
  return j;
}

inline RegressionReport report_from_json(const json& j) {
  try {
    RegressionReport r;
    const auto& c = j.at("counts");
    r.counts = {c.at("added").get<int>(), c.at("removed").get<int>(),
                c.at("handler_changed").get<int>(), c.at("unchanged").get<int>()};
    for (const auto& e : j.at("focus_list")) {
      FocusEntry entry;
      entry.window = e.at("window").get<std::string>();
      entry.path = e.at("path").get<std::vector<int>>();
      entry.status = parse_widget_status(e.at("status").get<std::string>());
      for (const auto& h : e.at("handlers")) entry.handlers.push_back(canonical_sig(h.get<std::string>()));
      r.focus_list.push_back(std::move(entry));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("report: ") + e.what());
  }
}

// Stable file name of the DOT rendering for one handler diff.
inline std::string diff_dot_name(const HandlerDiffKey& key) {
  return "diff_" + key.first + "_" + fnv1a64_hex(key.second.text()) + ".dot";
}

inline std::string slice_dot_name(const MethodSig& handler) {
  return "slice_" + fnv1a64_hex(handler.text()) + ".dot";
}

inline json to_json(const ComparisonBundle& b) {
  json j;
  j["versions"] = {{"old_label", b.versions.old_label}, {"new_label", b.versions.new_label}};
  j["merged_tree"] = to_json(b.merged_tree);
  j["handler_diffs"] = json::array();
  for (const auto& [key, diff] : b.handler_diffs) {
    j["handler_diffs"].push_back({{"widget", key.first},
                                  {"handler", key.second.text()},
                                  {"dot", diff_dot_name(key)},
                                  {"diff", to_json(diff)}});
  }
  j["condensed"] = json::array();
  for (const auto& [key, graph] : b.condensed) {
    j["condensed"].push_back(
        {{"widget", key.first}, {"handler", key.second.text()}, {"graph", to_json(graph)}});
  }
  j["source_diffs"] = json::object();
  for (const auto& [sig, hunks] : b.source_diffs) j["source_diffs"][sig.text()] = to_json(hunks);
  j["report"] = to_json(b.report);
  return j;
}

// ---------------------------------------------------------------------------
// Text report

inline std::string path_string(const std::vector<int>& path) {
  if (path.empty()) return "/";
  std::string out;
  for (int i : path) out += "/" + std::to_string(i);
  return out;
}

inline std::string report_text(const RegressionReport& r, const VersionLabels& versions) {
  std::ostringstream out;
  out << "Regression focus: " << versions.old_label << " -> " << versions.new_label << "\n\n";
  out << "  added            " << r.counts.added << "\n";
  out << "  removed          " << r.counts.removed << "\n";
  out << "  handler_changed  " << r.counts.handler_changed << "\n";
  out << "  unchanged        " << r.counts.unchanged << "\n";
  out << "\nFocus list (" << r.focus_list.size() << "):\n";
  if (r.focus_list.empty()) out << "  (none)\n";
  for (const auto& e : r.focus_list) {
    out << "  " << to_string(e.status) << "  " << "\"" << e.window << "\" "
        << path_string(e.path) << "\n";
    for (const auto& h : e.handlers) out << "      " << h.text() << "\n";
  }
  return out.str();
}

}  // namespace evotrack
