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

// Graphviz rendering of slices, slice diffs and condensed diffs.

#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "evotrack/condense.hpp"
#include "evotrack/digest.hpp"
#include "evotrack/graph_diff.hpp"
#include "evotrack/slicer.hpp"

namespace evotrack {

inline std::string_view dot_color(DiffNodeStatus s) {
  switch (s) {
    case DiffNodeStatus::Removed: return "red";
    case DiffNodeStatus::Added: return "blue";
    case DiffNodeStatus::Changed: return "green";
    case DiffNodeStatus::Unchanged: return "gray";
  }
  return "gray";
}

inline std::string_view dot_color(DiffEdgeStatus s) {
  switch (s) {
    case DiffEdgeStatus::Removed: return "red";
    case DiffEdgeStatus::Added: return "blue";
    case DiffEdgeStatus::Unchanged: return "gray";
  }
  return "gray";
}

inline std::string dot_node_id(std::string_view key) { return "n" + fnv1a64_hex(key); }

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace detail {

struct DotNode {
  std::string label;
  std::string shape;  // empty for the default ellipse
  std::string color;  // empty for no color attribute
};

struct DotEdge {
  std::string from;
  std::string to;
  std::string color;
};

// Nodes and edges are emitted sorted by key.
inline std::string render_dot(const std::string& name, const std::map<std::string, DotNode>& nodes,
                              std::vector<DotEdge> edges) {
  std::sort(edges.begin(), edges.end(), [](const DotEdge& a, const DotEdge& b) {
    return std::tie(a.from, a.to, a.color) < std::tie(b.from, b.to, b.color);
  });
  std::ostringstream out;
  out << "digraph " << dot_quote(name) << " {\n";
  for (const auto& [key, node] : nodes) {
    out << "  " << dot_quote(dot_node_id(key)) << " [label=" << dot_quote(node.label);
    if (!node.shape.empty()) out << ", shape=" << dot_quote(node.shape);
    if (!node.color.empty()) out << ", color=" << dot_quote(node.color);
    out << "];\n";
  }
  for (const auto& e : edges) {
    out << "  " << dot_quote(dot_node_id(e.from)) << " -> " << dot_quote(dot_node_id(e.to));
    if (!e.color.empty()) out << " [color=" << dot_quote(e.color) << "]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

inline DotNode diff_node(const NodeKey& key, DiffNodeStatus status) {
  return {key, is_abstraction_key(key) ? "box" : "", std::string(dot_color(status))};
}

}  // namespace detail

inline std::string export_dot(const HandlerSlice& s) {
  std::map<std::string, detail::DotNode> nodes;
  std::vector<detail::DotEdge> edges;
  for (const auto& n : s.app_nodes) nodes.emplace(n.text(), detail::DotNode{n.text(), "", ""});
  for (const auto& [from, to] : s.app_edges) edges.push_back({from.text(), to.text(), ""});
  for (const auto& [from, cat] : s.abstraction_edges) {
    const std::string label(category_label(cat));
    nodes.emplace(label, detail::DotNode{label, "box", ""});
    edges.push_back({from.text(), label, ""});
  }
  return detail::render_dot(s.root.text(), nodes, std::move(edges));
}

inline std::string export_dot(const SliceDiff& d) {
  std::map<std::string, detail::DotNode> nodes;
  std::vector<detail::DotEdge> edges;
  for (const auto& [key, status] : d.nodes) nodes.emplace(key, detail::diff_node(key, status));
  for (const auto& [e, status] : d.edges) {
    edges.push_back({e.first, e.second, std::string(dot_color(status))});
  }
  return detail::render_dot(d.root.text(), nodes, std::move(edges));
}

// Quotient edges carrying several statuses become one line per status.
inline std::string export_dot(const CondensedGraph& c) {
  std::map<std::string, detail::DotNode> nodes;
  std::vector<detail::DotEdge> edges;
  for (const auto& [key, status] : c.visible_nodes) nodes.emplace(key, detail::diff_node(key, status));
  for (const auto& sn : c.super_nodes) {
    nodes.emplace(sn.id, detail::DotNode{sn.label, "box3d", std::string(dot_color(DiffNodeStatus::Unchanged))});
  }
  for (const auto& [e, statuses] : c.edges) {
    for (auto s : statuses) edges.push_back({e.first, e.second, std::string(dot_color(s))});
  }
  return detail::render_dot(c.root.text(), nodes, std::move(edges));
}

}  // namespace evotrack
