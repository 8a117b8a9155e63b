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

// Union diff of two versions of a handler slice, and propagation of handler
// changes onto the merged GUI tree.

#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "evotrack/gui_match.hpp"
#include "evotrack/slicer.hpp"

namespace evotrack {

enum class DiffNodeStatus { Added, Removed, Changed, Unchanged };
enum class DiffEdgeStatus { Added, Removed, Unchanged };

inline std::string_view to_string(DiffNodeStatus s) {
  switch (s) {
    case DiffNodeStatus::Added: return "added";
    case DiffNodeStatus::Removed: return "removed";
    case DiffNodeStatus::Changed: return "changed";
    case DiffNodeStatus::Unchanged: return "unchanged";
  }
  return "unchanged";
}

inline std::string_view to_string(DiffEdgeStatus s) {
  switch (s) {
    case DiffEdgeStatus::Added: return "added";
    case DiffEdgeStatus::Removed: return "removed";
    case DiffEdgeStatus::Unchanged: return "unchanged";
  }
  return "unchanged";
}

inline DiffNodeStatus parse_node_status(std::string_view s) {
  if (s == "added") return DiffNodeStatus::Added;
  if (s == "removed") return DiffNodeStatus::Removed;
  if (s == "changed") return DiffNodeStatus::Changed;
  if (s == "unchanged") return DiffNodeStatus::Unchanged;
  throw Error(ErrorKind::SchemaError, "unknown node status '" + std::string(s) + "'");
}

inline DiffEdgeStatus parse_edge_status(std::string_view s) {
  if (s == "added") return DiffEdgeStatus::Added;
  if (s == "removed") return DiffEdgeStatus::Removed;
  if (s == "unchanged") return DiffEdgeStatus::Unchanged;
  throw Error(ErrorKind::SchemaError, "unknown edge status '" + std::string(s) + "'");
}

// Node keys are signature texts or the abstraction labels "Framework" and
// "Library"; signatures always contain '#', labels never do.
using NodeKey = std::string;
using EdgeKey = std::pair<NodeKey, NodeKey>;

inline bool is_abstraction_key(const NodeKey& key) { return key.find('#') == std::string::npos; }

struct SliceDiff {
  MethodSig root;
  std::map<NodeKey, DiffNodeStatus> nodes;
  std::map<EdgeKey, DiffEdgeStatus> edges;

  friend bool operator==(const SliceDiff&, const SliceDiff&) = default;
};

using FingerprintMap = std::map<MethodSig, std::string>;

inline FingerprintMap fingerprints_of(const CallGraph& graph) {
  FingerprintMap out;
  for (const auto& rec : graph.methods()) out.emplace(rec.sig, rec.fingerprint);
  return out;
}

namespace detail {

inline std::set<NodeKey> slice_node_keys(const HandlerSlice& s) {
  std::set<NodeKey> keys;
  for (const auto& n : s.app_nodes) keys.insert(n.text());
  for (const auto& [from, cat] : s.abstraction_edges) keys.emplace(category_label(cat));
  return keys;
}

inline std::set<EdgeKey> slice_edge_keys(const HandlerSlice& s) {
  std::set<EdgeKey> keys;
  for (const auto& [from, to] : s.app_edges) keys.emplace(from.text(), to.text());
  for (const auto& [from, cat] : s.abstraction_edges) {
    keys.emplace(from.text(), std::string(category_label(cat)));
  }
  return keys;
}

inline std::optional<std::string> lookup_fp(const FingerprintMap& fps, const NodeKey& key) {
  if (is_abstraction_key(key)) return std::nullopt;
  auto it = fps.find(canonical_sig(key));
  return it == fps.end() ? std::nullopt : std::optional<std::string>(it->second);
}

}  // namespace detail

inline SliceDiff diff_slices(const HandlerSlice& old_slice, const HandlerSlice& new_slice,
                             const FingerprintMap& old_fp, const FingerprintMap& new_fp) {
  if (old_slice.root != new_slice.root) {
    throw Error(ErrorKind::RootMismatch,
                old_slice.root.text() + " vs " + new_slice.root.text());
  }
  SliceDiff out;
  out.root = new_slice.root;

  const auto old_nodes = detail::slice_node_keys(old_slice);
  const auto new_nodes = detail::slice_node_keys(new_slice);
  for (const auto& key : old_nodes) {
    out.nodes[key] = new_nodes.count(key) ? DiffNodeStatus::Unchanged : DiffNodeStatus::Removed;
  }
  for (const auto& key : new_nodes) {
    auto [it, inserted] = out.nodes.try_emplace(key, DiffNodeStatus::Added);
    if (!inserted && !is_abstraction_key(key) &&
        detail::lookup_fp(old_fp, key) != detail::lookup_fp(new_fp, key)) {
      it->second = DiffNodeStatus::Changed;
    }
  }

  const auto old_edges = detail::slice_edge_keys(old_slice);
  const auto new_edges = detail::slice_edge_keys(new_slice);
  for (const auto& e : old_edges) {
    out.edges[e] = new_edges.count(e) ? DiffEdgeStatus::Unchanged : DiffEdgeStatus::Removed;
  }
  for (const auto& e : new_edges) out.edges.try_emplace(e, DiffEdgeStatus::Added);
  return out;
}

enum class Side { Old, New };

inline SliceDiff unmatched_handler_diff(const HandlerSlice& s, Side side) {
  const auto node_status = side == Side::Old ? DiffNodeStatus::Removed : DiffNodeStatus::Added;
  const auto edge_status = side == Side::Old ? DiffEdgeStatus::Removed : DiffEdgeStatus::Added;
  SliceDiff out;
  out.root = s.root;
  for (const auto& key : detail::slice_node_keys(s)) out.nodes.emplace(key, node_status);
  for (const auto& e : detail::slice_edge_keys(s)) out.edges.emplace(e, edge_status);
  return out;
}

inline bool has_changes(const SliceDiff& d) {
  for (const auto& [k, s] : d.nodes) {
    if (s != DiffNodeStatus::Unchanged) return true;
  }
  for (const auto& [k, s] : d.edges) {
    if (s != DiffEdgeStatus::Unchanged) return true;
  }
  return false;
}

// Keyed by (merged widget id, handler signature).
using HandlerDiffKey = std::pair<std::string, MethodSig>;
using HandlerDiffMap = std::map<HandlerDiffKey, SliceDiff>;

// (widget, handler) pairs in `untracked` are platform-attached on both sides:
// they have no slice, need no diff and do not affect status.
inline MergedGuiTree propagate_to_widgets(MergedGuiTree tree, const HandlerDiffMap& diffs,
                                          const std::set<HandlerDiffKey>& untracked = {}) {
  for_each_merged(tree, [&](MergedWindow&, MergedNode& node, const std::vector<int>&) {
    if (!node.matched()) return;
    bool changed = false;
    for (const auto& h : node.handlers) {
      if (untracked.count({node.merged_id, h})) continue;
      auto it = diffs.find({node.merged_id, h});
      if (it == diffs.end()) {
        throw Error(ErrorKind::MissingDiff, "widget " + node.merged_id + " handler " + h.text());
      }
      changed = changed || has_changes(it->second);
    }
    node.status = changed ? WidgetStatus::HandlerChanged : WidgetStatus::Unchanged;
  });
  return tree;
}

}  // namespace evotrack
