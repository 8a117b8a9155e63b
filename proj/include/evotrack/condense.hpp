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

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "evotrack/graph_diff.hpp"

namespace evotrack {

struct SuperNode {
  std::string id;
  std::set<MethodSig> members;
  std::string label;
  // Statuses of the edges running between two members; these are folded into
  // the super node rather than drawn as a self-loop.
  std::set<DiffEdgeStatus> internal_edge_statuses;

  friend bool operator==(const SuperNode&, const SuperNode&) = default;
};

struct CondensedGraph {
  MethodSig root;
  std::map<NodeKey, DiffNodeStatus> visible_nodes;
  std::vector<SuperNode> super_nodes;
  std::map<EdgeKey, std::set<DiffEdgeStatus>> edges;

  friend bool operator==(const CondensedGraph&, const CondensedGraph&) = default;
};

namespace detail {

inline bool collapsible(const SliceDiff& d, const NodeKey& key, DiffNodeStatus status) {
  return status == DiffNodeStatus::Unchanged && !is_abstraction_key(key) && key != d.root.text();
}

// Node key -> group key (super node id, or the node key itself).
inline std::map<NodeKey, std::string> group_map(const CondensedGraph& c) {
  std::map<NodeKey, std::string> out;
  for (const auto& [key, status] : c.visible_nodes) out.emplace(key, key);
  for (const auto& sn : c.super_nodes) {
    for (const auto& m : sn.members) out.emplace(m.text(), sn.id);
  }
  return out;
}

inline void quotient_edges(const SliceDiff& d, const std::map<NodeKey, std::string>& group,
                           const std::set<std::string>& super_ids,
                           std::map<EdgeKey, std::set<DiffEdgeStatus>>& edges,
                           std::map<std::string, std::set<DiffEdgeStatus>>& internal) {
  for (const auto& [e, status] : d.edges) {
    const auto& gu = group.at(e.first);
    const auto& gv = group.at(e.second);
    if (gu == gv && super_ids.count(gu)) {
      internal[gu].insert(status);
    } else {
      edges[{gu, gv}].insert(status);
    }
  }
}

}  // namespace detail

// Groups weakly connected components of unchanged, non-root, non-abstraction
// nodes into super nodes U1..Un, numbered by smallest member signature.
inline CondensedGraph collapse_unchanged(const SliceDiff& d) {
  std::vector<NodeKey> candidates;
  for (const auto& [key, status] : d.nodes) {
    if (detail::collapsible(d, key, status)) candidates.push_back(key);
  }
  // candidates is sorted because d.nodes is.
  auto index_of = [&](const NodeKey& key) -> std::ptrdiff_t {
    auto it = std::lower_bound(candidates.begin(), candidates.end(), key);
    return it != candidates.end() && *it == key ? it - candidates.begin() : -1;
  };
  std::vector<std::size_t> parent(candidates.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [e, status] : d.edges) {
    const auto u = index_of(e.first);
    const auto v = index_of(e.second);
    if (u < 0 || v < 0) continue;
    const auto ru = find(static_cast<std::size_t>(u));
    const auto rv = find(static_cast<std::size_t>(v));
    // Smaller index as representative keeps the component's first member
    // (its smallest signature) at the root.
    if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
  }

  std::map<std::size_t, std::set<MethodSig>> components;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    components[find(i)].insert(canonical_sig(candidates[i]));
  }

  CondensedGraph out;
  out.root = d.root;
  for (const auto& [key, status] : d.nodes) {
    if (!detail::collapsible(d, key, status)) out.visible_nodes.emplace(key, status);
  }
  std::set<std::string> super_ids;
  for (auto& [rep, members] : components) {
    SuperNode sn;
    sn.id = "U" + std::to_string(out.super_nodes.size() + 1);
    sn.label = std::to_string(members.size()) + " unchanged methods";
    sn.members = std::move(members);
    super_ids.insert(sn.id);
    out.super_nodes.push_back(std::move(sn));
  }

  std::map<std::string, std::set<DiffEdgeStatus>> internal;
  detail::quotient_edges(d, detail::group_map(out), super_ids, out.edges, internal);
  for (auto& sn : out.super_nodes) sn.internal_edge_statuses = std::move(internal[sn.id]);
  return out;
}

// Inverse of collapse_unchanged: redistributes the condensed groups back onto
// the source diff's nodes and edges, after checking `c` really came from it.
inline SliceDiff expand(const CondensedGraph& c, const SliceDiff& source) {
  auto foreign = [](const std::string& why) {
    throw Error(ErrorKind::ForeignCondensation, why);
  };
  if (c.root != source.root) foreign("root differs");

  SliceDiff out;
  out.root = c.root;
  std::set<std::string> super_ids;
  for (const auto& [key, status] : c.visible_nodes) {
    auto it = source.nodes.find(key);
    if (it == source.nodes.end() || it->second != status) foreign("visible node " + key);
    out.nodes.emplace(key, status);
  }
  for (const auto& sn : c.super_nodes) {
    if (!super_ids.insert(sn.id).second) foreign("duplicate super node " + sn.id);
    for (const auto& m : sn.members) {
      auto it = source.nodes.find(m.text());
      if (it == source.nodes.end() || !detail::collapsible(source, m.text(), it->second)) {
        foreign("member " + m.text() + " is not an unchanged method of the source");
      }
      if (!out.nodes.emplace(m.text(), DiffNodeStatus::Unchanged).second) {
        foreign("node " + m.text() + " appears twice");
      }
    }
  }
  if (out.nodes.size() != source.nodes.size()) foreign("node sets differ");

  std::map<EdgeKey, std::set<DiffEdgeStatus>> edges;
  std::map<std::string, std::set<DiffEdgeStatus>> internal;
  detail::quotient_edges(source, detail::group_map(c), super_ids, edges, internal);
  if (edges != c.edges) foreign("quotient edges differ");
  for (const auto& sn : c.super_nodes) {
    if (internal[sn.id] != sn.internal_edge_statuses) foreign("internal edges of " + sn.id);
  }

  // Every source edge maps into a verified group pair; carry it back.
  out.edges = source.edges;
  return out;
}

}  // namespace evotrack
