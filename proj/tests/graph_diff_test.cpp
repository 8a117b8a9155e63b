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

#include "evotrack/graph_diff.hpp"

#include <gtest/gtest.h>

#include "evotrack/slicer.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace evotrack {
namespace {

MethodSig sig(const std::string& s) { return canonical_sig(s); }

const std::string kA = "app.A#a():void";
const std::string kB = "app.B#b():void";
const std::string kC = "app.C#c():void";
const std::string kLib = "org.lib.L#l():void";

// Small hand-built call graph: A -> B, B -> C, B -> lib.
CategorizedCallGraph hand_graph(bool with_bc, const std::string& fp_b = "00000000000000bb") {
  std::vector<MethodRecord> ms{{sig(kA), "00000000000000aa", std::nullopt},
                               {sig(kB), fp_b, std::nullopt},
                               {sig(kC), "00000000000000cc", std::nullopt},
                               {sig(kLib), "00000000000000dd", std::nullopt}};
  std::vector<Edge> es{{sig(kA), sig(kB)}, {sig(kB), sig(kLib)}};
  if (with_bc) es.emplace_back(sig(kB), sig(kC));
  return annotate_graph(CallGraph(ms, es), testing::generator_rules());
}

SliceDiff diff_of(const CategorizedCallGraph& a, const CategorizedCallGraph& b) {
  return diff_slices(slice(a, sig(kA)), slice(b, sig(kA)), fingerprints_of(a.graph), fingerprints_of(b.graph));
}

TEST(DiffSlices, IdenticalIsAllUnchanged) {
  const auto g = hand_graph(true);
  const auto d = diff_of(g, g);
  EXPECT_EQ(d.nodes.size(), 4u);
  EXPECT_EQ(d.edges.size(), 3u);
  for (const auto& [k, s] : d.nodes) EXPECT_EQ(s, DiffNodeStatus::Unchanged) << k;
  for (const auto& [k, s] : d.edges) EXPECT_EQ(s, DiffEdgeStatus::Unchanged);
  EXPECT_FALSE(has_changes(d));
}

TEST(DiffSlices, EdgeOnlyInOldIsRemoved) {
  const auto d = diff_of(hand_graph(true), hand_graph(false));
  EXPECT_EQ(d.edges.at({kB, kC}), DiffEdgeStatus::Removed);
  EXPECT_EQ(d.nodes.at(kC), DiffNodeStatus::Removed);
  EXPECT_EQ(d.nodes.at(kB), DiffNodeStatus::Unchanged);
  EXPECT_EQ(d.edges.at({kB, "Library"}), DiffEdgeStatus::Unchanged);
  EXPECT_EQ(d.nodes.at("Library"), DiffNodeStatus::Unchanged);
}

TEST(DiffSlices, FingerprintChangeIsChanged) {
  const auto d = diff_of(hand_graph(true), hand_graph(true, "00000000000000ff"));
  EXPECT_EQ(d.nodes.at(kB), DiffNodeStatus::Changed);
  EXPECT_EQ(d.nodes.at(kA), DiffNodeStatus::Unchanged);
  EXPECT_TRUE(has_changes(d));
}

TEST(DiffSlices, EdgeSetChangeDoesNotMarkNodeChanged) {
  const auto d = diff_of(hand_graph(false), hand_graph(true));
  EXPECT_EQ(d.nodes.at(kB), DiffNodeStatus::Unchanged);
  EXPECT_EQ(d.nodes.at(kC), DiffNodeStatus::Added);
  EXPECT_EQ(d.edges.at({kB, kC}), DiffEdgeStatus::Added);
}

TEST(DiffSlices, RootMismatch) {
  const auto g = hand_graph(true);
  try {
    diff_slices(slice(g, sig(kA)), slice(g, sig(kB)), fingerprints_of(g.graph), fingerprints_of(g.graph));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RootMismatch);
  }
}

TEST(UnmatchedHandlerDiff, NewSideAllAdded) {
  const auto d = unmatched_handler_diff(slice(hand_graph(true), sig(kA)), Side::New);
  EXPECT_EQ(d.nodes.size(), 4u);
  for (const auto& [k, s] : d.nodes) EXPECT_EQ(s, DiffNodeStatus::Added);
  for (const auto& [k, s] : d.edges) EXPECT_EQ(s, DiffEdgeStatus::Added);
  EXPECT_EQ(d.nodes.at("Library"), DiffNodeStatus::Added);
  EXPECT_EQ(d.edges.at({kB, "Library"}), DiffEdgeStatus::Added);
}

TEST(UnmatchedHandlerDiff, LoneRootOldSide) {
  const auto d = unmatched_handler_diff(slice(hand_graph(true), sig(kC)), Side::Old);
  ASSERT_EQ(d.nodes.size(), 1u);
  EXPECT_EQ(d.nodes.at(kC), DiffNodeStatus::Removed);
  EXPECT_TRUE(d.edges.empty());
}

TEST(HasChanges, EdgeAloneSuffices) {
  SliceDiff d;
  d.root = sig(kA);
  d.nodes = {{kA, DiffNodeStatus::Unchanged}, {kB, DiffNodeStatus::Unchanged}};
  EXPECT_FALSE(has_changes(d));
  d.edges[{kA, kB}] = DiffEdgeStatus::Added;
  EXPECT_TRUE(has_changes(d));
  d.edges[{kA, kB}] = DiffEdgeStatus::Unchanged;
  d.nodes[kB] = DiffNodeStatus::Changed;
  EXPECT_TRUE(has_changes(d));
}

// --- propagation -------------------------------------------------------------

MergedGuiTree tree_with(WidgetStatus root_status, std::vector<MethodSig> handlers) {
  MergedNode n;
  n.merged_id = "w1";
  n.status = root_status;
  if (root_status != WidgetStatus::Added) n.old_id = "r";
  if (root_status != WidgetStatus::Removed) n.new_id = "r";
  n.widget_class = "javax.swing.JButton";
  n.handlers = std::move(handlers);
  MergedGuiTree t;
  t.windows.push_back({"Main", "app.Main", n});
  return t;
}

SliceDiff unchanged_diff(const std::string& root) {
  SliceDiff d;
  d.root = sig(root);
  d.nodes[root] = DiffNodeStatus::Unchanged;
  return d;
}

TEST(Propagate, AllUnchangedStaysUnchanged) {
  const auto t = propagate_to_widgets(tree_with(WidgetStatus::Unchanged, {sig(kA)}), {{{"w1", sig(kA)}, unchanged_diff(kA)}});
  EXPECT_EQ(t.windows[0].root.status, WidgetStatus::Unchanged);
}

TEST(Propagate, OneChangedHandlerSuffices) {
  auto changed = unchanged_diff(kB);
  changed.nodes[kB] = DiffNodeStatus::Changed;
  const auto t = propagate_to_widgets(tree_with(WidgetStatus::Unchanged, {sig(kA), sig(kB)}),
                                      {{{"w1", sig(kA)}, unchanged_diff(kA)}, {{"w1", sig(kB)}, changed}});
  EXPECT_EQ(t.windows[0].root.status, WidgetStatus::HandlerChanged);
}

TEST(Propagate, RemovedTakesPrecedence) {
  auto changed = unchanged_diff(kA);
  changed.nodes[kA] = DiffNodeStatus::Removed;
  const auto t = propagate_to_widgets(tree_with(WidgetStatus::Removed, {sig(kA)}), {{{"w1", sig(kA)}, changed}});
  EXPECT_EQ(t.windows[0].root.status, WidgetStatus::Removed);
  const auto t2 = propagate_to_widgets(tree_with(WidgetStatus::Added, {sig(kA)}), {});
  EXPECT_EQ(t2.windows[0].root.status, WidgetStatus::Added);
}

TEST(Propagate, MissingDiff) {
  try {
    propagate_to_widgets(tree_with(WidgetStatus::Unchanged, {sig(kA)}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingDiff);
  }
}

TEST(Propagate, UntrackedHandlerNeedsNoDiff) {
  const auto t = propagate_to_widgets(tree_with(WidgetStatus::Unchanged, {sig(kA)}), {}, {{"w1", sig(kA)}});
  EXPECT_EQ(t.windows[0].root.status, WidgetStatus::Unchanged);
}

TEST(Propagate, Idempotent) {
  auto changed = unchanged_diff(kA);
  changed.edges[{kA, kA}] = DiffEdgeStatus::Removed;
  for (const auto& diff : {unchanged_diff(kA), changed}) {
    for (auto status : {WidgetStatus::Unchanged, WidgetStatus::HandlerChanged, WidgetStatus::Removed}) {
      const HandlerDiffMap m{{{"w1", sig(kA)}, diff}};
      const auto once = propagate_to_widgets(tree_with(status, {sig(kA)}), m);
      const auto twice = propagate_to_widgets(once, m);
      EXPECT_EQ(once.windows[0].root.status, twice.windows[0].root.status);
    }
  }
}

// --- algebraic laws on random slice pairs ------------------------------------

struct Pair {
  testing::RandomGraph old_g, new_g;
  CategorizedCallGraph old_c, new_c;
  HandlerSlice old_s, new_s;
};

Pair random_pair(testing::Rng& rng) {
  auto a = testing::random_graph(rng, 40, 120);
  auto b = testing::mutate_graph(rng, a);
  Pair p{a, b, a.categorized(), b.categorized(), {}, {}};
  const auto root = canonical_sig(a.names[0]);
  p.old_s = slice(p.old_c, root);
  p.new_s = slice(p.new_c, root);
  return p;
}

std::set<std::string> oracle_nodes(const testing::SliceOracleResult& r) {
  std::set<std::string> out(r.app_nodes);
  for (const auto& [from, label] : r.abstraction_edges) out.insert(label);
  return out;
}

std::set<EdgeKey> oracle_edges(const testing::SliceOracleResult& r) {
  std::set<EdgeKey> out(r.app_edges.begin(), r.app_edges.end());
  out.insert(r.abstraction_edges.begin(), r.abstraction_edges.end());
  return out;
}

DiffNodeStatus flip(DiffNodeStatus s) {
  if (s == DiffNodeStatus::Added) return DiffNodeStatus::Removed;
  if (s == DiffNodeStatus::Removed) return DiffNodeStatus::Added;
  return s;
}

DiffEdgeStatus flip(DiffEdgeStatus s) {
  if (s == DiffEdgeStatus::Added) return DiffEdgeStatus::Removed;
  if (s == DiffEdgeStatus::Removed) return DiffEdgeStatus::Added;
  return s;
}

TEST(DiffLaws, AntisymmetryIdentityUnion) {
  testing::Rng rng(61);
  for (int iter = 0; iter < 300; ++iter) {
    const auto p = random_pair(rng);
    const auto ofp = fingerprints_of(p.old_c.graph), nfp = fingerprints_of(p.new_c.graph);
    const auto fwd = diff_slices(p.old_s, p.new_s, ofp, nfp);
    const auto back = diff_slices(p.new_s, p.old_s, nfp, ofp);

    ASSERT_EQ(fwd.nodes.size(), back.nodes.size());
    for (const auto& [k, s] : fwd.nodes) EXPECT_EQ(back.nodes.at(k), flip(s)) << k;
    ASSERT_EQ(fwd.edges.size(), back.edges.size());
    for (const auto& [k, s] : fwd.edges) EXPECT_EQ(back.edges.at(k), flip(s));

    EXPECT_FALSE(has_changes(diff_slices(p.old_s, p.old_s, ofp, ofp)));

    const auto o = testing::slice_oracle(p.old_g.names, p.old_g.edges, p.old_g.labels(), 0);
    const auto n = testing::slice_oracle(p.new_g.names, p.new_g.edges, p.new_g.labels(), 0);
    std::set<std::string> union_nodes = oracle_nodes(o);
    const auto nn = oracle_nodes(n);
    union_nodes.insert(nn.begin(), nn.end());
    std::set<EdgeKey> union_edges = oracle_edges(o);
    const auto ne = oracle_edges(n);
    union_edges.insert(ne.begin(), ne.end());

    std::set<std::string> got_nodes;
    for (const auto& [k, s] : fwd.nodes) got_nodes.insert(k);
    std::set<EdgeKey> got_edges;
    for (const auto& [k, s] : fwd.edges) got_edges.insert(k);
    EXPECT_EQ(got_nodes, union_nodes);
    EXPECT_EQ(got_edges, union_edges);

    // Membership rule per edge, and edge endpoints exist as nodes.
    for (const auto& [e, s] : fwd.edges) {
      const bool in_old = oracle_edges(o).count(e) > 0, in_new = ne.count(e) > 0;
      EXPECT_EQ(s, in_old && in_new ? DiffEdgeStatus::Unchanged
                   : in_new         ? DiffEdgeStatus::Added
                                    : DiffEdgeStatus::Removed);
      EXPECT_TRUE(fwd.nodes.count(e.first) && fwd.nodes.count(e.second));
    }
    // Changed only for methods on both sides with differing fingerprints.
    for (const auto& [k, s] : fwd.nodes) {
      if (s != DiffNodeStatus::Changed) continue;
      EXPECT_FALSE(is_abstraction_key(k));
      EXPECT_NE(ofp.at(canonical_sig(k)), nfp.at(canonical_sig(k)));
    }
  }
}

TEST(DiffLaws, UnmatchedIsDiffAgainstNothing) {
  testing::Rng rng(67);
  for (int iter = 0; iter < 50; ++iter) {
    const auto p = random_pair(rng);
    const auto d = unmatched_handler_diff(p.new_s, Side::New);
    const auto o = testing::slice_oracle(p.new_g.names, p.new_g.edges, p.new_g.labels(), 0);
    std::set<std::string> keys;
    for (const auto& [k, s] : d.nodes) {
      keys.insert(k);
      EXPECT_EQ(s, DiffNodeStatus::Added);
    }
    EXPECT_EQ(keys, oracle_nodes(o));
    EXPECT_EQ(d.edges.size(), oracle_edges(o).size());
  }
}

}  // namespace
}  // namespace evotrack
