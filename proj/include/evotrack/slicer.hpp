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

#include <deque>
#include <set>
#include <utility>
#include <vector>

#include "evotrack/classify.hpp"

namespace evotrack {

// The part of the call graph shown for one event handler: application methods
// reachable from it, and one abstraction edge per (caller, category) for
// calls leaving application code.
struct HandlerSlice {
  MethodSig root;
  std::set<MethodSig> app_nodes;
  std::set<Edge> app_edges;
  std::set<std::pair<MethodSig, Category>> abstraction_edges;
  // Discovery order of app_nodes (breadth first, callees lexicographic).
  std::vector<MethodSig> visit_order;

  friend bool operator==(const HandlerSlice& a, const HandlerSlice& b) {
    return a.root == b.root && a.app_nodes == b.app_nodes && a.app_edges == b.app_edges &&
           a.abstraction_edges == b.abstraction_edges;
  }
};

inline HandlerSlice slice(const CategorizedCallGraph& cg, const MethodSig& handler) {
  if (!cg.graph.contains(handler)) {
    throw Error(ErrorKind::MissingHandler, handler.text() + " is not in the call graph");
  }
  if (cg.category(handler) != Category::Application) {
    throw Error(ErrorKind::HandlerNotApplication,
                handler.text() + " is categorized " + std::string(to_string(cg.category(handler))));
  }

  HandlerSlice out;
  out.root = handler;
  out.app_nodes.insert(handler);
  out.visit_order.push_back(handler);
  std::deque<MethodSig> queue{handler};
  while (!queue.empty()) {
    const MethodSig caller = std::move(queue.front());
    queue.pop_front();
    for (auto& callee : cg.graph.callees(caller)) {
      const Category cat = cg.category(callee);
      if (cat != Category::Application) {
        out.abstraction_edges.emplace(caller, cat);
        continue;
      }
      out.app_edges.emplace(caller, callee);
      if (out.app_nodes.insert(callee).second) {
        out.visit_order.push_back(callee);
        queue.push_back(std::move(callee));
      }
    }
  }
  return out;
}

}  // namespace evotrack
