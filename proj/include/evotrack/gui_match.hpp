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

// Matching of windows and widgets across two GUI model versions and the
// merged, status-annotated tree shown in comparison mode.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evotrack/digest.hpp"
#include "evotrack/model.hpp"

namespace evotrack {

enum class WidgetStatus { Added, Removed, HandlerChanged, Unchanged };

inline std::string_view to_string(WidgetStatus s) {
  switch (s) {
    case WidgetStatus::Added: return "added";
    case WidgetStatus::Removed: return "removed";
    case WidgetStatus::HandlerChanged: return "handler_changed";
    case WidgetStatus::Unchanged: return "unchanged";
  }
  return "unchanged";
}

inline WidgetStatus parse_widget_status(std::string_view s) {
  if (s == "added") return WidgetStatus::Added;
  if (s == "removed") return WidgetStatus::Removed;
  if (s == "handler_changed") return WidgetStatus::HandlerChanged;
  if (s == "unchanged") return WidgetStatus::Unchanged;
  throw Error(ErrorKind::SchemaError, "unknown widget status '" + std::string(s) + "'");
}

struct MatchKey {
  std::uint64_t digest = 0;

  std::string hex() const { return to_hex16(digest); }
  friend bool operator==(const MatchKey&, const MatchKey&) = default;
  friend auto operator<=>(const MatchKey&, const MatchKey&) = default;
};

// Digest of (class, key property values in the given order, sorted handlers).
// Every field is length-prefixed so distinct inputs never share an encoding.
inline MatchKey widget_key(const Widget& w, const std::vector<std::string>& key_props) {
  Fnv1a64 h;
  auto field = [&h](char tag, std::string_view value) {
    const std::string header = std::string(1, tag) + std::to_string(value.size()) + ":";
    h.update(header).update(value);
  };
  field('C', w.widget_class);
  for (const auto& name : key_props) {
    auto it = w.properties.find(name);
    if (it == w.properties.end()) {
      h.update("A;");
    } else {
      field('P', it->second);
    }
  }
  std::vector<std::string> handlers;
  for (const auto& sig : w.handlers) handlers.push_back(sig.text());
  std::sort(handlers.begin(), handlers.end());
  h.update("H" + std::to_string(handlers.size()) + ";");
  for (const auto& s : handlers) field('S', s);
  return MatchKey{h.value()};
}

// Indices into the models' window lists.
struct WindowMatch {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> removed;
  std::vector<std::size_t> added;
};

inline WindowMatch match_windows(const GuiModel& old_model, const GuiModel& new_model) {
  WindowMatch out;
  std::vector<bool> taken(new_model.windows.size(), false);
  for (std::size_t i = 0; i < old_model.windows.size(); ++i) {
    const auto& ow = old_model.windows[i];
    bool paired = false;
    for (std::size_t j = 0; j < new_model.windows.size(); ++j) {
      const auto& nw = new_model.windows[j];
      if (!taken[j] && nw.window_class == ow.window_class && nw.title == ow.title) {
        taken[j] = true;
        out.pairs.emplace_back(i, j);
        paired = true;
        break;
      }
    }
    if (!paired) out.removed.push_back(i);
  }
  for (std::size_t j = 0; j < new_model.windows.size(); ++j) {
    if (!taken[j]) out.added.push_back(j);
  }
  return out;
}

// Widget ids; pairs are (old id, new id) in old preorder.
struct WidgetMatch {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> removed;
  std::vector<std::string> added;
};

inline WidgetMatch match_widgets(const Widget& old_root, const Widget& new_root,
                                 const std::vector<std::string>& key_props) {
  // Preorder lists per key, roots excluded (they always pair).
  auto group = [&](const Widget& root) {
    std::map<MatchKey, std::vector<const Widget*>> groups;
    for (const auto& child : root.children) {
      for_each_widget(child, [&](const Widget& w) { groups[widget_key(w, key_props)].push_back(&w); });
    }
    return groups;
  };
  const auto old_groups = group(old_root);
  const auto new_groups = group(new_root);

  std::unordered_map<std::string, std::string> partner;
  for (const auto& [key, olds] : old_groups) {
    auto it = new_groups.find(key);
    if (it == new_groups.end()) continue;
    const auto n = std::min(olds.size(), it->second.size());
    for (std::size_t i = 0; i < n; ++i) partner.emplace(olds[i]->id, it->second[i]->id);
  }

  WidgetMatch out;
  out.pairs.emplace_back(old_root.id, new_root.id);
  std::unordered_map<std::string, bool> new_paired;
  for (const auto& child : old_root.children) {
    for_each_widget(child, [&](const Widget& w) {
      auto it = partner.find(w.id);
      if (it == partner.end()) {
        out.removed.push_back(w.id);
      } else {
        out.pairs.emplace_back(w.id, it->second);
        new_paired[it->second] = true;
      }
    });
  }
  for (const auto& child : new_root.children) {
    for_each_widget(child, [&](const Widget& w) {
      if (!new_paired.count(w.id)) out.added.push_back(w.id);
    });
  }
  return out;
}

struct GuiMatch {
  WindowMatch windows;
  // Parallel to windows.pairs.
  std::vector<WidgetMatch> widgets;
};

inline GuiMatch match_gui(const GuiModel& old_model, const GuiModel& new_model,
                          const std::vector<std::string>& key_props) {
  GuiMatch out;
  out.windows = match_windows(old_model, new_model);
  for (const auto& [i, j] : out.windows.pairs) {
    out.widgets.push_back(
        match_widgets(old_model.windows[i].root, new_model.windows[j].root, key_props));
  }
  return out;
}

struct MergedNode {
  std::string merged_id;
  WidgetStatus status = WidgetStatus::Unchanged;
  std::optional<std::string> old_id;
  std::optional<std::string> new_id;
  std::string widget_class;
  std::map<std::string, std::string> properties;
  std::vector<MethodSig> handlers;
  std::optional<std::string> screenshot;
  std::vector<MergedNode> children;

  bool matched() const { return old_id && new_id; }
  friend bool operator==(const MergedNode&, const MergedNode&) = default;
};

struct MergedWindow {
  std::string title;
  std::string window_class;
  MergedNode root;

  friend bool operator==(const MergedWindow&, const MergedWindow&) = default;
};

struct MergedGuiTree {
  std::vector<MergedWindow> windows;

  friend bool operator==(const MergedGuiTree&, const MergedGuiTree&) = default;
};

// Preorder over every merged node; `path` holds child indices from the window
// root (empty for the root itself).
template <typename Node, typename Fn>
void for_each_merged(Node& node, std::vector<int>& path, Fn&& fn) {
  fn(node, static_cast<const std::vector<int>&>(path));
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    for_each_merged(node.children[i], path, fn);
    path.pop_back();
  }
}

template <typename Tree, typename Fn>
void for_each_merged(Tree& tree, Fn&& fn) {
  for (std::size_t w = 0; w < tree.windows.size(); ++w) {
    std::vector<int> path;
    for_each_merged(tree.windows[w].root, path, [&](auto& node, const std::vector<int>& p) {
      fn(tree.windows[w], node, p);
    });
  }
}

namespace detail {

struct ArenaNode {
  MergedNode data;
  std::vector<std::size_t> kids;
};

class MergeBuilder {
 public:
  std::size_t add(const Widget* old_w, const Widget* new_w) {
    ArenaNode node;
    auto& d = node.data;
    if (old_w && new_w) {
      d.status = WidgetStatus::Unchanged;
    } else {
      d.status = new_w ? WidgetStatus::Added : WidgetStatus::Removed;
    }
    const Widget& surviving = new_w ? *new_w : *old_w;
    if (old_w) d.old_id = old_w->id;
    if (new_w) d.new_id = new_w->id;
    d.widget_class = surviving.widget_class;
    d.properties = surviving.properties;
    d.screenshot = surviving.screenshot ? surviving.screenshot
                                        : (old_w ? old_w->screenshot : std::nullopt);
    d.handlers = surviving.handlers;
    if (old_w && new_w) {
      for (const auto& h : old_w->handlers) {
        if (std::find(d.handlers.begin(), d.handlers.end(), h) == d.handlers.end()) {
          d.handlers.push_back(h);
        }
      }
    }
    arena.push_back(std::move(node));
    return arena.size() - 1;
  }

  // Removed-only children of `old_parent` go right after the last sibling
  // that precedes them in old order, or first when none does.
  void insert_removed(std::size_t merged_parent, const Widget& old_parent,
                      const std::unordered_map<std::string, std::size_t>& old_to_merged,
                      const std::unordered_map<std::string, bool>& removed) {
    auto& kids = arena[merged_parent].kids;
    std::size_t insert_pos = 0;
    for (const auto& child : old_parent.children) {
      const std::size_t idx = old_to_merged.at(child.id);
      if (removed.count(child.id)) {
        kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(insert_pos), idx);
        ++insert_pos;
      } else if (auto it = std::find(kids.begin(), kids.end(), idx); it != kids.end()) {
        insert_pos = static_cast<std::size_t>(it - kids.begin()) + 1;
      }
    }
  }

  MergedNode materialize(std::size_t idx) {
    MergedNode node = arena[idx].data;
    for (auto kid : arena[idx].kids) node.children.push_back(materialize(kid));
    return node;
  }

  std::vector<ArenaNode> arena;
};

inline MergedNode merge_uniform(const Widget& w, WidgetStatus status) {
  MergeBuilder b;
  std::function<std::size_t(const Widget&)> build = [&](const Widget& x) {
    const auto idx = status == WidgetStatus::Added ? b.add(nullptr, &x) : b.add(&x, nullptr);
    for (const auto& c : x.children) {
      const auto kid = build(c);
      b.arena[idx].kids.push_back(kid);
    }
    return idx;
  };
  return b.materialize(build(w));
}

inline MergedNode merge_window(const Widget& old_root, const Widget& new_root,
                               const WidgetMatch& match) {
  std::unordered_map<std::string, const Widget*> old_by_id;
  std::unordered_map<std::string, const Widget*> new_by_id;
  for_each_widget(old_root, [&](const Widget& w) { old_by_id.emplace(w.id, &w); });
  for_each_widget(new_root, [&](const Widget& w) { new_by_id.emplace(w.id, &w); });

  // Every source widget must be accounted for exactly once.
  std::unordered_map<std::string, int> old_seen;
  std::unordered_map<std::string, int> new_seen;
  std::unordered_map<std::string, std::string> new_to_old;
  std::unordered_map<std::string, bool> removed;
  auto note = [](std::unordered_map<std::string, int>& seen,
                 const std::unordered_map<std::string, const Widget*>& index,
                 const std::string& id) {
    if (!index.count(id)) {
      throw Error(ErrorKind::InconsistentMatch, "widget '" + id + "' is not in its model");
    }
    if (++seen[id] > 1) {
      throw Error(ErrorKind::InconsistentMatch, "widget '" + id + "' is matched more than once");
    }
  };
  for (const auto& [o, n] : match.pairs) {
    note(old_seen, old_by_id, o);
    note(new_seen, new_by_id, n);
    new_to_old.emplace(n, o);
  }
  for (const auto& o : match.removed) {
    note(old_seen, old_by_id, o);
    removed[o] = true;
  }
  for (const auto& n : match.added) note(new_seen, new_by_id, n);
  if (old_seen.size() != old_by_id.size() || new_seen.size() != new_by_id.size()) {
    throw Error(ErrorKind::InconsistentMatch, "match does not cover every widget");
  }
  if (new_to_old.count(new_root.id) == 0 || new_to_old.at(new_root.id) != old_root.id) {
    throw Error(ErrorKind::InconsistentMatch, "window roots must pair with each other");
  }

  MergeBuilder b;
  std::unordered_map<std::string, std::size_t> old_to_merged;
  std::function<std::size_t(const Widget&)> build_new = [&](const Widget& nw) {
    const Widget* ow = nullptr;
    if (auto it = new_to_old.find(nw.id); it != new_to_old.end()) ow = old_by_id.at(it->second);
    const auto idx = b.add(ow, &nw);
    if (ow) old_to_merged.emplace(ow->id, idx);
    for (const auto& c : nw.children) {
      const auto kid = build_new(c);
      b.arena[idx].kids.push_back(kid);
    }
    return idx;
  };
  const auto root_idx = build_new(new_root);
  for_each_widget(old_root, [&](const Widget& ow) {
    if (removed.count(ow.id)) old_to_merged.emplace(ow.id, b.add(&ow, nullptr));
  });
  for_each_widget(old_root, [&](const Widget& ow) {
    b.insert_removed(old_to_merged.at(ow.id), ow, old_to_merged, removed);
  });
  return b.materialize(root_idx);
}

}  // namespace detail

inline MergedGuiTree build_merged_tree(const GuiMatch& match, const GuiModel& old_model,
                                       const GuiModel& new_model) {
  if (match.widgets.size() != match.windows.pairs.size()) {
    throw Error(ErrorKind::InconsistentMatch, "one widget match per window pair is required");
  }
  std::map<std::size_t, bool> old_windows_seen;
  std::map<std::size_t, bool> new_windows_seen;
  auto note = [](std::map<std::size_t, bool>& seen, std::size_t i, std::size_t limit) {
    if (i >= limit || seen[i]) {
      throw Error(ErrorKind::InconsistentMatch, "window " + std::to_string(i) + " matched twice");
    }
    seen[i] = true;
  };
  const auto n_old = old_model.windows.size();
  const auto n_new = new_model.windows.size();
  for (const auto& [i, j] : match.windows.pairs) {
    note(old_windows_seen, i, n_old);
    note(new_windows_seen, j, n_new);
  }
  for (auto i : match.windows.removed) note(old_windows_seen, i, n_old);
  for (auto j : match.windows.added) note(new_windows_seen, j, n_new);

  // Windows in new order; each removed window follows the last window that
  // precedes it in old order.
  std::vector<MergedWindow> merged;
  std::vector<std::optional<std::size_t>> old_slot(n_old);
  for (std::size_t j = 0; j < n_new; ++j) {
    const auto& nw = new_model.windows[j];
    auto pair_it = std::find_if(match.windows.pairs.begin(), match.windows.pairs.end(),
                                [j](const auto& p) { return p.second == j; });
    if (pair_it != match.windows.pairs.end()) {
      const auto k = static_cast<std::size_t>(pair_it - match.windows.pairs.begin());
      const auto& ow = old_model.windows[pair_it->first];
      merged.push_back({nw.title, nw.window_class,
                        detail::merge_window(ow.root, nw.root, match.widgets[k])});
      old_slot[pair_it->first] = merged.size() - 1;
    } else {
      merged.push_back({nw.title, nw.window_class,
                        detail::merge_uniform(nw.root, WidgetStatus::Added)});
    }
  }
  std::size_t insert_pos = 0;
  std::vector<std::size_t> order(merged.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<MergedWindow> removed_windows;
  for (std::size_t i = 0; i < n_old; ++i) {
    const bool is_removed = std::find(match.windows.removed.begin(), match.windows.removed.end(),
                                      i) != match.windows.removed.end();
    if (is_removed) {
      const auto& ow = old_model.windows[i];
      removed_windows.push_back(
          {ow.title, ow.window_class, detail::merge_uniform(ow.root, WidgetStatus::Removed)});
      order.insert(order.begin() + static_cast<std::ptrdiff_t>(insert_pos),
                   merged.size() + removed_windows.size() - 1);
      ++insert_pos;
    } else if (old_slot[i]) {
      auto it = std::find(order.begin(), order.end(), *old_slot[i]);
      insert_pos = static_cast<std::size_t>(it - order.begin()) + 1;
    }
  }

  MergedGuiTree tree;
  for (auto idx : order) {
    tree.windows.push_back(idx < merged.size() ? std::move(merged[idx])
                                               : std::move(removed_windows[idx - merged.size()]));
  }
  std::size_t counter = 0;
  for_each_merged(tree, [&](MergedWindow&, MergedNode& node, const std::vector<int>&) {
    node.merged_id = "w" + std::to_string(++counter);
  });
  return tree;
}

// Keys shared by more than one non-root widget of a window; matching falls
// back to preorder pairing for these.
inline std::vector<std::pair<std::string, std::vector<std::string>>> ambiguous_match_keys(
    const GuiModel& model, const std::vector<std::string>& key_props) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (const auto& win : model.windows) {
    std::map<MatchKey, std::vector<std::string>> groups;
    for (const auto& child : win.root.children) {
      for_each_widget(child, [&](const Widget& w) { groups[widget_key(w, key_props)].push_back(w.id); });
    }
    for (auto& [key, ids] : groups) {
      if (ids.size() > 1) out.emplace_back(win.title, std::move(ids));
    }
  }
  return out;
}

}  // namespace evotrack
