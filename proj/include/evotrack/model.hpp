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

// Domain types shared by every stage: method identities, call graphs, GUI
// models, classification rules and the project manifest, plus their JSON
// artifact formats.

#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evotrack/error.hpp"

namespace evotrack {

using json = nlohmann::json;

// Canonical method identity: `package.Class#method(T1,T2):Ret`.
class MethodSig {
 public:
  MethodSig() = default;

  const std::string& text() const noexcept { return text_; }
  bool empty() const noexcept { return text_.empty(); }

  // `package.Class` part, used for prefix classification.
  std::string_view class_part() const {
    return std::string_view(text_).substr(0, text_.find('#'));
  }

  std::string_view method_name() const {
    const auto hash = text_.find('#');
    const auto paren = text_.find('(');
    return std::string_view(text_).substr(hash + 1, paren - hash - 1);
  }

  friend bool operator==(const MethodSig&, const MethodSig&) = default;
  friend auto operator<=>(const MethodSig&, const MethodSig&) = default;

 private:
  explicit MethodSig(std::string text) : text_(std::move(text)) {}
  friend MethodSig canonical_sig(std::string_view raw);

  std::string text_;
};

inline MethodSig canonical_sig(std::string_view raw) {
  std::string text;
  text.reserve(raw.size());
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  auto fail = [&](const char* why) {
    throw Error(ErrorKind::MalformedSignature,
                std::string(why) + " in '" + std::string(raw) + "'");
  };
  if (text.empty()) fail("empty signature");
  auto count = [&](char c) { return std::count(text.begin(), text.end(), c); };
  if (count('#') != 1) fail("expected exactly one '#'");
  if (count('(') != 1 || count(')') != 1) fail("unbalanced parentheses");
  const auto hash = text.find('#');
  const auto open = text.find('(');
  const auto close = text.find(')');
  if (hash == 0) fail("empty class part");
  if (open < hash) fail("'(' before '#'");
  if (open == hash + 1) fail("empty method name");
  if (close < open) fail("unbalanced parentheses");
  if (close + 1 >= text.size() || text[close + 1] != ':') fail("missing return type");
  if (close + 2 >= text.size()) fail("missing return type");
  if (count(':') != 1 || text.find(':') != close + 1) fail("expected exactly one ':' after ')'");
  return MethodSig(std::move(text));
}

enum class Category { Application, Library, Framework };

inline std::string_view to_string(Category c) {
  switch (c) {
    case Category::Application: return "application";
    case Category::Library: return "library";
    case Category::Framework: return "framework";
  }
  return "application";
}

// Display label of the abstraction node standing in for a category.
inline std::string_view category_label(Category c) {
  switch (c) {
    case Category::Application: return "Application";
    case Category::Library: return "Library";
    case Category::Framework: return "Framework";
  }
  return "Application";
}

inline Category parse_category(std::string_view s) {
  if (s == "application") return Category::Application;
  if (s == "library") return Category::Library;
  if (s == "framework") return Category::Framework;
  throw Error(ErrorKind::SchemaError, "unknown category '" + std::string(s) + "'");
}

struct SourceLocation {
  std::string path;
  int start_line = 1;
  int end_line = 1;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

inline bool is_fingerprint(std::string_view s) {
  return s.size() == 16 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

struct MethodRecord {
  MethodSig sig;
  std::string fingerprint;
  std::optional<SourceLocation> source;

  friend bool operator==(const MethodRecord&, const MethodRecord&) = default;
};

using Edge = std::pair<MethodSig, MethodSig>;

class CallGraph {
 public:
  CallGraph() = default;

  // Validates every invariant; throws DuplicateEdge / UnknownEndpoint /
  // SchemaError on violation.
  CallGraph(std::vector<MethodRecord> methods, const std::vector<Edge>& edges)
      : methods_(std::move(methods)) {
    for (std::size_t i = 0; i < methods_.size(); ++i) {
      const auto& rec = methods_[i];
      if (!is_fingerprint(rec.fingerprint)) {
        throw Error(ErrorKind::SchemaError,
                    "bad fingerprint '" + rec.fingerprint + "' for " + rec.sig.text());
      }
      if (rec.source && (rec.source->start_line < 1 ||
                         rec.source->end_line < rec.source->start_line)) {
        throw Error(ErrorKind::SchemaError, "bad source range for " + rec.sig.text());
      }
      if (!index_.emplace(rec.sig.text(), i).second) {
        throw Error(ErrorKind::SchemaError, "duplicate method " + rec.sig.text());
      }
    }
    for (const auto& e : edges) {
      for (const auto* end : {&e.first, &e.second}) {
        if (!contains(*end)) {
          throw Error(ErrorKind::UnknownEndpoint,
                      "edge " + e.first.text() + " -> " + e.second.text() +
                          " references undeclared " + end->text());
        }
      }
      if (!edges_.insert(e).second) {
        throw Error(ErrorKind::DuplicateEdge,
                    e.first.text() + " -> " + e.second.text());
      }
    }
  }

  const std::vector<MethodRecord>& methods() const noexcept { return methods_; }
  const std::set<Edge>& edges() const noexcept { return edges_; }

  bool contains(const MethodSig& sig) const { return index_.count(sig.text()) != 0; }

  const MethodRecord* find(const MethodSig& sig) const {
    auto it = index_.find(sig.text());
    return it == index_.end() ? nullptr : &methods_[it->second];
  }

  // Callees of `caller` in lexicographic order.
  std::vector<MethodSig> callees(const MethodSig& caller) const {
    std::vector<MethodSig> out;
    for (auto it = edges_.lower_bound(Edge{caller, MethodSig{}});
         it != edges_.end() && it->first == caller; ++it) {
      out.push_back(it->second);
    }
    return out;
  }

 private:
  std::vector<MethodRecord> methods_;
  std::set<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Widget {
  std::string id;
  std::string widget_class;
  std::map<std::string, std::string> properties;
  std::vector<MethodSig> handlers;
  std::vector<Widget> children;
  std::optional<std::string> screenshot;

  friend bool operator==(const Widget&, const Widget&) = default;
};

struct Window {
  std::string title;
  std::string window_class;
  Widget root;

  friend bool operator==(const Window&, const Window&) = default;
};

// Preorder visit of a widget tree.
template <typename Fn>
void for_each_widget(const Widget& root, Fn&& fn) {
  fn(root);
  for (const auto& child : root.children) for_each_widget(child, fn);
}

inline std::size_t widget_count(const Widget& root) {
  std::size_t n = 0;
  for_each_widget(root, [&](const Widget&) { ++n; });
  return n;
}

struct GuiModel {
  std::vector<Window> windows;

  std::size_t widget_count() const {
    std::size_t n = 0;
    for (const auto& w : windows) n += evotrack::widget_count(w.root);
    return n;
  }

  friend bool operator==(const GuiModel&, const GuiModel&) = default;
};

inline const std::vector<std::string>& default_match_properties() {
  static const std::vector<std::string> props{"text", "name", "actionCommand"};
  return props;
}

struct ClassificationRule {
  std::string prefix;
  Category category = Category::Application;

  friend bool operator==(const ClassificationRule&, const ClassificationRule&) = default;
};

struct ClassificationRules {
  std::vector<ClassificationRule> rules;
  Category default_category = Category::Application;
  std::vector<std::string> match_properties = default_match_properties();

  friend bool operator==(const ClassificationRules&, const ClassificationRules&) = default;
};

struct Project {
  std::string version_label;
  std::filesystem::path gui_model_path;
  std::filesystem::path call_graph_path;
  std::optional<std::filesystem::path> source_root;
  std::optional<std::filesystem::path> rules_path;
};

// ---------------------------------------------------------------------------
// JSON encoding

namespace detail {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorKind::IoError, "cannot read " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::IoError, "read failure on " + path.string());
  return buf.str();
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, what + ": " + e.what());
  }
}

inline const json& require(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object()) throw Error(ErrorKind::SchemaError, ctx + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorKind::SchemaError, ctx + ": missing field '" + key + "'");
  }
  return *it;
}

inline std::string require_string(const json& obj, const char* key, const std::string& ctx) {
  const auto& v = require(obj, key, ctx);
  if (!v.is_string()) {
    throw Error(ErrorKind::SchemaError, ctx + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

inline int require_int(const json& obj, const char* key, const std::string& ctx) {
  const auto& v = require(obj, key, ctx);
  if (!v.is_number_integer()) {
    throw Error(ErrorKind::SchemaError, ctx + ": field '" + key + "' must be an integer");
  }
  return v.get<int>();
}

inline const json* optional_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

inline const json& expect_array(const json* v, const std::string& ctx) {
  static const json empty = json::array();
  if (v == nullptr) return empty;
  if (!v->is_array()) throw Error(ErrorKind::SchemaError, ctx + " must be an array");
  return *v;
}

}  // namespace detail

inline Widget widget_from_json(const json& j) {
  Widget w;
  w.id = detail::require_string(j, "id", "widget");
  const std::string ctx = "widget '" + w.id + "'";
  w.widget_class = detail::require_string(j, "class", ctx);
  if (const auto* props = detail::optional_field(j, "properties")) {
    if (!props->is_object()) throw Error(ErrorKind::SchemaError, ctx + ": properties must be an object");
    for (const auto& [k, v] : props->items()) {
      if (!v.is_string()) {
        throw Error(ErrorKind::SchemaError, ctx + ": property '" + k + "' must be a string");
      }
      w.properties.emplace(k, v.get<std::string>());
    }
  }
  for (const auto& h : detail::expect_array(detail::optional_field(j, "handlers"), ctx + ".handlers")) {
    if (!h.is_string()) throw Error(ErrorKind::SchemaError, ctx + ": handler must be a string");
    w.handlers.push_back(canonical_sig(h.get<std::string>()));
  }
  if (const auto* shot = detail::optional_field(j, "screenshot")) {
    if (!shot->is_string()) throw Error(ErrorKind::SchemaError, ctx + ": screenshot must be a string");
    w.screenshot = shot->get<std::string>();
  }
  for (const auto& c : detail::expect_array(detail::optional_field(j, "children"), ctx + ".children")) {
    w.children.push_back(widget_from_json(c));
  }
  return w;
}

inline json widget_to_json(const Widget& w) {
  json j;
  j["id"] = w.id;
  j["class"] = w.widget_class;
  j["properties"] = json::object();
  for (const auto& [k, v] : w.properties) j["properties"][k] = v;
  j["handlers"] = json::array();
  for (const auto& h : w.handlers) j["handlers"].push_back(h.text());
  if (w.screenshot) j["screenshot"] = *w.screenshot;
  j["children"] = json::array();
  for (const auto& c : w.children) j["children"].push_back(widget_to_json(c));
  return j;
}

inline GuiModel gui_model_from_json(const json& j) {
  GuiModel model;
  for (const auto& wj : detail::expect_array(&detail::require(j, "windows", "gui model"), "windows")) {
    Window win;
    win.title = detail::require_string(wj, "title", "window");
    win.window_class = detail::require_string(wj, "class", "window '" + win.title + "'");
    win.root = widget_from_json(detail::require(wj, "root", "window '" + win.title + "'"));
    model.windows.push_back(std::move(win));
  }
  std::set<std::string> seen;
  for (const auto& win : model.windows) {
    for_each_widget(win.root, [&](const Widget& w) {
      if (!seen.insert(w.id).second) {
        throw Error(ErrorKind::DuplicateWidgetId, "widget id '" + w.id + "' appears twice");
      }
    });
  }
  return model;
}

inline json gui_model_to_json(const GuiModel& model) {
  json j;
  j["windows"] = json::array();
  for (const auto& win : model.windows) {
    j["windows"].push_back({{"title", win.title},
                            {"class", win.window_class},
                            {"root", widget_to_json(win.root)}});
  }
  return j;
}

inline CallGraph call_graph_from_json(const json& j) {
  std::vector<MethodRecord> methods;
  for (const auto& mj : detail::expect_array(&detail::require(j, "methods", "call graph"), "methods")) {
    MethodRecord rec;
    rec.sig = canonical_sig(detail::require_string(mj, "sig", "method"));
    const std::string ctx = "method " + rec.sig.text();
    rec.fingerprint = detail::require_string(mj, "fingerprint", ctx);
    if (const auto* src = detail::optional_field(mj, "source")) {
      rec.source = SourceLocation{detail::require_string(*src, "path", ctx + ".source"),
                                  detail::require_int(*src, "start_line", ctx + ".source"),
                                  detail::require_int(*src, "end_line", ctx + ".source")};
    }
    methods.push_back(std::move(rec));
  }
  std::vector<Edge> edges;
  for (const auto& ej : detail::expect_array(detail::optional_field(j, "edges"), "edges")) {
    if (!ej.is_array() || ej.size() != 2 || !ej[0].is_string() || !ej[1].is_string()) {
      throw Error(ErrorKind::SchemaError, "edge must be a [caller, callee] pair of strings");
    }
    edges.emplace_back(canonical_sig(ej[0].get<std::string>()),
                       canonical_sig(ej[1].get<std::string>()));
  }
  return CallGraph(std::move(methods), edges);
}

inline json call_graph_to_json(const CallGraph& graph) {
  json j;
  j["methods"] = json::array();
  for (const auto& rec : graph.methods()) {
    json m{{"sig", rec.sig.text()}, {"fingerprint", rec.fingerprint}};
    if (rec.source) {
      m["source"] = {{"path", rec.source->path},
                     {"start_line", rec.source->start_line},
                     {"end_line", rec.source->end_line}};
    }
    j["methods"].push_back(std::move(m));
  }
  j["edges"] = json::array();
  for (const auto& [from, to] : graph.edges()) j["edges"].push_back({from.text(), to.text()});
  return j;
}

inline ClassificationRules rules_from_json(const json& j) {
  ClassificationRules rules;
  for (const auto& rj : detail::expect_array(detail::optional_field(j, "rules"), "rules")) {
    ClassificationRule rule{detail::require_string(rj, "prefix", "rule"),
                            parse_category(detail::require_string(rj, "category", "rule"))};
    if (rule.prefix.empty()) throw Error(ErrorKind::SchemaError, "rule prefix must be non-empty");
    rules.rules.push_back(std::move(rule));
  }
  rules.default_category = parse_category(detail::require_string(j, "default", "rules"));
  if (const auto* props = detail::optional_field(j, "match_properties")) {
    rules.match_properties.clear();
    for (const auto& p : detail::expect_array(props, "match_properties")) {
      if (!p.is_string()) throw Error(ErrorKind::SchemaError, "match_properties must hold strings");
      rules.match_properties.push_back(p.get<std::string>());
    }
  }
  return rules;
}

inline json rules_to_json(const ClassificationRules& rules) {
  json j;
  j["rules"] = json::array();
  for (const auto& r : rules.rules) {
    j["rules"].push_back({{"prefix", r.prefix}, {"category", to_string(r.category)}});
  }
  j["default"] = to_string(rules.default_category);
  j["match_properties"] = rules.match_properties;
  return j;
}

// Relative paths are resolved against `base_dir`.
inline Project project_from_json(const json& j, const std::filesystem::path& base_dir) {
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative()) path = base_dir / path;
    return std::filesystem::absolute(path).lexically_normal();
  };
  Project project;
  project.version_label = detail::require_string(j, "version_label", "project");
  if (project.version_label.empty()) {
    throw Error(ErrorKind::SchemaError, "project: version_label must be non-empty");
  }
  project.gui_model_path = resolve(detail::require_string(j, "gui_model", "project"));
  project.call_graph_path = resolve(detail::require_string(j, "call_graph", "project"));
  if (j.contains("source_root") && !j["source_root"].is_null()) {
    project.source_root = resolve(detail::require_string(j, "source_root", "project"));
  }
  if (j.contains("rules") && !j["rules"].is_null()) {
    project.rules_path = resolve(detail::require_string(j, "rules", "project"));
  }
  return project;
}

// ---------------------------------------------------------------------------
// File loaders

inline Project load_project(const std::filesystem::path& path) {
  const auto text = detail::read_text_file(path);
  const auto base = std::filesystem::absolute(path).parent_path();
  return project_from_json(detail::parse_json_text(text, path.string()), base);
}

inline GuiModel load_gui_model(const std::filesystem::path& path) {
  return gui_model_from_json(detail::parse_json_text(detail::read_text_file(path), path.string()));
}

inline CallGraph load_call_graph(const std::filesystem::path& path) {
  return call_graph_from_json(detail::parse_json_text(detail::read_text_file(path), path.string()));
}

inline ClassificationRules load_rules(const std::filesystem::path& path) {
  return rules_from_json(detail::parse_json_text(detail::read_text_file(path), path.string()));
}

// Rules for a project; the built-in defaults when no rules file is named.
inline ClassificationRules load_project_rules(const Project& project) {
  return project.rules_path ? load_rules(*project.rules_path) : ClassificationRules{};
}

}  // namespace evotrack

template <>
struct std::hash<evotrack::MethodSig> {
  std::size_t operator()(const evotrack::MethodSig& s) const noexcept {
    return std::hash<std::string>{}(s.text());
  }
};
