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

// Method source extraction, Myers line diff and the reference method
// fingerprint.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "evotrack/digest.hpp"
#include "evotrack/model.hpp"

namespace evotrack {

enum class DiffOp { Equal, Insert, Delete };

inline std::string_view to_string(DiffOp op) {
  switch (op) {
    case DiffOp::Equal: return "equal";
    case DiffOp::Insert: return "insert";
    case DiffOp::Delete: return "delete";
  }
  return "equal";
}

inline DiffOp parse_diff_op(std::string_view s) {
  if (s == "equal") return DiffOp::Equal;
  if (s == "insert") return DiffOp::Insert;
  if (s == "delete") return DiffOp::Delete;
  throw Error(ErrorKind::SchemaError, "unknown diff op '" + std::string(s) + "'");
}

struct DiffHunk {
  DiffOp op = DiffOp::Equal;
  std::vector<std::string> lines;

  friend bool operator==(const DiffHunk&, const DiffHunk&) = default;
};

struct MethodSourceView {
  MethodSig sig;
  std::vector<std::string> lines;
  SourceLocation origin;
};

// Splits on '\n' after folding CRLF and lone CR to '\n'. A trailing newline
// does not start an extra line.
inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string current;
  bool pending = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      lines.push_back(std::move(current));
      current.clear();
      pending = false;
    } else {
      current.push_back(c);
      pending = true;
    }
  }
  if (pending) lines.push_back(std::move(current));
  return lines;
}

inline MethodSourceView extract_method_source(const std::filesystem::path& source_root,
                                              const MethodRecord& rec) {
  if (!rec.source) {
    throw Error(ErrorKind::NoSourceLocation, rec.sig.text() + " has no source location");
  }
  const auto file = source_root / rec.source->path;
  std::string text;
  try {
    text = detail::read_text_file(file);
  } catch (const Error&) {
    throw Error(ErrorKind::FileNotFound, file.string());
  }
  auto lines = split_lines(text);
  const auto& loc = *rec.source;
  if (loc.start_line < 1 || loc.end_line < loc.start_line ||
      static_cast<std::size_t>(loc.end_line) > lines.size()) {
    throw Error(ErrorKind::RangeOutOfBounds,
                rec.sig.text() + ": lines " + std::to_string(loc.start_line) + "-" +
                    std::to_string(loc.end_line) + " of " + std::to_string(lines.size()) +
                    "-line file " + loc.path);
  }
  MethodSourceView view{rec.sig, {}, loc};
  view.lines.assign(lines.begin() + (loc.start_line - 1), lines.begin() + loc.end_line);
  return view;
}

// Shortest edit script between two line lists (Myers' O(ND) greedy
// algorithm), returned as maximal runs of equal/insert/delete.
inline std::vector<DiffHunk> line_diff(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int max = n + m;
  const int offset = max + 1;
  std::vector<int> v(static_cast<std::size_t>(2 * max + 3), 0);
  std::vector<std::vector<int>> trace;

  auto at = [&](std::vector<int>& vec, int k) -> int& {
    return vec[static_cast<std::size_t>(k + offset)];
  };
  auto step_down = [](std::vector<int>& vec, int k, int d, auto& get) {
    return k == -d || (k != d && get(vec, k - 1) < get(vec, k + 1));
  };

  bool done = false;
  for (int d = 0; d <= max && !done; ++d) {
    trace.push_back(v);
    for (int k = -d; k <= d; k += 2) {
      int x = step_down(v, k, d, at) ? at(v, k + 1) : at(v, k - 1) + 1;
      int y = x - k;
      while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
        ++x;
        ++y;
      }
      at(v, k) = x;
      if (x >= n && y >= m) {
        done = true;
        break;
      }
    }
  }

  // Walk the snapshots backwards, emitting one op per line in reverse.
  std::vector<std::pair<DiffOp, const std::string*>> ops;
  int x = n;
  int y = m;
  for (int d = static_cast<int>(trace.size()) - 1; d >= 0; --d) {
    auto& snap = trace[static_cast<std::size_t>(d)];
    const int k = x - y;
    if (d == 0) {
      while (x > 0 && y > 0) {
        ops.emplace_back(DiffOp::Equal, &a[static_cast<std::size_t>(--x)]);
        --y;
      }
      break;
    }
    const int prev_k = step_down(snap, k, d, at) ? k + 1 : k - 1;
    const int prev_x = at(snap, prev_k);
    const int prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      ops.emplace_back(DiffOp::Equal, &a[static_cast<std::size_t>(--x)]);
      --y;
    }
    if (x == prev_x) {
      ops.emplace_back(DiffOp::Insert, &b[static_cast<std::size_t>(prev_y)]);
    } else {
      ops.emplace_back(DiffOp::Delete, &a[static_cast<std::size_t>(prev_x)]);
    }
    x = prev_x;
    y = prev_y;
  }

  std::vector<DiffHunk> hunks;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    if (hunks.empty() || hunks.back().op != it->first) hunks.push_back({it->first, {}});
    hunks.back().lines.push_back(*it->second);
  }
  return hunks;
}

// FNV-1a/64 over the lines with trailing whitespace removed, joined by '\n'.
inline std::string method_fingerprint(const std::vector<std::string>& lines) {
  Fnv1a64 h;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i != 0) h.update("\n");
    std::string_view line = lines[i];
    const auto end = line.find_last_not_of(" \t\r\v\f");
    h.update(end == std::string_view::npos ? std::string_view{} : line.substr(0, end + 1));
  }
  return to_hex16(h.value());
}

}  // namespace evotrack
