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

#include <stdexcept>
#include <string>
#include <string_view>

namespace evotrack {

enum class ErrorKind {
  MalformedSignature,
  IoError,
  SchemaError,
  DuplicateWidgetId,
  UnknownEndpoint,
  DuplicateEdge,
  MissingHandler,
  HandlerNotApplication,
  InconsistentMatch,
  RootMismatch,
  MissingDiff,
  ForeignCondensation,
  NoSourceLocation,
  FileNotFound,
  RangeOutOfBounds,
  PortInUse,
  MissingBundle,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedSignature: return "MalformedSignature";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::DuplicateWidgetId: return "DuplicateWidgetId";
    case ErrorKind::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::MissingHandler: return "MissingHandler";
    case ErrorKind::HandlerNotApplication: return "HandlerNotApplication";
    case ErrorKind::InconsistentMatch: return "InconsistentMatch";
    case ErrorKind::RootMismatch: return "RootMismatch";
    case ErrorKind::MissingDiff: return "MissingDiff";
    case ErrorKind::ForeignCondensation: return "ForeignCondensation";
    case ErrorKind::NoSourceLocation: return "NoSourceLocation";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorKind::PortInUse: return "PortInUse";
    case ErrorKind::MissingBundle: return "MissingBundle";
  }
  return "Unknown";
}

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace evotrack
