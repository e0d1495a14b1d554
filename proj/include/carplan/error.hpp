// Copyright (c) 2026 The carplan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace carplan {

/// Failure kinds surfaced by the planning and geometry layers.
enum class Errc {
  // geometry
  degenerate_corner,
  reversal_corner,
  turn_too_tight,
  parallel_headings,
  out_of_range,
  invalid_polygon,
  // scene / quality
  in_collision,
  // roadmap construction
  sampling_exhausted,
  // local planner
  turn_too_sharp,
  no_forward_connection,
  parallel_unaligned,
  too_long,
  // planner queries
  unreachable,
  no_path,
  discontinuous_path,
  // hybridization
  mismatched_endpoints,
  all_runs_failed,
  // io / cli
  parse_error,
  invalid_argument,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::degenerate_corner: return "DegenerateCorner";
    case Errc::reversal_corner: return "ReversalCorner";
    case Errc::turn_too_tight: return "TurnTooTight";
    case Errc::parallel_headings: return "ParallelHeadings";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::invalid_polygon: return "InvalidPolygon";
    case Errc::in_collision: return "InCollision";
    case Errc::sampling_exhausted: return "SamplingExhausted";
    case Errc::turn_too_sharp: return "TurnTooSharp";
    case Errc::no_forward_connection: return "NoForwardConnection";
    case Errc::parallel_unaligned: return "ParallelUnaligned";
    case Errc::too_long: return "TooLong";
    case Errc::unreachable: return "Unreachable";
    case Errc::no_path: return "NoPath";
    case Errc::discontinuous_path: return "DiscontinuousPath";
    case Errc::mismatched_endpoints: return "MismatchedEndpoints";
    case Errc::all_runs_failed: return "AllRunsFailed";
    case Errc::parse_error: return "ParseError";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

struct Error {
  Errc code;
  std::string message;

  std::string describe() const {
    std::string out{to_string(code)};
    if (!message.empty()) {
      out += ": ";
      out += message;
    }
    return out;
  }
};

/// Minimal value-or-error carrier used by every fallible operation.
/// Accessing value() on an error (or error() on a value) is a programming
/// bug and asserts via std::get.
template <typename T>
class [[nodiscard]] Result {
 public:
  Result(T value) : state_(std::move(value)) {}
  Result(Error err) : state_(std::move(err)) {}
  Result(Errc code, std::string message = {})
      : state_(Error{code, std::move(message)}) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  T& value() & { return std::get<T>(state_); }
  const T& value() const& { return std::get<T>(state_); }
  T&& value() && { return std::get<T>(std::move(state_)); }

  const Error& error() const { return std::get<Error>(state_); }
  Errc code() const { return error().code; }

  T value_or(T fallback) const {
    return ok() ? value() : std::move(fallback);
  }

 private:
  std::variant<T, Error> state_;
};

template <>
class [[nodiscard]] Result<void> {
 public:
  Result() = default;
  Result(Error err) : err_(std::move(err)), failed_(true) {}
  Result(Errc code, std::string message = {})
      : err_{code, std::move(message)}, failed_(true) {}

  bool ok() const { return !failed_; }
  explicit operator bool() const { return ok(); }
  const Error& error() const { return err_; }
  Errc code() const { return err_.code; }

 private:
  Error err_{};
  bool failed_ = false;
};

}  // namespace carplan
