// Copyright 2026 The quadpose Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quadpose {

enum class ErrorKind {
  // geometric degeneracies
  degenerate_vector,
  degenerate_quad,
  degenerate_side,
  degenerate_span,
  degenerate_line,
  parallel_ray,
  grazing_plane,
  horizon_point,
  invalid_axis,
  not_in_view,
  // input validation
  invalid_input,
  out_of_range,
  unsupported_model,
  infeasible_config,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_vector: return "degenerate-vector";
    case ErrorKind::degenerate_quad: return "degenerate-quad";
    case ErrorKind::degenerate_side: return "degenerate-side";
    case ErrorKind::degenerate_span: return "degenerate-span";
    case ErrorKind::degenerate_line: return "degenerate-line";
    case ErrorKind::parallel_ray: return "parallel-ray";
    case ErrorKind::grazing_plane: return "grazing-plane";
    case ErrorKind::horizon_point: return "horizon-point";
    case ErrorKind::invalid_axis: return "invalid-axis";
    case ErrorKind::not_in_view: return "not-in-view";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::unsupported_model: return "unsupported-model";
    case ErrorKind::infeasible_config: return "infeasible-config";
  }
  return "unknown";
}

/// True for errors caused by the geometry of otherwise well-formed input
/// (parallel rays, collinear corners, ...), false for malformed input.
constexpr bool is_geometric(ErrorKind kind) {
  return kind < ErrorKind::invalid_input;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace quadpose
