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

// Lens-agnostic 2D rectification of a quad given in principal-point-centered
// coordinates.

#pragma once

#include <array>
#include <cmath>
#include <string>

#include "quadpose/error.hpp"
#include "quadpose/linalg.hpp"

namespace quadpose {

/// Vanishing-point basis of a 2D quad lifted onto z = 1. Unlike a pose matrix
/// it is not a rotation: x_axis and y_axis are orthogonal only when the true
/// focal length equals the lift distance. z_axis = normalize(y_axis x x_axis).
struct RectifyMatrix {
  UnitVec3 x_axis;
  UnitVec3 y_axis;
  UnitVec3 z_axis;

  friend bool operator==(const RectifyMatrix&, const RectifyMatrix&) = default;
};

enum class Direction {
  forward,  // visible quad -> rectified screen coordinates
  inverse,  // rectified (texture) coordinates -> visible quad
};

inline Quad3 lift_to_unit_plane(const Quad2& q) { return q.map([](Vec2 p) { return lift(p); }); }

namespace detail {

inline void require_no_collinear_triple(const Quad2& q) {
  constexpr std::array<std::array<int, 3>, 4> triples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  for (const auto& t : triples) {
    const Vec2 u = q[t[1]] - q[t[0]];
    const Vec2 v = q[t[2]] - q[t[0]];
    if (!(std::abs(cross(u, v)) > kDegenerateNorm * norm(u) * norm(v))) {
      throw Error(ErrorKind::degenerate_quad, std::string("corners ") + "ABCD"[t[0]] + "ABCD"[t[1]] +
                                                  "ABCD"[t[2]] + " are collinear");
    }
  }
}

}  // namespace detail

inline RectifyMatrix rectification_matrix(const Quad2& q) {
  validate(q);
  detail::require_no_collinear_triple(q);
  const Quad3 l = lift_to_unit_plane(q);
  const Vec3 x = cross(cross(l.a, l.b), cross(l.c, l.d));
  const Vec3 y = cross(cross(l.a, l.d), cross(l.c, l.b));
  const Vec3 z = cross(y, x);
  if (!(norm(z) > kDegenerateNorm * norm(x) * norm(y))) {
    throw Error(ErrorKind::degenerate_quad, "vanishing directions coincide");
  }
  return {normalize(x), normalize(y), normalize(z)};
}

/// Projective rectification of one point.
///
/// inverse applies the transposed matrix: (s, t) -> s*x_axis + t*y_axis + z_axis,
/// sending the rectified axes to the two vanishing points. forward is its exact
/// inverse (the inverse-transpose of the matrix, evaluated through cofactors),
/// so a quad's sides map onto the coordinate axes for any focal length. When
/// the basis is orthonormal this reduces to dotting (p, 1) with the rows.
inline Vec2 rectify_point(Vec2 p, const RectifyMatrix& m, Direction direction) {
  const Vec3 h = lift(p);
  const Vec3& x = m.x_axis;
  const Vec3& y = m.y_axis;
  const Vec3& z = m.z_axis;
  Vec3 q;
  if (direction == Direction::forward) {
    q = {dot(h, cross(y, z)), dot(h, cross(z, x)), dot(h, cross(x, y))};
  } else {
    q = p.x * x + p.y * y + z;
  }
  if (!(std::abs(q.z) > kDegenerateNorm * norm(q))) {
    throw Error(ErrorKind::horizon_point, "point maps to the line at infinity");
  }
  return xy(q) / q.z;
}

inline Quad2 rectify_quad(const Quad2& q, const RectifyMatrix& m) {
  return q.map([&m](Vec2 p) { return rectify_point(p, m, Direction::forward); });
}

/// Factor for rectified x coordinates that restores the marker's width/height
/// ratio: marker_aspect * |A'' - D''| / |C'' - D''|.
inline double aspect_correction_factor(const RectifyMatrix& m, const Quad2& q, double marker_aspect) {
  if (!(marker_aspect > 0.0) || !std::isfinite(marker_aspect)) {
    throw Error(ErrorKind::invalid_input, "marker aspect must be positive");
  }
  const Vec2 d = rectify_point(q.d, m, Direction::forward);
  const double height = norm(rectify_point(q.a, m, Direction::forward) - d);
  const double width = norm(rectify_point(q.c, m, Direction::forward) - d);
  if (!(height > kDegenerateNorm) || !(width > kDegenerateNorm)) {
    throw Error(ErrorKind::degenerate_side, "rectified quad has a zero-length side");
  }
  return marker_aspect * height / width;
}

inline Vec2 apply_aspect(Vec2 p, double factor) { return {p.x * factor, p.y}; }

/// Maps rectified coordinates so that D'' -> (0, 0) and B'' -> (1, 1).
inline Vec2 normalize_to_unit(Vec2 p, const Quad2& rectified) {
  const Vec2 span = rectified.b - rectified.d;
  if (!(std::abs(span.x) > kDegenerateNorm) || !(std::abs(span.y) > kDegenerateNorm)) {
    throw Error(ErrorKind::degenerate_span, "opposite rectified corners B and D share a coordinate");
  }
  return {(p.x - rectified.d.x) / span.x, (p.y - rectified.d.y) / span.y};
}

/// Inverse of normalize_to_unit().
inline Vec2 denormalize_from_unit(Vec2 p, const Quad2& rectified) {
  const Vec2 span = rectified.b - rectified.d;
  return {rectified.d.x + p.x * span.x, rectified.d.y + p.y * span.y};
}

}  // namespace quadpose
