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

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "quadpose/error.hpp"
#include "quadpose/linalg.hpp"

namespace quadpose {

/// Orientation of a projected rectangle or parallelogram in camera space.
///
/// x_axis and y_axis point at the spherical vanishing points of the AB/CD and
/// AD/CB side pairs; z_axis is the plane normal. The basis is orthonormal only
/// for rectangles. After canonicalize(), x_axis runs along A->B and z_axis lies
/// in the hemisphere of the corners, i.e. points away from the camera.
struct PoseMatrix {
  UnitVec3 x_axis;
  UnitVec3 y_axis;
  UnitVec3 z_axis;

  friend bool operator==(const PoseMatrix&, const PoseMatrix&) = default;
};

namespace detail {

inline Quad<UnitVec3> unit_corners(const Quad3& quad) {
  validate(quad);
  return {normalize(quad.a), normalize(quad.b), normalize(quad.c), normalize(quad.d)};
}

inline void require_distinct_directions(const Quad<UnitVec3>& u) {
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (!(norm(cross(u[i], u[j])) > kDegenerateNorm)) {
        throw Error(ErrorKind::degenerate_quad, std::string("incident vectors ") + "ABCD"[i] + " and " +
                                                    "ABCD"[j] + " are parallel");
      }
    }
  }
}

/// Three corners on one great circle put the camera in the marker plane.
inline void require_no_coplanar_triple(const Quad<UnitVec3>& u) {
  constexpr std::array<std::array<int, 3>, 4> triples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  for (const auto& t : triples) {
    if (!(std::abs(triple(u[t[0]], u[t[1]], u[t[2]])) > kDegenerateNorm)) {
      throw Error(ErrorKind::degenerate_quad, std::string("incident vectors ") + "ABCD"[t[0]] + "ABCD"[t[1]] +
                                                  "ABCD"[t[2]] + " lie on one great circle");
    }
  }
}

/// Direction shared by the great circles through (p, q) and (r, s).
inline UnitVec3 spherical_vanishing_point(const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& s,
                                          const char* which) {
  const Vec3 n1 = cross(p, q);
  const Vec3 n2 = cross(r, s);
  const Vec3 v = cross(n1, n2);
  if (!(norm(v) > kDegenerateNorm * norm(n1) * norm(n2))) {
    throw Error(ErrorKind::degenerate_quad, std::string(which) + " sides lie on one great circle");
  }
  return normalize(v);
}

}  // namespace detail

/// Vanishing-point basis exactly as the cross products produce it, before any
/// sign convention is applied. Inputs may be of any positive length.
inline PoseMatrix pose_uncanonical(const Quad3& quad) {
  const Quad<UnitVec3> u = detail::unit_corners(quad);
  detail::require_distinct_directions(u);
  detail::require_no_coplanar_triple(u);
  const UnitVec3 x = detail::spherical_vanishing_point(u.a, u.b, u.c, u.d, "AB and CD");
  const UnitVec3 y = detail::spherical_vanishing_point(u.a, u.d, u.c, u.b, "AD and CB");
  const Vec3 z = cross(x, y);
  if (!(norm(z) > kDegenerateNorm)) {
    throw Error(ErrorKind::degenerate_quad, "both vanishing directions coincide (collinear corners)");
  }
  return {x, y, normalize(z)};
}

/// Fixes the signs of a vanishing-point basis: x_axis along A->B, then z_axis
/// towards the corners. Idempotent.
inline PoseMatrix canonicalize(const PoseMatrix& p, const Quad3& quad) {
  const Quad<UnitVec3> u = detail::unit_corners(quad);
  UnitVec3 x = p.x_axis;
  UnitVec3 y = p.y_axis;

  // On the unit sphere x.B - x.A has the sign of x.(B - A) for the 3D corners,
  // since the angle to x shrinks monotonically when walking along x.
  double along = dot(x, u.b.vec() - u.a.vec());
  if (along == 0.0) along = dot(x, u.c.vec() - u.d.vec());
  if (along < 0.0) x = -x;

  const Vec3 mean = u.a.vec() + u.b.vec() + u.c.vec() + u.d.vec();
  if (dot(cross(x, y), mean) < 0.0) y = -y;
  return {x, y, normalize(cross(x, y))};
}

inline PoseMatrix pose_from_incidents(const Quad3& quad) {
  return canonicalize(pose_uncanonical(quad), quad);
}

/// Angle between the vanishing directions; equals the corner angle between
/// adjacent sides of the physical figure.
inline double side_angle(const PoseMatrix& p) {
  return std::acos(std::clamp(dot(p.x_axis, p.y_axis), -1.0, 1.0));
}

}  // namespace quadpose
