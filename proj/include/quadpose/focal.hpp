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

#include <cmath>
#include <variant>

#include "quadpose/error.hpp"
#include "quadpose/linalg.hpp"
#include "quadpose/rectify.hpp"

namespace quadpose {

/// Axes whose |z| is at or below this are treated as parallel to the image.
inline constexpr double kParallelAxisZ = 1e-9;

struct FiniteVanishingPoint {
  Vec2 point;
};

struct VanishingAtInfinity {
  Vec2 direction;  // unit
};

using VanishingPoint = std::variant<FiniteVanishingPoint, VanishingAtInfinity>;

struct FocalEstimate {
  double focal = 0.0;
  /// V_X . V_Y <= 0, the sign under which a real focal length exists for a
  /// rectangle seen around the assumed principal point. False for the 0
  /// sentinel returned when a side pair is parallel in the image.
  bool consistent = false;
};

/// Image of a vanishing direction on the plane z = 1.
inline VanishingPoint vanishing_point(const UnitVec3& axis) {
  const Vec2 lateral = xy(axis);
  if (!(norm(lateral) > kDegenerateNorm)) {
    throw Error(ErrorKind::invalid_axis, "axis along the optical axis has no image direction");
  }
  if (std::abs(axis.z()) > kParallelAxisZ) return FiniteVanishingPoint{lateral / axis.z()};
  return VanishingAtInfinity{lateral / norm(lateral)};
}

namespace detail {

// x and y need not be unit: the ratio is homogeneous in each.
inline FocalEstimate focal_from_axes(const Vec3& x, const Vec3& y) {
  if (!(std::abs(x.z) > kParallelAxisZ * norm(x)) || !(std::abs(y.z) > kParallelAxisZ * norm(y))) {
    return {0.0, false};
  }
  const double vanishing_dot = dot(xy(x), xy(y)) / (x.z * y.z);
  return {std::sqrt(std::abs(vanishing_dot)), vanishing_dot <= 0.0};
}

}  // namespace detail

/// Focal length (in the quad's coordinate units) from the two vanishing points.
inline FocalEstimate estimate_focal(const RectifyMatrix& m) {
  return detail::focal_from_axes(m.x_axis, m.y_axis);
}

/// Same estimate straight from the quad, without normalizing the vanishing
/// directions.
inline FocalEstimate estimate_focal_from_quad(const Quad2& q) {
  validate(q);
  detail::require_no_collinear_triple(q);
  const Quad3 l = lift_to_unit_plane(q);
  const Vec3 x = cross(cross(l.a, l.b), cross(l.c, l.d));
  const Vec3 y = cross(cross(l.a, l.d), cross(l.c, l.b));
  return detail::focal_from_axes(x, y);
}

struct Parallel {};

using LineIntersection = std::variant<Vec2, Parallel>;

/// Intersection of line ab with line cd.
inline LineIntersection intersect_lines(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (!(norm(b - a) > kDegenerateNorm) || !(norm(d - c) > kDegenerateNorm)) {
    throw Error(ErrorKind::degenerate_line, "a line needs two distinct points");
  }
  const Vec3 l1 = cross(lift(a), lift(b));
  const Vec3 l2 = cross(lift(c), lift(d));
  const Vec3 x = cross(l1, l2);
  // x.z is the sine of the angle between the lines times both normal lengths
  if (!(std::abs(x.z) > kDegenerateNorm * norm(xy(l1)) * norm(xy(l2)))) return Parallel{};
  return xy(x) / x.z;
}

}  // namespace quadpose
