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

// Metric reconstruction of a marker from its incident vectors and pose.
//
// The marker frame has its origin at corner D (bottom-left), x along D->C
// (parallel to A->B), y towards A and z along the pose normal.

#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "quadpose/error.hpp"
#include "quadpose/linalg.hpp"
#include "quadpose/pose.hpp"

namespace quadpose {

/// Physical marker dimensions: side lengths of AB, BC, CD, DA and the
/// width/height aspect ratio.
struct MarkerSpec {
  double side_a = 1.0;
  double side_b = 1.0;
  double side_c = 1.0;
  double side_d = 1.0;
  double aspect = 1.0;

  static MarkerSpec rectangle(double width, double height) {
    return {width, height, width, height, width / height};
  }
  static MarkerSpec square(double side) { return rectangle(side, side); }
};

inline void validate(const MarkerSpec& m) {
  for (double v : {m.side_a, m.side_b, m.side_c, m.side_d, m.aspect}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::invalid_input, "marker sides and aspect must be positive and finite");
    }
  }
}

enum class ScaleMode { by_side_a, by_side_b, by_side_c, by_side_d, by_width, by_height };

struct ReconstructedScene {
  Quad3 points;            // metric, camera frame
  double scale_u = 1.0;
  Vec3 camera_in_marker;   // metric, marker frame
};

/// Extends the ray v to the plane through plane_pt with the given normal.
/// Neither the sign nor the length of the normal affects the result.
inline Vec3 intersect_ray_plane(const Vec3& v, const Vec3& normal, const Vec3& plane_pt) {
  const double denom = dot(v, normal);
  if (!(std::abs(denom) > kDegenerateNorm * norm(v) * norm(normal))) {
    throw Error(ErrorKind::parallel_ray, "ray is parallel to the plane");
  }
  return (dot(plane_pt, normal) / denom) * v;
}

/// Moves every corner along its ray onto the marker plane through the
/// reference corner. The reference corner is returned as given.
inline Quad3 rectify3d(const Quad3& quad, const PoseMatrix& pose, Corner reference = Corner::c) {
  validate(quad);
  const Vec3& plane_pt = quad[reference];
  Quad3 out = quad;
  for (Corner k : kCorners) {
    if (k == reference) continue;
    try {
      out[k] = intersect_ray_plane(quad[k], pose.z_axis, plane_pt);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::parallel_ray) throw;
      throw Error(ErrorKind::grazing_plane, std::string("ray of corner ") + corner_name(k) +
                                                " grazes the marker plane");
    }
  }
  return out;
}

namespace detail {

struct SideChoice {
  Corner from;
  Corner to;
  double length;
};

inline SideChoice side_for(ScaleMode mode, const MarkerSpec& m) {
  switch (mode) {
    case ScaleMode::by_side_a: return {Corner::a, Corner::b, m.side_a};
    case ScaleMode::by_side_b: return {Corner::b, Corner::c, m.side_b};
    case ScaleMode::by_side_c: return {Corner::c, Corner::d, m.side_c};
    case ScaleMode::by_side_d: return {Corner::d, Corner::a, m.side_d};
    // width from corners 2,3 and height from corners 0,3
    case ScaleMode::by_width: return {Corner::c, Corner::d, m.side_c};
    case ScaleMode::by_height: return {Corner::a, Corner::d, m.side_d};
  }
  return {Corner::a, Corner::b, m.side_a};
}

}  // namespace detail

/// Scales a rectified quad so the chosen side has its physical length.
/// Returns the scaled quad and the factor u.
inline std::pair<Quad3, double> scale_to_marker(const Quad3& quad, const MarkerSpec& marker, ScaleMode mode) {
  validate(marker);
  const detail::SideChoice side = detail::side_for(mode, marker);
  const double observed = norm(quad[side.to] - quad[side.from]);
  if (!(observed > kDegenerateNorm)) {
    throw Error(ErrorKind::degenerate_side, std::string("side ") + corner_name(side.from) +
                                                corner_name(side.to) + " has zero observed length");
  }
  const double u = side.length / observed;
  return {quad.map([u](const Vec3& p) { return u * p; }), u};
}

/// Camera origin expressed in the marker frame anchored at corner D.
inline Vec3 camera_position(const PoseMatrix& pose, const Vec3& marker_origin_cam) {
  return {-dot(marker_origin_cam, pose.x_axis), -dot(marker_origin_cam, pose.y_axis),
          -dot(marker_origin_cam, pose.z_axis)};
}

struct ReconstructOptions {
  Corner reference = Corner::c;
  ScaleMode scale = ScaleMode::by_side_a;
};

/// Full metric pipeline: plane intersection, scaling, camera position.
inline ReconstructedScene reconstruct(const Quad3& incidents, const PoseMatrix& pose, const MarkerSpec& marker,
                                      const ReconstructOptions& options = {}) {
  const Quad3 rectified = rectify3d(incidents, pose, options.reference);
  auto [points, u] = scale_to_marker(rectified, marker, options.scale);
  const Vec3 camera = camera_position(pose, points.d);
  return {points, u, camera};
}

}  // namespace quadpose
