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

// Synthetic ground truth: random marker scenes, their projections, and
// end-to-end scoring of every solver against the truth.
//
// Randomness comes from std::mt19937_64 seeded with the caller's seed, one
// fresh engine per call, so each (seed, config) maps to one fixed stream.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>

#include "quadpose/camera.hpp"
#include "quadpose/error.hpp"
#include "quadpose/focal.hpp"
#include "quadpose/linalg.hpp"
#include "quadpose/pose.hpp"
#include "quadpose/reconstruction.hpp"
#include "quadpose/rectify.hpp"

namespace quadpose {

/// Proper rotation stored as the images of the marker's basis vectors.
struct Rotation {
  Vec3 x{1.0, 0.0, 0.0};
  Vec3 y{0.0, 1.0, 0.0};
  Vec3 z{0.0, 0.0, 1.0};

  Vec3 apply(const Vec3& v) const { return v.x * x + v.y * y + v.z * z; }
  Vec3 apply_transpose(const Vec3& v) const { return {dot(x, v), dot(y, v), dot(z, v)}; }

  friend bool operator==(const Rotation&, const Rotation&) = default;
};

/// Rotation by angle (radians) about a unit axis.
inline Rotation axis_angle(const Vec3& axis, double angle) {
  const Vec3 k = normalize(axis);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  auto rotate = [&](const Vec3& v) { return c * v + s * cross(k, v) + (1.0 - c) * dot(k, v) * k; };
  return {rotate({1.0, 0.0, 0.0}), rotate({0.0, 1.0, 0.0}), rotate({0.0, 0.0, 1.0})};
}

inline Rotation compose(const Rotation& outer, const Rotation& inner) {
  return {outer.apply(inner.x), outer.apply(inner.y), outer.apply(inner.z)};
}

/// Angle of the relative rotation between two frames given as columns.
/// Uses atan2 so angles far below sqrt(epsilon) stay resolvable.
inline double rotation_angle_between(const Rotation& p, const Rotation& q) {
  // M = P^T Q
  const double m[3][3] = {{dot(p.x, q.x), dot(p.x, q.y), dot(p.x, q.z)},
                          {dot(p.y, q.x), dot(p.y, q.y), dot(p.y, q.z)},
                          {dot(p.z, q.x), dot(p.z, q.y), dot(p.z, q.z)}};
  const double cos_term = 0.5 * (m[0][0] + m[1][1] + m[2][2] - 1.0);
  const double sin_term =
      0.5 * std::sqrt((m[2][1] - m[1][2]) * (m[2][1] - m[1][2]) + (m[0][2] - m[2][0]) * (m[0][2] - m[2][0]) +
                      (m[1][0] - m[0][1]) * (m[1][0] - m[0][1]));
  return std::atan2(sin_term, cos_term);
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

enum class ModelKind { rectilinear, fisheye };

enum class TiltMode {
  cap,        // normal uniform over the spherical cap of half-angle tilt, then roll
  yaw_pitch,  // yaw about camera y, then pitch about camera x, then roll
};

struct SceneConfig {
  ModelKind model = ModelKind::rectilinear;
  Range aov_deg{30.0, 150.0};
  AovAxis axis = AovAxis::vertical;
  double image_aspect = 4.0 / 3.0;

  TiltMode tilt_mode = TiltMode::cap;
  Range tilt_deg{0.0, 75.0};
  Range roll_deg{-30.0, 30.0};
  Range yaw_deg{0.0, 0.0};    // magnitudes; the sign is random
  Range pitch_deg{0.0, 0.0};  // magnitudes; the sign is random

  Range distance{2.0, 20.0};  // camera to marker center, in marker widths
  Range center_tex{0.3, 0.7};  // texture-coordinate box holding the marker center's ray
  double marker_width = 1.0;
  Range marker_aspect{1.0, 1.0};
  Range corner_angle_deg{90.0, 90.0};

  /// Minimum cosine between every corner's ray and the marker normal; keeps
  /// the marker front-facing and away from grazing views.
  double min_facing_cos = 0.1;
  bool require_behind_corner = false;  // at least one incident with z < 0
};

struct SceneTruth {
  MarkerSpec marker;
  double corner_angle = std::numbers::pi / 2;  // interior angle at D, radians
  Rotation marker_to_camera;
  Vec3 translation;  // camera-frame position of the marker origin (corner D)
  CameraModel camera;
  std::optional<double> focal_equivalent;  // z-plane focal; rectilinear only
};

/// Corners in the marker frame: D at the origin, C on +x, A towards +y.
inline Quad3 marker_corners(const MarkerSpec& marker, double corner_angle) {
  const Vec3 d{0.0, 0.0, 0.0};
  const Vec3 c{marker.side_c, 0.0, 0.0};
  const Vec3 a{marker.side_d * std::cos(corner_angle), marker.side_d * std::sin(corner_angle), 0.0};
  const Vec3 b = a + Vec3{marker.side_a, 0.0, 0.0};
  return {a, b, c, d};
}

inline Quad3 camera_corners(const SceneTruth& truth) {
  return marker_corners(truth.marker, truth.corner_angle).map([&](const Vec3& p) {
    return truth.marker_to_camera.apply(p) + truth.translation;
  });
}

/// Marker x (along D->C), unit y (along D->A) and normal, in the camera frame.
inline Rotation true_axes(const SceneTruth& truth) {
  const Rotation& r = truth.marker_to_camera;
  return {r.x, std::cos(truth.corner_angle) * r.x + std::sin(truth.corner_angle) * r.y, r.z};
}

/// Camera origin in the marker frame, using the same dot-product convention
/// as camera_position().
inline Vec3 true_camera_in_marker(const SceneTruth& truth) {
  const Rotation axes = true_axes(truth);
  return -axes.apply_transpose(truth.translation);
}

struct ProjectedMarker {
  Quad3 incidents;  // unit directions
  std::array<TexCoord, 4> texcoords;
  /// Rectilinear: corners on the plane z = focal_equivalent. Fisheye: the
  /// gnomonic image on z = 1, absent when any corner has z <= 0.
  std::optional<Quad2> image;
};

inline ProjectedMarker project_marker(const SceneTruth& truth) {
  const Quad3 corners = camera_corners(truth);
  ProjectedMarker out;
  for (std::size_t i = 0; i < 4; ++i) {
    out.incidents[i] = normalize(corners[i]);
    out.texcoords[i] = project(truth.camera, corners[i]);
  }
  if (corners.a.z > 0.0 && corners.b.z > 0.0 && corners.c.z > 0.0 && corners.d.z > 0.0) {
    const double plane = truth.focal_equivalent.value_or(1.0);
    out.image = corners.map([plane](const Vec3& p) { return xy(p) * (plane / p.z); });
  }
  return out;
}

/// Adds independent zero-mean Gaussian noise of standard deviation sigma to
/// every coordinate.
inline Quad2 perturb(const Quad2& image, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error(ErrorKind::invalid_input, "sigma must be non-negative");
  if (sigma == 0.0) return image;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  Quad2 out = image;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i].x += noise(rng);
    out[i].y += noise(rng);
  }
  return out;
}

namespace detail {

inline double uniform(std::mt19937_64& rng, Range r) {
  if (r.hi <= r.lo) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

inline double signed_magnitude(std::mt19937_64& rng, Range r) {
  const double m = uniform(rng, r);
  return std::bernoulli_distribution(0.5)(rng) ? m : -m;
}

inline void validate(const SceneConfig& c) {
  const auto ordered = [](Range r) { return std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi; };
  for (Range r : {c.aov_deg, c.tilt_deg, c.roll_deg, c.yaw_deg, c.pitch_deg, c.distance, c.center_tex,
                  c.marker_aspect, c.corner_angle_deg}) {
    if (!ordered(r)) throw Error(ErrorKind::invalid_input, "scene config ranges must satisfy lo <= hi");
  }
  if (!(c.distance.lo > 0.0) || !(c.marker_aspect.lo > 0.0) || !(c.marker_width > 0.0) ||
      !(c.image_aspect > 0.0)) {
    throw Error(ErrorKind::invalid_input, "scene distances, aspects and sizes must be positive");
  }
  if (!(c.corner_angle_deg.lo > 0.0 && c.corner_angle_deg.hi < 180.0)) {
    throw Error(ErrorKind::invalid_input, "corner angle must lie in (0, 180) degrees");
  }
  if (c.center_tex.lo < 0.0 || c.center_tex.hi > 1.0) {
    throw Error(ErrorKind::invalid_input, "marker center texture range must lie in [0, 1]");
  }
}

inline Rotation sample_rotation(std::mt19937_64& rng, const SceneConfig& c) {
  const double roll = deg2rad(uniform(rng, c.roll_deg));
  const Rotation in_plane = axis_angle({0.0, 0.0, 1.0}, roll);
  if (c.tilt_mode == TiltMode::yaw_pitch) {
    const double yaw = deg2rad(signed_magnitude(rng, c.yaw_deg));
    const double pitch = deg2rad(signed_magnitude(rng, c.pitch_deg));
    return compose(axis_angle({1.0, 0.0, 0.0}, pitch), compose(axis_angle({0.0, 1.0, 0.0}, yaw), in_plane));
  }
  // uniform in area over the cap: cos(tilt) uniform
  const double cos_tilt =
      uniform(rng, {std::cos(deg2rad(c.tilt_deg.hi)), std::cos(deg2rad(c.tilt_deg.lo))});
  const double tilt = std::acos(std::clamp(cos_tilt, -1.0, 1.0));
  const double azimuth = uniform(rng, {0.0, 2.0 * std::numbers::pi});
  if (tilt == 0.0) return in_plane;
  const Vec3 axis{-std::sin(azimuth), std::cos(azimuth), 0.0};  // e_z x n direction
  return compose(axis_angle(axis, tilt), in_plane);
}

}  // namespace detail

inline constexpr int kMaxSceneAttempts = 1000;

/// Deterministic random scene for (seed, config). Rejection-samples until all
/// corners are inside the picture and facing the camera.
inline SceneTruth generate_scene(std::uint64_t seed, const SceneConfig& config) {
  detail::validate(config);
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kMaxSceneAttempts; ++attempt) {
    SceneTruth truth;
    const double aov = detail::uniform(rng, config.aov_deg);
    if (config.model == ModelKind::rectilinear) {
      truth.camera = Rectilinear{aov, config.axis, config.image_aspect};
      truth.focal_equivalent = 1.0 / std::tan(0.5 * deg2rad(aov));
    } else {
      truth.camera = EquidistantFisheye{aov, config.image_aspect};
    }
    validate(truth.camera);

    const double width = config.marker_width;
    const double height = width / detail::uniform(rng, config.marker_aspect);
    truth.marker = MarkerSpec::rectangle(width, height);
    truth.corner_angle = deg2rad(detail::uniform(rng, config.corner_angle_deg));
    truth.marker_to_camera = detail::sample_rotation(rng, config);

    const TexCoord center_tex{detail::uniform(rng, config.center_tex), detail::uniform(rng, config.center_tex)};
    const UnitVec3 center_dir = normalize(incident(truth.camera, center_tex));
    const double distance = detail::uniform(rng, config.distance) * width;
    const Quad3 local = marker_corners(truth.marker, truth.corner_angle);
    const Vec3 local_center = 0.5 * (local.a + local.c);
    truth.translation = distance * center_dir.vec() - truth.marker_to_camera.apply(local_center);

    const Quad3 corners = camera_corners(truth);
    bool accepted = true;
    bool behind = false;
    for (std::size_t i = 0; i < 4 && accepted; ++i) {
      const UnitVec3 ray = normalize(corners[i]);
      if (dot(ray, truth.marker_to_camera.z) < config.min_facing_cos) accepted = false;
      if (ray.z() < 0.0) behind = true;
      try {
        const TexCoord f = project(truth.camera, corners[i]);
        if (!(f.s >= 0.0 && f.s <= 1.0 && f.t >= 0.0 && f.t <= 1.0)) accepted = false;
      } catch (const Error&) {
        accepted = false;
      }
    }
    if (config.require_behind_corner && !behind) accepted = false;
    if (accepted) return truth;
  }
  throw Error(ErrorKind::infeasible_config,
              "no valid scene after " + std::to_string(kMaxSceneAttempts) + " attempts");
}

struct RoundTripReport {
  std::optional<double> pose_angle_error;      // radians
  std::optional<double> corner_error_rel;      // max corner error / marker diagonal
  std::optional<double> camera_pos_error_rel;  // / camera distance
  std::optional<double> focal_error_rel;       // absent without a focal estimate
  std::optional<double> rectified_angle_error;  // radians; rectilinear scenes only
  std::optional<std::string> failure;          // solver error, when one occurred
};

namespace detail {

/// Orthonormal frame from a pose: x kept, z kept, y = z x x.
inline Rotation orthonormal_frame(const Vec3& x, const Vec3& z) {
  const UnitVec3 ux = normalize(x);
  const UnitVec3 uz = normalize(z);
  return {ux, normalize(cross(uz, ux)), uz};
}

inline double max_right_angle_error(const Quad2& q) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2 prev = q[(i + 3) % 4] - q[i];
    const Vec2 next = q[(i + 1) % 4] - q[i];
    const double angle = std::atan2(std::abs(cross(prev, next)), dot(prev, next));
    worst = std::max(worst, std::abs(angle - std::numbers::pi / 2));
  }
  return worst;
}

}  // namespace detail

/// Largest deviation of the quad's interior angles from a right angle.
inline double max_right_angle_error(const Quad2& q) { return detail::max_right_angle_error(q); }

/// Runs every solver on the (optionally perturbed) projection of a scene and
/// scores the results against the truth. Solver errors land in
/// report.failure instead of propagating.
inline RoundTripReport roundtrip(const SceneTruth& truth, double sigma, std::uint64_t seed) {
  RoundTripReport report;
  try {
    const ProjectedMarker projected = project_marker(truth);
    const bool rectilinear = std::holds_alternative<Rectilinear>(truth.camera);

    Quad3 incidents = projected.incidents;
    std::optional<Quad2> image;
    if (rectilinear) {
      const double focal = *truth.focal_equivalent;
      image = perturb(*projected.image, sigma, seed);
      incidents = image->map([focal](Vec2 p) { return Vec3{p.x, p.y, focal}; });
    } else if (sigma > 0.0) {
      const double aspect = picture_aspect(truth.camera);
      Quad2 picture;
      for (std::size_t i = 0; i < 4; ++i) picture[i] = centered_from_texcoord(projected.texcoords[i], aspect);
      picture = perturb(picture, sigma, seed);
      incidents = picture.map([&](Vec2 p) { return incident(truth.camera, texcoord_from_centered(p, aspect)); });
    }

    const PoseMatrix pose = pose_from_incidents(incidents);
    const Rotation truth_axes = true_axes(truth);
    report.pose_angle_error = rotation_angle_between(detail::orthonormal_frame(pose.x_axis, pose.z_axis),
                                                     detail::orthonormal_frame(truth_axes.x, truth_axes.z));

    const ReconstructedScene scene = reconstruct(incidents, pose, truth.marker);
    const Quad3 truth_corners = camera_corners(truth);
    const double diagonal = std::max(norm(truth_corners.a - truth_corners.c), norm(truth_corners.b - truth_corners.d));
    double corner_error = 0.0;
    for (std::size_t i = 0; i < 4; ++i) corner_error = std::max(corner_error, norm(scene.points[i] - truth_corners[i]));
    report.corner_error_rel = corner_error / diagonal;

    const Vec3 truth_camera = true_camera_in_marker(truth);
    report.camera_pos_error_rel = norm(scene.camera_in_marker - truth_camera) / norm(truth_camera);

    if (rectilinear) {
      const FocalEstimate focal = estimate_focal_from_quad(*image);
      if (focal.focal > 0.0) {
        report.focal_error_rel = std::abs(focal.focal - *truth.focal_equivalent) / *truth.focal_equivalent;
      }
      const RectifyMatrix m = rectification_matrix(*image);
      report.rectified_angle_error = detail::max_right_angle_error(rectify_quad(*image, m));
    }
  } catch (const Error& e) {
    report.failure = e.what();
  }
  return report;
}

/// One CSV row: seed,sigma,pose_err,corner_err,campos_err,focal_err,rect_angle_err
inline std::string csv_row(std::uint64_t seed, double sigma, const RoundTripReport& r) {
  std::ostringstream out;
  out.precision(17);
  const auto field = [&out](const std::optional<double>& v) {
    out << ',';
    if (v) {
      out << *v;
    } else {
      out << "NA";
    }
  };
  out << seed << ',' << sigma;
  field(r.pose_angle_error);
  field(r.corner_error_rel);
  field(r.camera_pos_error_rel);
  field(r.focal_error_rel);
  field(r.rectified_angle_error);
  return out.str();
}

inline constexpr const char* kCsvHeader = "seed,sigma,pose_err,corner_err,campos_err,focal_err,rect_angle_err";

}  // namespace quadpose
