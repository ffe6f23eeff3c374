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

// Picture-plane coordinates to visual-sphere incident vectors.
//
// Texture coordinates (s, t) span [0, 1]^2 over the picture with t = 0 on the
// bottom edge. The camera frame has x to the right, y up and z along the
// optical axis.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "quadpose/error.hpp"
#include "quadpose/linalg.hpp"

namespace quadpose {

struct TexCoord {
  double s = 0.5;
  double t = 0.5;
  friend constexpr bool operator==(TexCoord, TexCoord) = default;
};

enum class AovAxis { horizontal, diagonal, vertical };

struct Rectilinear {
  double aov_degrees = 90.0;
  AovAxis axis = AovAxis::horizontal;
  double aspect = 1.0;
};

/// Equidistant fisheye: the angle from the optical axis grows linearly with
/// image radius, reaching aov_degrees / 2 at the picture's diagonal corner.
struct EquidistantFisheye {
  double aov_degrees = 180.0;
  double aspect = 1.0;
};

enum class Sampling { nearest, bilinear };

/// Sampled incident-vector map. Cells are row-major from the top-left cell,
/// so row 0 covers the top of the picture (largest t).
class VectorMapGrid {
 public:
  VectorMapGrid(std::size_t width, std::size_t height, std::vector<Vec3> cells, Sampling sampling)
      : width_(width), height_(height), sampling_(sampling),
        cells_(std::make_shared<const std::vector<Vec3>>(std::move(cells))) {
    if (width_ < 1 || height_ < 1) {
      throw Error(ErrorKind::invalid_input, "vector map must be at least 1x1");
    }
    if (cells_->size() != width_ * height_) {
      throw Error(ErrorKind::invalid_input, "vector map has " + std::to_string(cells_->size()) +
                                                " cells, expected " + std::to_string(width_ * height_));
    }
    for (const Vec3& c : *cells_) {
      if (!is_finite(c)) throw Error(ErrorKind::invalid_input, "vector map cell is not finite");
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  Sampling sampling() const { return sampling_; }
  const Vec3& cell(std::size_t col, std::size_t row) const { return (*cells_)[row * width_ + col]; }

  /// Texture coordinate of the center of a cell.
  TexCoord cell_center(std::size_t col, std::size_t row) const {
    return {(static_cast<double>(col) + 0.5) / static_cast<double>(width_),
            1.0 - (static_cast<double>(row) + 0.5) / static_cast<double>(height_)};
  }

 private:
  std::size_t width_;
  std::size_t height_;
  Sampling sampling_;
  std::shared_ptr<const std::vector<Vec3>> cells_;
};

struct VectorMap {
  VectorMapGrid grid;
};

using CameraModel = std::variant<Rectilinear, EquidistantFisheye, VectorMap>;

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline void validate(const Rectilinear& m) {
  if (!(m.aov_degrees > 0.0 && m.aov_degrees < 180.0)) {
    throw Error(ErrorKind::invalid_input, "rectilinear angle of view must lie in (0, 180) degrees");
  }
  if (!(m.aspect > 0.0) || !std::isfinite(m.aspect)) {
    throw Error(ErrorKind::invalid_input, "aspect ratio must be positive");
  }
}

inline void validate(const EquidistantFisheye& m) {
  if (!(m.aov_degrees > 0.0 && m.aov_degrees < 360.0)) {
    throw Error(ErrorKind::invalid_input, "fisheye angle of view must lie in (0, 360) degrees");
  }
  if (!(m.aspect > 0.0) || !std::isfinite(m.aspect)) {
    throw Error(ErrorKind::invalid_input, "aspect ratio must be positive");
  }
}

inline void validate(const VectorMap&) {}  // checked at grid construction

inline void validate(const CameraModel& model) {
  std::visit([](const auto& m) { validate(m); }, model);
}

/// Rectilinear incident vector. The z component is cot(aov / 2) for every f.
inline Vec3 incident_rectilinear(TexCoord f, const Rectilinear& model) {
  Vec3 g{2.0 * f.s - 1.0, 2.0 * f.t - 1.0, 1.0 / std::tan(0.5 * deg2rad(model.aov_degrees))};
  const double a = model.aspect;
  switch (model.axis) {
    case AovAxis::horizontal:
      g.y /= a;
      break;
    case AovAxis::diagonal: {
      const double diag = std::sqrt(a * a + 1.0);
      g.x = a * g.x / diag;
      g.y /= diag;
      break;
    }
    case AovAxis::vertical:
      g.x *= a;
      break;
  }
  return g;
}

inline UnitVec3 incident_fisheye(TexCoord f, const EquidistantFisheye& model) {
  const double u = model.aspect * (2.0 * f.s - 1.0);
  const double v = 2.0 * f.t - 1.0;
  const double radius = std::hypot(u, v) / std::hypot(model.aspect, 1.0);
  const double theta = radius * 0.5 * deg2rad(model.aov_degrees);
  const double phi = std::atan2(v, u);
  return normalize({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
}

/// Samples the map without renormalizing the result.
inline Vec3 sample_vector_map(const VectorMapGrid& grid, TexCoord f) {
  if (!(f.s >= 0.0 && f.s <= 1.0 && f.t >= 0.0 && f.t <= 1.0)) {
    throw Error(ErrorKind::out_of_range, "texture coordinate outside [0,1]^2");
  }
  const auto w = static_cast<double>(grid.width());
  const auto h = static_cast<double>(grid.height());
  // continuous cell coordinates, cell centers at integers
  const double col = f.s * w - 0.5;
  const double row = (1.0 - f.t) * h - 0.5;

  if (grid.sampling() == Sampling::nearest) {
    const auto c = static_cast<std::size_t>(std::clamp(std::floor(f.s * w), 0.0, w - 1.0));
    const auto r = static_cast<std::size_t>(std::clamp(std::floor((1.0 - f.t) * h), 0.0, h - 1.0));
    return grid.cell(c, r);
  }

  const double cx = std::clamp(col, 0.0, w - 1.0);
  const double cy = std::clamp(row, 0.0, h - 1.0);
  const auto c0 = static_cast<std::size_t>(std::floor(cx));
  const auto r0 = static_cast<std::size_t>(std::floor(cy));
  const std::size_t c1 = std::min(c0 + 1, grid.width() - 1);
  const std::size_t r1 = std::min(r0 + 1, grid.height() - 1);
  const double fx = cx - static_cast<double>(c0);
  const double fy = cy - static_cast<double>(r0);
  const Vec3 top = (1.0 - fx) * grid.cell(c0, r0) + fx * grid.cell(c1, r0);
  const Vec3 bottom = (1.0 - fx) * grid.cell(c0, r1) + fx * grid.cell(c1, r1);
  return (1.0 - fy) * top + fy * bottom;
}

inline Vec3 incident(const CameraModel& model, TexCoord f) {
  struct Visitor {
    TexCoord f;
    Vec3 operator()(const Rectilinear& m) const { return incident_rectilinear(f, m); }
    Vec3 operator()(const EquidistantFisheye& m) const { return incident_fisheye(f, m); }
    Vec3 operator()(const VectorMap& m) const { return sample_vector_map(m.grid, f); }
  };
  return std::visit(Visitor{f}, model);
}

inline TexCoord project(const Rectilinear& model, const Vec3& dir) {
  if (!(dir.z > 0.0)) throw Error(ErrorKind::not_in_view, "direction is not in front of the image plane");
  const double focal = 1.0 / std::tan(0.5 * deg2rad(model.aov_degrees));
  const Vec2 g = xy(dir) * (focal / dir.z);
  const double a = model.aspect;
  Vec2 centered = g;  // the (2s - 1, 2t - 1) pair
  switch (model.axis) {
    case AovAxis::horizontal:
      centered.y = g.y * a;
      break;
    case AovAxis::diagonal: {
      const double diag = std::sqrt(a * a + 1.0);
      centered = {g.x * diag / a, g.y * diag};
      break;
    }
    case AovAxis::vertical:
      centered.x = g.x / a;
      break;
  }
  return {0.5 * (centered.x + 1.0), 0.5 * (centered.y + 1.0)};
}

inline TexCoord project(const EquidistantFisheye& model, const Vec3& dir) {
  const double half_aov = 0.5 * deg2rad(model.aov_degrees);
  const double lateral = std::hypot(dir.x, dir.y);
  const double theta = std::atan2(lateral, dir.z);
  if (!(theta < half_aov) || !(norm(dir) > kDegenerateNorm)) {
    throw Error(ErrorKind::not_in_view, "direction is outside the fisheye coverage");
  }
  if (lateral == 0.0) return {0.5, 0.5};
  const double radius = theta / half_aov * std::hypot(model.aspect, 1.0);
  const double u = radius * dir.x / lateral;
  const double v = radius * dir.y / lateral;
  return {0.5 * (u / model.aspect + 1.0), 0.5 * (v + 1.0)};
}

/// Inverse of incident(). The vector-map model has no closed-form inverse.
inline TexCoord project(const CameraModel& model, const Vec3& dir) {
  struct Visitor {
    const Vec3& dir;
    TexCoord operator()(const Rectilinear& m) const { return project(m, dir); }
    TexCoord operator()(const EquidistantFisheye& m) const { return project(m, dir); }
    TexCoord operator()(const VectorMap&) const {
      throw Error(ErrorKind::unsupported_model, "vector-map cameras cannot project directions");
    }
  };
  return std::visit(Visitor{dir}, model);
}

/// Picture aspect ratio of a model; vector maps report width / height of the grid.
inline double picture_aspect(const CameraModel& model) {
  struct Visitor {
    double operator()(const Rectilinear& m) const { return m.aspect; }
    double operator()(const EquidistantFisheye& m) const { return m.aspect; }
    double operator()(const VectorMap& m) const {
      return static_cast<double>(m.grid.width()) / static_cast<double>(m.grid.height());
    }
  };
  return std::visit(Visitor{}, model);
}

/// Centered picture coordinates span [-aspect, aspect] x [-1, 1], y up.
inline TexCoord texcoord_from_centered(Vec2 p, double aspect) {
  return {0.5 * (p.x / aspect + 1.0), 0.5 * (p.y + 1.0)};
}

inline Vec2 centered_from_texcoord(TexCoord f, double aspect) {
  return {aspect * (2.0 * f.s - 1.0), 2.0 * f.t - 1.0};
}

// Text format:
//   VMAP1 <width> <height> <nearest|bilinear>
//   <x> <y> <z>        (width * height lines, row-major from the top-left cell)
inline VectorMapGrid parse_vector_map(std::istream& in) {
  std::string magic;
  std::string sampling_name;
  long long width = 0;
  long long height = 0;
  if (!(in >> magic >> width >> height >> sampling_name) || magic != "VMAP1") {
    throw Error(ErrorKind::invalid_input, "vector map header must be 'VMAP1 <width> <height> <sampling>'");
  }
  if (width < 1 || height < 1) throw Error(ErrorKind::invalid_input, "vector map dimensions must be positive");
  Sampling sampling{};
  if (sampling_name == "nearest") {
    sampling = Sampling::nearest;
  } else if (sampling_name == "bilinear") {
    sampling = Sampling::bilinear;
  } else {
    throw Error(ErrorKind::invalid_input, "unknown vector map sampling '" + sampling_name + "'");
  }

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<Vec3> cells;
  cells.reserve(count);
  std::string line;
  std::getline(in, line);  // rest of the header line
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::string tx, ty, tz, extra;
    if (!(row >> tx >> ty >> tz) || (row >> extra)) {
      throw Error(ErrorKind::invalid_input, "vector map line " + std::to_string(cells.size() + 2) +
                                                " must hold exactly three reals");
    }
    Vec3 v{};
    try {
      std::size_t used = 0;
      v.x = std::stod(tx, &used);
      if (used != tx.size()) throw std::invalid_argument(tx);
      v.y = std::stod(ty, &used);
      if (used != ty.size()) throw std::invalid_argument(ty);
      v.z = std::stod(tz, &used);
      if (used != tz.size()) throw std::invalid_argument(tz);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::invalid_input, "vector map line " + std::to_string(cells.size() + 2) +
                                                " holds a malformed number");
    }
    if (!is_finite(v)) {
      throw Error(ErrorKind::invalid_input, "vector map line " + std::to_string(cells.size() + 2) +
                                                " is not finite");
    }
    cells.push_back(v);
  }
  if (cells.size() != count) {
    throw Error(ErrorKind::invalid_input, "vector map holds " + std::to_string(cells.size()) +
                                              " cells, header promises " + std::to_string(count));
  }
  return VectorMapGrid(static_cast<std::size_t>(width), static_cast<std::size_t>(height), std::move(cells),
                       sampling);
}

inline VectorMapGrid load_vector_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open vector map '" + path + "'");
  return parse_vector_map(in);
}

}  // namespace quadpose
