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

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "quadpose/error.hpp"

namespace quadpose {

/// Vectors shorter than this cannot be normalized.
inline constexpr double kDegenerateNorm = 1e-12;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Vec3 operator*(const Vec3& a, double s) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

/// z component of the 3D cross product of (a, 0) and (b, 0).
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

constexpr Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }
inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

constexpr Vec2 xy(const Vec3& v) { return {v.x, v.y}; }

/// Lifts a 2D point onto the plane z = 1.
constexpr Vec3 lift(Vec2 p) { return {p.x, p.y, 1.0}; }

/// A direction of unit Euclidean length. Only obtainable through normalize().
class UnitVec3 {
 public:
  constexpr const Vec3& vec() const { return v_; }
  constexpr operator const Vec3&() const { return v_; }  // NOLINT(google-explicit-constructor)
  constexpr double x() const { return v_.x; }
  constexpr double y() const { return v_.y; }
  constexpr double z() const { return v_.z; }

  friend constexpr UnitVec3 operator-(const UnitVec3& u) { return UnitVec3(-u.v_); }
  friend constexpr bool operator==(const UnitVec3&, const UnitVec3&) = default;

 private:
  friend UnitVec3 normalize(const Vec3& v);
  constexpr explicit UnitVec3(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

inline UnitVec3 normalize(const Vec3& v) {
  const double n = norm(v);
  if (!(n > kDegenerateNorm) || !std::isfinite(n)) {
    throw Error(ErrorKind::degenerate_vector, "cannot normalize a vector of length " + std::to_string(n));
  }
  return UnitVec3(v / n);
}

/// Scalar triple product a x b . c.
constexpr double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(cross(a, b), c); }

/// Three visual-sphere directions lie on one great circle (project onto one
/// image line) iff their triple product vanishes.
inline bool coplanar_on_sphere(const UnitVec3& a, const UnitVec3& b, const UnitVec3& c, double tol) {
  return std::abs(triple(a, b, c)) <= tol;
}

enum class Corner { a = 0, b = 1, c = 2, d = 3 };

inline constexpr std::array<Corner, 4> kCorners = {Corner::a, Corner::b, Corner::c, Corner::d};

constexpr char corner_name(Corner c) { return "ABCD"[static_cast<std::size_t>(c)]; }

/// Four corners ordered clockwise from the top-left: A top-left, B top-right,
/// C bottom-right, D bottom-left.
template <class V>
struct Quad {
  V a{};
  V b{};
  V c{};
  V d{};

  constexpr V& operator[](std::size_t i) { return i == 0 ? a : i == 1 ? b : i == 2 ? c : d; }
  constexpr const V& operator[](std::size_t i) const {
    return i == 0 ? a : i == 1 ? b : i == 2 ? c : d;
  }
  constexpr V& operator[](Corner k) { return (*this)[static_cast<std::size_t>(k)]; }
  constexpr const V& operator[](Corner k) const { return (*this)[static_cast<std::size_t>(k)]; }

  template <class F>
  constexpr auto map(F&& f) const -> Quad<decltype(f(a))> {
    return {f(a), f(b), f(c), f(d)};
  }

  friend constexpr bool operator==(const Quad&, const Quad&) = default;
};

using Quad2 = Quad<Vec2>;
using Quad3 = Quad<Vec3>;

/// Throws unless every corner is finite and no two corners coincide.
inline void validate(const Quad2& q) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!is_finite(q[i])) {
      throw Error(ErrorKind::invalid_input, std::string("corner ") + "ABCD"[i] + " is not finite");
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (!(norm(q[i] - q[j]) > kDegenerateNorm)) {
        throw Error(ErrorKind::degenerate_quad,
                    std::string("corners ") + "ABCD"[i] + " and " + "ABCD"[j] + " coincide");
      }
    }
  }
}

/// Throws unless every corner is finite and nonzero.
inline void validate(const Quad3& q) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!is_finite(q[i])) {
      throw Error(ErrorKind::invalid_input, std::string("corner ") + "ABCD"[i] + " is not finite");
    }
    if (!(norm(q[i]) > kDegenerateNorm)) {
      throw Error(ErrorKind::degenerate_vector, std::string("corner ") + "ABCD"[i] + " is the zero vector");
    }
  }
}

}  // namespace quadpose
