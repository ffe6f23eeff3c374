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

#include <gtest/gtest.h>

#include <cmath>

#include "quadpose/linalg.hpp"
#include "test_support.hpp"

namespace quadpose {
namespace {

using testing::Gen;

TEST(Cross, BasisVectors) {
  EXPECT_EQ(cross(Vec3{1, 0, 0}, Vec3{0, 1, 0}), (Vec3{0, 0, 1}));
  EXPECT_EQ(cross(Vec3{2, 0, 0}, Vec3{2, 0, 0}), (Vec3{0, 0, 0}));
  // hand-expanded determinant
  EXPECT_EQ(cross(Vec3{0, 0, 1}, Vec3{1, 1, 1}), (Vec3{-1, 1, 0}));
}

TEST(Cross, AnticommutativeAndOrthogonal) {
  Gen gen(11);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 u = gen.vec3(-1, 1);
    const Vec3 v = gen.vec3(-1, 1);
    EXPECT_EQ(cross(u, v), -cross(v, u));
    EXPECT_LE(std::abs(dot(cross(u, v), u)), 1e-12 * dot(u, u) * norm(v));
  }
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize({0, 0, 2}).vec(), (Vec3{0, 0, 1}));
  const UnitVec3 u = normalize({3, 4, 0});
  EXPECT_NEAR(u.x(), 0.6, 1e-15);
  EXPECT_NEAR(u.y(), 0.8, 1e-15);
  EXPECT_EQ(u.z(), 0.0);
}

TEST(Normalize, RejectsNearZero) {
  try {
    (void)normalize({1e-15, 0, 0});
    FAIL() << "expected degenerate-vector error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_vector);
  }
  EXPECT_THROW((void)normalize({0, 0, 0}), Error);
  EXPECT_THROW((void)normalize({NAN, 0, 1}), Error);
}

TEST(Normalize, Idempotent) {
  Gen gen(12);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = gen.vec3(-100, 100);
    const UnitVec3 once = normalize(v);
    const UnitVec3 twice = normalize(once);
    EXPECT_LE(testing::max_abs_diff(once, twice), 1e-15);
    EXPECT_NEAR(norm(once), 1.0, 1e-15);
  }
}

TEST(TripleProduct, CyclicSymmetry) {
  Gen gen(13);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a = gen.unit(), b = gen.unit(), c = gen.unit();
    EXPECT_NEAR(triple(a, b, c), triple(b, c, a), 1e-12);
  }
}

TEST(CoplanarOnSphere, Examples) {
  const double h = std::sqrt(2.0) / 2.0;
  EXPECT_TRUE(coplanar_on_sphere(normalize({1, 0, 0}), normalize({0, 1, 0}), normalize({h, h, 0}), 1e-12));
  EXPECT_FALSE(coplanar_on_sphere(normalize({1, 0, 0}), normalize({0, 1, 0}), normalize({0, 0, 1}), 1e-12));
}

TEST(CoplanarOnSphere, BisectorLiesOnGreatCircle) {
  Gen gen(14);
  int checked = 0;
  while (checked < 1000) {
    const UnitVec3 a = normalize(gen.unit());
    const UnitVec3 b = normalize(gen.unit());
    if (norm(a.vec() + b.vec()) < 1e-6) continue;
    EXPECT_TRUE(coplanar_on_sphere(a, b, normalize(a.vec() + b.vec()), 1e-12));
    ++checked;
  }
}

TEST(QuadValidation, RejectsCoincidentCorners) {
  const Quad2 ok{{-1, 1}, {1, 1}, {1, -1}, {-1, -1}};
  EXPECT_NO_THROW(validate(ok));
  Quad2 bad = ok;
  bad.c = bad.a;
  try {
    validate(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_quad);
  }
  Quad3 zero{{1, 0, 1}, {0, 1, 1}, {0, 0, 0}, {1, 1, 1}};
  EXPECT_THROW(validate(zero), Error);
}

TEST(Quad, IndexingFollowsCornerOrder) {
  Quad2 q{{1, 0}, {2, 0}, {3, 0}, {4, 0}};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(q[i].x, static_cast<double>(i + 1));
  EXPECT_EQ(q[Corner::c].x, 3.0);
  EXPECT_EQ(corner_name(Corner::d), 'D');
}

}  // namespace
}  // namespace quadpose
