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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "quadpose_cli.hpp"

namespace quadpose::cli {
namespace {

const std::string kFixtures = QUADPOSE_FIXTURE_DIR;

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Outcome run_cli(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = run(args, in, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  return json::parse(f);
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-15 * std::max({1.0, std::abs(a), std::abs(b)}); }

void expect_vec(const json& j, const Vec3& v) {
  ASSERT_EQ(j.size(), 3u);
  EXPECT_TRUE(same(j[0].get<double>(), v.x) && same(j[1].get<double>(), v.y) && same(j[2].get<double>(), v.z))
      << j.dump() << " vs " << v.x << "," << v.y << "," << v.z;
}

void expect_vec(const json& j, Vec2 v) {
  ASSERT_EQ(j.size(), 2u);
  EXPECT_TRUE(same(j[0].get<double>(), v.x) && same(j[1].get<double>(), v.y)) << j.dump();
}

/// Library-side reading of a fixture, independent of the CLI helpers.
Quad2 fixture_quad(const json& doc) {
  const json& q = doc.at("quad");
  const auto p = [&q](const char* k) { return Vec2{q.at(k)[0].get<double>(), q.at(k)[1].get<double>()}; };
  return {p("a"), p("b"), p("c"), p("d")};
}

Quad3 fixture_incidents(const json& doc) {
  const json& c = doc.at("camera");
  CameraModel camera;
  if (c.at("model") == "rectilinear") {
    camera = Rectilinear{c.at("aov_deg").get<double>(), c.value("axis", "horizontal") == "vertical"
                                                            ? AovAxis::vertical
                                                            : AovAxis::horizontal,
                         c.value("aspect", 1.0)};
  } else {
    camera = EquidistantFisheye{c.at("aov_deg").get<double>(), c.value("aspect", 1.0)};
  }
  const double aspect = picture_aspect(camera);
  return fixture_quad(doc).map([&](Vec2 p) { return incident(camera, texcoord_from_centered(p, aspect)); });
}

TEST(CenterCoords, Examples) {
  const ImageFrame square{100, 100};
  EXPECT_EQ(center_coords({50, 50}, square), (Vec2{0, 0}));
  EXPECT_EQ(center_coords({100, 0}, square), (Vec2{1, 1}));
  EXPECT_EQ(center_coords({0, 100}, square), (Vec2{-1, -1}));
  const ImageFrame wide{640, 480};
  EXPECT_EQ(center_coords({320, 240}, wide), (Vec2{0, 0}));
  EXPECT_NEAR(center_coords({640, 480}, wide).x, 640.0 / 480.0, 1e-15);
  EXPECT_EQ(center_coords({640, 480}, wide).y, -1.0);
}

TEST(CenterCoords, RoundTrip) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 10000; ++n) {
    const ImageFrame frame{1 + static_cast<int>(u(rng) * 4000), 1 + static_cast<int>(u(rng) * 4000)};
    const Vec2 p{u(rng) * frame.width_px, u(rng) * frame.height_px};
    const Vec2 back = pixel_coords(center_coords(p, frame), frame);
    EXPECT_NEAR(back.x, p.x, 1e-12 * std::max(1.0, p.x));
    EXPECT_NEAR(back.y, p.y, 1e-12 * std::max(1.0, p.y));
  }
}

TEST(Cli, PoseFrontalSquare) {
  const Outcome o = run_cli({"pose", "--input", fixture("frontal_square.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const json pose = o.doc().at("pose");
  const Vec3 rows[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const char* keys[3] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double expected = j == 0 ? rows[i].x : j == 1 ? rows[i].y : rows[i].z;
      EXPECT_NEAR(pose.at(keys[i])[j].get<double>(), expected, 1e-9);
    }
  }
}

TEST(Cli, PoseReadsStdin) {
  std::ifstream f(fixture("frontal_square.json"));
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  const Outcome a = run_cli({"pose", "--input", "-"}, text);
  const Outcome b = run_cli({"pose", "--input", fixture("frontal_square.json")});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, PoseMatchesLibrary) {
  for (const char* name : {"tilted_rectilinear.json", "fisheye_wide.json"}) {
    const Outcome o = run_cli({"pose", "--input", fixture(name)});
    ASSERT_EQ(o.code, 0) << name << ": " << o.err;
    const PoseMatrix p = pose_from_incidents(fixture_incidents(read_json(fixture(name))));
    const json pose = o.doc().at("pose");
    expect_vec(pose.at("x"), p.x_axis);
    expect_vec(pose.at("y"), p.y_axis);
    expect_vec(pose.at("z"), p.z_axis);
  }
}

TEST(Cli, ReconstructMatchesLibrary) {
  const Outcome o =
      run_cli({"reconstruct", "--input", fixture("tilted_rectilinear.json"), "--marker", fixture("marker_square.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const Quad3 incidents = fixture_incidents(read_json(fixture("tilted_rectilinear.json")));
  const PoseMatrix pose = pose_from_incidents(incidents);
  const ReconstructedScene scene = reconstruct(incidents, pose, MarkerSpec::square(0.2));
  const json doc = o.doc();
  EXPECT_TRUE(same(doc.at("scale").get<double>(), scene.scale_u));
  expect_vec(doc.at("camera_position"), scene.camera_in_marker);
  expect_vec(doc.at("corners").at("a"), scene.points.a);
  expect_vec(doc.at("corners").at("d"), scene.points.d);
}

TEST(Cli, ReconstructOptions) {
  const std::string input = fixture("tilted_rectilinear.json");
  const std::string marker = R"({"sides":[0.2,0.1,0.2,0.1]})";
  const Outcome o = run_cli({"reconstruct", "--input", input, "--marker", marker, "--reference", "A", "--scale-by",
                             "height"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Quad3 incidents = fixture_incidents(read_json(input));
  const ReconstructedScene scene = reconstruct(incidents, pose_from_incidents(incidents),
                                               MarkerSpec::rectangle(0.2, 0.1), {Corner::a, ScaleMode::by_height});
  EXPECT_TRUE(same(o.doc().at("scale").get<double>(), scene.scale_u));
  EXPECT_EQ(run_cli({"reconstruct", "--input", input, "--marker", marker, "--reference", "E"}).code, 2);
  EXPECT_EQ(run_cli({"reconstruct", "--input", input}).code, 2);  // --marker is required
}

TEST(Cli, RectifyMatchesLibrary) {
  const std::string input = fixture("tilted_rectilinear.json");
  const Outcome o = run_cli({"rectify", "--input", input, "--marker-aspect", "1.5", "--points", "[[0.1,0.05]]"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Quad2 q = fixture_quad(read_json(input));
  const RectifyMatrix m = rectification_matrix(q);
  const double k = aspect_correction_factor(m, q, 1.5);
  const json doc = o.doc();
  expect_vec(doc.at("matrix").at("x"), m.x_axis);
  expect_vec(doc.at("matrix").at("z"), m.z_axis);
  EXPECT_TRUE(same(doc.at("aspect_factor").get<double>(), k));
  expect_vec(doc.at("corners").at("b"), apply_aspect(rectify_point(q.b, m, Direction::forward), k));
  expect_vec(doc.at("points")[0], apply_aspect(rectify_point({0.1, 0.05}, m, Direction::forward), k));
  const FocalEstimate f = estimate_focal(m);
  EXPECT_TRUE(same(doc.at("focal").at("focal").get<double>(), f.focal));
}

TEST(Cli, RectifyNormalizeAndInverse) {
  const std::string input = fixture("tilted_rectilinear.json");
  const Outcome n = run_cli({"rectify", "--input", input, "--normalize"});
  ASSERT_EQ(n.code, 0) << n.err;
  const json corners = n.doc().at("corners");
  EXPECT_NEAR(corners.at("d")[0].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(corners.at("d")[1].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(corners.at("b")[0].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(corners.at("a")[1].get<double>(), 1.0, 1e-12);

  // unit-square corners map back onto the visible quad
  const Outcome inv = run_cli({"rectify", "--input", input, "--normalize", "--direction", "inverse", "--points",
                               "[[0,1],[1,0]]"});
  ASSERT_EQ(inv.code, 0) << inv.err;
  const Quad2 q = fixture_quad(read_json(input));
  const json pts = inv.doc().at("points");
  EXPECT_NEAR(pts[0][0].get<double>(), q.a.x, 1e-12);
  EXPECT_NEAR(pts[0][1].get<double>(), q.a.y, 1e-12);
  EXPECT_NEAR(pts[1][0].get<double>(), q.c.x, 1e-12);
  EXPECT_NEAR(pts[1][1].get<double>(), q.c.y, 1e-12);
  EXPECT_EQ(run_cli({"rectify", "--input", input, "--direction", "sideways"}).code, 2);
}

TEST(Cli, FocalFrontalSentinel) {
  const Outcome o = run_cli({"focal", "--input", fixture("frontal_square.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const json doc = o.doc();
  EXPECT_EQ(doc.at("focal").get<double>(), 0.0);
  EXPECT_FALSE(doc.at("consistent").get<bool>());
  EXPECT_TRUE(doc.at("vanishing_x").is_null());
  EXPECT_TRUE(doc.at("vanishing_y").is_null());
}

TEST(Cli, FocalMatchesLibrary) {
  const std::string input = fixture("tilted_rectilinear.json");
  const Outcome o = run_cli({"focal", "--input", input});
  ASSERT_EQ(o.code, 0) << o.err;
  const RectifyMatrix m = rectification_matrix(fixture_quad(read_json(input)));
  const json doc = o.doc();
  EXPECT_TRUE(same(doc.at("focal").get<double>(), estimate_focal(m).focal));
  EXPECT_EQ(doc.at("consistent").get<bool>(), estimate_focal(m).consistent);
  expect_vec(doc.at("vanishing_x"), std::get<FiniteVanishingPoint>(vanishing_point(m.x_axis)).point);
}

TEST(Cli, Intersect) {
  Outcome o = run_cli({"intersect", "--a", "0,0", "--b", "1,1", "--c", "0,1", "--d", "1,0"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, "{\"point\":[0.5,0.5]}\n");
  o = run_cli({"intersect", "--a", "0,0", "--b", "1,0", "--c", "0,1", "--d", "1,1"});
  EXPECT_EQ(o.out, "{\"parallel\":true}\n");
  EXPECT_EQ(run_cli({"intersect", "--a", "0,0", "--b", "0,0", "--c", "0,1", "--d", "1,1"}).code, 3);
  EXPECT_EQ(run_cli({"intersect", "--a", "0;0", "--b", "1,0", "--c", "0,1", "--d", "1,1"}).code, 2);
}

TEST(Cli, PixelsFlag) {
  const std::string input = fixture("pixels_square.json");
  const Outcome o = run_cli({"--pixels", "640x480", "pose", "--input", input});
  ASSERT_EQ(o.code, 0) << o.err;
  const json doc = read_json(input);
  json centered = doc;
  for (const char* k : {"a", "b", "c", "d"}) {
    const Vec2 p = center_coords({doc["quad"][k][0].get<double>(), doc["quad"][k][1].get<double>()}, {640, 480});
    centered["quad"][k] = {p.x, p.y};
  }
  const PoseMatrix p = pose_from_incidents(fixture_incidents(centered));
  expect_vec(o.doc().at("pose").at("z"), p.z_axis);
  EXPECT_EQ(run_cli({"--pixels", "640by480", "pose", "--input", input}).code, 2);
}

TEST(Cli, PrettyOutputParsesToSameDocument) {
  const std::string input = fixture("tilted_rectilinear.json");
  const Outcome plain = run_cli({"pose", "--input", input});
  const Outcome pretty = run_cli({"--pretty", "pose", "--input", input});
  ASSERT_EQ(pretty.code, 0);
  EXPECT_NE(plain.out, pretty.out);
  EXPECT_EQ(plain.doc(), pretty.doc());
}

TEST(Cli, VectorMapCamera) {
  json doc = read_json(fixture("vmap_quad.json"));
  doc["camera"]["path"] = fixture("small.vmap");
  const Outcome o = run_cli({"pose", "--input", "-"}, doc.dump());
  ASSERT_EQ(o.code, 0) << o.err;
  const CameraModel camera = VectorMap{load_vector_map(fixture("small.vmap"))};
  const double aspect = picture_aspect(camera);
  const Quad3 incidents =
      fixture_quad(doc).map([&](Vec2 p) { return incident(camera, texcoord_from_centered(p, aspect)); });
  expect_vec(o.doc().at("pose").at("x"), pose_from_incidents(incidents).x_axis);
}

TEST(Cli, SimulateCsv) {
  const Outcome o = run_cli({"simulate", "--seed", "5", "--scenes", "4", "--sigma", "0", "--out", "-"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream lines(o.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, kCsvHeader);
  for (std::uint64_t seed = 5; seed < 9; ++seed) {
    std::getline(lines, line);
    EXPECT_EQ(line, csv_row(seed, 0.0, roundtrip(generate_scene(seed, SceneConfig{}), 0.0, seed)));
  }
  EXPECT_FALSE(std::getline(lines, line));
}

TEST(Cli, SimulateToFileWithModel) {
  const auto path = std::filesystem::temp_directory_path() / "quadpose_sim_test.csv";
  const Outcome o = run_cli({"simulate", "--scenes", "10", "--model", fixture("sim_fisheye.json"), "--out",
                             path.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const json summary = o.doc();
  EXPECT_EQ(summary.at("scenes").get<int>(), 10);
  EXPECT_EQ(summary.at("failures").get<int>(), 0);
  EXPECT_LT(summary.at("max_pose_err").get<double>(), 1e-8);
  std::ifstream csv(path);
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 11);
  std::filesystem::remove(path);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"pose", "--input", fixture("collinear.json")}).code, 3);
  EXPECT_EQ(run_cli({"focal", "--input", fixture("collinear.json")}).code, 3);
  EXPECT_EQ(run_cli({"pose", "--input", fixture("bad_aov.json")}).code, 2);
  EXPECT_EQ(run_cli({"pose", "--input", fixture("missing_corner.json")}).code, 2);
  EXPECT_EQ(run_cli({"pose", "--input", fixture("does_not_exist.json")}).code, 2);
  EXPECT_EQ(run_cli({"pose", "--input", "-"}, "{not json").code, 2);
  EXPECT_EQ(run_cli({"simulate", "--sigma", "-1"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", "--model", R"({"model":"rectilinear","require_behind_corner":true})"}).code, 2);
  const Outcome help = run_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("simulate"), std::string::npos);
}

TEST(Cli, DiagnosticsGoToStderr) {
  const Outcome o = run_cli({"pose", "--input", fixture("collinear.json")});
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(o.err.find("degenerate-quad"), std::string::npos);
}

}  // namespace
}  // namespace quadpose::cli
