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

// Command-line front end. JSON in, JSON out; see README.md for the schemas.
//
// Exit codes: 0 success, 1 internal error, 2 invalid input, 3 geometric
// degeneracy.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "quadpose/quadpose.hpp"

namespace quadpose::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kInternal = 1, kInvalidInput = 2, kDegenerate = 3 };

struct ImageFrame {
  int width_px = 1;
  int height_px = 1;
};

/// Pixel coordinates (y down, origin at the top-left corner) to centered
/// coordinates: y up, y spanning [-1, 1] and x spanning [-w/h, w/h].
inline Vec2 center_coords(Vec2 p_px, ImageFrame frame) {
  const double w = frame.width_px;
  const double h = frame.height_px;
  return {(2.0 * p_px.x / w - 1.0) * (w / h), -(2.0 * p_px.y / h - 1.0)};
}

inline Vec2 pixel_coords(Vec2 p, ImageFrame frame) {
  const double w = frame.width_px;
  const double h = frame.height_px;
  return {0.5 * (p.x * h / w + 1.0) * w, 0.5 * (1.0 - p.y) * h};
}

namespace detail {

[[noreturn]] inline void invalid(const std::string& what) { throw Error(ErrorKind::invalid_input, what); }

inline double number(const json& j, const std::string& what) {
  if (!j.is_number()) invalid(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(what + " must be finite");
  return v;
}

inline Vec2 vec2_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) invalid(what + " must be an [x, y] array");
  return {number(j[0], what), number(j[1], what)};
}

inline json to_json(Vec2 v) { return json::array({v.x, v.y}); }
inline json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

template <class V>
json quad_to_json(const Quad<V>& q) {
  return {{"a", to_json(q.a)}, {"b", to_json(q.b)}, {"c", to_json(q.c)}, {"d", to_json(q.d)}};
}

inline json basis_to_json(const Vec3& x, const Vec3& y, const Vec3& z) {
  return {{"x", to_json(x)}, {"y", to_json(y)}, {"z", to_json(z)}};
}

inline Range range_from_json(const json& j, const std::string& what) {
  if (j.is_number()) {
    const double v = number(j, what);
    return {v, v};
  }
  if (!j.is_array() || j.size() != 2) invalid(what + " must be a number or a [lo, hi] array");
  return {number(j[0], what), number(j[1], what)};
}

inline AovAxis axis_from_string(const std::string& s) {
  if (s == "horizontal") return AovAxis::horizontal;
  if (s == "diagonal") return AovAxis::diagonal;
  if (s == "vertical") return AovAxis::vertical;
  invalid("axis must be horizontal, diagonal or vertical");
}

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  std::optional<ImageFrame> pixels;
  bool pretty = false;

  Vec2 point(const json& j, const std::string& what) const {
    const Vec2 p = vec2_from_json(j, what);
    return pixels ? center_coords(p, *pixels) : p;
  }

  Quad2 quad(const json& doc) const {
    if (!doc.is_object() || !doc.contains("quad")) invalid("input needs a \"quad\" object");
    const json& q = doc.at("quad");
    if (!q.is_object()) invalid("\"quad\" must be an object with corners a, b, c, d");
    Quad2 out;
    for (Corner k : kCorners) {
      const std::string name(1, static_cast<char>(corner_name(k) - 'A' + 'a'));
      if (!q.contains(name)) invalid("quad is missing corner \"" + name + "\"");
      out[k] = point(q.at(name), "corner " + name);
    }
    return out;
  }

  json read_input(const std::string& path) const {
    if (path == "-") return json::parse(in);
    std::ifstream file(path);
    if (!file) invalid("cannot open input '" + path + "'");
    return json::parse(file);
  }

  void emit(const json& j) const { out << (pretty ? j.dump(2) : j.dump()) << '\n'; }
};

inline CameraModel camera_from_json(const json& j) {
  if (!j.is_object() || !j.contains("model")) invalid("camera needs a \"model\" field");
  const std::string model = j.at("model").get<std::string>();
  CameraModel camera;
  if (model == "rectilinear") {
    camera = Rectilinear{number(j.at("aov_deg"), "aov_deg"), axis_from_string(j.value("axis", "horizontal")),
                         j.contains("aspect") ? number(j.at("aspect"), "aspect") : 1.0};
  } else if (model == "fisheye") {
    camera = EquidistantFisheye{number(j.at("aov_deg"), "aov_deg"),
                                j.contains("aspect") ? number(j.at("aspect"), "aspect") : 1.0};
  } else if (model == "vmap") {
    camera = VectorMap{load_vector_map(j.at("path").get<std::string>())};
  } else {
    invalid("unknown camera model '" + model + "'");
  }
  validate(camera);
  return camera;
}

inline Quad3 incidents_from(const Context& ctx, const json& doc) {
  const Quad2 q = ctx.quad(doc);
  if (!doc.contains("camera")) invalid("input needs a \"camera\" object");
  const CameraModel camera = camera_from_json(doc.at("camera"));
  const double aspect = picture_aspect(camera);
  return q.map([&](Vec2 p) { return incident(camera, texcoord_from_centered(p, aspect)); });
}

inline MarkerSpec marker_from_json(const json& j) {
  if (!j.is_object() || !j.contains("sides")) invalid("marker needs \"sides\": [a, b, c, d]");
  const json& s = j.at("sides");
  if (!s.is_array() || s.size() != 4) invalid("marker sides must be an array of four lengths");
  MarkerSpec m{number(s[0], "side a"), number(s[1], "side b"), number(s[2], "side c"), number(s[3], "side d"),
               0.0};
  m.aspect = j.contains("aspect") ? number(j.at("aspect"), "aspect") : m.side_a / m.side_b;
  validate(m);
  return m;
}

/// Accepts inline JSON or a path to a JSON file.
inline json json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return json::parse(text);
  std::ifstream file(text);
  if (!file) invalid("cannot open '" + text + "'");
  return json::parse(file);
}

inline Vec2 parse_xy(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  double x = 0.0;
  double y = 0.0;
  char comma = 0;
  std::string rest;
  if (!(in >> x >> comma >> y) || comma != ',' || (in >> rest) || !std::isfinite(x) || !std::isfinite(y)) {
    invalid(what + " must be given as x,y");
  }
  return {x, y};
}

inline ImageFrame parse_frame(const std::string& text) {
  std::istringstream in(text);
  long long w = 0;
  long long h = 0;
  char sep = 0;
  std::string rest;
  if (!(in >> w >> sep >> h) || (sep != 'x' && sep != 'X') || (in >> rest) || w < 1 || h < 1 ||
      w > 1'000'000'000 || h > 1'000'000'000) {
    invalid("--pixels must be WxH with positive integers");
  }
  return {static_cast<int>(w), static_cast<int>(h)};
}

inline json pose_json(const PoseMatrix& p) { return basis_to_json(p.x_axis, p.y_axis, p.z_axis); }

inline Corner corner_from_string(const std::string& s) {
  if (s == "A" || s == "a") return Corner::a;
  if (s == "B" || s == "b") return Corner::b;
  if (s == "C" || s == "c") return Corner::c;
  if (s == "D" || s == "d") return Corner::d;
  invalid("reference corner must be one of A, B, C, D");
}

inline ScaleMode scale_from_string(const std::string& s) {
  if (s == "side_a") return ScaleMode::by_side_a;
  if (s == "side_b") return ScaleMode::by_side_b;
  if (s == "side_c") return ScaleMode::by_side_c;
  if (s == "side_d") return ScaleMode::by_side_d;
  if (s == "width") return ScaleMode::by_width;
  if (s == "height") return ScaleMode::by_height;
  invalid("--scale-by must be side_a, side_b, side_c, side_d, width or height");
}

inline json focal_json(const FocalEstimate& f) { return {{"focal", f.focal}, {"consistent", f.consistent}}; }

inline json vanishing_json(const UnitVec3& axis) {
  const VanishingPoint v = vanishing_point(axis);
  if (const auto* finite = std::get_if<FiniteVanishingPoint>(&v)) return to_json(finite->point);
  return nullptr;
}

inline SceneConfig scene_config_from_json(const json& j) {
  if (!j.is_object()) invalid("--model must be a JSON object");
  SceneConfig c;
  const std::string model = j.value("model", "rectilinear");
  if (model == "rectilinear") {
    c.model = ModelKind::rectilinear;
  } else if (model == "fisheye") {
    c.model = ModelKind::fisheye;
  } else {
    invalid("simulation model must be rectilinear or fisheye");
  }
  const auto range = [&j](const char* key, Range& target) {
    if (j.contains(key)) target = range_from_json(j.at(key), key);
  };
  range("aov_deg", c.aov_deg);
  range("tilt_deg", c.tilt_deg);
  range("roll_deg", c.roll_deg);
  range("yaw_deg", c.yaw_deg);
  range("pitch_deg", c.pitch_deg);
  range("distance", c.distance);
  range("center_tex", c.center_tex);
  range("marker_aspect", c.marker_aspect);
  range("corner_angle_deg", c.corner_angle_deg);
  if (j.contains("axis")) c.axis = axis_from_string(j.at("axis").get<std::string>());
  if (j.contains("aspect")) c.image_aspect = number(j.at("aspect"), "aspect");
  if (j.contains("marker_width")) c.marker_width = number(j.at("marker_width"), "marker_width");
  if (j.contains("min_facing_cos")) c.min_facing_cos = number(j.at("min_facing_cos"), "min_facing_cos");
  if (j.contains("require_behind_corner")) c.require_behind_corner = j.at("require_behind_corner").get<bool>();
  if (j.contains("tilt_mode")) {
    const std::string mode = j.at("tilt_mode").get<std::string>();
    if (mode == "cap") {
      c.tilt_mode = TiltMode::cap;
    } else if (mode == "yaw_pitch") {
      c.tilt_mode = TiltMode::yaw_pitch;
    } else {
      invalid("tilt_mode must be cap or yaw_pitch");
    }
  }
  return c;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace detail

/// Parses arguments (argv[0] excluded) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  using detail::json_argument;

  CLI::App app{"Closed-form pose, reconstruction, rectification and focal estimation for planar quads",
               "quadpose"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string pixels_text;
  bool pretty = false;
  app.add_option("--pixels", pixels_text, "Treat 2D inputs as pixels of a WxH image");
  app.add_flag("--pretty", pretty, "Indent JSON output");

  std::string input = "-";
  auto* pose_cmd = app.add_subcommand("pose", "Pose matrix from four corners");
  pose_cmd->add_option("--input", input, "Input JSON file, or - for stdin");

  std::string marker_text;
  std::string reference = "C";
  std::string scale_by = "side_a";
  auto* recon_cmd = app.add_subcommand("reconstruct", "Metric corners and camera position");
  recon_cmd->add_option("--input", input, "Input JSON file, or - for stdin");
  recon_cmd->add_option("--marker", marker_text, "Marker JSON (inline or file)")->required();
  recon_cmd->add_option("--reference", reference, "Reference corner on the plane (A-D)");
  recon_cmd->add_option("--scale-by", scale_by, "Side used for metric scaling");

  std::optional<double> marker_aspect;
  bool normalize_unit = false;
  std::string direction_text = "forward";
  std::string points_text;
  auto* rect_cmd = app.add_subcommand("rectify", "Lens-agnostic 2D rectification");
  rect_cmd->add_option("--input", input, "Input JSON file, or - for stdin");
  rect_cmd->add_option("--marker-aspect", marker_aspect, "Known width/height ratio of the marker");
  rect_cmd->add_flag("--normalize", normalize_unit, "Map rectified coordinates to [0,1]^2");
  rect_cmd->add_option("--direction", direction_text, "Direction for --points: forward or inverse");
  rect_cmd->add_option("--points", points_text, "Extra points as a JSON array of [x, y]");

  auto* focal_cmd = app.add_subcommand("focal", "Focal length from the two vanishing points");
  focal_cmd->add_option("--input", input, "Input JSON file, or - for stdin");

  std::string ia, ib, ic, id;
  auto* isect_cmd = app.add_subcommand("intersect", "Intersection of lines ab and cd");
  isect_cmd->add_option("--a", ia, "x,y")->required();
  isect_cmd->add_option("--b", ib, "x,y")->required();
  isect_cmd->add_option("--c", ic, "x,y")->required();
  isect_cmd->add_option("--d", id, "x,y")->required();

  std::uint64_t seed = 0;
  std::uint64_t scenes = 100;
  double sigma = 0.0;
  std::string model_text = "{}";
  std::string out_path = "-";
  auto* sim_cmd = app.add_subcommand("simulate", "Batch round trips against synthetic ground truth");
  sim_cmd->add_option("--seed", seed, "First scene seed");
  sim_cmd->add_option("--scenes", scenes, "Number of scenes");
  sim_cmd->add_option("--sigma", sigma, "Gaussian corner noise (centered units)");
  sim_cmd->add_option("--model", model_text, "Scene configuration JSON (inline or file)");
  sim_cmd->add_option("--out", out_path, "CSV output path, or - for stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    detail::Context ctx{in, out, err, std::nullopt, pretty};
    if (!pixels_text.empty()) ctx.pixels = detail::parse_frame(pixels_text);

    if (pose_cmd->parsed()) {
      const json doc = ctx.read_input(input);
      const PoseMatrix pose = pose_from_incidents(detail::incidents_from(ctx, doc));
      ctx.emit({{"pose", detail::pose_json(pose)}});
    } else if (recon_cmd->parsed()) {
      const json doc = ctx.read_input(input);
      const MarkerSpec marker = detail::marker_from_json(json_argument(marker_text));
      const Quad3 incidents = detail::incidents_from(ctx, doc);
      const PoseMatrix pose = pose_from_incidents(incidents);
      const ReconstructedScene scene =
          reconstruct(incidents, pose, marker,
                      {detail::corner_from_string(reference), detail::scale_from_string(scale_by)});
      ctx.emit({{"pose", detail::pose_json(pose)},
                {"corners", detail::quad_to_json(scene.points)},
                {"scale", scene.scale_u},
                {"camera_position", detail::to_json(scene.camera_in_marker)}});
    } else if (rect_cmd->parsed()) {
      Direction direction{};
      if (direction_text == "forward") {
        direction = Direction::forward;
      } else if (direction_text == "inverse") {
        direction = Direction::inverse;
      } else {
        detail::invalid("--direction must be forward or inverse");
      }
      const json doc = ctx.read_input(input);
      const Quad2 quad = ctx.quad(doc);
      const RectifyMatrix m = rectification_matrix(quad);
      const Quad2 rectified = rectify_quad(quad, m);
      const double factor = marker_aspect ? aspect_correction_factor(m, quad, *marker_aspect) : 1.0;
      const Quad2 corrected = rectified.map([factor](Vec2 p) { return apply_aspect(p, factor); });

      const auto finish = [&](Vec2 p) { return normalize_unit ? normalize_to_unit(p, corrected) : p; };
      json result{{"matrix", detail::basis_to_json(m.x_axis, m.y_axis, m.z_axis)},
                  {"corners", detail::quad_to_json(corrected.map(finish))},
                  {"focal", detail::focal_json(estimate_focal(m))}};
      if (marker_aspect) result["aspect_factor"] = factor;
      if (!points_text.empty()) {
        const json pts = json_argument(points_text);
        if (!pts.is_array()) detail::invalid("--points must be a JSON array of [x, y] pairs");
        json mapped = json::array();
        for (const json& pj : pts) {
          const Vec2 p = ctx.point(pj, "point");
          if (direction == Direction::forward) {
            mapped.push_back(detail::to_json(finish(apply_aspect(rectify_point(p, m, direction), factor))));
          } else {
            const Vec2 screen = normalize_unit ? denormalize_from_unit(p, corrected) : p;
            mapped.push_back(detail::to_json(rectify_point(apply_aspect(screen, 1.0 / factor), m, direction)));
          }
        }
        result["points"] = mapped;
      }
      ctx.emit(result);
    } else if (focal_cmd->parsed()) {
      const json doc = ctx.read_input(input);
      const RectifyMatrix m = rectification_matrix(ctx.quad(doc));
      json result = detail::focal_json(estimate_focal(m));
      result["vanishing_x"] = detail::vanishing_json(m.x_axis);
      result["vanishing_y"] = detail::vanishing_json(m.y_axis);
      ctx.emit(result);
    } else if (isect_cmd->parsed()) {
      const auto pt = [&ctx](const std::string& text, const char* what) {
        const Vec2 p = detail::parse_xy(text, what);
        return ctx.pixels ? center_coords(p, *ctx.pixels) : p;
      };
      const LineIntersection hit = intersect_lines(pt(ia, "--a"), pt(ib, "--b"), pt(ic, "--c"), pt(id, "--d"));
      if (const auto* p = std::get_if<Vec2>(&hit)) {
        ctx.emit({{"point", detail::to_json(*p)}});
      } else {
        ctx.emit({{"parallel", true}});
      }
    } else if (sim_cmd->parsed()) {
      const SceneConfig config = detail::scene_config_from_json(json_argument(model_text));
      if (!(sigma >= 0.0) || !std::isfinite(sigma)) detail::invalid("--sigma must be non-negative");
      std::ofstream file;
      if (out_path != "-") {
        file.open(out_path);
        if (!file) detail::invalid("cannot write '" + out_path + "'");
      }
      std::ostream& csv = out_path == "-" ? out : file;
      csv << kCsvHeader << '\n';
      std::vector<double> pose_errors;
      std::size_t failures = 0;
      for (std::uint64_t i = 0; i < scenes; ++i) {
        const std::uint64_t scene_seed = seed + i;
        const SceneTruth truth = generate_scene(scene_seed, config);
        const RoundTripReport report = roundtrip(truth, sigma, scene_seed);
        if (report.failure) {
          ++failures;
          err << "scene " << scene_seed << ": " << *report.failure << '\n';
        }
        if (report.pose_angle_error) pose_errors.push_back(*report.pose_angle_error);
        csv << csv_row(scene_seed, sigma, report) << '\n';
      }
      if (out_path != "-") {
        ctx.emit({{"scenes", scenes},
                  {"failures", failures},
                  {"median_pose_err", detail::median(pose_errors)},
                  {"max_pose_err", pose_errors.empty() ? 0.0
                                                       : *std::max_element(pose_errors.begin(), pose_errors.end())},
                  {"out", out_path}});
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_geometric(e.kind()) ? kDegenerate : kInvalidInput;
  } catch (const json::exception& e) {
    err << "error: invalid JSON: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv + 1, argv + argc), in, out, err);
}

}  // namespace quadpose::cli
