/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The fathorse Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Figure datasets for the section [-1,1]^2 and their SVG rendering.
//
// Dataset JSON (consumed by `fathorse render --input`):
//   {
//     "polygons":  [{"fill": "#rrggbb", "points": [[x, y], ...]}, ...],
//     "polylines": [{"stroke": "#rrggbb", "points": [[x, y], ...]}, ...],
//     "segments":  [[x0, y0, x1, y1], ...],
//     "rects":     [[x0, y0, x1, y1], ...]
//   }
// Every key is optional. Coordinates are section coordinates.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "cantor_cones.hpp"
#include "geometry.hpp"
#include "horseshoe.hpp"

namespace fathorse::render {

struct Polygon {
  std::string fill;
  std::vector<Point> points;
};

struct Polyline {
  std::string stroke;
  std::vector<Point> points;
};

struct Segment {
  Point from;
  Point to;
};

struct Rect {
  Point lo;
  Point hi;
};

struct SectionDataset {
  std::vector<Polygon> polygons;
  std::vector<Polyline> polylines;
  std::vector<Segment> segments;
  std::vector<Rect> rects;
};

enum class FigureKind { partition, image, cones, horseshoe };

inline FigureKind parse_kind(const std::string& s) {
  if (s == "partition") return FigureKind::partition;
  if (s == "image") return FigureKind::image;
  if (s == "cones") return FigureKind::cones;
  if (s == "horseshoe") return FigureKind::horseshoe;
  throw InvalidParameter("unknown figure kind '" + s + "'");
}

inline std::string to_string(FigureKind k) {
  switch (k) {
    case FigureKind::partition: return "partition";
    case FigureKind::image: return "image";
    case FigureKind::cones: return "cones";
    case FigureKind::horseshoe: return "horseshoe";
  }
  return "unknown";
}

// JSON

inline nlohmann::json point_list(const std::vector<Point>& pts) {
  auto arr = nlohmann::json::array();
  for (const auto& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

inline std::vector<Point> parse_points(const nlohmann::json& j) {
  std::vector<Point> pts;
  for (const auto& p : j) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return pts;
}

inline nlohmann::json to_json(const SectionDataset& d) {
  nlohmann::json j;
  j["polygons"] = nlohmann::json::array();
  for (const auto& p : d.polygons) j["polygons"].push_back({{"fill", p.fill}, {"points", point_list(p.points)}});
  j["polylines"] = nlohmann::json::array();
  for (const auto& p : d.polylines) {
    j["polylines"].push_back({{"stroke", p.stroke}, {"points", point_list(p.points)}});
  }
  j["segments"] = nlohmann::json::array();
  for (const auto& s : d.segments) j["segments"].push_back({s.from.x, s.from.y, s.to.x, s.to.y});
  j["rects"] = nlohmann::json::array();
  for (const auto& r : d.rects) j["rects"].push_back({r.lo.x, r.lo.y, r.hi.x, r.hi.y});
  return j;
}

inline SectionDataset dataset_from_json(const nlohmann::json& j) {
  SectionDataset d;
  if (j.contains("polygons")) {
    for (const auto& p : j.at("polygons")) {
      d.polygons.push_back({p.value("fill", std::string("#999999")), parse_points(p.at("points"))});
    }
  }
  if (j.contains("polylines")) {
    for (const auto& p : j.at("polylines")) {
      d.polylines.push_back({p.value("stroke", std::string("#000000")), parse_points(p.at("points"))});
    }
  }
  if (j.contains("segments")) {
    for (const auto& s : j.at("segments")) {
      d.segments.push_back({{s.at(0).get<double>(), s.at(1).get<double>()},
                            {s.at(2).get<double>(), s.at(3).get<double>()}});
    }
  }
  if (j.contains("rects")) {
    for (const auto& r : j.at("rects")) {
      d.rects.push_back({{r.at(0).get<double>(), r.at(1).get<double>()},
                         {r.at(2).get<double>(), r.at(3).get<double>()}});
    }
  }
  return d;
}

// SVG

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string points_attr(const std::vector<Point>& pts) {
  std::string s;
  for (const auto& p : pts) {
    if (!s.empty()) s += ' ';
    s += num(p.x) + ',' + num(p.y);
  }
  return s;
}

}  // namespace detail

/// Fixed 800x800 canvas with viewBox [-1,1]^2 and y pointing up. The output
/// depends only on the dataset and kind.
inline std::string render_section_svg(const SectionDataset& d, FigureKind kind) {
  using detail::num;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"-1 -1 2 2\">\n";
  out += "<title>" + to_string(kind) + "</title>\n";
  out += "<rect x=\"-1\" y=\"-1\" width=\"2\" height=\"2\" fill=\"#ffffff\"/>\n";
  out += "<g transform=\"scale(1,-1)\">\n";
  for (const auto& p : d.polygons) {
    out += "<polygon fill=\"" + p.fill + "\" stroke=\"#000000\" stroke-width=\"0.002\" "
           "fill-rule=\"evenodd\" points=\"" + detail::points_attr(p.points) + "\"/>\n";
  }
  if (!d.rects.empty()) {
    out += "<g fill=\"#202020\" stroke=\"none\">\n";
    for (const auto& r : d.rects) {
      out += "<rect x=\"" + num(r.lo.x) + "\" y=\"" + num(r.lo.y) + "\" width=\"" +
             num(r.hi.x - r.lo.x) + "\" height=\"" + num(r.hi.y - r.lo.y) + "\"/>\n";
    }
    out += "</g>\n";
  }
  for (const auto& p : d.polylines) {
    out += "<polyline fill=\"none\" stroke=\"" + p.stroke + "\" stroke-width=\"0.003\" points=\"" +
           detail::points_attr(p.points) + "\"/>\n";
  }
  for (const auto& s : d.segments) {
    out += "<line x1=\"" + num(s.from.x) + "\" y1=\"" + num(s.from.y) + "\" x2=\"" + num(s.to.x) +
           "\" y2=\"" + num(s.to.y) + "\" stroke=\"#c00000\" stroke-width=\"0.006\"/>\n";
  }
  // Axes and the section boundary.
  out += "<line x1=\"-1\" y1=\"0\" x2=\"1\" y2=\"0\" stroke=\"#000000\" stroke-width=\"0.003\"/>\n";
  out += "<line x1=\"0\" y1=\"-1\" x2=\"0\" y2=\"1\" stroke=\"#000000\" stroke-width=\"" +
         std::string(kind == FigureKind::partition ? "0.008" : "0.003") + "\"/>\n";
  out += "<rect x=\"-1\" y=\"-1\" width=\"2\" height=\"2\" fill=\"none\" stroke=\"#000000\" "
         "stroke-width=\"0.006\"/>\n";
  out += "</g>\n</svg>\n";
  return out;
}

// Dataset builders

/// Domain partition: outer C-shapes and inner strips on both sides of Gamma,
/// with tick marks at +-b.
inline SectionDataset partition_dataset(const horseshoe::PoincareSystem& ps) {
  SectionDataset d;
  for (const auto& r : horseshoe::partition_regions(ps, 2)) {
    const bool right = r.name.rfind("right", 0) == 0;
    const bool strip = r.name.find("strip") != std::string::npos;
    const char* fill = right ? (strip ? "#b3b3b3" : "#8c8c8c") : (strip ? "#a3b3cc" : "#7a8ca6");
    d.polygons.push_back({fill, r.boundary});
  }
  for (const double s : {1.0, -1.0}) d.segments.push_back({{s * ps.b(), -0.03}, {s * ps.b(), 0.03}});
  return d;
}

/// Images of the four partition regions under F.
inline SectionDataset image_dataset(const horseshoe::PoincareSystem& ps, int per_edge = 48) {
  const auto regions = horseshoe::partition_regions(ps, per_edge);
  SectionDataset d;
  for (const auto& r : regions) {
    const bool right = r.name.rfind("right", 0) == 0;
    const bool strip = r.name.find("strip") != std::string::npos;
    const char* fill = right ? (strip ? "#b3b3b3" : "#8c8c8c") : (strip ? "#a3b3cc" : "#7a8ca6");
    std::vector<Point> image;
    image.reserve(r.boundary.size());
    for (const auto& p : r.boundary) image.push_back(ps.apply(p));
    d.polygons.push_back({fill, std::move(image)});
  }
  return d;
}

/// Level-n cones of F_k^n(Sigma \ Gamma): one filled envelope per preimage
/// branch, bounded by the images of y = +-1, plus the slice sets C_n(a).
inline SectionDataset cones_dataset(int k, int n, const std::vector<double>& slices,
                                    int samples = 48) {
  const cones::ConeSystem sys(k);
  const std::size_t branches = std::size_t{1} << n;
  std::vector<std::vector<Point>> upper(branches);
  std::vector<std::vector<Point>> lower(branches);
  for (int j = 0; j < samples; ++j) {
    const double t = -0.999 + 1.998 * j / (samples - 1);
    const auto rs = cones::preimage_level(t, n);
    for (std::size_t m = 0; m < branches; ++m) {
      Point hi{rs[m], 1.0};
      Point lo{rs[m], -1.0};
      for (int s = 0; s < n; ++s) {
        hi = sys.apply(hi);
        lo = sys.apply(lo);
      }
      upper[m].push_back({t, hi.y});
      lower[m].push_back({t, lo.y});
    }
  }
  SectionDataset d;
  for (std::size_t m = 0; m < branches; ++m) {
    std::vector<Point> poly = upper[m];
    poly.insert(poly.end(), lower[m].rbegin(), lower[m].rend());
    d.polygons.push_back({"#d9d9d9", std::move(poly)});
  }
  for (double a : slices) {
    for (const auto& iv : cones::slice_intervals(sys, a, n)) d.segments.push_back({{a, iv.lo}, {a, iv.hi}});
  }
  return d;
}

/// H_N as the 4^N product rectangles of level-N intervals, inside the outline of A.
inline SectionDataset horseshoe_dataset(const horseshoe::PoincareSystem& ps, int N) {
  const auto level = ps.bowen().construction().level_intervals(N);
  SectionDataset d;
  for (const auto& ix : level) {
    for (const auto& iy : level) d.rects.push_back({{ix.lo, iy.lo}, {ix.hi, iy.hi}});
  }
  const double a = ps.a();
  d.polylines.push_back({"#0050a0", {{-a, -a}, {a, -a}, {a, a}, {-a, a}, {-a, -a}}});
  return d;
}

}  // namespace fathorse::render
