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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "json.hpp"

#include "fathorse/experiment.hpp"
#include "fathorse/render.hpp"

namespace {

using namespace fathorse;
using experiment::ExperimentConfig;
namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fathorse-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

TEST(Config, DefaultsMatchEmptyObject) {
  const auto cfg = experiment::parse_config(json::object());
  EXPECT_EQ(cfg.c, 1.8);
  EXPECT_EQ(cfg.p, 2.0);
  EXPECT_EQ(cfg.k_list, (std::vector<int>{2, 3, 5}));
  EXPECT_EQ(cfg.a_list, (std::vector<double>{-0.9, -0.3, 0.0, 0.42, 0.9}));
  EXPECT_EQ(cfg.n_max, 14);
  EXPECT_EQ(cfg.level_max, 12);
  EXPECT_EQ(cfg.N, 6);
  EXPECT_EQ(cfg.resolution, 1e-3);
  EXPECT_EQ(cfg.delta, 0.1);
}

TEST(Config, ShippedDefaultFile) {
  const auto cfg = experiment::load_config(FATHORSE_SOURCE_DIR "/configs/default.json");
  const auto def = experiment::parse_config(json::object());
  EXPECT_EQ(cfg.c, def.c);
  EXPECT_EQ(cfg.a_list, def.a_list);
  EXPECT_EQ(cfg.seed, def.seed);
  EXPECT_EQ(cfg.output_dir, "fathorse-out");
}

TEST(Config, Rejections) {
  const auto bad = [](json j) { EXPECT_THROW(experiment::parse_config(j), InvalidParameter) << j.dump(); };
  bad(json::array());
  bad({{"colour", 1}});
  bad({{"c", 1.0}});
  bad({{"c", 2.5}});
  bad({{"p", 1.0}});
  bad({{"k_list", {1, 2}}});
  bad({{"k_list", json::array()}});
  bad({{"a_list", {1.0}}});
  bad({{"n_max", 25}});
  bad({{"level_max", 21}});
  bad({{"N", 11}});
  bad({{"resolution", 1e-6}});
  bad({{"delta", -0.1}});
  bad({{"c", "fast"}});
}

TEST(Config, MissingAndMalformedFiles) {
  EXPECT_THROW(experiment::load_config("/nonexistent/fathorse.json"), std::ios_base::failure);
  const auto dir = scratch("malformed");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(experiment::load_config(dir / "bad.json"), InvalidParameter);
}

TEST(Suite, Parse) {
  EXPECT_EQ(experiment::parse_suite("bowen"), experiment::Suite::bowen);
  EXPECT_THROW(experiment::parse_suite("all"), InvalidParameter);
}

TEST(Run, InfeasibleParametersExitTwo) {
  ExperimentConfig cfg;
  cfg.c = 2.0;
  cfg.output_dir = scratch("infeasible").string();
  const auto r = experiment::run(cfg);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.message.find("zeta(p)"), std::string::npos);
  EXPECT_FALSE(fs::exists(cfg.output_dir));
}

TEST(Run, UnwritableOutputExitThree) {
  const auto dir = scratch("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  ExperimentConfig cfg;
  cfg.output_dir = (dir / "file" / "sub").string();
  EXPECT_EQ(experiment::run(cfg, experiment::Suite::cones).exit_code, 3);
}

TEST(Run, SingleRowConeTable) {
  ExperimentConfig cfg;
  cfg.n_max = 0;
  cfg.k_list = {3};
  cfg.a_list = {0.42};
  cfg.output_dir = scratch("nmax0").string();
  const auto r = experiment::run(cfg, experiment::Suite::cones);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(slurp(fs::path(cfg.output_dir) / "cones.csv"), "k,a,n,total,bound,ratio\n3,0.41999999999999998,0,2,2,1\n");
  EXPECT_FALSE(fs::exists(fs::path(cfg.output_dir) / "horseshoe.csv"));
}

TEST(Run, FullDefaultRun) {
  ExperimentConfig cfg;
  cfg.output_dir = scratch("full").string();
  const auto r = experiment::run(cfg);
  EXPECT_EQ(r.exit_code, 0) << r.message;
  for (const auto& c : r.criteria) EXPECT_TRUE(c.pass) << c.id;
  EXPECT_EQ(r.criteria.size(), 16u);
  const fs::path out(cfg.output_dir);
  for (const char* f : {"cones.csv", "fatcantor.csv", "surgery.json", "horseshoe.csv", "report.json",
                        "figures/cones.svg", "figures/partition.svg", "figures/image.svg",
                        "figures/horseshoe.svg"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const auto report = json::parse(slurp(out / "report.json"));
  EXPECT_TRUE(report.at("pass").get<bool>());
  const auto surgery = json::parse(slurp(out / "surgery.json"));
  EXPECT_EQ(surgery.at("levels").size(), 13u);
  EXPECT_EQ(count(slurp(out / "cones.csv"), "\n"), 1u + 3 * 5 * 15);
}

TEST(Run, Deterministic) {
  ExperimentConfig one;
  one.output_dir = scratch("det1").string();
  ExperimentConfig two = one;
  two.output_dir = scratch("det2").string();
  ASSERT_EQ(experiment::run(one).exit_code, 0);
  ASSERT_EQ(experiment::run(two).exit_code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(one.output_dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), one.output_dir);
    EXPECT_EQ(slurp(e.path()), slurp(fs::path(two.output_dir) / rel)) << rel;
    ++files;
  }
  EXPECT_EQ(files, 9u);
}

TEST(Render, EmptyDatasetHasAxesOnly) {
  const auto svg = render::render_section_svg({}, render::FigureKind::image);
  EXPECT_EQ(count(svg, "<polygon"), 0u);
  EXPECT_EQ(count(svg, "<polyline"), 0u);
  EXPECT_EQ(count(svg, "<line"), 2u);
  EXPECT_NE(svg.find("viewBox=\"-1 -1 2 2\""), std::string::npos);
  EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}

TEST(Render, Kinds) {
  for (const char* k : {"partition", "image", "cones", "horseshoe"}) {
    EXPECT_EQ(render::to_string(render::parse_kind(k)), k);
  }
  EXPECT_THROW(render::parse_kind("spiral"), InvalidParameter);
}

TEST(Render, JsonRoundTrip) {
  render::SectionDataset d;
  d.polygons.push_back({"#123456", {{0.1, 0.2}, {0.3, -0.4}, {-0.5, 0.6}}});
  d.polylines.push_back({"#000000", {{0.0, 0.0}, {1.0, 1.0}}});
  d.segments.push_back({{0.1, -0.1}, {0.1, 0.1}});
  d.rects.push_back({{-0.2, -0.2}, {0.2, 0.2}});
  const auto back = render::dataset_from_json(json::parse(render::to_json(d).dump()));
  EXPECT_EQ(render::to_json(back), render::to_json(d));
  EXPECT_EQ(render::render_section_svg(back, render::FigureKind::cones),
            render::render_section_svg(d, render::FigureKind::cones));
}

TEST(Render, PartitionAndConeDatasets) {
  const ExperimentConfig cfg;
  const auto part = experiment::build_dataset(cfg, render::FigureKind::partition);
  EXPECT_EQ(part.polygons.size(), 4u);
  const auto svg = render::render_section_svg(part, render::FigureKind::partition);
  EXPECT_NE(svg.find("x1=\"0\" y1=\"-1\" x2=\"0\" y2=\"1\" stroke=\"#000000\" stroke-width=\"0.008\""),
            std::string::npos);
  const auto cones = render::cones_dataset(2, 6, {0.0});
  EXPECT_EQ(cones.polygons.size(), 64u);
  EXPECT_EQ(cones.segments.size(), 64u);
  const auto hs = experiment::build_dataset(cfg, render::FigureKind::horseshoe);
  EXPECT_EQ(hs.rects.size(), std::size_t{1} << 12);
}

// End-to-end checks of the installed command-line tool.
class Cli : public ::testing::Test {
protected:
  static int call(const std::string& args, const std::string& out = "/dev/null") {
    const auto cmd = std::string(FATHORSE_CLI) + " " + args + " >" + out + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

TEST_F(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  std::ofstream(dir / "c2.json") << R"({"c": 2, "p": 2})";
  std::ofstream(dir / "bad.json") << R"({"c": 1.8, "colour": 3})";
  std::ofstream(dir / "cones.json") << R"({"n_max": 4})";
  EXPECT_EQ(call("run --config " + (dir / "c2.json").string() + " --out " + (dir / "o1").string()), 2);
  EXPECT_EQ(call("run --config " + (dir / "bad.json").string()), 2);
  EXPECT_EQ(call("run --config " + (dir / "missing.json").string()), 3);
  EXPECT_EQ(call("run --config " + (dir / "cones.json").string() + " --only cones --out " + (dir / "o2").string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "o2" / "cones.csv"));
  EXPECT_FALSE(fs::exists(dir / "o2" / "fatcantor.csv"));
}

TEST_F(Cli, DatasetThenRender) {
  const auto dir = scratch("cli-render");
  fs::create_directories(dir);
  const auto ds = (dir / "part.json").string();
  ASSERT_EQ(call("dataset --config " FATHORSE_SOURCE_DIR "/configs/default.json --kind partition", ds), 0);
  const auto svg = (dir / "part.svg").string();
  EXPECT_EQ(call("render --input " + ds + " --kind partition --output " + svg), 0);
  EXPECT_EQ(slurp(svg), render::render_section_svg(experiment::build_dataset({}, render::FigureKind::partition),
                                                   render::FigureKind::partition));
  std::ofstream(dir / "junk.json") << "[1, 2";
  EXPECT_EQ(call("render --input " + (dir / "junk.json").string() + " --kind image"), 2);
  EXPECT_EQ(call("render --input " + (dir / "none.json").string() + " --kind image"), 3);
}

}  // namespace
