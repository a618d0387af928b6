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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fathorse/experiment.hpp"
#include "fathorse/render.hpp"

namespace {

using namespace fathorse;

int cmd_run(const std::string& config_path, const std::string& only, const std::string& out_dir) {
  experiment::ExperimentConfig cfg;
  std::optional<experiment::Suite> suite;
  try {
    cfg = experiment::load_config(config_path);
    if (!only.empty()) suite = experiment::parse_suite(only);
  } catch (const InvalidParameter& e) {
    std::cerr << "fathorse: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "fathorse: " << e.what() << "\n";
    return 3;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;

  const auto result = experiment::run(cfg, suite);
  for (const auto& c : result.criteria) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << "  value=" << experiment::csv_number(c.value)
              << "  bound=" << experiment::csv_number(c.bound) << "\n";
  }
  (result.exit_code == 0 ? std::cout : std::cerr) << "fathorse: " << result.message << "\n";
  return result.exit_code;
}

int cmd_dataset(const std::string& config_path, const std::string& kind) {
  try {
    const auto cfg = experiment::load_config(config_path);
    std::cout << render::to_json(experiment::build_dataset(cfg, render::parse_kind(kind))).dump() << "\n";
    return 0;
  } catch (const InvalidParameter& e) {
    std::cerr << "fathorse: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "fathorse: " << e.what() << "\n";
    return 3;
  }
}

int cmd_render(const std::string& input, const std::string& kind, const std::string& output) {
  render::SectionDataset data;
  render::FigureKind fig{};
  try {
    fig = render::parse_kind(kind);
    std::ifstream in(input);
    if (!in) throw std::ios_base::failure("cannot open " + input);
    nlohmann::json j;
    in >> j;
    data = render::dataset_from_json(j);
  } catch (const InvalidParameter& e) {
    std::cerr << "fathorse: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "fathorse: malformed dataset: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "fathorse: " << e.what() << "\n";
    return 3;
  }
  const auto svg = render::render_section_svg(data, fig);
  if (output.empty()) {
    std::cout << svg;
    return 0;
  }
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  out << svg;
  if (!out) {
    std::cerr << "fathorse: cannot write " << output << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fathorse: Cantor cones and fat horseshoes of Lorenz-type section maps"};
  app.require_subcommand(1);

  std::string config;
  std::string only;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run the experiment suites and write tables, reports and figures");
  run->add_option("--config", config, "flat JSON config")->required();
  run->add_option("--only", only, "run a single suite")
      ->check(CLI::IsMember({"cones", "fatcantor", "bowen", "horseshoe"}));
  run->add_option("--out", out_dir, "output directory (overrides output_dir)");

  std::string input;
  std::string kind;
  std::string output;
  auto* render = app.add_subcommand("render", "render a section dataset JSON as SVG");
  render->add_option("--input", input, "dataset JSON")->required();
  render->add_option("--kind", kind, "figure kind")
      ->required()
      ->check(CLI::IsMember({"partition", "image", "cones", "horseshoe"}));
  render->add_option("--output", output, "write the SVG here instead of stdout");

  std::string ds_config;
  std::string ds_kind;
  auto* dataset = app.add_subcommand("dataset", "print the figure dataset JSON for a config");
  dataset->add_option("--config", ds_config, "flat JSON config")->required();
  dataset->add_option("--kind", ds_kind, "figure kind")
      ->required()
      ->check(CLI::IsMember({"partition", "image", "cones", "horseshoe"}));

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(config, only, out_dir);
  if (*render) return cmd_render(input, kind, output);
  return cmd_dataset(ds_config, ds_kind);
}
