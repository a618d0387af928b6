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

// Experiment runner behind `fathorse run`: reads a flat JSON config, runs the
// cone, fat Cantor, surgery and horseshoe suites, and writes
//
//   cones.csv       k,a,n,total,bound,ratio
//   fatcantor.csv   N,level_measure,cover_closed_form,beta,telescoping_residual,tail_bound
//   surgery.json    per-level gap deviations, endpoint/continuity/monotonicity checks
//   horseshoe.csv   N,estimate,exact_product,envelope
//   report.json     {"criteria": [{id, value, bound, pass}, ...], "pass": bool}
//   figures/{partition,image,cones,horseshoe}.svg
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 invalid or infeasible
// parameters, 3 I/O failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bowen_map.hpp"
#include "cantor_cones.hpp"
#include "core_maps.hpp"
#include "errors.hpp"
#include "fat_cantor.hpp"
#include "horseshoe.hpp"
#include "render.hpp"

namespace fathorse::experiment {

struct ExperimentConfig {
  double c = 1.8;
  double p = 2.0;
  std::vector<int> k_list{2, 3, 5};
  std::vector<double> a_list{-0.9, -0.3, 0.0, 0.42, 0.9};
  int n_max = 14;
  int level_max = 12;
  int N = 6;
  double resolution = 1e-3;
  double delta = 0.1;
  std::string output_dir = "fathorse-out";
  std::uint64_t seed = 20140101;
};

/// Parses a flat JSON object; unknown keys and out-of-range values throw
/// InvalidParameter.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidParameter("config must be a JSON object");
  static const std::set<std::string> known{"c", "p", "k_list", "a_list", "n_max", "level_max",
                                           "N", "resolution", "delta", "output_dir", "seed"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw InvalidParameter("unknown config key '" + item.key() + "'");
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("c")) cfg.c = j.at("c").get<double>();
    if (j.contains("p")) cfg.p = j.at("p").get<double>();
    if (j.contains("k_list")) cfg.k_list = j.at("k_list").get<std::vector<int>>();
    if (j.contains("a_list")) cfg.a_list = j.at("a_list").get<std::vector<double>>();
    if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<int>();
    if (j.contains("level_max")) cfg.level_max = j.at("level_max").get<int>();
    if (j.contains("N")) cfg.N = j.at("N").get<int>();
    if (j.contains("resolution")) cfg.resolution = j.at("resolution").get<double>();
    if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("config value has the wrong type: ") + e.what());
  }
  if (!(cfg.c > 1.0 && cfg.c <= 2.0)) throw InvalidParameter("c must lie in (1, 2]");
  if (!(cfg.p > 1.0)) throw InvalidParameter("p must exceed 1");
  if (cfg.k_list.empty() || cfg.a_list.empty()) throw InvalidParameter("k_list and a_list must be non-empty");
  for (int k : cfg.k_list)
    if (k < 2) throw InvalidParameter("every k must be >= 2");
  for (double a : cfg.a_list)
    if (!(std::abs(a) < 1.0)) throw InvalidParameter("every slice abscissa must satisfy |a| < 1");
  if (cfg.n_max < 0 || cfg.n_max > cones::kMaxLevel) throw InvalidParameter("n_max must lie in [0, 24]");
  if (cfg.level_max < 0 || cfg.level_max > 20) throw InvalidParameter("level_max must lie in [0, 20]");
  if (cfg.N < 0 || cfg.N > 10) throw InvalidParameter("N must lie in [0, 10]");
  if (!(cfg.resolution >= 1e-5 && cfg.resolution <= 0.1)) {
    throw InvalidParameter("resolution must lie in [1e-5, 0.1]");
  }
  if (!(cfg.delta >= 0.0)) throw InvalidParameter("delta must be non-negative");
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

struct Criterion {
  std::string id;
  double value;
  double bound;
  bool pass;
};

enum class Suite { cones, fatcantor, bowen, horseshoe };

inline Suite parse_suite(const std::string& s) {
  if (s == "cones") return Suite::cones;
  if (s == "fatcantor") return Suite::fatcantor;
  if (s == "bowen") return Suite::bowen;
  if (s == "horseshoe") return Suite::horseshoe;
  throw InvalidParameter("unknown suite '" + s + "'");
}

struct RunResult {
  int exit_code = 0;
  std::string message;
  std::vector<Criterion> criteria;
};

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

class OutputDir {
public:
  explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_ / "figures");
  }

  void write(const std::string& name, const std::string& content) const {
    const auto path = root_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot write " + path.string());
    out << content;
    if (!out) throw std::ios_base::failure("write failed for " + path.string());
  }

private:
  std::filesystem::path root_;
};

inline bool contains_value(const std::vector<double>& v, double x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

/// Integer preimage recursion a_{n,m} = (-1)^m (a_{n-1,ceil(m/2)} + (-1)^m b_{n-1})^2
/// from a_{0,1} = 0, checked against the normalized values times b_n.
inline double integer_recursion_defect(int n_max) {
  std::vector<std::int64_t> ints{0};
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const std::int64_t prev_b = static_cast<std::int64_t>(cones::preimage_denominator(n - 1));
    std::vector<std::int64_t> next(ints.size() * 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const bool even_m = (i + 1) % 2 == 0;
      const std::int64_t base = ints[i / 2] + (even_m ? prev_b : -prev_b);
      next[i] = (even_m ? 1 : -1) * base * base;
    }
    ints = std::move(next);
    const auto rs = cones::preimage_level(0.0, n);
    const double bn = static_cast<double>(cones::preimage_denominator(n));
    for (std::size_t i = 0; i < rs.size(); ++i) {
      worst = std::max(worst, std::abs(rs[i] * bn - static_cast<double>(ints[i])));
    }
  }
  return worst;
}

}  // namespace detail

/// Runs the enabled suites and writes all artifacts under the output directory.
inline RunResult run(const ExperimentConfig& cfg, std::optional<Suite> only = std::nullopt) {
  RunResult result;
  const auto enabled = [&](Suite s) { return !only || *only == s; };
  auto& crit = result.criteria;
  const auto add = [&](std::string id, double value, double bound, bool pass) {
    crit.push_back({std::move(id), value, bound, pass});
  };

  // Parameters first, so infeasible configs fail before anything is written.
  std::optional<horseshoe::PoincareSystem> ps;
  const bool needs_lorenz = enabled(Suite::fatcantor) || enabled(Suite::bowen) || enabled(Suite::horseshoe);
  try {
    if (needs_lorenz) {
      const auto m = LorenzBranchMap::from_coefficient(cfg.c);
      ps.emplace(bowen::BowenSystem(m, cfg.p));
    }
  } catch (const InvalidParameter& e) {
    result.exit_code = 2;
    result.message = e.what();
    return result;
  }

  try {
    const detail::OutputDir out(cfg.output_dir);
    nlohmann::json report;

    if (enabled(Suite::cones)) {
      std::string csv = "k,a,n,total,bound,ratio\n";
      double worst_excess = -1.0;
      bool contraction_ok = true;
      double k2_defect = 0.0;
      for (int k : cfg.k_list) {
        const cones::ConeSystem sys(k);
        std::vector<std::vector<double>> totals;
        for (double a : cfg.a_list) {
          const auto rep = cones::verify_cone_bound(sys, a, cfg.n_max);
          std::vector<double> col;
          for (const auto& row : rep.rows) {
            csv += std::to_string(k) + ',' + csv_number(a) + ',' + std::to_string(row.n) + ',' +
                   csv_number(row.total) + ',' + csv_number(row.bound) + ',' + csv_number(row.ratio) + '\n';
            worst_excess = std::max(worst_excess, row.total - row.bound);
            contraction_ok = contraction_ok && row.contracts;
            col.push_back(row.total);
            if (k == 2) k2_defect = std::max(k2_defect, std::abs(row.total - std::ldexp(2.0, -row.n)));
          }
          totals.push_back(std::move(col));
        }
        if (k == 2) {
          for (const auto& col : totals)
            for (std::size_t n = 0; n < col.size(); ++n)
              k2_defect = std::max(k2_defect, std::abs(col[n] - totals.front()[n]));
        }
      }
      out.write("cones.csv", csv);
      add("cone_bound", worst_excess, 1e-12, worst_excess <= 1e-12 && contraction_ok);
      if (std::find(cfg.k_list.begin(), cfg.k_list.end(), 2) != cfg.k_list.end()) {
        add("cone_k2_identity", k2_defect, 1e-12, k2_defect <= 1e-12);
      }

      const int n_oracle = std::min(cfg.n_max, 6);
      double oracle_gap = 0.0;
      bool oracle_ran = false;
      for (int k : cfg.k_list) {
        if (k > 3) continue;
        for (double a : {0.0, 0.42}) {
          if (!detail::contains_value(cfg.a_list, a)) continue;
          const cones::ConeSystem sys(k);
          for (int n = 0; n <= n_oracle; ++n) {
            const auto exact = cones::slice_measure(sys, a, n).total;
            const auto brute = cones::brute_force_slice(sys, a, n, 1e-5);
            oracle_gap = std::max(oracle_gap, std::abs(brute.estimate - exact));
            oracle_ran = true;
          }
        }
      }
      if (oracle_ran) add("cone_oracle", oracle_gap, 1e-4, oracle_gap <= 1e-4);

      const int n_int = std::min(cfg.n_max, 4);
      const double int_defect = detail::integer_recursion_defect(n_int);
      const bool denominators = cones::preimage_denominator(0) == 1 && cones::preimage_denominator(1) == 4 &&
                                cones::preimage_denominator(2) == 64 &&
                                cones::preimage_denominator(3) == 16384;
      add("integer_recursion", int_defect, 0.0, int_defect == 0.0 && denominators);

      out.write("figures/cones.svg",
                render::render_section_svg(
                    render::cones_dataset(cfg.k_list.front(), std::min(cfg.n_max, 6), cfg.a_list),
                    render::FigureKind::cones));
    }

    if (enabled(Suite::fatcantor)) {
      const auto& cc = ps->bowen().construction();
      std::string csv = "N,level_measure,cover_closed_form,beta,telescoping_residual,tail_bound\n";
      double telescoping = 0.0;
      double next = cc.level_measure(0);
      for (int N = 0; N <= cfg.level_max; ++N) {
        const double cur = next;
        next = cc.level_measure(N + 1);
        const double resid = cur - next - cc.beta().value(N);
        telescoping = std::max(telescoping, std::abs(resid));
        csv += std::to_string(N) + ',' + csv_number(cur) + ',' + csv_number(cc.cover_measure(N)) + ',' +
               csv_number(cc.beta().value(N)) + ',' + csv_number(resid) + ',' +
               csv_number(cc.beta().tail_bound(N)) + '\n';
      }
      out.write("fatcantor.csv", csv);
      add("fat_cantor_telescoping", telescoping, 1e-12, telescoping <= 1e-12);
      const double gap = std::abs(cc.level_measure(cfg.level_max) - cc.limit_measure());
      const double tail = cc.beta().tail_bound(cfg.level_max);
      add("fat_cantor_limit", gap, tail, gap <= tail);
      add("fat_cantor_positive", cc.limit_measure(), 0.0, cc.limit_measure() > 0.0);
    }

    if (enabled(Suite::bowen)) {
      const auto& sys = ps->bowen();
      const auto rep = bowen::verify_surgery(sys, std::min(cfg.level_max, 14));
      nlohmann::json j;
      j["levels"] = nlohmann::json::array();
      double worst_level = 0.0;
      for (const auto& l : rep.levels) {
        j["levels"].push_back(
            {{"n", l.n}, {"sup_deviation", l.sup_deviation}, {"expected", l.expected}, {"matches", l.matches}});
        worst_level = std::max(worst_level, std::abs(l.sup_deviation - l.expected));
      }
      j["deviation_decreasing"] = rep.deviation_decreasing;
      j["endpoint_level"] = rep.endpoint_level;
      j["endpoint_count"] = rep.endpoint_count;
      j["endpoint_worst"] = rep.endpoint_worst;
      j["continuity_worst"] = rep.continuity_worst;
      j["monotone"] = rep.monotone;
      j["monotone_grid"] = rep.monotone_grid;
      j["a"] = sys.a();
      j["b"] = sys.b();
      j["f_of_b"] = sys.f_of_b();
      out.write("surgery.json", j.dump(2) + "\n");
      add("surgery_gap_profile", worst_level, 1e-9, worst_level <= 1e-9 && rep.deviation_decreasing);
      add("surgery_endpoint_slope", rep.endpoint_worst, 1e-9, rep.endpoint_worst <= 1e-9);
      add("surgery_continuity", rep.continuity_worst, 1e-10, rep.continuity_worst <= 1e-10);
      add("surgery_monotone", rep.monotone ? 0.0 : 1.0, 0.0, rep.monotone);
    }

    if (enabled(Suite::horseshoe)) {
      const auto& cc = ps->bowen().construction();
      const double a = ps->a();
      const double b = ps->b();

      double product_defect = 0.0;
      for (int n = 0; n <= std::min(cfg.N, 8); ++n) {
        for (const auto& fi : horseshoe::fiber_intervals(*ps, n)) {
          const auto iv = cc.interval_endpoints(horseshoe::tree_word_for_signs(fi.signs, n));
          product_defect = std::max({product_defect, std::abs(iv.lo - fi.image.lo), std::abs(iv.hi - fi.image.hi)});
        }
      }
      add("product_structure", product_defect, 1e-9, product_defect <= 1e-9);

      std::string csv = "N,estimate,exact_product,envelope\n";
      bool within = true;
      double worst_ratio = 0.0;
      double last_estimate = 0.0;
      for (int n = 0; n <= cfg.N; ++n) {
        const auto est = horseshoe::horseshoe_measure(*ps, n, cfg.resolution);
        csv += std::to_string(n) + ',' + csv_number(est.estimated_area) + ',' + csv_number(est.exact_level_area) +
               ',' + csv_number(est.envelope) + '\n';
        within = within && est.within_envelope() && est.estimated_area > 0.0;
        worst_ratio = std::max(worst_ratio, std::abs(est.estimated_area - est.exact_level_area) / est.envelope);
        last_estimate = est.estimated_area;
      }
      out.write("horseshoe.csv", csv);
      add("horseshoe_measure", worst_ratio, 1.0, within);

      double fixed = 0.0;
      const auto check = [&](Point in, Point want) {
        const auto got = ps->apply_twice_on_A(in);
        fixed = std::max({fixed, std::abs(got.x - want.x), std::abs(got.y - want.y)});
      };
      check({a, a}, {a, -b});
      check({b, -a}, {-a, -a});
      check({a, -a}, {a, -a});
      add("fixed_points", fixed, 1e-9, fixed <= 1e-9);

      const double eps = cc.beta().value(3) / 16.0;
      const auto wit = horseshoe::no_stable_segment_witness(*ps, 1000, eps, cfg.N, cfg.seed);
      add("no_stable_segment", static_cast<double>(wit.witnessed), static_cast<double>(wit.samples), wit.passed());

      const double m = cc.level_measure(cfg.N);
      const double vol = horseshoe::suspension_volume(m * m, cfg.delta);
      add("suspension_volume", vol, 0.0, vol > 0.0 && vol == cfg.delta * (m * m) && last_estimate > 0.0);

      out.write("figures/partition.svg",
                render::render_section_svg(render::partition_dataset(*ps), render::FigureKind::partition));
      out.write("figures/image.svg",
                render::render_section_svg(render::image_dataset(*ps), render::FigureKind::image));
      out.write("figures/horseshoe.svg",
                render::render_section_svg(render::horseshoe_dataset(*ps, std::min(cfg.N, 6)),
                                           render::FigureKind::horseshoe));
    }

    bool all = true;
    report["criteria"] = nlohmann::json::array();
    for (const auto& c : crit) {
      report["criteria"].push_back({{"id", c.id}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
      all = all && c.pass;
    }
    report["pass"] = all;
    out.write("report.json", report.dump(2) + "\n");
    result.exit_code = all ? 0 : 1;
    result.message = all ? "all checks passed" : "some checks failed";
  } catch (const std::ios_base::failure& e) {
    result.exit_code = 3;
    result.message = e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    result.exit_code = 3;
    result.message = e.what();
  }
  return result;
}

/// Figure dataset for \p kind computed from a config, as written by run().
inline render::SectionDataset build_dataset(const ExperimentConfig& cfg, render::FigureKind kind) {
  if (kind == render::FigureKind::cones) {
    return render::cones_dataset(cfg.k_list.front(), std::min(cfg.n_max, 6), cfg.a_list);
  }
  const horseshoe::PoincareSystem ps(bowen::BowenSystem(LorenzBranchMap::from_coefficient(cfg.c), cfg.p));
  switch (kind) {
    case render::FigureKind::partition: return render::partition_dataset(ps);
    case render::FigureKind::image: return render::image_dataset(ps);
    default: return render::horseshoe_dataset(ps, std::min(cfg.N, 6));
  }
}

}  // namespace fathorse::experiment
