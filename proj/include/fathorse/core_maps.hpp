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

// The odd square-root Lorenz family f(x) = sgn(x) (c |x|^{1/2} - 1) on
// [-1,1] \ {0}, its derived constants, and a grid validator for the Lorenz
// map axioms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace fathorse {

class LorenzMap {
public:
  /// Accepts c in (1, 2]. c = 2 is the boundary case where f(1) = 1.
  explicit LorenzMap(double c) : c_(c) {
    if (!(c > 1.0 && c <= 2.0)) {
      throw InvalidParameter("branch coefficient c must lie in (1, 2], got " +
                             std::to_string(c));
    }
  }

  double coefficient() const noexcept { return c_; }
  double alpha() const noexcept { return 0.5 * c_; }
  bool is_boundary_case() const noexcept { return c_ == 2.0; }

  double operator()(double x) const {
    if (x > 0.0) return c_ * std::sqrt(x) - 1.0;
    if (x < 0.0) return 1.0 - c_ * std::sqrt(-x);
    throw SingularityError("LorenzMap");
  }

  double derivative(double x) const {
    if (x == 0.0) throw SingularityError("LorenzMap::derivative");
    return c_ / (2.0 * std::sqrt(std::abs(x)));
  }

  /// Range of the right branch: (-1, c - 1].
  double right_branch_top() const noexcept { return c_ - 1.0; }

  /// Inverse of the x > 0 branch.
  double invert_right(double y) const {
    if (!(y > -1.0 && y <= right_branch_top())) {
      throw DomainError("right-branch inverse needs y in (-1, c-1]");
    }
    const double s = (y + 1.0) / c_;
    return s * s;
  }

  /// Derivative of invert_right at y.
  double invert_right_derivative(double y) const {
    return 2.0 * (y + 1.0) / (c_ * c_);
  }

private:
  double c_;
};

struct FixedPointConstants {
  double a;  ///< f(a) = -a, so +-a are fixed by f^2
  double b;  ///< b in (0, a) with f^2(b) = -a
};

/// Positive a with f(a) = -a, i.e. a = t^2 where t^2 + c t - 1 = 0.
inline double solve_period_two_point(double c) {
  // Cancellation-free form of the positive root (-c + sqrt(c^2 + 4)) / 2.
  const double t = 2.0 / (c + std::sqrt(c * c + 4.0));
  return t * t;
}

/// b with f^2(b) = -a on the right branch, if it exists in (0, a).
inline std::optional<double> solve_preimage_constant(double c, double a) {
  const double q = (1.0 + a) / c;
  const double s = (1.0 - q * q) / c;
  if (!(s > 0.0)) return std::nullopt;
  const double b = s * s;
  if (!(b < a)) return std::nullopt;
  return b;
}

inline FixedPointConstants derive_constants(const LorenzMap& f) {
  const double c = f.coefficient();
  const double a = solve_period_two_point(c);
  const auto b = solve_preimage_constant(c, a);
  if (!b) {
    throw InvalidParameter("no b in (0, a) with f^2(b) = -a for c = " + std::to_string(c));
  }
  // f(1) > -f(b) keeps the surgery zone [a, -f(b)] inside (0, 1).
  const double minus_fb = -f(*b);
  if (!(f(1.0) > minus_fb)) {
    throw InvalidParameter("f(1) = " + std::to_string(f(1.0)) + " must exceed -f(b) = " +
                           std::to_string(minus_fb) + " for c = " + std::to_string(c));
  }
  return {a, *b};
}

/// A Lorenz map together with its validated constants a and b.
struct LorenzBranchMap {
  LorenzMap f;
  double a;
  double b;

  static LorenzBranchMap from_coefficient(double c) {
    const LorenzMap f{c};
    const auto k = derive_constants(f);
    return {f, k.a, k.b};
  }
};

struct AxiomCheck {
  std::string name;
  bool pass;
  double margin;  ///< worst observed slack; negative when violated
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
  const AxiomCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Grid check of the Lorenz map axioms for any map/derivative pair defined on
/// [-1,1] \ {0}. \p alpha is the claimed derivative lower bound.
template <class Map, class Derivative>
AxiomReport validate_lorenz_axioms(const Map& f, const Derivative& df, double alpha,
                                   std::size_t grid_size) {
  if (grid_size < 2) throw InvalidParameter("grid_size must be at least 2");
  AxiomReport report;
  const auto add = [&](std::string name, double margin, bool pass) {
    report.checks.push_back({std::move(name), pass, margin});
  };

  const double f_one = f(1.0);
  add("f(1)<1", 1.0 - f_one, f_one < 1.0);
  const double f_minus_one = f(-1.0);
  add("f(-1)>-1", f_minus_one + 1.0, f_minus_one > -1.0);

  // One-sided limits: deviation must shrink along x = 10^-j and end below 1e-5.
  constexpr double limit_tol = 1e-5;
  for (const int side : {1, -1}) {
    const double target = side > 0 ? -1.0 : 1.0;
    double previous = std::numeric_limits<double>::infinity();
    bool shrinking = true;
    double dev = 0.0;
    for (int j = 2; j <= 12; ++j) {
      dev = std::abs(f(side * std::pow(10.0, -j)) - target);
      shrinking = shrinking && dev <= previous;
      previous = dev;
    }
    add(side > 0 ? "lim0+=-1" : "lim0-=+1", limit_tol - dev, shrinking && dev < limit_tol);
  }

  double min_slope_margin = std::numeric_limits<double>::infinity();
  double odd_defect = 0.0;
  bool monotone = true;
  double prev_pos = -std::numeric_limits<double>::infinity();
  double prev_neg = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= grid_size; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid_size);
    const double xn = -1.0 + static_cast<double>(i - 1) / static_cast<double>(grid_size);
    min_slope_margin = std::min({min_slope_margin, df(x) - alpha, df(-x) - alpha});
    const double fx = f(x);
    odd_defect = std::max(odd_defect, std::abs(f(-x) + fx));
    const double fxn = f(xn);
    monotone = monotone && fx > prev_pos && fxn > prev_neg;
    prev_pos = fx;
    prev_neg = fxn;
  }
  add("alpha>0", alpha, alpha > 0.0);
  add("f'>=alpha", min_slope_margin, min_slope_margin >= -1e-15);
  const double slope_near_zero = std::min(df(1e-12), df(-1e-12));
  add("f'->inf", slope_near_zero - 1e5, slope_near_zero > 1e5);
  add("odd", 1e-14 - odd_defect, odd_defect <= 1e-14);
  add("monotone", monotone ? 0.0 : -1.0, monotone);
  return report;
}

inline AxiomReport validate_lorenz_axioms(const LorenzMap& f, std::size_t grid_size) {
  return validate_lorenz_axioms(
      f, [&f](double x) { return f.derivative(x); }, f.alpha(), grid_size);
}

}  // namespace fathorse
