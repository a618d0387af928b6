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

// The sectional map F_k(x, y) = (f(x), (y |x|^{1/k} + sgn x) / 2) built on the
// c = 2 Lorenz branch, and the vertical slices C_n(a) of its n-th image.
//
// Preimages are kept normalized: r_{n,m} = a_{n,m} / b_n with
//   r_{n,m} = (-1)^m ((r_{n-1,ceil(m/2)} + (-1)^m) / 2)^2,
// so the integers a_{n,m} and b_n = 2^{2^{n+1}-2} never materialize (b_4
// already exceeds 2^53). Leaf m of level n has parent ceil(m/2) at level
// n-1; with zero-based storage that is index i / 2, and odd m (even i) lies
// on the left branch x < 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "core_maps.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"

namespace fathorse::cones {

inline constexpr int kMaxLevel = 24;

class ConeSystem {
public:
  explicit ConeSystem(int k) : k_(k), base_(2.0), inv_k_(1.0 / k) {
    if (k < 2) throw InvalidParameter("cone exponent k must be >= 2");
  }

  int k() const noexcept { return k_; }
  const LorenzMap& base_map() const noexcept { return base_; }

  /// Fiber contraction factor (1/2)|x|^{1/k}.
  double fiber_factor(double x) const { return 0.5 * std::pow(std::abs(x), inv_k_); }

  Point apply(Point p) const {
    if (p.x == 0.0) throw SingularityError("F_k");
    const double shift = p.x > 0.0 ? 0.5 : -0.5;
    return {base_(p.x), p.y * fiber_factor(p.x) + shift};
  }

  /// Applies F_k to every point (x, ys[i]) of one vertical line in place and
  /// returns the new abscissa.
  double apply_to_fiber(double x, std::span<double> ys) const {
    if (x == 0.0) throw SingularityError("F_k");
    const double shift = x > 0.0 ? 0.5 : -0.5;
    const double factor = fiber_factor(x);
    for (double& y : ys) y = y * factor + shift;
    return base_(x);
  }

private:
  int k_;
  LorenzMap base_;
  double inv_k_;
};

inline void check_slice_args(double a, int n) {
  if (!(std::abs(a) < 1.0)) throw DomainError("slice abscissa must satisfy |a| < 1");
  if (n < 0) throw DomainError("level must be non-negative");
  if (n > kMaxLevel) {
    throw SizeGuardError("level " + std::to_string(n) + " exceeds cap " +
                         std::to_string(kMaxLevel));
  }
}

/// Next level of normalized preimages from the current one.
inline std::vector<double> refine_preimages(const std::vector<double>& level) {
  std::vector<double> next(2 * level.size());
  for (std::size_t j = 0; j < level.size(); ++j) {
    const double r = level[j];
    const double left = 0.5 * (r - 1.0);
    const double right = 0.5 * (r + 1.0);
    next[2 * j] = -left * left;
    next[2 * j + 1] = right * right;
  }
  return next;
}

/// The 2^n points of f^{-n}(a), ordered by m = 1..2^n.
inline std::vector<double> preimage_level(double a, int n) {
  check_slice_args(a, n);
  std::vector<double> level{a};
  for (int j = 0; j < n; ++j) level = refine_preimages(level);
  return level;
}

/// b_n = 2^{2^{n+1}-2} = 4 b_{n-1}^2; representable for n <= 5.
inline std::uint64_t preimage_denominator(int n) {
  if (n < 0 || n > 5) throw SizeGuardError("b_n overflows 64 bits beyond n = 5");
  return std::uint64_t{1} << ((std::uint64_t{1} << (n + 1)) - 2);
}

struct SliceLeaf {
  double r;      ///< normalized preimage abscissa
  double width;  ///< length of F_k^n({x = r}) on the slice
};

struct SliceDecomposition {
  double a = 0.0;
  int n = 0;
  std::vector<SliceLeaf> leaves;
  double total = 0.0;
};

namespace detail {

inline std::vector<SliceLeaf> refine_leaves(const ConeSystem& sys,
                                            const std::vector<SliceLeaf>& level) {
  std::vector<double> parents(level.size());
  for (std::size_t j = 0; j < level.size(); ++j) parents[j] = level[j].r;
  const auto rs = refine_preimages(parents);
  std::vector<SliceLeaf> next(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    next[i] = {rs[i], sys.fiber_factor(rs[i]) * level[i / 2].width};
  }
  return next;
}

inline double leaf_total(const std::vector<SliceLeaf>& leaves) {
  std::vector<double> w(leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i) w[i] = leaves[i].width;
  return pairwise_sum(w);
}

}  // namespace detail

inline SliceDecomposition slice_measure(const ConeSystem& sys, double a, int n) {
  check_slice_args(a, n);
  std::vector<SliceLeaf> leaves{{a, 2.0}};
  for (int j = 0; j < n; ++j) leaves = detail::refine_leaves(sys, leaves);
  SliceDecomposition out;
  out.a = a;
  out.n = n;
  out.total = detail::leaf_total(leaves);
  out.leaves = std::move(leaves);
  return out;
}

/// Upper bound 2 / 4^{n/k} on Leb(C_n(a)).
inline double cone_bound(int k, int n) { return 2.0 * std::pow(4.0, -static_cast<double>(n) / k); }

struct ConeBoundRow {
  int n;
  double total;
  double bound;
  double ratio;     ///< total / bound
  bool within;      ///< total <= bound + 1e-12
  bool contracts;   ///< total <= previous total * 2^{-2/k} (1 + 1e-12)
};

struct ConeBoundReport {
  int k;
  double a;
  std::vector<ConeBoundRow> rows;

  bool passed() const {
    for (const auto& r : rows)
      if (!r.within || !r.contracts) return false;
    return true;
  }
};

inline ConeBoundReport verify_cone_bound(const ConeSystem& sys, double a, int n_max) {
  check_slice_args(a, n_max);
  ConeBoundReport report{sys.k(), a, {}};
  const double step = std::pow(2.0, -2.0 / sys.k());
  std::vector<SliceLeaf> leaves{{a, 2.0}};
  double previous = std::numeric_limits<double>::infinity();
  for (int n = 0;; ++n) {
    const double total = detail::leaf_total(leaves);
    const double bound = cone_bound(sys.k(), n);
    report.rows.push_back({n, total, bound, total / bound, total <= bound + 1e-12,
                           n == 0 || total <= previous * step * (1.0 + 1e-12)});
    previous = total;
    if (n == n_max) break;
    leaves = detail::refine_leaves(sys, leaves);
  }
  return report;
}

/// Positions of the level-n leaf intervals on the slice x = a, obtained by
/// pushing the endpoints of each preimage line forward.
inline std::vector<Interval> slice_intervals(const ConeSystem& sys, double a, int n) {
  const auto rs = preimage_level(a, n);
  std::vector<Interval> out;
  out.reserve(rs.size());
  for (double r : rs) {
    Point lo{r, -1.0};
    Point hi{r, 1.0};
    for (int j = 0; j < n; ++j) {
      lo = sys.apply(lo);
      hi = sys.apply(hi);
    }
    out.push_back({std::min(lo.y, hi.y), std::max(lo.y, hi.y)});
  }
  return out;
}

struct BruteForceResult {
  double estimate;
  double max_abscissa_error;  ///< how far pushed lines land from x = a
  bool precision_warning;     ///< resolution coarser than 1e-3
};

namespace detail {

/// Solves base(x) = target on one branch by bisection.
inline double bisect_branch(const LorenzMap& base, double target, bool right) {
  double lo = right ? 0.0 : -1.0;
  double hi = right ? 1.0 : 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (mid == 0.0 || base(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Oracle for slice_measure: root-finds the preimage lines, pushes a dense
/// cell-centred y-grid along each one n times, and measures the union of the
/// resulting y-ranges on the slice.
inline BruteForceResult brute_force_slice(const ConeSystem& sys, double a, int n,
                                          double resolution) {
  check_slice_args(a, n);
  if (n > 8) throw SizeGuardError("brute_force_slice is capped at n = 8");
  if (!(resolution > 0.0)) throw DomainError("resolution must be positive");

  std::vector<double> lines{a};
  for (int j = 0; j < n; ++j) {
    std::vector<double> next;
    next.reserve(2 * lines.size());
    for (double t : lines) {
      next.push_back(detail::bisect_branch(sys.base_map(), t, false));
      next.push_back(detail::bisect_branch(sys.base_map(), t, true));
    }
    lines = std::move(next);
  }

  const auto cells = static_cast<std::size_t>(std::ceil(2.0 / resolution));
  std::vector<Interval> images(lines.size());
  std::vector<double> landing_error(lines.size());
  parallel_for(lines.size(), [&](std::size_t i) {
    std::vector<double> ys;
    ys.reserve(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      const double y = -1.0 + (static_cast<double>(c) + 0.5) * resolution;
      if (y > 1.0) break;
      ys.push_back(y);
    }
    double x = lines[i];
    for (int j = 0; j < n; ++j) x = sys.apply_to_fiber(x, ys);
    const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
    images[i] = {*lo, *hi};
    landing_error[i] = std::abs(x - a);
  });

  double worst = 0.0;
  for (double e : landing_error) worst = std::max(worst, e);
  return {union_length(std::move(images)), worst, resolution > 1e-3};
}

}  // namespace fathorse::cones
