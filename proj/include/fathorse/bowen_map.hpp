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

// Surgery on the Lorenz map. A base map B : I_0 = [b, a] -> [-a, a] is
// built directly on the interval tree:
//
//   * I_{0w} is sent onto I_w, order preserving, so the address 0w shifts to w;
//   * the gap I*_{0w} is sent onto I*_w by a C^1 diffeomorphism whose
//     derivative profile is phi(t) = 2 + 2 (s_n - 2) sin^2(pi t), with
//     t in [0, 1] the position inside the source gap, n = l(w), and
//     s_n = 2 beta_n / beta_{n+1} its mean slope;
//   * B' = 2 on K.
//
// The left branch of f is then replaced on [f(b), -a] by
// h = B o (f|_{[b,a]})^{-1} and the right branch on [a, -f(b)] by the odd
// reflection, so that f^2 = B on [b, a] by construction.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "core_maps.hpp"
#include "errors.hpp"
#include "fat_cantor.hpp"
#include "geometry.hpp"
#include "parallel.hpp"

namespace fathorse::bowen {

using cantor::CantorConstruction;
using cantor::Word;

/// Gap diffeomorphism profile with mean slope s (s > 0).
class GapProfile {
public:
  explicit GapProfile(double mean_slope) : s_(mean_slope) {}

  double mean_slope() const noexcept { return s_; }

  double derivative(double t) const {
    const double sn = std::sin(std::numbers::pi * t);
    return 2.0 + 2.0 * (s_ - 2.0) * sn * sn;
  }

  /// Fraction of the target gap covered at source position t.
  double forward(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double integral =
        2.0 * t + (s_ - 2.0) * (t - std::sin(2.0 * std::numbers::pi * t) / (2.0 * std::numbers::pi));
    return integral / s_;
  }

  /// Inverse of forward() by safeguarded Newton.
  double inverse(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    double t = u;
    for (int it = 0; it < 100; ++it) {
      const double r = forward(t) - u;
      if (r == 0.0) return t;
      if (r > 0.0) hi = t; else lo = t;
      double next = t - r * s_ / derivative(t);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 1e-17) return next;
      t = next;
    }
    return t;
  }

  double sup_deviation() const noexcept { return 2.0 * std::abs(s_ - 2.0); }

private:
  double s_;
};

/// Mean slope s_n = 2 beta_n / beta_{n+1} of the gap diffeo I*_{0w} -> I*_w, l(w) = n.
inline double gap_mean_slope(const CantorConstruction& cc, int n) {
  return 2.0 / cc.beta().ratio(n);
}

struct BaseEval {
  double value;
  double derivative;
  int level;    ///< level of the target gap, or the depth where descent stopped
  bool in_gap;  ///< false: point of K to within the descent tolerance
};

class BaseMap {
public:
  static constexpr double kDefaultTolerance = 1e-10;
  static constexpr double kDomainSlack = 1e-12;

  explicit BaseMap(CantorConstruction cc, double tol = kDefaultTolerance)
      : cc_(std::move(cc)), tol_(tol) {
    if (!(tol >= 1e-16)) throw InvalidParameter("base map tolerance must be positive");
    domain_ = cc_.interval_endpoints(Word::from_string("0"));
  }

  const CantorConstruction& construction() const noexcept { return cc_; }
  Interval domain() const noexcept { return domain_; }
  double tolerance() const noexcept { return tol_; }

  BaseEval evaluate(double x) const { return evaluate(x, tol_); }

  BaseEval evaluate(double x, double tol) const {
    x = clamp_into(x, domain_, "base map");
    const double a = cc_.half_length();
    Interval src = domain_;
    Interval tgt{-a, a};
    const int max_level = cantor::BetaSequence::kLevels - 2;
    for (int n = 0; n < max_level; ++n) {
      const auto ss = cc_.split(src, n + 1);
      const auto ts = cc_.split(tgt, n);
      if (ss.gap.contains(x)) {
        const GapProfile prof(gap_mean_slope(cc_, n));
        const double t = (x - ss.gap.lo) / ss.gap.length();
        const double u = prof.forward(t);
        const double y = u >= 1.0 ? ts.gap.hi : ts.gap.lo + u * ts.gap.length();
        return {y, prof.derivative(t), n, true};
      }
      const bool right = x > ss.gap.hi;
      src = right ? ss.right : ss.left;
      tgt = right ? ts.right : ts.left;
      if (src.length() < tol) {
        return {tgt.lo + (x - src.lo) * (tgt.length() / src.length()), 2.0, n + 1, false};
      }
    }
    return {tgt.lo + (x - src.lo) * (tgt.length() / src.length()), 2.0, max_level, false};
  }

  double operator()(double x) const { return evaluate(x).value; }
  double derivative(double x) const { return evaluate(x).derivative; }

  /// B^{-1} : [-a, a] -> [b, a].
  double inverse(double y) const { return inverse(y, tol_); }

  double inverse(double y, double tol) const {
    const double a = cc_.half_length();
    y = clamp_into(y, {-a, a}, "base map inverse");
    Interval src = domain_;
    Interval tgt{-a, a};
    const int max_level = cantor::BetaSequence::kLevels - 2;
    for (int n = 0; n < max_level; ++n) {
      const auto ss = cc_.split(src, n + 1);
      const auto ts = cc_.split(tgt, n);
      if (ts.gap.contains(y)) {
        const GapProfile prof(gap_mean_slope(cc_, n));
        const double t = prof.inverse((y - ts.gap.lo) / ts.gap.length());
        return t >= 1.0 ? ss.gap.hi : ss.gap.lo + t * ss.gap.length();
      }
      const bool right = y > ts.gap.hi;
      src = right ? ss.right : ss.left;
      tgt = right ? ts.right : ts.left;
      if (tgt.length() < tol) break;
    }
    return src.lo + (y - tgt.lo) * (src.length() / tgt.length());
  }

private:
  static double clamp_into(double x, const Interval& iv, const char* what) {
    if (x < iv.lo - kDomainSlack || x > iv.hi + kDomainSlack || std::isnan(x)) {
      throw DomainError(std::string(what) + ": argument outside its interval");
    }
    return std::clamp(x, iv.lo, iv.hi);
  }

  CantorConstruction cc_;
  double tol_;
  Interval domain_;
};

/// The Lorenz map with the surgery spliced in.
class BowenSystem {
public:
  BowenSystem(LorenzBranchMap m, double p, double tol = BaseMap::kDefaultTolerance)
      : m_(m), base_(cantor::make_construction(m, p), tol) {
    fb_ = m_.f(m_.b);
  }

  const LorenzBranchMap& lorenz() const noexcept { return m_; }
  const LorenzMap& analytic() const noexcept { return m_.f; }
  const BaseMap& base() const noexcept { return base_; }
  const CantorConstruction& construction() const noexcept { return base_.construction(); }
  double a() const noexcept { return m_.a; }
  double b() const noexcept { return m_.b; }
  /// f(b), the left end of the left surgery zone.
  double f_of_b() const noexcept { return fb_; }

  /// Left surgery zone [f(b), -a]; the right zone is its mirror [a, -f(b)].
  Interval left_zone() const noexcept { return {fb_, -m_.a}; }

  double operator()(double x) const {
    if (x == 0.0) throw SingularityError("modified Lorenz map");
    if (x < 0.0) return left_zone().contains(x) ? splice(x) : m_.f(x);
    return left_zone().contains(-x) ? -splice(-x) : m_.f(x);
  }

  /// At the four splice abscissas the surgery-side derivative is reported.
  double derivative(double x) const {
    if (x == 0.0) throw SingularityError("modified Lorenz map");
    const double u = x < 0.0 ? x : -x;
    return left_zone().contains(u) ? splice_derivative(u) : m_.f.derivative(x);
  }

  /// Inverse of the modified right branch, y in (-1, f(1)].
  double invert_right(double y) const {
    if (!(y > -1.0 && y <= m_.f.right_branch_top())) {
      throw DomainError("modified right-branch inverse needs y in (-1, f(1)]");
    }
    if (y >= -m_.a && y <= m_.a) return -m_.f(base_.inverse(-y));
    return m_.f.invert_right(y);
  }

  /// (f^2)'(x) = f'(f(x)) f'(x) for |x| in [b, a]. The inner factor is the
  /// analytic branch (I_0 meets the surgery zone only at a, from outside) and
  /// the outer factor the spliced branch, since f(I_0) is the left zone.
  double second_iterate_derivative(double x) const {
    const double u = std::abs(x);
    if (!(u >= m_.b - BaseMap::kDomainSlack && u <= m_.a + BaseMap::kDomainSlack)) {
      throw DomainError("second_iterate_derivative needs |x| in [b, a]");
    }
    const double fu = std::clamp((*this)(u), fb_, -m_.a);
    return splice_derivative(fu) * m_.f.derivative(u);
  }

private:
  // h = B o (f_R)^{-1} on [f(b), -a].
  double splice(double x) const { return base_(m_.f.invert_right(x)); }

  double splice_derivative(double x) const {
    return base_.derivative(m_.f.invert_right(x)) * m_.f.invert_right_derivative(x);
  }

  LorenzBranchMap m_;
  BaseMap base_;
  double fb_;
};

struct SurgeryLevel {
  int n;
  double sup_deviation;  ///< sampled sup of |2 - (f^2)'| over level-n gaps
  double expected;       ///< 2 (s_n - 2)
  bool matches;          ///< |sup - expected| <= 1e-9
};

struct SurgeryReport {
  std::vector<SurgeryLevel> levels;
  bool deviation_decreasing = true;  ///< strictly, for n >= 1
  double endpoint_worst = 0.0;       ///< max |(f^2)' - 2| at tree endpoints
  int endpoint_level = 0;
  std::size_t endpoint_count = 0;
  double continuity_worst = 0.0;     ///< max jump at +-a, +-f(b)
  bool monotone = true;
  std::size_t monotone_grid = 0;

  bool passed() const {
    for (const auto& l : levels)
      if (!l.matches) return false;
    return deviation_decreasing && endpoint_worst <= 1e-9 && continuity_worst <= 1e-10 &&
           monotone;
  }
};

inline SurgeryReport verify_surgery(const BowenSystem& sys, int max_level, int endpoint_level = 10,
                                    std::size_t grid = 100000) {
  if (max_level < 0 || max_level > 14) throw SizeGuardError("verify_surgery supports levels 0..14");
  if (endpoint_level < 0 || endpoint_level > 14) {
    throw SizeGuardError("endpoint check supports levels 0..14");
  }
  const auto& cc = sys.construction();
  SurgeryReport rep;
  constexpr double kSamples[] = {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};

  for (int n = 0; n <= max_level; ++n) {
    // Level-(n+1) intervals with first letter 0 are the I_{0w}, l(w) = n.
    const auto ivs = cc.level_intervals(n + 1);
    std::vector<double> worst(ivs.size() / 2, 0.0);
    parallel_for(worst.size(), [&](std::size_t j) {
      const auto gap = cc.split(ivs[2 * j], n + 1).gap;
      double w = 0.0;
      for (double t : kSamples) {
        const double x = gap.lo + t * gap.length();
        w = std::max(w, std::abs(2.0 - sys.second_iterate_derivative(x)));
      }
      worst[j] = w;
    });
    const double sup = *std::max_element(worst.begin(), worst.end());
    const double expected = 2.0 * (gap_mean_slope(cc, n) - 2.0);
    rep.levels.push_back({n, sup, expected, std::abs(sup - expected) <= 1e-9});
    if (n >= 2) {
      rep.deviation_decreasing =
          rep.deviation_decreasing && sup < rep.levels[static_cast<std::size_t>(n - 1)].sup_deviation;
    }
  }

  rep.endpoint_level = endpoint_level;
  for (int l = 0; l <= endpoint_level; ++l) {
    const auto ivs = cc.level_intervals(l + 1);
    for (std::size_t j = 0; j < ivs.size(); j += 2) {
      for (double x : {ivs[j].lo, ivs[j].hi}) {
        rep.endpoint_worst =
            std::max(rep.endpoint_worst, std::abs(sys.second_iterate_derivative(x) - 2.0));
        ++rep.endpoint_count;
      }
    }
  }

  const auto& f = sys.analytic();
  const double a = sys.a();
  const double fb = sys.f_of_b();
  for (double x : {fb, -a}) {
    rep.continuity_worst = std::max(rep.continuity_worst, std::abs(sys(x) - f(x)));
    rep.continuity_worst = std::max(rep.continuity_worst, std::abs(sys(-x) - f(-x)));
  }

  rep.monotone_grid = grid;
  double prev_pos = -2.0;
  double prev_neg = -2.0;
  for (std::size_t i = 1; i <= grid; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid);
    const double xn = -1.0 + static_cast<double>(i - 1) / static_cast<double>(grid);
    const double vp = sys(x);
    const double vn = sys(xn);
    rep.monotone = rep.monotone && vp > prev_pos && vn > prev_neg;
    prev_pos = vp;
    prev_neg = vn;
  }
  return rep;
}

}  // namespace fathorse::bowen
