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

// The Poincare map F(x, y) = (f(x), g(x, y)) on the section [-1,1]^2 for the
// surgered Lorenz map f, and the fat horseshoe H = K x K of F^2 on
// A = [-a, a]^2.
//
// On A the second iterate is a skew product
//   F^2(x, y) = (f^2(x), -s f^{-1}(-f^{-1}(s y))),  s = sgn x,
// whose fiber maps are the two inverse branches of the doubling map on K:
// s = -1 sends I_w onto I_{0w} and s = +1 sends I_w onto I_{1w}. So the
// forward images of A, the intersection over k >= 0 of F^{2k}(A), are
// [-a, a] x K_N in the limit. The
// backward condition (the intersection over k < 0) is the expanding one: x must
// keep returning to I_0 u I_1 under f^2. Membership in H_N is therefore
// decided by N steps of the x-orbit forward and N steps of the inverse
// fiber orbit of y.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bowen_map.hpp"
#include "errors.hpp"
#include "fat_cantor.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace fathorse::horseshoe {

using bowen::BowenSystem;
using cantor::Word;

inline double sign_of(double x) { return x > 0.0 ? 1.0 : -1.0; }

class PoincareSystem {
public:
  static constexpr double kOuterSlope = 0.25;
  static constexpr double kSlack = 1e-12;

  explicit PoincareSystem(BowenSystem sys) : sys_(std::move(sys)) {
    epsilon_ = 0.5 * (sys_(1.0) + sys_.f_of_b());
    if (!(epsilon_ > 0.0)) throw InvalidParameter("strip margin (f(1) + f(b)) / 2 must be positive");
    strip_half_ = -sys_.f_of_b() + epsilon_;
  }

  const BowenSystem& bowen() const noexcept { return sys_; }
  double a() const noexcept { return sys_.a(); }
  double b() const noexcept { return sys_.b(); }
  double epsilon() const noexcept { return epsilon_; }
  /// Strip y-range is [-Y, Y] with Y = -f(b) + epsilon.
  double strip_half_height() const noexcept { return strip_half_; }

  /// g(x, y) = s G(s y), s = sgn x. G is the modified right-branch inverse
  /// on the strip and an affine contraction of slope 1/4 beyond it.
  double fiber(double x, double y) const {
    if (x == 0.0) throw SingularityError("Poincare map");
    const double s = sign_of(x);
    return s * outer_inverse(s * y);
  }

  /// dg/dy at (x, y).
  double fiber_slope(double x, double y) const {
    if (x == 0.0) throw SingularityError("Poincare map");
    const double u = sign_of(x) * y;
    if (std::abs(u) > strip_half_) return kOuterSlope;
    return 1.0 / sys_.derivative(sys_.invert_right(u));
  }

  Point apply(Point p) const {
    if (p.x == 0.0) throw SingularityError("Poincare map");
    return {sys_(p.x), fiber(p.x, p.y)};
  }

  /// Closed-form F^2 on ([-a,-b] u [b,a]) x [-a,a].
  Point apply_twice_on_A(Point p) const {
    const double ax = std::abs(p.x);
    if (!(ax >= b() - kSlack && ax <= a() + kSlack && std::abs(p.y) <= a() + kSlack)) {
      throw DomainError("F^2 closed form needs |x| in [b, a] and |y| <= a");
    }
    const double s = sign_of(p.x);
    const double fx = s * sys_.base()(std::clamp(ax, b(), a()));
    return {fx, fiber_pair(s, std::clamp(p.y, -a(), a()))};
  }

  /// y -> -s f^{-1}(-f^{-1}(s y)), the F^2 fiber map above sign s.
  double fiber_pair(double s, double y) const {
    return -s * sys_.invert_right(-sys_.invert_right(s * y));
  }

  /// True when |x| lies in I_0 u I_1 = [b, a] with the shared endpoint b
  /// going to the gap.
  bool in_first_level(double x) const {
    const double ax = std::abs(x);
    return ax > b() && ax <= a() + kSlack;
  }

  /// f^2 restricted to I_0 u I_1 through the surgered map itself.
  double second_iterate(double x) const {
    return std::clamp(sys_(sys_(x)), -a(), a());
  }

  /// Preimage of y under the fiber map of F^2: y -> -sgn(y) f(-f(|y|)).
  double fiber_predecessor(double y) const {
    const double s = sign_of(y);
    return std::clamp(-s * sys_(-sys_(std::abs(y))), -a(), a());
  }

private:
  double outer_inverse(double u) const {
    const double top = strip_half_;
    double v;
    if (u > top) {
      v = sys_.invert_right(top) + kOuterSlope * (u - top);
    } else if (u < -top) {
      v = sys_.invert_right(-top) + kOuterSlope * (u + top);
    } else {
      v = sys_.invert_right(u);
    }
    return std::clamp(v, -1.0, 1.0);
  }

  BowenSystem sys_;
  double epsilon_;
  double strip_half_;
};

/// x stays in I_0 u I_1 for N applications of f^2.
inline bool forward_admissible(const PoincareSystem& ps, double x, int N) {
  for (int j = 0; j < N; ++j) {
    if (!ps.in_first_level(x)) return false;
    x = ps.second_iterate(x);
  }
  return std::abs(x) <= ps.a() + PoincareSystem::kSlack;
}

/// y has N fiber predecessors inside A, i.e. y lies in a level-N interval.
inline bool backward_admissible(const PoincareSystem& ps, double y, int N) {
  for (int j = 0; j < N; ++j) {
    if (!ps.in_first_level(y)) return false;
    y = ps.fiber_predecessor(y);
  }
  return std::abs(y) <= ps.a() + PoincareSystem::kSlack;
}

/// Membership in H_N = intersection of F^{2k}(A) over |k| <= N.
inline bool horseshoe_membership(const PoincareSystem& ps, Point p, int N) {
  const double lim = ps.a() + PoincareSystem::kSlack;
  if (std::abs(p.x) > lim || std::abs(p.y) > lim) return false;
  return forward_admissible(ps, p.x, N) && backward_admissible(ps, p.y, N);
}

struct SignWordInterval {
  std::uint64_t signs;  ///< bit j set: step j+1 taken above x > 0
  Interval image;
};

/// Tree word of the fiber image for a sign word of length N: the last
/// step's sign becomes the first letter, '+' -> 1 and '-' -> 0.
inline Word tree_word_for_signs(std::uint64_t signs, int N) {
  Word w;
  for (int j = N - 1; j >= 0; --j) w = w.child(static_cast<int>((signs >> j) & 1u));
  return w;
}

/// Image of [-a, a] under the composed F^2 fiber maps, for every sign word.
inline std::vector<SignWordInterval> fiber_intervals(const PoincareSystem& ps, int N) {
  if (N < 0 || N > 12) throw SizeGuardError("fiber_intervals supports N in 0..12");
  std::vector<SignWordInterval> out(std::size_t{1} << N);
  parallel_for(out.size(), [&](std::size_t idx) {
    double lo = -ps.a();
    double hi = ps.a();
    for (int j = 0; j < N; ++j) {
      const double s = (idx >> j) & 1u ? 1.0 : -1.0;
      lo = ps.fiber_pair(s, lo);
      hi = ps.fiber_pair(s, hi);
    }
    out[idx] = {idx, {std::min(lo, hi), std::max(lo, hi)}};
  });
  return out;
}

struct HorseshoeEstimate {
  int N = 0;
  double resolution = 0.0;
  std::uint64_t member_cells = 0;
  std::uint64_t total_cells = 0;
  double estimated_area = 0.0;
  double exact_level_area = 0.0;  ///< level_measure(N)^2
  double envelope = 0.0;          ///< bound on |estimated - exact|
  std::vector<SignWordInterval> sign_word_intervals;

  bool within_envelope() const { return std::abs(estimated_area - exact_level_area) <= envelope; }
};

/// Cell-centre count of H_N over A. Membership is a product of an x- and a
/// y-condition, so each is evaluated once per column/row and the cell count
/// is the product of the two integer counts.
///
/// Envelope: each of the 2^N intervals per axis gains or loses at most one
/// cell centre, so the per-axis length error is e <= 2^N res and
/// |estimate - m^2| <= 2 m e + e^2, m = level_measure(N).
inline HorseshoeEstimate horseshoe_measure(const PoincareSystem& ps, int N, double resolution) {
  if (N < 0 || N > 10) throw SizeGuardError("horseshoe_measure supports N in 0..10");
  if (!(resolution >= 1e-5)) throw SizeGuardError("resolution must be >= 1e-5");
  const double a = ps.a();
  const auto cells = static_cast<std::size_t>(std::ceil(2.0 * a / resolution));
  std::vector<std::uint8_t> col(cells);
  std::vector<std::uint8_t> row(cells);
  parallel_for(cells, [&](std::size_t i) {
    const double c = -a + (static_cast<double>(i) + 0.5) * resolution;
    col[i] = forward_admissible(ps, c, N) && std::abs(c) <= a;
    row[i] = backward_admissible(ps, c, N) && std::abs(c) <= a;
  });
  std::uint64_t nx = 0;
  std::uint64_t ny = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    nx += col[i];
    ny += row[i];
  }
  HorseshoeEstimate est;
  est.N = N;
  est.resolution = resolution;
  est.member_cells = nx * ny;
  est.total_cells = static_cast<std::uint64_t>(cells) * cells;
  est.estimated_area = static_cast<double>(est.member_cells) * resolution * resolution;
  const double m = ps.bowen().construction().level_measure(N);
  est.exact_level_area = m * m;
  const double e = std::ldexp(resolution, N);
  est.envelope = 2.0 * m * e + e * e;
  if (N <= 12) est.sign_word_intervals = fiber_intervals(ps, N);
  return est;
}

struct WitnessFailure {
  Point point;
  std::string reason;
};

struct WitnessReport {
  std::size_t samples = 0;
  std::size_t witnessed = 0;
  int member_level = 0;
  int witness_level = 0;       ///< deepest level M used to certify a gap
  double max_distance = 0.0;   ///< max |y - y'| over certified samples
  double eps = 0.0;
  std::vector<WitnessFailure> failures;

  bool passed() const { return samples > 0 && witnessed == samples && failures.empty(); }
};

/// Samples members of H_N and certifies for each one a point (x, y') with
/// |y - y'| < eps outside H: y' is the centre of the level-M interval that
/// contains y, which lies in the gap removed at level M, with M the first
/// level >= N whose half-interval is shorter than eps.
inline WitnessReport no_stable_segment_witness(const PoincareSystem& ps, std::size_t sample_count,
                                               double eps, int N, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < ps.b())) throw DomainError("witness eps must lie in (0, b)");
  const auto& cc = ps.bowen().construction();
  WitnessReport rep;
  rep.eps = eps;
  rep.member_level = N;
  int M = N;
  while (0.5 * cc.interval_length(M) >= eps) {
    ++M;
    if (M > Word::kMaxLength - 2) throw SizeGuardError("eps below representable interval scale");
  }
  rep.witness_level = M;

  const auto level = cc.level_intervals(N);
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < sample_count; ++k) {
    const auto& ix = level[rng.below(level.size())];
    const auto& iy = level[rng.below(level.size())];
    const Point p{ix.lo + (0.05 + 0.9 * rng.uniform()) * ix.length(),
                  iy.lo + (0.05 + 0.9 * rng.uniform()) * iy.length()};
    ++rep.samples;
    if (!horseshoe_membership(ps, p, N)) {
      rep.failures.push_back({p, "sampled point is not a member of H_N"});
      continue;
    }
    const auto addr = cc.locate(p.y, M);
    double y_gap = p.y;
    int depth = addr.word.size() + 1;
    if (!addr.in_gap) y_gap = cc.interval_endpoints(addr.word).center();
    const double dist = std::abs(y_gap - p.y);
    if (dist < eps && !horseshoe_membership(ps, {p.x, y_gap}, depth)) {
      ++rep.witnessed;
      rep.max_distance = std::max(rep.max_distance, dist);
    } else {
      rep.failures.push_back({p, "no vertical gap certified within eps"});
    }
  }
  return rep;
}

/// Volume of the flow-box thickening of a section set: delta * area.
inline double suspension_volume(double area, double delta) {
  if (area < 0.0 || delta < 0.0) throw DomainError("suspension_volume needs area, delta >= 0");
  return delta * area;
}

/// A region of the section, as a closed boundary polygon.
struct Region {
  std::string name;
  std::vector<Point> boundary;
};

/// The four pieces of the domain partition: inner strip rectangles
/// [b,1] x [-Y,Y] and their mirrors, and the remaining outer C-shapes on
/// each side of Gamma. \p per_edge points are placed along every edge;
/// Gamma itself is replaced by x = +-gamma_offset.
inline std::vector<Region> partition_regions(const PoincareSystem& ps, int per_edge = 64,
                                             double gamma_offset = 1e-9) {
  const double b = ps.b();
  const double Y = ps.strip_half_height();
  const auto polygon = [per_edge](std::vector<Point> corners) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < corners.size(); ++i) {
      const Point p = corners[i];
      const Point q = corners[(i + 1) % corners.size()];
      for (int j = 0; j < per_edge; ++j) {
        const double t = static_cast<double>(j) / per_edge;
        out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
    return out;
  };
  const double g = gamma_offset;
  std::vector<Region> regions;
  for (const double s : {1.0, -1.0}) {
    const std::string side = s > 0 ? "right" : "left";
    regions.push_back({side + "-outer", polygon({{s * g, -1.0},
                                                 {s * 1.0, -1.0},
                                                 {s * 1.0, -Y},
                                                 {s * b, -Y},
                                                 {s * b, Y},
                                                 {s * 1.0, Y},
                                                 {s * 1.0, 1.0},
                                                 {s * g, 1.0}})});
    regions.push_back({side + "-strip",
                       polygon({{s * b, -Y}, {s * 1.0, -Y}, {s * 1.0, Y}, {s * b, Y}})});
  }
  return regions;
}

}  // namespace fathorse::horseshoe
