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

// A fat Cantor set K inside [-a, a]. Interval I_w of a binary word w loses
// its closed centred gap I*_w of length beta_{l(w)} / 2^{l(w)}; what remains
// is I_{w0} on the right and I_{w1} on the left. All words of one length l
// have the same interval length (2a - sum_{j<l} beta_j) / 2^l.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "core_maps.hpp"
#include "errors.hpp"
#include "geometry.hpp"

namespace fathorse::cantor {

/// Finite word over {0, 1}; letter i sits at bit i.
class Word {
public:
  static constexpr int kMaxLength = 62;

  Word() = default;

  static Word from_string(std::string_view s) {
    Word w;
    for (char ch : s) {
      if (ch != '0' && ch != '1') throw DomainError("word letters must be 0 or 1");
      w = w.child(ch == '1' ? 1 : 0);
    }
    return w;
  }

  int size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }
  int letter(int i) const noexcept { return static_cast<int>((bits_ >> i) & 1u); }
  std::uint64_t bits() const noexcept { return bits_; }

  Word child(int letter) const {
    if (length_ >= kMaxLength) throw SizeGuardError("word length cap exceeded");
    Word w = *this;
    w.bits_ |= static_cast<std::uint64_t>(letter & 1) << length_;
    ++w.length_;
    return w;
  }

  Word prefix(int n) const {
    Word w;
    w.length_ = n;
    w.bits_ = n == 0 ? 0 : bits_ & ((std::uint64_t{1} << n) - 1);
    return w;
  }

  /// Drops the first letter (the shift on addresses).
  Word tail() const {
    Word w;
    if (length_ == 0) return w;
    w.length_ = length_ - 1;
    w.bits_ = bits_ >> 1;
    return w;
  }

  /// Every letter flipped; I_{flip(w)} = -I_w.
  Word flipped() const {
    Word w = *this;
    w.bits_ = length_ == 0 ? 0 : ~bits_ & ((std::uint64_t{1} << length_) - 1);
    return w;
  }

  /// Word of length n whose letters are the low bits of \p index, first letter lowest.
  static Word from_index(std::uint64_t index, int n) {
    Word w;
    w.length_ = n;
    w.bits_ = index;
    return w;
  }

  std::string to_string() const {
    std::string s;
    for (int i = 0; i < length_; ++i) s.push_back(letter(i) ? '1' : '0');
    return s;
  }

  friend bool operator==(const Word&, const Word&) = default;

private:
  std::uint64_t bits_ = 0;
  int length_ = 0;
};

/// beta_n = 2b / (n+1)^p. Sums to 2b zeta(p).
class BetaSequence {
public:
  static constexpr int kLevels = 96;

  BetaSequence(double b, double p) : b_(b), p_(p) {
    if (!(b > 0.0)) throw InvalidParameter("gap seed b must be positive");
    if (!(p > 1.0)) throw InvalidParameter("beta exponent p must exceed 1 (series diverges)");
    partial_.resize(kLevels + 1);
    double sum = 0.0;
    double comp = 0.0;
    for (int n = 0; n <= kLevels; ++n) {
      partial_[n] = sum;
      // Kahan: partial sums feed level lengths that shrink like 2^-n.
      const double y = value(n) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }

  double seed() const noexcept { return b_; }
  double exponent() const noexcept { return p_; }
  double value(int n) const { return 2.0 * b_ / std::pow(n + 1.0, p_); }

  /// sum_{j < n} beta_j.
  double partial_sum(int n) const {
    if (n < 0 || n > kLevels) throw SizeGuardError("beta partial sum level out of range");
    return partial_[static_cast<std::size_t>(n)];
  }

  double total() const { return 2.0 * b_ * std::riemann_zeta(p_); }

  /// Rigorous upper bound on sum_{j >= n} beta_j (integral test).
  double tail_bound(int n) const {
    return 2.0 * b_ * (std::pow(n + 1.0, -p_) + std::pow(n + 1.0, 1.0 - p_) / (p_ - 1.0));
  }

  /// beta_{n+1} / beta_n = ((n+1)/(n+2))^p.
  double ratio(int n) const { return std::pow((n + 1.0) / (n + 2.0), p_); }

private:
  double b_;
  double p_;
  std::vector<double> partial_;
};

/// Result of locating a point in the tree.
struct Address {
  Word word;
  bool in_gap = false;  ///< true: x lies in the closed gap I*_word
};

class CantorConstruction {
public:
  static constexpr int kMaxMeasureLevel = 30;

  CantorConstruction(double a, BetaSequence beta) : a_(a), beta_(std::move(beta)) {
    if (!(a > 0.0)) throw InvalidParameter("half-length a must be positive");
    const double zeta = std::riemann_zeta(beta_.exponent());
    const double ratio = a / beta_.seed();
    if (!(zeta < ratio)) {
      std::ostringstream msg;
      msg.precision(10);
      msg << "infeasible gap sequence: zeta(p) = " << zeta << " must be below a/b = " << ratio
          << " (sum of beta_n = " << beta_.total() << " >= 2a = " << 2.0 * a << ")";
      throw FeasibilityError(msg.str());
    }
    lengths_.resize(BetaSequence::kLevels + 1);
    for (int l = 0; l <= BetaSequence::kLevels; ++l) {
      lengths_[static_cast<std::size_t>(l)] =
          std::ldexp(2.0 * a_ - beta_.partial_sum(l), -l);
    }
  }

  double half_length() const noexcept { return a_; }
  const BetaSequence& beta() const noexcept { return beta_; }

  /// |I_w| for l(w) = level.
  double interval_length(int level) const {
    if (level < 0 || level > BetaSequence::kLevels) throw SizeGuardError("level out of range");
    return lengths_[static_cast<std::size_t>(level)];
  }

  /// |I*_w| for l(w) = level.
  double gap_length(int level) const { return std::ldexp(beta_.value(level), -level); }

  /// Splits I_w into its gap and two children.
  struct Split {
    Interval gap;
    Interval right;  ///< I_{w0}
    Interval left;   ///< I_{w1}
  };

  /// Children take their length from the level table and keep the parent's
  /// outer endpoints, so rounding does not accumulate across levels.
  Split split(const Interval& iw, int level) const {
    const double child = interval_length(level + 1);
    const Interval right{iw.hi - child, iw.hi};
    const Interval left{iw.lo, iw.lo + child};
    return {{left.hi, right.lo}, right, left};
  }

  /// I_w by repeated gap removal from I_empty = [-a, a].
  Interval interval_endpoints(const Word& w) const {
    Interval iv{-a_, a_};
    for (int l = 0; l < w.size(); ++l) {
      const auto s = split(iv, l);
      iv = w.letter(l) == 0 ? s.right : s.left;
    }
    return iv;
  }

  /// I_w from the closed-form level lengths, centres moving by
  /// (|I_l| - |I_{l+1}|) / 2 per letter.
  Interval interval_closed_form(const Word& w) const {
    double center = 0.0;
    for (int l = 0; l < w.size(); ++l) {
      const double shift = 0.5 * (interval_length(l) - interval_length(l + 1));
      center += w.letter(l) == 0 ? shift : -shift;
    }
    const double half = 0.5 * interval_length(w.size());
    return {center - half, center + half};
  }

  Interval gap_endpoints(const Word& w) const {
    return split(interval_endpoints(w), w.size()).gap;
  }

  /// 2a - sum_{n<N} beta_n.
  double cover_measure(int N) const { return 2.0 * a_ - beta_.partial_sum(N); }

  /// Leb(K) = 2a - 2b zeta(p).
  double limit_measure() const { return 2.0 * a_ - beta_.total(); }

  /// Sum of the 2^N level-N interval lengths, by explicit enumeration.
  double level_measure(int N) const {
    if (N < 0) throw DomainError("level must be non-negative");
    if (N > kMaxMeasureLevel) {
      throw SizeGuardError("level_measure is capped at N = " + std::to_string(kMaxMeasureLevel));
    }
    return sum_lengths(2.0 * a_, 0, N);
  }

  /// All 2^N level-N intervals ordered by word index (first letter lowest bit).
  std::vector<Interval> level_intervals(int N) const {
    if (N < 0 || N > 24) throw SizeGuardError("level_intervals is capped at N = 24");
    std::vector<Interval> out(std::size_t{1} << N);
    fill_level({-a_, a_}, 0, N, 0, out);
    return out;
  }

  /// Descends at most \p depth levels. Closed gaps win ties with the
  /// neighbouring intervals, so shared endpoints report the gap.
  Address locate(double x, int depth) const {
    if (!(x >= -a_ && x <= a_)) throw DomainError("locate needs x in [-a, a]");
    if (depth < 1) throw DomainError("locate depth must be >= 1");
    Interval iv{-a_, a_};
    Word w;
    for (int l = 0; l < depth; ++l) {
      const auto s = split(iv, l);
      if (s.gap.contains(x)) return {w, true};
      const int letter = x > s.gap.hi ? 0 : 1;
      iv = letter == 0 ? s.right : s.left;
      w = w.child(letter);
    }
    return {w, false};
  }

private:
  // Gap removal applied to lengths directly: |I_{wj}| = (|I_w| - |I*_w|) / 2.
  // Working with lengths instead of absolute endpoints keeps the 2^N-term
  // sum free of the ulp(a)-sized cancellation in hi - lo.
  double sum_lengths(double length, int level, int N) const {
    if (level == N) return length;
    const double child = 0.5 * (length - gap_length(level));
    return sum_lengths(child, level + 1, N) + sum_lengths(child, level + 1, N);
  }

  void fill_level(const Interval& iv, int level, int N, std::uint64_t index,
                  std::vector<Interval>& out) const {
    if (level == N) {
      out[index] = iv;
      return;
    }
    const auto s = split(iv, level);
    fill_level(s.right, level + 1, N, index, out);
    fill_level(s.left, level + 1, N, index | (std::uint64_t{1} << level), out);
  }

  double a_;
  BetaSequence beta_;
  std::vector<double> lengths_;
};

/// K for the constants of \p m with beta_n = 2b / (n+1)^p.
inline CantorConstruction make_construction(const LorenzBranchMap& m, double p) {
  return CantorConstruction(m.a, BetaSequence(m.b, p));
}

}  // namespace fathorse::cantor
