#pragma once

// Independent oracles and generators shared by the test binaries. Nothing
// here calls the library's own bridge or search code.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "thickset/constructions.hpp"
#include "thickset/core.hpp"

namespace thickset::testing {

inline Rational R(long p, long q = 1) { return Rational(p, q); }

inline CantorStage stage_of(std::vector<std::pair<Rational, Rational>> ivs, std::size_t depth = 0) {
  std::vector<ClosedInterval> out;
  for (auto& [lo, hi] : ivs) out.push_back({lo, hi});
  return CantorStage(std::move(out), depth);
}

/// Bridge by the definition: the longest run of intervals next to the gap
/// whose inner gaps are all no longer than the gap itself.
inline ClosedInterval brute_bridge(const std::vector<ClosedInterval>& ivs, std::size_t gap_index, Side side) {
  const Rational g = ivs[gap_index + 1].lo - ivs[gap_index].hi;
  if (side == Side::left) {
    std::size_t j = gap_index;
    for (std::size_t k = gap_index; k > 0; --k) {
      if (ivs[k].lo - ivs[k - 1].hi > g) break;
      j = k - 1;
    }
    return {ivs[j].lo, ivs[gap_index].hi};
  }
  std::size_t j = gap_index + 1;
  for (std::size_t k = gap_index + 1; k + 1 < ivs.size(); ++k) {
    if (ivs[k + 1].lo - ivs[k].hi > g) break;
    j = k + 1;
  }
  return {ivs[gap_index + 1].lo, ivs[j].hi};
}

/// Minimum over all endpoints of |bridge| / |gap|, quadratic time.
inline std::optional<Rational> brute_thickness(const CantorStage& s) {
  const auto& ivs = s.intervals();
  std::optional<Rational> best;
  for (std::size_t i = 0; i + 1 < ivs.size(); ++i) {
    const Rational g = ivs[i + 1].lo - ivs[i].hi;
    for (Side side : {Side::left, Side::right}) {
      const Rational ratio = brute_bridge(ivs, i, side).length() / g;
      if (!best || ratio < *best) best = ratio;
    }
  }
  return best;
}

/// Membership of a closed interval in one interval of the middle-alpha stage
/// at `depth`, by repeated rescaling of the two kept pieces.
inline bool middle_alpha_holds(const Rational& alpha, ClosedInterval iv, std::size_t depth) {
  const Rational beta = (1 - alpha) / 2;
  for (std::size_t k = 0; k <= depth; ++k) {
    if (iv.lo < 0 || iv.hi > 1) return false;
    if (k == depth) return true;
    if (iv.hi <= beta) {
      iv = {iv.lo / beta, iv.hi / beta};
    } else if (iv.lo >= 1 - beta) {
      iv = {(iv.lo - (1 - beta)) / beta, (iv.hi - (1 - beta)) / beta};
    } else {
      return false;
    }
  }
  return true;
}

/// Ternary test: x lies in the depth-`depth` middle-thirds stage.
inline bool ternary_member(const Rational& x, std::size_t depth) {
  Rational y = x;
  for (std::size_t k = 0; k < depth; ++k) {
    if (y < 0 || y > 1) return false;
    if (y <= R(1, 3)) {
      y = 3 * y;
    } else if (y >= R(2, 3)) {
      y = 3 * y - 2;
    } else {
      return false;
    }
  }
  return y >= 0 && y <= 1;
}

inline Rational random_rational(std::mt19937_64& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> d(lo * den, hi * den);
  return Rational(d(rng), den);
}

/// A random stage: random-thick with a drawn target and seed, depth <= max_depth.
inline CantorStage random_stage(std::mt19937_64& rng, const std::vector<Rational>& taus, std::size_t max_depth) {
  RandomThickSpec spec;
  spec.target_tau = taus[rng() % taus.size()];
  spec.depth = 1 + rng() % max_depth;
  spec.seed = rng();
  return random_thick(spec);
}

}  // namespace thickset::testing
