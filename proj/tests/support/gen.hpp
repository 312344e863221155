#pragma once

// Seeded random instance generators shared by the unit and acceptance suites.

#include <algorithm>
#include <random>
#include <vector>

#include "polyfix/mapexpr.hpp"

namespace polyfix::testgen {

inline Rat rnd_rat(std::mt19937_64& rng, int lo = -8, int hi = 8, int max_den = 4) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, max_den);
  return Rat(num(rng), den(rng));
}

inline RatVec rnd_vec(std::mt19937_64& rng, int n, int lo = -8, int hi = 8, int max_den = 4) {
  RatVec v(n);
  for (int i = 0; i < n; ++i) v[i] = rnd_rat(rng, lo, hi, max_den);
  return v;
}

inline Mask rnd_mask(std::mt19937_64& rng, int n, bool nonempty = false) {
  std::uniform_int_distribution<Mask> d(0, full_mask(n));
  Mask m = d(rng);
  if (nonempty && m == 0) m = 1u << std::uniform_int_distribution<int>(0, n - 1)(rng);
  return m;
}

inline std::vector<int> rnd_perm(std::mt19937_64& rng, int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Random affine map with sup operator norm <= 1 (row-wise 1-norm bounded).
inline MapExpr rnd_affine_sup(std::mt19937_64& rng, int n, bool zero_offset) {
  std::uniform_int_distribution<int> num(-2, 2);
  std::vector<RatVec> rows(n, RatVec(n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    long total = 0;
    for (int j = 0; j < n; ++j) {
      int a = num(rng);
      rows[i][j] = Rat(a, 4 * n);
      total += std::abs(a);
    }
    if (total > 4 * n) {  // cannot happen with |a| <= 2, kept as a guard
      for (int j = 0; j < n; ++j) rows[i][j] = 0;
      rows[i][i] = Rat(1, 2);
    }
  }
  RatVec offset = zero_offset ? RatVec(n, Rat(0)) : rnd_vec(rng, n, -4, 4, 2);
  return MapExpr::affine(std::move(rows), std::move(offset));
}

inline MapExpr rnd_max_plus(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> bot(0, 9);
  MaxPlusMatrix a(n, MaxPlusRow(n));
  for (int i = 0; i < n; ++i) {
    bool any = false;
    for (int j = 0; j < n; ++j) {
      if (bot(rng) < 4) {
        a[i][j] = std::nullopt;
      } else {
        a[i][j] = Rat(num(rng));
        any = true;
      }
    }
    if (!any) a[i][std::uniform_int_distribution<int>(0, n - 1)(rng)] = Rat(num(rng));
  }
  return MapExpr::max_plus(std::move(a));
}

inline MapExpr rnd_min_max(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> bot(0, 9);
  std::uniform_int_distribution<int> rows(1, 2);
  MinMaxRows groups(n);
  for (int i = 0; i < n; ++i) {
    int r = rows(rng);
    for (int k = 0; k < r; ++k) {
      MaxPlusRow row(n);
      bool any = false;
      for (int j = 0; j < n; ++j) {
        if (bot(rng) < 4) {
          row[j] = std::nullopt;
        } else {
          row[j] = Rat(num(rng));
          any = true;
        }
      }
      if (!any) row[std::uniform_int_distribution<int>(0, n - 1)(rng)] = Rat(num(rng));
      groups[i].push_back(std::move(row));
    }
  }
  return MapExpr::min_max(std::move(groups));
}

// Random sup-norm nonexpansive piecewise-affine map with structural guarantee.
inline MapExpr rnd_sup_nonexpansive(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 6 : 11);
  switch (pick(rng)) {
    case 0: return MapExpr::identity(n);
    case 1: return MapExpr::constant(rnd_vec(rng, n));
    case 2: return MapExpr::permutation(rnd_perm(rng, n));
    case 3: return MapExpr::sign_flip(n, rnd_mask(rng, n));
    case 4: return MapExpr::clip_nonneg(n, rnd_mask(rng, n, true));
    case 5: return MapExpr::translate(rnd_vec(rng, n));
    case 6: return rnd_affine_sup(rng, n, false);
    case 7:
      return MapExpr::pointwise_max(rnd_sup_nonexpansive(rng, n, depth - 1),
                                    rnd_sup_nonexpansive(rng, n, depth - 1));
    case 8:
      return MapExpr::pointwise_min(rnd_sup_nonexpansive(rng, n, depth - 1),
                                    rnd_sup_nonexpansive(rng, n, depth - 1));
    case 9:
      return MapExpr::compose(rnd_sup_nonexpansive(rng, n, depth - 1),
                              rnd_sup_nonexpansive(rng, n, depth - 1));
    case 10: {
      Rat w(std::uniform_int_distribution<int>(1, 7)(rng), 8);
      return MapExpr::convex_combo(w, rnd_sup_nonexpansive(rng, n, depth - 1),
                                   rnd_sup_nonexpansive(rng, n, depth - 1));
    }
    default: return rnd_max_plus(rng, n);
  }
}

// Random positively homogeneous sup-nonexpansive map.
inline MapExpr rnd_homogeneous_sup(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 4 : 9);
  switch (pick(rng)) {
    case 0: return MapExpr::identity(n);
    case 1: return MapExpr::permutation(rnd_perm(rng, n));
    case 2: return MapExpr::sign_flip(n, rnd_mask(rng, n));
    case 3: return MapExpr::clip_nonneg(n, rnd_mask(rng, n, true));
    case 4: return rnd_affine_sup(rng, n, true);
    case 5:
      return MapExpr::pointwise_max(rnd_homogeneous_sup(rng, n, depth - 1),
                                    rnd_homogeneous_sup(rng, n, depth - 1));
    case 6:
      return MapExpr::pointwise_min(rnd_homogeneous_sup(rng, n, depth - 1),
                                    rnd_homogeneous_sup(rng, n, depth - 1));
    case 7:
      return MapExpr::compose(rnd_homogeneous_sup(rng, n, depth - 1),
                              rnd_homogeneous_sup(rng, n, depth - 1));
    case 8: {
      Rat w(std::uniform_int_distribution<int>(1, 7)(rng), 8);
      return MapExpr::convex_combo(w, rnd_homogeneous_sup(rng, n, depth - 1),
                                   rnd_homogeneous_sup(rng, n, depth - 1));
    }
    default: {
      Rat c(std::uniform_int_distribution<int>(-4, 4)(rng), 4);
      return MapExpr::scale(c, rnd_homogeneous_sup(rng, n, depth - 1));
    }
  }
}

// Random structurally subtopical map.
inline MapExpr rnd_subtopical(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 4 : 9);
  switch (pick(rng)) {
    case 0: return MapExpr::identity(n);
    case 1: return MapExpr::constant(rnd_vec(rng, n));
    case 2: return MapExpr::clip_nonneg(n, rnd_mask(rng, n, true));
    case 3: return MapExpr::translate(rnd_vec(rng, n));
    case 4: return rnd_max_plus(rng, n);
    case 5:
      return MapExpr::pointwise_max(rnd_subtopical(rng, n, depth - 1),
                                    rnd_subtopical(rng, n, depth - 1));
    case 6:
      return MapExpr::pointwise_min(rnd_subtopical(rng, n, depth - 1),
                                    rnd_subtopical(rng, n, depth - 1));
    case 7:
      return MapExpr::compose(rnd_subtopical(rng, n, depth - 1),
                              rnd_subtopical(rng, n, depth - 1));
    case 8: {
      Rat w(std::uniform_int_distribution<int>(1, 7)(rng), 8);
      return MapExpr::convex_combo(w, rnd_subtopical(rng, n, depth - 1),
                                   rnd_subtopical(rng, n, depth - 1));
    }
    default: {
      Rat c(std::uniform_int_distribution<int>(0, 4)(rng), 4);
      return MapExpr::scale(c, rnd_subtopical(rng, n, depth - 1));
    }
  }
}

// The diagonal midpoint map ((max x + min x) / 2) e_N, topical with a fixed
// diagonal.
inline MapExpr midpoint_diagonal_map(int n) {
  MaxPlusMatrix top(n, MaxPlusRow(n, Rat(0)));
  MapExpr maxmap = MapExpr::max_plus(std::move(top));
  MinMaxRows groups(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      MaxPlusRow row(n);
      row[j] = Rat(0);
      groups[i].push_back(std::move(row));
    }
  }
  MapExpr minmap = MapExpr::min_max(std::move(groups));
  return MapExpr::convex_combo(Rat(1, 2), maxmap, minmap);
}

}  // namespace polyfix::testgen
