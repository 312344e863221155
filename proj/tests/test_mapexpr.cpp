#include <doctest.h>

#include <cmath>
#include <random>

#include "polyfix/mapexpr.hpp"
#include "polyfix/problem.hpp"
#include "support/gen.hpp"

using namespace polyfix;
using namespace polyfix::testgen;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.push_back(Rat(x));
  return v;
}

MapExpr half_identity(int n) { return MapExpr::scale(Rat(1, 2), MapExpr::identity(n)); }

}  // namespace

TEST_CASE("max-plus evaluation takes row maxima") {
  MaxPlusMatrix a{{Rat(0), Rat(0)}, {std::nullopt, Rat(0)}};
  MapExpr T = MapExpr::max_plus(a);
  CHECK(T(rv({3, 5})) == rv({5, 5}));
  CHECK(T(rv({7, 2})) == rv({7, 2}));
  CHECK(T.is_topical());
  CHECK(T.flags().convex);
}

TEST_CASE("the clip-cycle-flip composition fixes its defining ray") {
  // n = 3, K = {1}, L = {2}, cycle swaps coordinates 1 and 2
  MapExpr f = clip_cycle_flip_map(3, 1u << 0, 1u << 1);
  for (long t : {1, 2, 5, 100}) {
    RatVec x{Rat(t), Rat(-t), Rat(0)};
    CHECK(f(std::span<const Rat>(x)) == x);
  }
  // not order-preserving (sign flip), but piecewise affine
  CHECK(f.flags().pwa);
  CHECK(!f.flags().order_preserving);
}

TEST_CASE("shrink-sqrt evaluates numerically and rejects exact mode") {
  MapExpr f = MapExpr::shrink_sqrt(1, 0);
  VecD x{4.0};
  CHECK(f(std::span<const double>(x))[0] == doctest::Approx(2.0));
  VecD y{0.5};
  CHECK(f(std::span<const double>(y))[0] == 0.0);
  VecD z{-3.0};
  CHECK(f(std::span<const double>(z))[0] == 0.0);
  RatVec xr = rv({4});
  CHECK_THROWS_AS(f(std::span<const Rat>(xr)), not_pwa_error);
  CHECK(f.is_subtopical());
  CHECK(!f.flags().pwa);
}

TEST_CASE("normalize_topical: identity stays the identity on the chart") {
  MapExpr f = normalize_topical(MapExpr::identity(2));
  CHECK(f.dimension() == 1);
  for (long v : {-3, 0, 2}) {
    RatVec x{Rat(v)};
    CHECK(f(std::span<const Rat>(x)) == x);
  }
}

TEST_CASE("normalize_topical: coordinate swap negates the chart") {
  MapExpr swap = MapExpr::permutation({1, 0});
  MapExpr f = normalize_topical(swap);
  // hand evaluation: lift v to (v, -v), swap to (-v, v), zero mean, chart -v
  for (long v : {-2, 1, 7}) {
    RatVec x{Rat(v)};
    CHECK(f(std::span<const Rat>(x)) == rv({-v}));
  }
}

TEST_CASE("normalize_topical: constant-row max-plus collapses to zero on the chart") {
  MaxPlusMatrix a{{Rat(0), Rat(0)}, {Rat(0), Rat(0)}};
  MapExpr T = MapExpr::max_plus(a);
  // oracle: T(v, -v) = (|v|, |v|), mean |v|, normalized displacement (0, 0)
  MapExpr f = normalize_topical(T);
  for (long v : {-5, -1, 0, 3}) {
    RatVec x{Rat(v)};
    CHECK(f(std::span<const Rat>(x)) == rv({0}));
  }
  CHECK_THROWS_AS(normalize_topical(clip_cycle_flip_map(3, 1, 2)), std::invalid_argument);
}

TEST_CASE("structural flags across constructors") {
  MapExpr id2 = MapExpr::identity(2);
  CHECK(id2.is_topical());
  CHECK(id2.flags().positively_homogeneous);

  MapExpr c = MapExpr::constant(rv({1, 1}));
  CHECK(c.is_subtopical());
  CHECK(!c.is_topical());

  MapExpr minclip = MapExpr::pointwise_min(id2, c);
  CHECK(minclip.is_subtopical());
  CHECK(!minclip.flags().convex);

  MapExpr half = half_identity(2);
  CHECK(half.is_subtopical());
  CHECK(!half.is_topical());
  CHECK(half.flags().positively_homogeneous);

  MapExpr flip = MapExpr::sign_flip(2, 0b01);
  CHECK(!flip.flags().order_preserving);
  CHECK(flip.flags().positively_homogeneous);

  MapExpr aff = MapExpr::affine({rv({0, 1}), rv({1, 0})}, rv({0, 0}));
  CHECK(aff.is_topical());

  MapExpr tr = MapExpr::translate(rv({-1, -1}));
  CHECK(tr.is_topical());  // additively homogeneous and order-preserving
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(MapExpr::max_plus(MaxPlusMatrix{{std::nullopt, std::nullopt},
                                                  {Rat(0), Rat(0)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MapExpr::permutation({0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(MapExpr::convex_combo(Rat(1), MapExpr::identity(2), MapExpr::identity(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(MapExpr::compose(MapExpr::identity(2), MapExpr::identity(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(MapExpr::affine({rv({1, 0})}, rv({0})), std::invalid_argument);
  MapExpr id3 = MapExpr::identity(3);
  RatVec bad = rv({1, 2});
  CHECK_THROWS_AS(id3(std::span<const Rat>(bad)), std::invalid_argument);
}

TEST_CASE("nonexpansiveness: structural guarantees") {
  PolyhedralNorm sup3 = PolyhedralNorm::builtin(NormKind::sup, 3);
  auto rep = check_nonexpansive(clip_cycle_flip_map(3, 1, 2), sup3);
  CHECK(rep.mode == NonexpansivenessReport::Mode::structural);
  CHECK(rep.verdict == NonexpansivenessReport::Verdict::guaranteed);

  std::mt19937_64 rng(4);
  auto rep2 = check_nonexpansive(rnd_max_plus(rng, 3), sup3);
  CHECK(rep2.verdict == NonexpansivenessReport::Verdict::guaranteed);

  // topical maps are variation-nonexpansive after normalization
  PolyhedralNorm var3 = PolyhedralNorm::builtin(NormKind::variation, 3);
  auto rep3 = check_nonexpansive(normalize_topical(rnd_min_max(rng, 3)), var3);
  CHECK(rep3.verdict == NonexpansivenessReport::Verdict::guaranteed);

  // affine contraction in the one norm via exact operator norm
  PolyhedralNorm one2 = PolyhedralNorm::builtin(NormKind::one, 2);
  MapExpr aff = MapExpr::affine({{Rat(1, 2), Rat(1, 4)}, {Rat(1, 2), Rat(-1, 4)}}, rv({3, 0}));
  auto rep4 = check_nonexpansive(aff, one2);
  CHECK(rep4.verdict == NonexpansivenessReport::Verdict::guaranteed);
}

TEST_CASE("nonexpansiveness: violation carries a witness") {
  PolyhedralNorm sup2 = PolyhedralNorm::builtin(NormKind::sup, 2);
  MapExpr doubling = MapExpr::scale(Rat(2), MapExpr::identity(2));
  auto rep = check_nonexpansive(doubling, sup2, 100, 9);
  CHECK(rep.mode == NonexpansivenessReport::Mode::sampled);
  CHECK(rep.verdict == NonexpansivenessReport::Verdict::violated);
  REQUIRE(rep.witness.has_value());
  auto [x, y] = *rep.witness;
  CHECK(sup2.value(sub(doubling(std::span<const Rat>(x)), doubling(std::span<const Rat>(y)))) >
        sup2.value(sub(x, y)));
}

TEST_CASE("composition of guaranteed constructors stays guaranteed") {
  PolyhedralNorm sup3 = PolyhedralNorm::builtin(NormKind::sup, 3);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 30; ++k) {
    MapExpr f = rnd_sup_nonexpansive(rng, 3, 3);
    auto rep = check_nonexpansive(f, sup3);
    CHECK(rep.verdict == NonexpansivenessReport::Verdict::guaranteed);
  }
}

TEST_CASE("exact and floating evaluation agree on random points") {
  std::mt19937_64 rng(101);
  for (int expr = 0; expr < 3; ++expr) {
    MapExpr f = rnd_sup_nonexpansive(rng, 3, 3);
    for (int k = 0; k < 10000; ++k) {
      RatVec x = rnd_vec(rng, 3, -64, 64, 8);
      RatVec ex = f(std::span<const Rat>(x));
      VecD xd = to_double(x);
      VecD fl = f(std::span<const double>(xd));
      for (int i = 0; i < 3; ++i) {
        double e = rat_to_double(ex[i]);
        REQUIRE(std::fabs(e - fl[i]) <= 1e-12 * (1.0 + std::fabs(e)));
      }
    }
  }
}

TEST_CASE("structural topical flag implies exact sampled homogeneity") {
  std::mt19937_64 rng(55);
  for (int k = 0; k < 25; ++k) {
    MapExpr T = rnd_min_max(rng, 3);
    REQUIRE(T.is_topical());
    for (int s = 0; s < 20; ++s) {
      RatVec x = rnd_vec(rng, 3);
      Rat t = rnd_rat(rng, -6, 6, 4);
      RatVec shifted(3);
      for (int i = 0; i < 3; ++i) shifted[i] = x[i] + t;
      RatVec lhs = T(std::span<const Rat>(shifted));
      RatVec rhs = T(std::span<const Rat>(x));
      for (int i = 0; i < 3; ++i) REQUIRE(lhs[i] == rhs[i] + t);
      // order preservation on a dominating pair
      RatVec y(3);
      for (int i = 0; i < 3; ++i) y[i] = x[i] + abs(rnd_rat(rng, 0, 4, 2));
      RatVec ty = T(std::span<const Rat>(y));
      for (int i = 0; i < 3; ++i) REQUIRE(rhs[i] <= ty[i]);
    }
  }
}
