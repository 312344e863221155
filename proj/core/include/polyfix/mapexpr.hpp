#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyfix/polynorm.hpp"
#include "polyfix/pwa1.hpp"
#include "polyfix/rational.hpp"

namespace polyfix {

// Structural properties derived bottom-up from the constructor tree. The
// flags are conservative: a true flag is a guarantee, a false flag means
// "not established by structure".
struct StructuralFlags {
  bool pwa = true;
  bool order_preserving = false;
  bool additively_homogeneous = false;
  bool additively_subhomogeneous = false;
  bool positively_homogeneous = false;
  bool convex = false;
};

using MaxPlusRow = std::vector<std::optional<Rat>>;      // nullopt encodes bottom
using MaxPlusMatrix = std::vector<MaxPlusRow>;
using MinMaxRows = std::vector<std::vector<MaxPlusRow>>;  // per coordinate: min over rows

// An immutable expression tree describing a map R^n -> R^n built from
// nonexpansiveness-friendly constructors. Evaluation is pure; trees are
// cheap to copy (shared structure).
class MapExpr {
 public:
  enum class Op {
    identity,
    constant,
    permutation,
    sign_flip,
    clip_nonneg,
    translate,
    scale,
    compose,
    pointwise_max,
    pointwise_min,
    convex_combo,
    affine,
    max_plus,
    min_max,
    shrink_sqrt,
    chart_normalize,
  };

  static MapExpr identity(int n);
  static MapExpr constant(RatVec c);
  static MapExpr permutation(std::vector<int> perm);            // out_i = x_perm[i]
  static MapExpr sign_flip(int n, Mask flip_set);                // D_L
  static MapExpr clip_nonneg(int n, Mask keep_set);              // P_KL with keep = K u L
  static MapExpr translate(RatVec offset);
  static MapExpr scale(Rat c, MapExpr f);
  static MapExpr compose(MapExpr outer, MapExpr inner);          // outer(inner(x))
  static MapExpr pointwise_max(MapExpr a, MapExpr b);
  static MapExpr pointwise_min(MapExpr a, MapExpr b);
  static MapExpr convex_combo(Rat weight, MapExpr a, MapExpr b);  // w a + (1-w) b
  static MapExpr affine(std::vector<RatVec> matrix_rows, RatVec offset);
  static MapExpr max_plus(MaxPlusMatrix a);
  static MapExpr min_max(MinMaxRows rows);
  static MapExpr shrink_sqrt(int n, int coord);  // x -> x - sqrt(x) above 1, 0 below, on one coordinate
  static MapExpr chart_normalize(MapExpr topical_map);

  int dimension() const;
  Op op() const;
  const StructuralFlags& flags() const;
  bool is_topical() const;
  bool is_subtopical() const;

  // Exact evaluation; requires a piecewise-affine tree.
  RatVec operator()(std::span<const Rat> x) const;
  // Floating evaluation; defined for every tree.
  VecD operator()(std::span<const double> x) const;

  // Symbolic restriction to a ray: given each input coordinate as an exact
  // piecewise-affine function of t >= 0, produces the output coordinates.
  std::vector<Pwa1> propagate_ray(std::span<const Pwa1> in, PieceBudget& budget) const;

  // Structure access for serialization and traversal.
  struct Node;
  const Node& node() const { return *node_; }

 private:
  explicit MapExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static MapExpr binary(Op op, MapExpr a, MapExpr b, bool convex_ok);
  std::shared_ptr<const Node> node_;
};

struct MapExpr::Node {
  Op op;
  int dim = 0;
  StructuralFlags flags;
  // payloads (used according to op)
  RatVec vec;                      // constant / translate offset
  std::vector<int> perm;
  Mask mask = 0;
  Rat scalar;                      // scale factor / convex weight
  std::vector<RatVec> matrix;      // affine rows
  MaxPlusMatrix max_plus;
  MinMaxRows min_max;
  int coord = 0;                   // shrink_sqrt coordinate
  std::shared_ptr<const Node> a, b;
};

// The section-5 normalization: for a topical T on R^n, the induced map on the
// zero-sum chart f(y) = chart(T(lift(y)) - mean(T(lift(y))) e_N). Fixed points
// of f + u0 correspond to additive eigenvectors of T + u.
MapExpr normalize_topical(const MapExpr& T);

struct NonexpansivenessReport {
  enum class Mode { structural, sampled };
  enum class Verdict { guaranteed, consistent, violated };
  Mode mode = Mode::structural;
  Verdict verdict = Verdict::guaranteed;
  int sample_count = 0;
  double max_observed_ratio = 0.0;
  // present iff verdict == violated
  std::optional<std::pair<RatVec, RatVec>> witness;
};

// Structural certification when every constructor is compatible with the
// given norm; otherwise a seeded sampled check.
NonexpansivenessReport check_nonexpansive(const MapExpr& f, const PolyhedralNorm& N,
                                          int samples = 200, std::uint64_t seed = 1);

}  // namespace polyfix
