#pragma once

#include <optional>
#include <vector>

#include "polyfix/certificate.hpp"
#include "polyfix/mapexpr.hpp"
#include "polyfix/polynorm.hpp"
#include "polyfix/ray.hpp"

namespace polyfix {

struct CertifyOptions {
  NumericPolicy numeric;
  // Sampled (non-structural) nonexpansiveness is only accepted with this
  // explicit override.
  bool accept_sampled_nonexpansive = false;
  int nonexpansive_samples = 200;
  std::uint64_t seed = 1;
};

// Decides whether f - id maps onto the space by classifying the displacement
// pairing limit on every proper face of the unit ball. Exact (never
// inconclusive) for piecewise-affine maps.
Certificate certify_surjective(const MapExpr& f, const PolyhedralNorm& N,
                               const CertifyOptions& opts = {});

// Decides whether the fixed point u of f is unique via the initial-slope sign
// of the displacement pairing on every face ray based at u.
Certificate certify_unique(const MapExpr& f, const PolyhedralNorm& N, std::span<const Rat> u,
                           const CertifyOptions& opts = {});

// Subtopical specialization of the uniqueness test (2(2^n - 1) rays).
Certificate certify_unique_subtopical(const MapExpr& T, std::span<const Rat> u,
                                      const CertifyOptions& opts = {});

// Uniqueness of an additive eigenvector up to additive constants. u must
// satisfy T(u) = u + lambda e_N exactly; the test runs on T - lambda e_N.
Certificate certify_unique_eigenvector(const MapExpr& T, std::span<const Rat> u,
                                       const CertifyOptions& opts = {});

// Directional limit map: the recession map f_inf(x) = lim t^{-1} f(t x), or
// the semiderivative f'_u(x) = lim_{t->0+} (f(u + t x) - f(u)) / t. For
// piecewise-affine maps both are exact eventual/initial linear parts per ray.
class AsymptoticMap {
 public:
  enum class Side { at_infinity, at_zero };

  AsymptoticMap(MapExpr f, RatVec base, Side side, NumericPolicy policy = {});

  bool exact() const { return f_.flags().pwa; }
  Side side() const { return side_; }
  const MapExpr& map() const { return f_; }

  // Exact directional value (piecewise-affine maps only).
  RatVec operator()(std::span<const Rat> dir) const;
  // Numeric estimate with a convergence flag.
  std::optional<VecD> estimate(std::span<const double> dir) const;

 private:
  MapExpr f_;
  RatVec base_;
  VecD base_d_;
  Side side_;
  NumericPolicy policy_;
};

struct RecessionEstimate {
  AsymptoticMap map;
  bool exact = false;
  std::vector<RatVec> sampled_directions;
  std::vector<std::optional<VecD>> estimates;
  bool all_converged = true;
  bool homogeneity_checked = false;
};

RecessionEstimate recession_map(const MapExpr& f, const NumericPolicy& policy = {});
AsymptoticMap semiderivative(const MapExpr& f, std::span<const Rat> u,
                             const NumericPolicy& policy = {});

// One-sided sufficient test: if the recession map exists and has no nonzero
// fixed point, f has surjective displacement. Never returns not_surjective.
Certificate certify_via_recession(const MapExpr& f, const PolyhedralNorm& N,
                                  const CertifyOptions& opts = {});

// One-sided sufficient test for uniqueness via the semiderivative at u.
Certificate certify_unique_via_semiderivative(const MapExpr& f, const PolyhedralNorm& N,
                                              std::span<const Rat> u,
                                              const CertifyOptions& opts = {});

// Semi-decision procedure for homogeneous nonexpansive g: sample points w,
// collect displacement vectors g(w) - w, and stop with `unique` once every
// extreme point of the unit ball is illuminated by one of them.
Certificate illumination_check(const MapExpr& g, const PolyhedralNorm& N, int budget,
                               std::uint64_t seed, const CertifyOptions& opts = {});

// The induced map on the face lattice of the unit ball: each proper face F
// maps to the face whose relative interior contains g(x_F); kWholeBall marks
// images in the open unit ball.
struct FaceLatticeMap {
  static constexpr int kWholeBall = -1;
  std::vector<int> image;  // per proper face index

  bool maps_into(const PolyhedralNorm& N, int face) const;
};

FaceLatticeMap face_lattice_map(const MapExpr& g, const PolyhedralNorm& N);

// Order preservation of the induced lattice map over every comparable pair.
bool face_lattice_order_preserved(const FaceLatticeMap& m, const PolyhedralNorm& N);

// Searches the face lattice for a proper face with image contained in itself
// and confirms it through the initial-slope test; otherwise certifies that 0
// is the unique fixed point.
Certificate invariant_face_search(const MapExpr& g, const PolyhedralNorm& N,
                                  const FaceLatticeMap& m, const CertifyOptions& opts = {});

// Points inside the avoided cone W_{x_F} + c x_F of a failing-face witness;
// the oracle should observe a positive residual floor for f + (-y) at each
// sample y. Margins are kept at or above 1/100.
std::vector<RatVec> witness_cone_samples(const PolyhedralNorm& N, const FailingFaceWitness& w,
                                         int count, std::uint64_t seed);

}  // namespace polyfix
