#pragma once

#include <vector>

#include "polyfix/mapexpr.hpp"
#include "polyfix/polynorm.hpp"

namespace polyfix {

struct OracleOptions {
  double tol = 1e-8;
  int max_iter = 100000;
  int plateau_window = 1000;
  double plateau_rel = 1e-6;
  VecD start;  // defaults to the origin
};

// Outcome of the averaged iteration x_{k+1} = (x_k + f(x_k) + u) / 2. The
// residual converges to the minimal displacement of f + u, so a persistent
// positive floor is (heuristic) evidence that f + u has no fixed point.
struct IterationReport {
  enum class Kind { fixed_point_found, residual_floor, budget_exhausted };
  Kind kind = Kind::budget_exhausted;
  int iterations = 0;
  double final_residual = 0.0;
  VecD point;
  std::vector<double> residual_history;  // decimated
};

IterationReport minimal_displacement_estimate(const MapExpr& f, const VecD& u,
                                              const PolyhedralNorm& N,
                                              const OracleOptions& opts = {});

struct BoundednessProbe {
  bool unbounded = false;
  VecD witness;            // when unbounded: far point with residual <= delta
  double bounded_up_to = 0.0;  // non-exhaustive negative report otherwise
};

// Searches along face-representative rays for approximate fixed points at
// growing radii.
BoundednessProbe fdelta_boundedness_probe(const MapExpr& f, const PolyhedralNorm& N, double delta,
                                          const std::vector<double>& radii = {1e1, 1e2, 1e3, 1e4,
                                                                              1e5, 1e6});

// Deduplicated fixed points found by the averaged iteration from seeded
// random starts; points closer than 10 * tol are identified.
std::vector<VecD> multistart_fixed_points(const MapExpr& f, const PolyhedralNorm& N, int starts,
                                          std::uint64_t seed, double tol = 1e-8,
                                          int max_iter = 100000);

}  // namespace polyfix
