#pragma once

#include <map>
#include <memory>
#include <vector>

#include "polyfix/certificate.hpp"
#include "polyfix/mapexpr.hpp"
#include "polyfix/ray.hpp"

namespace polyfix {

struct DirectedGraph {
  int n = 0;
  std::vector<std::vector<bool>> arc;  // arc[i][j]: i -> j

  bool has_arc(int i, int j) const { return arc[i][j]; }
  bool strongly_connected() const;
};

// Strongly connected components with no outgoing arcs, sorted by least node;
// nodes within a class are sorted.
std::vector<std::vector<int>> final_classes(const DirectedGraph& g);

// Graphviz text export.
std::string export_dot(const DirectedGraph& g);

// lim_{t->inf} T_i(sign * t * e_J). Exact via the symbolic ray calculus for
// piecewise-affine maps, numeric fallback otherwise.
LimitVerdict coordinate_limit(const MapExpr& T, int sign, Mask J, int i,
                              const NumericPolicy& policy = {});

// The directed graph with an arc i -> j when T_i(t e_{j}) diverges upward.
// Exact for piecewise-affine maps; an inconclusive numeric limit is an error
// (the graph must be exact).
DirectedGraph build_Ginf(const MapExpr& T, const NumericPolicy& policy = {});

// Lazily queried hypergraph of diverging coordinate limits. sign = +1 asks
// whether T_i(t e_J) -> +inf, sign = -1 whether T_i(-t e_J) -> -inf. Queries
// are memoized; instances are not safe for unsynchronized concurrent use.
class HypergraphQuery {
 public:
  HypergraphQuery(MapExpr T, int sign, NumericPolicy policy = {});

  // Is (J, {i}) a hyperarc? Requires i not in J.
  bool hyperarc(Mask J, int i) const;
  int nodes() const { return T_.dimension(); }
  int sign() const { return sign_; }
  std::size_t queries_evaluated() const { return evaluated_; }
  const std::map<std::pair<Mask, int>, bool>& queried() const { return memo_; }

 private:
  MapExpr T_;
  int sign_;
  NumericPolicy policy_;
  mutable std::map<std::pair<Mask, int>, bool> memo_;
  mutable std::size_t evaluated_ = 0;
};

// Graphviz export of the queried portion of a hypergraph (tail sets appear
// as box nodes).
std::string export_dot(const HypergraphQuery& h);

// No hyperarc leaves I: by order preservation it suffices to test the
// hyperarcs (I, {j}) for j outside I.
bool is_invariant(const HypergraphQuery& h, Mask I);

// Smallest invariant superset of I.
Mask reach(const HypergraphQuery& h, Mask I);

// Accept a map as (sub)topical: either the structural flag holds or a seeded
// sampled check of order preservation and additive (sub)homogeneity passes
// exactly; throws std::invalid_argument on a sampled violation.
void require_subtopical_structure(const MapExpr& T);
void require_topical_structure(const MapExpr& T);

// Decides whether the displacement of T is onto, i.e. whether T + u has an
// additive eigenvector for every u, via the subset limit test: for every
// nonempty I both <T(t e_I), e_I> - t|I| -> -inf and
// <T(-t e_I), e_I> + t|I| -> +inf. Evaluates exactly 2(2^n - 1) limits.
Certificate certify_subtopical(const MapExpr& T, const NumericPolicy& policy = {});

enum class TopicalMethod {
  hypergraph,
  hypergraph_reach,
  convex,
  strongly_connected_sufficient,
};

std::string topical_method_name(TopicalMethod m);

struct TopicalOptions {
  NumericPolicy numeric;
  // Also run the mirrored reach formulation (over the plus hypergraph) and
  // require agreement; off by default.
  bool dual_reach_crosscheck = false;
};

// Decides whether T + u has an additive eigenvector for every u. The convex
// method requires the structural convexity flag; strongly_connected_sufficient
// returns sufficient_only when the limit graph is not strongly connected.
Certificate certify_topical(const MapExpr& T, TopicalMethod method, const TopicalOptions& opts = {});

}  // namespace polyfix
