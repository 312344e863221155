#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyfix/certificate.hpp"
#include "polyfix/certify.hpp"
#include "polyfix/mapexpr.hpp"
#include "polyfix/oracle.hpp"
#include "polyfix/polynorm.hpp"
#include "polyfix/topical.hpp"

namespace polyfix {

// Raised on malformed problem files; message carries location context.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class QueryType {
  surjective,
  unique,
  eigenvector,
  topical,
  subtopical,
  recession,
  illumination,
};

std::string query_type_name(QueryType q);

struct ProblemFile {
  std::optional<PolyhedralNorm> norm;  // optional for the order-preserving queries
  std::optional<MapExpr> map;
  QueryType query = QueryType::surjective;
  RatVec u;                      // unique / eigenvector base point
  TopicalMethod method = TopicalMethod::hypergraph;
  int budget = 200;              // illumination sample budget
  NumericPolicy numeric;
  std::uint64_t seed = 1;
  bool accept_sampled_nonexpansive = false;
};

ProblemFile parse_problem(const std::string& json_text);
ProblemFile parse_problem_file(const std::string& path);
// Canonical serialization; parse(problem_to_json(p)) reproduces p exactly.
std::string problem_to_json(const ProblemFile& p);

struct RunOptions {
  bool verify = false;       // run the brute-force oracle cross-check
  bool want_graph = false;   // produce the limit-graph DOT export
  std::optional<TopicalMethod> method_override;
  std::optional<int> tmax;   // numeric schedule doublings
  std::optional<double> tol; // oracle tolerance
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  Certificate certificate;
  std::string report_json;
  int exit_code = 0;
  std::optional<std::string> graph_dot;
};

// Dispatches the query to the matching certifier and assembles the report.
// Identical problem + options produce byte-identical reports.
RunResult run_problem(const ProblemFile& p, const RunOptions& opts = {});

// Built-in demonstration problems: "fixed-ray" (a sup-norm nonexpansive
// composition with an invariant ray), "shrink-sqrt" (scalar map with
// surjective displacement but identity recession map), "min-clip"
// (subtopical map with a displacement range capped above).
ProblemFile demo_problem(const std::string& name);
std::vector<std::string> demo_names();

// The composition D_L . S . P_KL . D_L: clip to the nonnegative part on
// K u L, cycle those coordinates, flip signs on L. Nonexpansive in the sup
// norm with the ray through e_K - e_L fixed pointwise.
MapExpr clip_cycle_flip_map(int n, Mask K, Mask L);

}  // namespace polyfix
