#pragma once

#include <string>
#include <variant>
#include <vector>

#include "polyfix/ray.hpp"
#include "polyfix/rational.hpp"

namespace polyfix {

enum class Verdict {
  surjective,
  not_surjective,
  unique,
  not_unique,
  sufficient_only,
  inconclusive,
};

std::string verdict_name(Verdict v);
// Exit-code class used by the CLI: 0 positive, 1 negative, 2 no-conclusion.
int verdict_exit_class(Verdict v);

// A failing face with its finite limit value c: the displacement range misses
// the open affine cone W_{x_F} + c x_F.
struct FailingFaceWitness {
  int face_index = -1;
  std::string face_label;
  Rat limit_value;
};

// A subset whose required limit stayed finite (sign +1 for the t e_I ray,
// -1 for the -t e_I ray).
struct SubsetWitness {
  Mask subset = 0;
  int sign = 0;
  Rat value;
};

// A disjoint pair (I, J) for which both coordinate-limit disjuncts failed.
struct PairWitness {
  Mask I = 0;
  Mask J = 0;
};

// Two distinct final classes of the limit graph.
struct FinalClassWitness {
  std::vector<int> first;
  std::vector<int> second;
};

// A set whose reach closure stopped short of the full node set.
struct ReachWitness {
  Mask from = 0;
  Mask reached = 0;
};

// A proper face mapped into itself (a scaled invariant face exists).
struct InvariantFaceWitness {
  int face_index = -1;
  std::string face_label;
};

using Witness = std::variant<std::monostate, FailingFaceWitness, SubsetWitness, PairWitness,
                             FinalClassWitness, ReachWitness, InvariantFaceWitness>;

struct LimitEntry {
  std::string ray;
  LimitVerdict verdict;
};

// A decision plus everything needed to re-check it: the method used, the
// witness for negative verdicts, and the full table of evaluated limits.
struct Certificate {
  Verdict verdict = Verdict::inconclusive;
  std::string method;
  bool exact = true;
  Witness witness;
  std::vector<LimitEntry> limit_table;
  std::size_t limits_evaluated = 0;
  // method-specific extras
  std::optional<Rat> eigenvalue;              // eigenvector uniqueness query
  std::vector<std::vector<int>> final_classes;  // convex topical method
  std::string note;

  std::string witness_summary() const;
};

}  // namespace polyfix
