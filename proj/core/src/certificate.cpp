#include "polyfix/certificate.hpp"

#include <sstream>

namespace polyfix {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::surjective: return "surjective";
    case Verdict::not_surjective: return "not_surjective";
    case Verdict::unique: return "unique";
    case Verdict::not_unique: return "not_unique";
    case Verdict::sufficient_only: return "sufficient_only";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

int verdict_exit_class(Verdict v) {
  switch (v) {
    case Verdict::surjective:
    case Verdict::unique:
      return 0;
    case Verdict::not_surjective:
    case Verdict::not_unique:
      return 1;
    case Verdict::sufficient_only:
    case Verdict::inconclusive:
      return 2;
  }
  return 2;
}

namespace {
std::string class_str(const std::vector<int>& c) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << ",";
    os << (c[i] + 1);
  }
  os << "}";
  return os.str();
}
}  // namespace

std::string Certificate::witness_summary() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          os << "none";
        } else if constexpr (std::is_same_v<T, FailingFaceWitness>) {
          os << "face " << w.face_label << " with finite limit " << rat_to_string(w.limit_value);
        } else if constexpr (std::is_same_v<T, SubsetWitness>) {
          os << "subset I=" << mask_to_string(w.subset) << " sign " << (w.sign > 0 ? "+" : "-")
             << " finite value " << rat_to_string(w.value);
        } else if constexpr (std::is_same_v<T, PairWitness>) {
          os << "pair I=" << mask_to_string(w.I) << " J=" << mask_to_string(w.J);
        } else if constexpr (std::is_same_v<T, FinalClassWitness>) {
          os << "final classes " << class_str(w.first) << " and " << class_str(w.second);
        } else if constexpr (std::is_same_v<T, ReachWitness>) {
          os << "reach(" << mask_to_string(w.from) << ") = " << mask_to_string(w.reached)
             << " is not the full node set";
        } else if constexpr (std::is_same_v<T, InvariantFaceWitness>) {
          os << "invariant face " << w.face_label;
        }
      },
      witness);
  return os.str();
}

}  // namespace polyfix
