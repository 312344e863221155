#include "polyfix/topical.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace polyfix {

namespace {

// nondecreasing pairings mirror the monotone classifier: +infinity iff the
// eventual slope is positive, finite otherwise
LimitVerdict classify_limit_at_infinity_nondecreasing(const Pwa1& g) {
  LimitVerdict v = classify_ray_limit(g);
  if (v.outcome == LimitVerdict::Outcome::minus_infinity)
    throw contract_breach(
        "nondecreasing pairing has negative eventual slope; order preservation must have been violated");
  return v;
}

void sampled_structure_check(const MapExpr& T, bool require_homogeneous) {
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_int_distribution<int> num(-16, 16);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> pos(0, 16);
  const int n = T.dimension();
  if (!T.flags().pwa) {
    // non-piecewise-affine maps reach this path only via user assertion;
    // sample in doubles with slack
    for (int k = 0; k < 50; ++k) {
      VecD x(n), y(n);
      for (int i = 0; i < n; ++i) {
        x[i] = num(rng) / double(den(rng));
        y[i] = x[i] + pos(rng) / 8.0;
      }
      VecD tx = T(std::span<const double>(x));
      VecD ty = T(std::span<const double>(y));
      for (int i = 0; i < n; ++i)
        if (tx[i] > ty[i] + 1e-9) throw std::invalid_argument("map is not order-preserving (sampled)");
      double t = pos(rng) / 4.0;
      VecD xt(n);
      for (int i = 0; i < n; ++i) xt[i] = x[i] + t;
      VecD txt = T(std::span<const double>(xt));
      for (int i = 0; i < n; ++i) {
        if (require_homogeneous) {
          if (std::abs(txt[i] - (tx[i] + t)) > 1e-9)
            throw std::invalid_argument("map is not additively homogeneous (sampled)");
        } else if (txt[i] > tx[i] + t + 1e-9) {
          throw std::invalid_argument("map is not additively subhomogeneous (sampled)");
        }
      }
    }
    return;
  }
  for (int k = 0; k < 50; ++k) {
    RatVec x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = Rat(num(rng), den(rng));
      y[i] = x[i] + Rat(pos(rng), 8);
    }
    RatVec tx = T(std::span<const Rat>(x));
    RatVec ty = T(std::span<const Rat>(y));
    for (int i = 0; i < n; ++i)
      if (tx[i] > ty[i]) throw std::invalid_argument("map is not order-preserving (sampled)");
    Rat t(pos(rng), 4);
    RatVec xt(n);
    for (int i = 0; i < n; ++i) xt[i] = x[i] + t;
    RatVec txt = T(std::span<const Rat>(xt));
    for (int i = 0; i < n; ++i) {
      if (require_homogeneous) {
        if (txt[i] != tx[i] + t)
          throw std::invalid_argument("map is not additively homogeneous (sampled)");
      } else if (txt[i] > tx[i] + t) {
        throw std::invalid_argument("map is not additively subhomogeneous (sampled)");
      }
    }
  }
}

}  // namespace

void require_subtopical_structure(const MapExpr& T) {
  if (T.is_subtopical()) return;
  sampled_structure_check(T, /*require_homogeneous=*/false);
}

void require_topical_structure(const MapExpr& T) {
  if (T.is_topical()) return;
  sampled_structure_check(T, /*require_homogeneous=*/true);
}

bool DirectedGraph::strongly_connected() const {
  if (n == 0) return true;
  auto bfs = [this](bool reverse) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        bool connected = reverse ? arc[v][u] : arc[u][v];
        if (connected && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return bfs(false) && bfs(true);
}

std::vector<std::vector<int>> final_classes(const DirectedGraph& g) {
  const int n = g.n;
  // reachability closure, then SCC by mutual reachability (n is small)
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    std::vector<int> stack{i};
    reach[i][i] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v)
        if (g.arc[u][v] && !reach[i][v]) {
          reach[i][v] = true;
          stack.push_back(v);
        }
    }
  }
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    comp[i] = ncomp;
    for (int j = i + 1; j < n; ++j)
      if (reach[i][j] && reach[j][i]) comp[j] = ncomp;
    ++ncomp;
  }
  std::vector<std::vector<int>> classes(ncomp);
  for (int i = 0; i < n; ++i) classes[comp[i]].push_back(i);
  std::vector<std::vector<int>> finals;
  for (int c = 0; c < ncomp; ++c) {
    bool outgoing = false;
    for (int u : classes[c])
      for (int v = 0; v < n && !outgoing; ++v)
        if (g.arc[u][v] && comp[v] != c) outgoing = true;
    if (!outgoing) finals.push_back(classes[c]);
  }
  std::sort(finals.begin(), finals.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return finals;
}

std::string export_dot(const DirectedGraph& g) {
  std::ostringstream os;
  os << "digraph Ginf {\n";
  for (int i = 0; i < g.n; ++i) os << "  " << (i + 1) << ";\n";
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (g.arc[i][j]) os << "  " << (i + 1) << " -> " << (j + 1) << ";\n";
  os << "}\n";
  return os.str();
}

LimitVerdict coordinate_limit(const MapExpr& T, int sign, Mask J, int i,
                              const NumericPolicy& policy) {
  const int n = T.dimension();
  if (i < 0 || i >= n || (J & ~full_mask(n)) != 0)
    throw std::invalid_argument("coordinate_limit: bad subset or coordinate");
  RatVec dir = indicator(n, J);
  if (sign < 0) dir = scale(-1, dir);
  RatVec pairing(n, Rat(0));
  pairing[i] = 1;
  if (T.flags().pwa) {
    Pwa1 g = restrict_to_ray_raw(T, RatVec(n, Rat(0)), dir, pairing, policy.piece_cap);
    return classify_ray_limit(g);
  }
  VecD base(n, 0.0);
  return classify_limit_numeric(T, base, to_double(dir), to_double(pairing),
                                /*subtract_ray=*/false, /*monotone=*/sign, policy);
}

DirectedGraph build_Ginf(const MapExpr& T, const NumericPolicy& policy) {
  const int n = T.dimension();
  DirectedGraph g;
  g.n = n;
  g.arc.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      LimitVerdict v = coordinate_limit(T, +1, 1u << j, i, policy);
      if (v.outcome == LimitVerdict::Outcome::inconclusive)
        throw std::runtime_error("limit graph requires exact coordinate limits; got inconclusive");
      g.arc[i][j] = v.outcome == LimitVerdict::Outcome::plus_infinity;
    }
  }
  return g;
}

HypergraphQuery::HypergraphQuery(MapExpr T, int sign, NumericPolicy policy)
    : T_(std::move(T)), sign_(sign), policy_(policy) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("HypergraphQuery: sign must be +1 or -1");
}

bool HypergraphQuery::hyperarc(Mask J, int i) const {
  if (mask_contains(J, i)) throw std::invalid_argument("hyperarc: head must lie outside the tail");
  auto key = std::make_pair(J, i);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  LimitVerdict v = coordinate_limit(T_, sign_, J, i, policy_);
  if (v.outcome == LimitVerdict::Outcome::inconclusive)
    throw std::runtime_error("hypergraph query requires a decided coordinate limit");
  bool result = sign_ > 0 ? v.outcome == LimitVerdict::Outcome::plus_infinity
                          : v.outcome == LimitVerdict::Outcome::minus_infinity;
  ++evaluated_;
  memo_.emplace(key, result);
  return result;
}

std::string export_dot(const HypergraphQuery& h) {
  std::ostringstream os;
  os << "digraph H" << (h.sign() > 0 ? "plus" : "minus") << " {\n";
  for (int i = 0; i < h.nodes(); ++i) os << "  " << (i + 1) << ";\n";
  for (const auto& [key, val] : h.queried()) {
    if (!val) continue;
    auto [J, i] = key;
    std::string tail = "\"" + mask_to_string(J) + "\"";
    os << "  " << tail << " [shape=box];\n";
    for (int j = 0; j < h.nodes(); ++j)
      if (mask_contains(J, j))
        os << "  " << (j + 1) << " -> " << tail << " [style=dashed, arrowhead=none];\n";
    os << "  " << tail << " -> " << (i + 1) << ";\n";
  }
  os << "}\n";
  return os.str();
}

bool is_invariant(const HypergraphQuery& h, Mask I) {
  for (int j = 0; j < h.nodes(); ++j) {
    if (mask_contains(I, j)) continue;
    if (h.hyperarc(I, j)) return false;
  }
  return true;
}

Mask reach(const HypergraphQuery& h, Mask I) {
  Mask S = I;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int j = 0; j < h.nodes(); ++j) {
      if (mask_contains(S, j)) continue;
      if (h.hyperarc(S, j)) {
        S |= (1u << j);
        grew = true;
      }
    }
  }
  return S;
}

Certificate certify_subtopical(const MapExpr& T, const NumericPolicy& policy) {
  require_subtopical_structure(T);
  const int n = T.dimension();
  if (n > 20) throw resource_error("certify_subtopical: subset family too large");
  Certificate cert;
  cert.method = "subtopical_limits";
  cert.verdict = Verdict::surjective;

  RatVec zero(n, Rat(0));
  VecD zerod(n, 0.0);
  bool exact = T.flags().pwa;
  cert.exact = exact;
  bool saw_inconclusive = false;

  for (Mask I = 1; I <= full_mask(n); ++I) {
    RatVec eI = indicator(n, I);
    // forward ray: <T(t e_I) - t e_I, e_I>, must diverge to -inf
    LimitVerdict v1;
    if (exact) {
      Pwa1 g = restrict_to_ray(T, zero, eI, eI, policy.piece_cap);
      v1 = classify_limit_at_infinity(g);
    } else {
      v1 = classify_limit_numeric(T, zerod, to_double(eI), to_double(eI), true, -1, policy);
    }
    cert.limit_table.push_back({"I=" + mask_to_string(I) + " sign=+", v1});
    // mirrored ray: <T(-t e_I) + t e_I, e_I>, must diverge to +inf
    RatVec neg = scale(-1, eI);
    LimitVerdict v2;
    if (exact) {
      Pwa1 g = restrict_to_ray(T, zero, neg, eI, policy.piece_cap);
      v2 = classify_limit_at_infinity_nondecreasing(g);
    } else {
      v2 = classify_limit_numeric(T, zerod, to_double(neg), to_double(eI), true, +1, policy);
    }
    cert.limit_table.push_back({"I=" + mask_to_string(I) + " sign=-", v2});

    if (cert.verdict == Verdict::surjective) {
      if (v1.outcome == LimitVerdict::Outcome::finite) {
        cert.verdict = Verdict::not_surjective;
        cert.witness = SubsetWitness{I, +1, v1.value.value_or(Rat(0))};
      } else if (v2.outcome == LimitVerdict::Outcome::finite) {
        cert.verdict = Verdict::not_surjective;
        cert.witness = SubsetWitness{I, -1, v2.value.value_or(Rat(0))};
      } else if (v1.outcome == LimitVerdict::Outcome::inconclusive ||
                 v2.outcome == LimitVerdict::Outcome::inconclusive) {
        saw_inconclusive = true;
      }
    }
  }
  if (cert.verdict == Verdict::surjective && saw_inconclusive) cert.verdict = Verdict::inconclusive;
  cert.limits_evaluated = cert.limit_table.size();
  return cert;
}

std::string topical_method_name(TopicalMethod m) {
  switch (m) {
    case TopicalMethod::hypergraph: return "hypergraph";
    case TopicalMethod::hypergraph_reach: return "hypergraph_reach";
    case TopicalMethod::convex: return "convex_final_class";
    case TopicalMethod::strongly_connected_sufficient: return "strongly_connected";
  }
  return "?";
}

namespace {

// Memoized evaluation of the two subset limit families used by the eigenvector
// existence tests:
//   minus-limit(I) = lim <T(-t e_{I^c}), e_I>   (want -inf)
//   plus-limit(J)  = lim <T(t e_{J^c}), e_J>    (want +inf)
struct SubsetLimits {
  const MapExpr& T;
  const NumericPolicy& policy;
  Certificate& cert;
  std::map<Mask, LimitVerdict> minus_memo, plus_memo;

  LimitVerdict minus_limit(Mask I) {
    if (auto it = minus_memo.find(I); it != minus_memo.end()) return it->second;
    const int n = T.dimension();
    RatVec dir = scale(-1, indicator(n, full_mask(n) & ~I));
    RatVec pairing = indicator(n, I);
    LimitVerdict v;
    if (T.flags().pwa) {
      Pwa1 g = restrict_to_ray_raw(T, RatVec(n, Rat(0)), dir, pairing, policy.piece_cap);
      v = classify_ray_limit(g);
    } else {
      VecD zero(n, 0.0);
      v = classify_limit_numeric(T, zero, to_double(dir), to_double(pairing), false, -1, policy);
    }
    cert.limit_table.push_back({"minus-limit I=" + mask_to_string(I), v});
    minus_memo.emplace(I, v);
    return v;
  }

  LimitVerdict plus_limit(Mask J) {
    if (auto it = plus_memo.find(J); it != plus_memo.end()) return it->second;
    const int n = T.dimension();
    RatVec dir = indicator(n, full_mask(n) & ~J);
    RatVec pairing = indicator(n, J);
    LimitVerdict v;
    if (T.flags().pwa) {
      Pwa1 g = restrict_to_ray_raw(T, RatVec(n, Rat(0)), dir, pairing, policy.piece_cap);
      v = classify_ray_limit(g);
    } else {
      VecD zero(n, 0.0);
      v = classify_limit_numeric(T, zero, to_double(dir), to_double(pairing), false, +1, policy);
    }
    cert.limit_table.push_back({"plus-limit J=" + mask_to_string(J), v});
    plus_memo.emplace(J, v);
    return v;
  }
};

Certificate certify_topical_hypergraph(const MapExpr& T, const NumericPolicy& policy) {
  const int n = T.dimension();
  Certificate cert;
  cert.method = "hypergraph";
  cert.verdict = Verdict::surjective;
  cert.exact = T.flags().pwa;
  SubsetLimits lims{T, policy, cert, {}, {}};
  const Mask full = full_mask(n);
  for (Mask I = 1; I < full; ++I) {
    LimitVerdict a = lims.minus_limit(I);
    if (a.outcome == LimitVerdict::Outcome::minus_infinity) continue;  // all pairs with this I pass
    if (a.outcome == LimitVerdict::Outcome::inconclusive) {
      cert.verdict = Verdict::inconclusive;
      continue;
    }
    for (Mask J = 1; J < full; ++J) {
      if ((I & J) != 0) continue;
      LimitVerdict b = lims.plus_limit(J);
      if (b.outcome == LimitVerdict::Outcome::plus_infinity) continue;
      if (b.outcome == LimitVerdict::Outcome::inconclusive) {
        if (cert.verdict == Verdict::surjective) cert.verdict = Verdict::inconclusive;
        continue;
      }
      cert.verdict = Verdict::not_surjective;
      cert.witness = PairWitness{I, J};
      cert.limits_evaluated = cert.limit_table.size();
      return cert;
    }
  }
  cert.limits_evaluated = cert.limit_table.size();
  return cert;
}

Certificate certify_topical_reach(const MapExpr& T, const NumericPolicy& policy,
                                  bool dual_crosscheck) {
  const int n = T.dimension();
  Certificate cert;
  cert.method = "hypergraph_reach";
  cert.verdict = Verdict::surjective;
  cert.exact = T.flags().pwa;
  SubsetLimits lims{T, policy, cert, {}, {}};
  HypergraphQuery hminus(T, -1, policy);
  const Mask full = full_mask(n);
  for (Mask J = 1; J < full; ++J) {
    LimitVerdict b = lims.plus_limit(J);
    if (b.outcome == LimitVerdict::Outcome::plus_infinity) continue;
    if (b.outcome == LimitVerdict::Outcome::inconclusive) {
      if (cert.verdict == Verdict::surjective) cert.verdict = Verdict::inconclusive;
      continue;
    }
    Mask r = reach(hminus, J);
    if (r != full) {
      cert.verdict = Verdict::not_surjective;
      cert.witness = ReachWitness{J, r};
      break;
    }
  }
  cert.limits_evaluated = cert.limit_table.size() + hminus.queries_evaluated();

  if (dual_crosscheck) {
    Certificate dual;
    dual.verdict = Verdict::surjective;
    dual.exact = cert.exact;
    SubsetLimits dual_lims{T, policy, dual, {}, {}};
    HypergraphQuery hplus(T, +1, policy);
    for (Mask I = 1; I < full; ++I) {
      LimitVerdict a = dual_lims.minus_limit(I);
      if (a.outcome == LimitVerdict::Outcome::minus_infinity) continue;
      if (a.outcome == LimitVerdict::Outcome::inconclusive) {
        if (dual.verdict == Verdict::surjective) dual.verdict = Verdict::inconclusive;
        continue;
      }
      if (reach(hplus, I) != full) {
        dual.verdict = Verdict::not_surjective;
        break;
      }
    }
    if (dual.verdict != cert.verdict)
      throw std::logic_error("mirrored reach formulation disagrees with the primary one");
    cert.note = "dual reach cross-check passed";
  }
  return cert;
}

Certificate certify_topical_convex(const MapExpr& T, const NumericPolicy& policy) {
  if (!T.flags().convex)
    throw std::invalid_argument("convex method requires a structurally convex map");
  const int n = T.dimension();
  Certificate cert;
  cert.method = "convex_final_class";
  cert.verdict = Verdict::surjective;
  cert.exact = T.flags().pwa;

  DirectedGraph g;
  g.n = n;
  g.arc.assign(n, std::vector<bool>(n, false));
  std::size_t limits = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      LimitVerdict v = coordinate_limit(T, +1, 1u << j, i, policy);
      ++limits;
      if (v.outcome == LimitVerdict::Outcome::inconclusive)
        throw std::runtime_error("limit graph requires exact coordinate limits; got inconclusive");
      g.arc[i][j] = v.outcome == LimitVerdict::Outcome::plus_infinity;
      std::ostringstream label;
      label << "arc " << (i + 1) << "->" << (j + 1);
      cert.limit_table.push_back({label.str(), v});
    }
  }
  cert.final_classes = final_classes(g);
  if (cert.final_classes.size() != 1) {
    cert.verdict = Verdict::not_surjective;
    cert.witness = FinalClassWitness{cert.final_classes[0], cert.final_classes[1]};
    cert.limits_evaluated = limits;
    return cert;
  }
  Mask cmask = 0;
  for (int i : cert.final_classes[0]) cmask |= (1u << i);
  HypergraphQuery hminus(T, -1, policy);
  Mask r = reach(hminus, cmask);
  limits += hminus.queries_evaluated();
  cert.limits_evaluated = limits;
  if (r != full_mask(n)) {
    cert.verdict = Verdict::not_surjective;
    cert.witness = ReachWitness{cmask, r};
  }
  return cert;
}

Certificate certify_topical_strongly_connected(const MapExpr& T, const NumericPolicy& policy) {
  Certificate cert;
  cert.method = "strongly_connected";
  cert.exact = T.flags().pwa;
  DirectedGraph g = build_Ginf(T, policy);
  cert.limits_evaluated = static_cast<std::size_t>(g.n) * g.n;
  if (g.strongly_connected()) {
    cert.verdict = Verdict::surjective;
  } else {
    cert.verdict = Verdict::sufficient_only;
    cert.note = "limit graph is not strongly connected; this test draws no conclusion";
  }
  return cert;
}

}  // namespace

Certificate certify_topical(const MapExpr& T, TopicalMethod method, const TopicalOptions& opts) {
  require_topical_structure(T);
  const int n = T.dimension();
  if (n > 20) throw resource_error("certify_topical: node set too large");
  switch (method) {
    case TopicalMethod::hypergraph:
      return certify_topical_hypergraph(T, opts.numeric);
    case TopicalMethod::hypergraph_reach:
      return certify_topical_reach(T, opts.numeric, opts.dual_reach_crosscheck);
    case TopicalMethod::convex:
      return certify_topical_convex(T, opts.numeric);
    case TopicalMethod::strongly_connected_sufficient:
      return certify_topical_strongly_connected(T, opts.numeric);
  }
  throw std::logic_error("unknown topical method");
}

}  // namespace polyfix
