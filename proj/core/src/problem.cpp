#include "polyfix/problem.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace polyfix {

using ojson = nlohmann::ordered_json;

namespace {

void check_keys(const ojson& j, std::initializer_list<const char*> allowed, const char* ctx) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw parse_error(std::string(ctx) + ": unknown field '" + key + "'");
  }
}

Rat json_to_rat(const ojson& j, const char* ctx) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) {
    try {
      return rat_from_string(j.get<std::string>());
    } catch (const std::exception& e) {
      throw parse_error(std::string(ctx) + ": " + e.what());
    }
  }
  throw parse_error(std::string(ctx) + ": expected an integer or a rational string \"p/q\"");
}

RatVec json_to_rat_vec(const ojson& j, const char* ctx) {
  if (!j.is_array()) throw parse_error(std::string(ctx) + ": expected an array");
  RatVec v;
  for (const auto& e : j) v.push_back(json_to_rat(e, ctx));
  return v;
}

ojson rat_vec_to_json(const RatVec& v) {
  ojson a = ojson::array();
  for (const auto& x : v) a.push_back(rat_to_string(x));
  return a;
}

Mask json_to_mask(const ojson& j, int n, const char* ctx) {
  if (!j.is_array()) throw parse_error(std::string(ctx) + ": expected an array of coordinates");
  Mask m = 0;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw parse_error(std::string(ctx) + ": coordinates are integers");
    int i = e.get<int>();
    if (i < 1 || i > n) throw parse_error(std::string(ctx) + ": coordinate out of range");
    m |= (1u << (i - 1));
  }
  return m;
}

ojson mask_to_json(Mask m) {
  ojson a = ojson::array();
  for (int i = 0; i < 32; ++i)
    if (mask_contains(m, i)) a.push_back(i + 1);
  return a;
}

MapExpr map_from_json(const ojson& j);

MaxPlusRow json_to_mp_row(const ojson& j, const char* ctx) {
  MaxPlusRow row;
  for (const auto& e : j) {
    if (e.is_string() && e.get<std::string>() == "bot")
      row.push_back(std::nullopt);
    else
      row.push_back(json_to_rat(e, ctx));
  }
  return row;
}

MapExpr map_from_json(const ojson& j) {
  if (!j.is_object() || !j.contains("op")) throw parse_error("map: expected an object with 'op'");
  std::string op = j.at("op").get<std::string>();
  if (op == "identity") {
    check_keys(j, {"op", "n"}, "map identity");
    return MapExpr::identity(j.at("n").get<int>());
  }
  if (op == "constant") {
    check_keys(j, {"op", "value"}, "map constant");
    return MapExpr::constant(json_to_rat_vec(j.at("value"), "constant value"));
  }
  if (op == "permutation") {
    check_keys(j, {"op", "perm"}, "map permutation");
    std::vector<int> perm;
    for (const auto& e : j.at("perm")) perm.push_back(e.get<int>() - 1);
    return MapExpr::permutation(std::move(perm));
  }
  if (op == "sign_flip") {
    check_keys(j, {"op", "n", "set"}, "map sign_flip");
    int n = j.at("n").get<int>();
    return MapExpr::sign_flip(n, json_to_mask(j.at("set"), n, "sign_flip set"));
  }
  if (op == "clip") {
    check_keys(j, {"op", "n", "set"}, "map clip");
    int n = j.at("n").get<int>();
    return MapExpr::clip_nonneg(n, json_to_mask(j.at("set"), n, "clip set"));
  }
  if (op == "translate") {
    check_keys(j, {"op", "offset"}, "map translate");
    return MapExpr::translate(json_to_rat_vec(j.at("offset"), "translate offset"));
  }
  if (op == "scale") {
    check_keys(j, {"op", "factor", "arg"}, "map scale");
    return MapExpr::scale(json_to_rat(j.at("factor"), "scale factor"), map_from_json(j.at("arg")));
  }
  if (op == "compose") {
    check_keys(j, {"op", "outer", "inner"}, "map compose");
    return MapExpr::compose(map_from_json(j.at("outer")), map_from_json(j.at("inner")));
  }
  if (op == "max" || op == "min") {
    check_keys(j, {"op", "lhs", "rhs"}, "map max/min");
    MapExpr a = map_from_json(j.at("lhs"));
    MapExpr b = map_from_json(j.at("rhs"));
    return op == "max" ? MapExpr::pointwise_max(a, b) : MapExpr::pointwise_min(a, b);
  }
  if (op == "convex") {
    check_keys(j, {"op", "weight", "lhs", "rhs"}, "map convex");
    return MapExpr::convex_combo(json_to_rat(j.at("weight"), "convex weight"),
                                 map_from_json(j.at("lhs")), map_from_json(j.at("rhs")));
  }
  if (op == "affine") {
    check_keys(j, {"op", "matrix", "offset"}, "map affine");
    std::vector<RatVec> rows;
    for (const auto& r : j.at("matrix")) rows.push_back(json_to_rat_vec(r, "affine matrix"));
    return MapExpr::affine(std::move(rows), json_to_rat_vec(j.at("offset"), "affine offset"));
  }
  if (op == "max_plus") {
    check_keys(j, {"op", "matrix"}, "map max_plus");
    MaxPlusMatrix m;
    for (const auto& r : j.at("matrix")) m.push_back(json_to_mp_row(r, "max_plus matrix"));
    return MapExpr::max_plus(std::move(m));
  }
  if (op == "min_max") {
    check_keys(j, {"op", "rows"}, "map min_max");
    MinMaxRows rows;
    for (const auto& group : j.at("rows")) {
      std::vector<MaxPlusRow> g;
      for (const auto& r : group) g.push_back(json_to_mp_row(r, "min_max rows"));
      rows.push_back(std::move(g));
    }
    return MapExpr::min_max(std::move(rows));
  }
  if (op == "shrink_sqrt") {
    check_keys(j, {"op", "n", "coord"}, "map shrink_sqrt");
    return MapExpr::shrink_sqrt(j.at("n").get<int>(), j.at("coord").get<int>() - 1);
  }
  if (op == "normalize") {
    check_keys(j, {"op", "arg"}, "map normalize");
    return normalize_topical(map_from_json(j.at("arg")));
  }
  throw parse_error("map: unknown op '" + op + "'");
}

ojson mp_row_to_json(const MaxPlusRow& row) {
  ojson a = ojson::array();
  for (const auto& e : row) {
    if (e)
      a.push_back(rat_to_string(*e));
    else
      a.push_back("bot");
  }
  return a;
}

ojson map_to_json(const MapExpr::Node& node) {
  using Op = MapExpr::Op;
  ojson j;
  switch (node.op) {
    case Op::identity:
      j["op"] = "identity";
      j["n"] = node.dim;
      return j;
    case Op::constant:
      j["op"] = "constant";
      j["value"] = rat_vec_to_json(node.vec);
      return j;
    case Op::permutation: {
      j["op"] = "permutation";
      ojson p = ojson::array();
      for (int i : node.perm) p.push_back(i + 1);
      j["perm"] = p;
      return j;
    }
    case Op::sign_flip:
      j["op"] = "sign_flip";
      j["n"] = node.dim;
      j["set"] = mask_to_json(node.mask);
      return j;
    case Op::clip_nonneg:
      j["op"] = "clip";
      j["n"] = node.dim;
      j["set"] = mask_to_json(node.mask);
      return j;
    case Op::translate:
      j["op"] = "translate";
      j["offset"] = rat_vec_to_json(node.vec);
      return j;
    case Op::scale:
      j["op"] = "scale";
      j["factor"] = rat_to_string(node.scalar);
      j["arg"] = map_to_json(*node.a);
      return j;
    case Op::compose:
      j["op"] = "compose";
      j["outer"] = map_to_json(*node.a);
      j["inner"] = map_to_json(*node.b);
      return j;
    case Op::pointwise_max:
    case Op::pointwise_min:
      j["op"] = node.op == Op::pointwise_max ? "max" : "min";
      j["lhs"] = map_to_json(*node.a);
      j["rhs"] = map_to_json(*node.b);
      return j;
    case Op::convex_combo:
      j["op"] = "convex";
      j["weight"] = rat_to_string(node.scalar);
      j["lhs"] = map_to_json(*node.a);
      j["rhs"] = map_to_json(*node.b);
      return j;
    case Op::affine: {
      j["op"] = "affine";
      ojson m = ojson::array();
      for (const auto& r : node.matrix) m.push_back(rat_vec_to_json(r));
      j["matrix"] = m;
      j["offset"] = rat_vec_to_json(node.vec);
      return j;
    }
    case Op::max_plus: {
      j["op"] = "max_plus";
      ojson m = ojson::array();
      for (const auto& r : node.max_plus) m.push_back(mp_row_to_json(r));
      j["matrix"] = m;
      return j;
    }
    case Op::min_max: {
      j["op"] = "min_max";
      ojson rows = ojson::array();
      for (const auto& group : node.min_max) {
        ojson g = ojson::array();
        for (const auto& r : group) g.push_back(mp_row_to_json(r));
        rows.push_back(g);
      }
      j["rows"] = rows;
      return j;
    }
    case Op::shrink_sqrt:
      j["op"] = "shrink_sqrt";
      j["n"] = node.dim;
      j["coord"] = node.coord + 1;
      return j;
    case Op::chart_normalize:
      j["op"] = "normalize";
      j["arg"] = map_to_json(*node.a);
      return j;
  }
  throw std::logic_error("unreachable map op");
}

PolyhedralNorm norm_from_json(const ojson& j) {
  if (!j.is_object() || !j.contains("kind")) throw parse_error("norm: expected object with 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "sup" || kind == "one" || kind == "variation") {
    check_keys(j, {"kind", "n"}, "norm");
    int n = j.at("n").get<int>();
    NormKind k = kind == "sup" ? NormKind::sup
                               : (kind == "one" ? NormKind::one : NormKind::variation);
    return PolyhedralNorm::builtin(k, n);
  }
  if (kind == "custom") {
    check_keys(j, {"kind", "dual_points", "file"}, "norm");
    if (j.contains("file")) return PolyhedralNorm::load_file(j.at("file").get<std::string>());
    std::vector<RatVec> pts;
    for (const auto& p : j.at("dual_points")) pts.push_back(json_to_rat_vec(p, "norm dual_points"));
    return PolyhedralNorm::custom(std::move(pts));
  }
  throw parse_error("norm: unknown kind '" + kind + "'");
}

ojson norm_to_json(const PolyhedralNorm& N) {
  ojson j;
  switch (N.kind()) {
    case NormKind::sup: j["kind"] = "sup"; j["n"] = N.dimension(); return j;
    case NormKind::one: j["kind"] = "one"; j["n"] = N.dimension(); return j;
    case NormKind::variation: j["kind"] = "variation"; j["n"] = N.underlying_dimension(); return j;
    case NormKind::custom: {
      j["kind"] = "custom";
      ojson pts = ojson::array();
      for (const auto& p : N.dual_extreme_points()) pts.push_back(rat_vec_to_json(p));
      j["dual_points"] = pts;
      return j;
    }
  }
  throw std::logic_error("unreachable norm kind");
}

QueryType query_from_name(const std::string& s) {
  if (s == "surjective") return QueryType::surjective;
  if (s == "unique") return QueryType::unique;
  if (s == "eigenvector") return QueryType::eigenvector;
  if (s == "topical") return QueryType::topical;
  if (s == "subtopical") return QueryType::subtopical;
  if (s == "recession") return QueryType::recession;
  if (s == "illumination") return QueryType::illumination;
  throw parse_error("query: unknown type '" + s + "'");
}

TopicalMethod method_from_name(const std::string& s) {
  if (s == "hypergraph") return TopicalMethod::hypergraph;
  if (s == "hypergraph_reach") return TopicalMethod::hypergraph_reach;
  if (s == "convex") return TopicalMethod::convex;
  if (s == "strongly_connected") return TopicalMethod::strongly_connected_sufficient;
  throw parse_error("query: unknown topical method '" + s + "'");
}

std::string method_to_name(TopicalMethod m) {
  switch (m) {
    case TopicalMethod::hypergraph: return "hypergraph";
    case TopicalMethod::hypergraph_reach: return "hypergraph_reach";
    case TopicalMethod::convex: return "convex";
    case TopicalMethod::strongly_connected_sufficient: return "strongly_connected";
  }
  return "?";
}

ojson problem_to_ojson(const ProblemFile& p) {
  ojson j;
  j["schema"] = "polyfix-problem/1";
  if (p.norm) j["norm"] = norm_to_json(*p.norm);
  j["map"] = map_to_json(p.map->node());
  ojson q;
  q["type"] = query_type_name(p.query);
  switch (p.query) {
    case QueryType::unique:
    case QueryType::eigenvector:
      q["u"] = rat_vec_to_json(p.u);
      break;
    case QueryType::topical:
      q["method"] = method_to_name(p.method);
      break;
    case QueryType::illumination:
      q["budget"] = p.budget;
      break;
    default:
      break;
  }
  j["query"] = q;
  ojson num;
  num["t0"] = p.numeric.t0;
  num["factor"] = p.numeric.factor;
  num["max_doublings"] = p.numeric.max_doublings;
  num["divergence_bound"] = p.numeric.divergence_bound;
  num["slope_tol"] = p.numeric.slope_tol;
  num["piece_cap"] = p.numeric.piece_cap;
  j["numeric"] = num;
  j["seed"] = p.seed;
  j["accept_sampled_nonexpansive"] = p.accept_sampled_nonexpansive;
  return j;
}

}  // namespace

std::string query_type_name(QueryType q) {
  switch (q) {
    case QueryType::surjective: return "surjective";
    case QueryType::unique: return "unique";
    case QueryType::eigenvector: return "eigenvector";
    case QueryType::topical: return "topical";
    case QueryType::subtopical: return "subtopical";
    case QueryType::recession: return "recession";
    case QueryType::illumination: return "illumination";
  }
  return "?";
}

ProblemFile parse_problem(const std::string& json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("problem file: ") + e.what());
  }
  check_keys(j, {"schema", "norm", "map", "query", "numeric", "seed", "accept_sampled_nonexpansive"},
             "problem");
  if (!j.contains("schema") || j.at("schema") != "polyfix-problem/1")
    throw parse_error("problem: missing or unsupported schema (want polyfix-problem/1)");
  if (!j.contains("map")) throw parse_error("problem: missing 'map'");
  if (!j.contains("query")) throw parse_error("problem: missing 'query'");

  ProblemFile p;
  if (j.contains("norm")) p.norm = norm_from_json(j.at("norm"));
  p.map = map_from_json(j.at("map"));

  const ojson& q = j.at("query");
  check_keys(q, {"type", "u", "method", "budget"}, "query");
  p.query = query_from_name(q.at("type").get<std::string>());
  switch (p.query) {
    case QueryType::unique:
    case QueryType::eigenvector:
      if (!q.contains("u")) throw parse_error("query: 'u' is required for this query");
      p.u = json_to_rat_vec(q.at("u"), "query u");
      break;
    case QueryType::topical:
      if (q.contains("method")) p.method = method_from_name(q.at("method").get<std::string>());
      break;
    case QueryType::illumination:
      if (q.contains("budget")) p.budget = q.at("budget").get<int>();
      break;
    default:
      break;
  }

  if (j.contains("numeric")) {
    const ojson& num = j.at("numeric");
    check_keys(num, {"t0", "factor", "max_doublings", "divergence_bound", "slope_tol", "piece_cap"},
               "numeric");
    if (num.contains("t0")) p.numeric.t0 = num.at("t0").get<double>();
    if (num.contains("factor")) p.numeric.factor = num.at("factor").get<double>();
    if (num.contains("max_doublings")) p.numeric.max_doublings = num.at("max_doublings").get<int>();
    if (num.contains("divergence_bound"))
      p.numeric.divergence_bound = num.at("divergence_bound").get<double>();
    if (num.contains("slope_tol")) p.numeric.slope_tol = num.at("slope_tol").get<double>();
    if (num.contains("piece_cap")) p.numeric.piece_cap = num.at("piece_cap").get<std::size_t>();
  }
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("accept_sampled_nonexpansive"))
    p.accept_sampled_nonexpansive = j.at("accept_sampled_nonexpansive").get<bool>();

  // norm requirements per query
  switch (p.query) {
    case QueryType::surjective:
    case QueryType::unique:
    case QueryType::recession:
    case QueryType::illumination:
      if (!p.norm) throw parse_error("query: this query requires a 'norm' section");
      break;
    default:
      break;
  }
  return p;
}

ProblemFile parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open problem file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string problem_to_json(const ProblemFile& p) { return problem_to_ojson(p).dump(2) + "\n"; }

namespace {

ojson witness_to_json(const Witness& w) {
  ojson j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          j = nullptr;
        } else if constexpr (std::is_same_v<T, FailingFaceWitness>) {
          j["type"] = "failing_face";
          j["face_index"] = v.face_index;
          j["face"] = v.face_label;
          j["limit_value"] = rat_to_string(v.limit_value);
        } else if constexpr (std::is_same_v<T, SubsetWitness>) {
          j["type"] = "subset_limit";
          j["I"] = mask_to_json(v.subset);
          j["sign"] = v.sign;
          j["value"] = rat_to_string(v.value);
        } else if constexpr (std::is_same_v<T, PairWitness>) {
          j["type"] = "pair";
          j["I"] = mask_to_json(v.I);
          j["J"] = mask_to_json(v.J);
        } else if constexpr (std::is_same_v<T, FinalClassWitness>) {
          j["type"] = "final_classes";
          ojson a = ojson::array(), b = ojson::array();
          for (int i : v.first) a.push_back(i + 1);
          for (int i : v.second) b.push_back(i + 1);
          j["first"] = a;
          j["second"] = b;
        } else if constexpr (std::is_same_v<T, ReachWitness>) {
          j["type"] = "reach";
          j["from"] = mask_to_json(v.from);
          j["reached"] = mask_to_json(v.reached);
        } else if constexpr (std::is_same_v<T, InvariantFaceWitness>) {
          j["type"] = "invariant_face";
          j["face_index"] = v.face_index;
          j["face"] = v.face_label;
        }
      },
      w);
  return j;
}

ojson limit_table_to_json(const std::vector<LimitEntry>& table) {
  ojson arr = ojson::array();
  for (const auto& e : table) {
    ojson r;
    r["ray"] = e.ray;
    r["outcome"] = outcome_name(e.verdict.outcome);
    r["exact"] = e.verdict.exact;
    if (e.verdict.value)
      r["value"] = rat_to_string(*e.verdict.value);
    if (e.verdict.eventual_slope)
      r["slope"] = rat_to_string(*e.verdict.eventual_slope);
    if (!e.verdict.exact) {
      r["numeric_value"] = e.verdict.numeric_value;
      r["slope_estimate"] = e.verdict.last_slope_estimate;
    }
    arr.push_back(r);
  }
  return arr;
}

// The nonexpansive map and norm actually tested, for oracle cross-checks.
struct OracleSpace {
  MapExpr f;
  PolyhedralNorm N;
};

std::optional<OracleSpace> oracle_space(const ProblemFile& p) {
  switch (p.query) {
    case QueryType::surjective:
    case QueryType::unique:
    case QueryType::recession:
    case QueryType::illumination:
      return OracleSpace{*p.map, *p.norm};
    case QueryType::subtopical:
      return OracleSpace{*p.map, PolyhedralNorm::builtin(NormKind::sup, p.map->dimension())};
    case QueryType::topical:
    case QueryType::eigenvector:
      if (p.map->dimension() < 2) return std::nullopt;
      return OracleSpace{normalize_topical(*p.map),
                         PolyhedralNorm::builtin(NormKind::variation, p.map->dimension())};
  }
  return std::nullopt;
}

// Reduce any not-surjective witness to a failing face of the oracle space,
// recomputing the exact finite limit on that face.
std::optional<FailingFaceWitness> derive_face_witness(const Certificate& cert,
                                                      const ProblemFile& p,
                                                      const OracleSpace& space) {
  auto face_from_label = [&](Mask I, Mask J) -> std::optional<FailingFaceWitness> {
    const auto& faces = space.N.proper_faces();
    for (std::size_t i = 0; i < faces.size(); ++i) {
      if (faces[i].label && faces[i].label->first == I && faces[i].label->second == J) {
        if (!space.f.flags().pwa) return std::nullopt;
        Pwa1 g = restrict_to_ray(space.f, RatVec(space.N.dimension(), Rat(0)),
                                 faces[i].representative, faces[i].dual_representative,
                                 p.numeric.piece_cap);
        LimitVerdict v = classify_limit_at_infinity(g);
        if (v.outcome != LimitVerdict::Outcome::finite) return std::nullopt;
        return FailingFaceWitness{static_cast<int>(i), faces[i].label_str(), *v.value};
      }
    }
    return std::nullopt;
  };

  if (const auto* ff = std::get_if<FailingFaceWitness>(&cert.witness)) return *ff;
  if (const auto* sw = std::get_if<SubsetWitness>(&cert.witness))
    return sw->sign > 0 ? face_from_label(sw->subset, 0) : face_from_label(0, sw->subset);
  if (const auto* pw = std::get_if<PairWitness>(&cert.witness))
    return face_from_label(pw->I, pw->J);
  if (const auto* rw = std::get_if<ReachWitness>(&cert.witness)) {
    Mask full = full_mask(p.map->dimension());
    return face_from_label(full & ~rw->reached, rw->from);
  }
  if (const auto* fc = std::get_if<FinalClassWitness>(&cert.witness)) {
    Mask I = 0, J = 0;
    for (int i : fc->first) I |= (1u << i);
    for (int i : fc->second) J |= (1u << i);
    return face_from_label(I, J);
  }
  return std::nullopt;
}

ojson oracle_verify(const ProblemFile& p, const Certificate& cert, const RunOptions& opts) {
  ojson v;
  auto space = oracle_space(p);
  if (!space) {
    v["note"] = "no oracle cross-check available for this query";
    return v;
  }
  OracleOptions oo;
  if (opts.tol) oo.tol = *opts.tol;
  std::uint64_t seed = opts.seed.value_or(p.seed);
  const int n = space->N.dimension();

  switch (cert.verdict) {
    case Verdict::surjective: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> box(-5.0, 5.0);
      ojson runs = ojson::array();
      bool consistent = true;
      for (int k = 0; k < 5; ++k) {
        VecD u(n);
        for (int i = 0; i < n; ++i) u[i] = box(rng);
        IterationReport rep = minimal_displacement_estimate(space->f, u, space->N, oo);
        ojson r;
        r["kind"] = rep.kind == IterationReport::Kind::fixed_point_found ? "fixed_point_found"
                    : rep.kind == IterationReport::Kind::residual_floor  ? "residual_floor"
                                                                         : "budget_exhausted";
        r["residual"] = rep.final_residual;
        r["iterations"] = rep.iterations;
        runs.push_back(r);
        if (rep.kind != IterationReport::Kind::fixed_point_found) consistent = false;
      }
      v["displacement_runs"] = runs;
      v["consistent"] = consistent;
      return v;
    }
    case Verdict::not_surjective: {
      auto w = derive_face_witness(cert, p, *space);
      if (!w) {
        v["note"] = "witness could not be reduced to a failing face";
        return v;
      }
      auto samples = witness_cone_samples(space->N, *w, 5, seed);
      ojson runs = ojson::array();
      bool consistent = true;
      for (const auto& y : samples) {
        VecD u = to_double(scale(-1, y));
        IterationReport rep = minimal_displacement_estimate(space->f, u, space->N, oo);
        ojson r;
        r["floor"] = rep.final_residual;
        r["iterations"] = rep.iterations;
        runs.push_back(r);
        if (rep.final_residual < 1e-3) consistent = false;
      }
      v["avoided_cone_runs"] = runs;
      v["consistent"] = consistent;
      return v;
    }
    case Verdict::unique:
    case Verdict::not_unique: {
      auto pts = multistart_fixed_points(space->f, space->N, 20, seed, oo.tol, oo.max_iter);
      v["distinct_fixed_points_found"] = pts.size();
      v["consistent"] =
          cert.verdict == Verdict::unique ? pts.size() <= 1 : pts.size() >= 2;
      return v;
    }
    default:
      v["note"] = "no oracle cross-check for a one-sided or inconclusive verdict";
      return v;
  }
}

}  // namespace

RunResult run_problem(const ProblemFile& p, const RunOptions& opts) {
  if (!p.map) throw std::invalid_argument("run_problem: problem has no map");
  ProblemFile q = p;
  if (opts.tmax) q.numeric.max_doublings = *opts.tmax;
  if (opts.seed) q.seed = *opts.seed;
  if (opts.method_override) q.method = *opts.method_override;

  CertifyOptions copts;
  copts.numeric = q.numeric;
  copts.accept_sampled_nonexpansive = q.accept_sampled_nonexpansive;
  copts.seed = q.seed;

  Certificate cert;
  switch (q.query) {
    case QueryType::surjective:
      cert = certify_surjective(*q.map, *q.norm, copts);
      break;
    case QueryType::unique:
      cert = certify_unique(*q.map, *q.norm, q.u, copts);
      break;
    case QueryType::eigenvector:
      cert = certify_unique_eigenvector(*q.map, q.u, copts);
      break;
    case QueryType::topical: {
      TopicalOptions topts;
      topts.numeric = q.numeric;
      cert = certify_topical(*q.map, q.method, topts);
      break;
    }
    case QueryType::subtopical:
      cert = certify_subtopical(*q.map, q.numeric);
      break;
    case QueryType::recession:
      cert = certify_via_recession(*q.map, *q.norm, copts);
      break;
    case QueryType::illumination:
      cert = illumination_check(*q.map, *q.norm, q.budget, q.seed, copts);
      break;
  }

  RunResult result;
  result.certificate = cert;
  result.exit_code = verdict_exit_class(cert.verdict);

  ojson rep;
  rep["schema"] = "polyfix-report/1";
  rep["query"] = query_type_name(q.query);
  rep["verdict"] = verdict_name(cert.verdict);
  rep["method"] = cert.method;
  rep["mode"] = cert.exact ? "exact" : "numeric";
  rep["witness"] = witness_to_json(cert.witness);
  if (cert.eigenvalue) rep["eigenvalue"] = rat_to_string(*cert.eigenvalue);
  if (!cert.final_classes.empty()) {
    ojson fc = ojson::array();
    for (const auto& c : cert.final_classes) {
      ojson cj = ojson::array();
      for (int i : c) cj.push_back(i + 1);
      fc.push_back(cj);
    }
    rep["final_classes"] = fc;
  }
  if (!cert.note.empty()) rep["note"] = cert.note;
  ojson counts;
  counts["limits_evaluated"] = cert.limits_evaluated;
  counts["limit_table_entries"] = cert.limit_table.size();
  if (q.norm) counts["proper_faces"] = q.norm->face_count();
  rep["counts"] = counts;
  rep["limit_table"] = limit_table_to_json(cert.limit_table);
  ojson thresholds;
  thresholds["t0"] = q.numeric.t0;
  thresholds["factor"] = q.numeric.factor;
  thresholds["max_doublings"] = q.numeric.max_doublings;
  thresholds["divergence_bound"] = q.numeric.divergence_bound;
  thresholds["slope_tol"] = q.numeric.slope_tol;
  thresholds["piece_cap"] = q.numeric.piece_cap;
  rep["thresholds"] = thresholds;
  rep["seed"] = q.seed;
  rep["exit_code"] = result.exit_code;
  rep["problem"] = problem_to_ojson(q);

  if (opts.verify) rep["verify"] = oracle_verify(q, cert, opts);

  if (opts.want_graph) {
    if (!q.map->is_topical())
      throw std::invalid_argument("graph export requires a structurally topical map");
    result.graph_dot = export_dot(build_Ginf(*q.map, q.numeric));
  }

  result.report_json = rep.dump(2) + "\n";
  return result;
}

MapExpr clip_cycle_flip_map(int n, Mask K, Mask L) {
  if ((K & L) != 0 || (K | L) == 0)
    throw std::invalid_argument("clip_cycle_flip_map: K and L must be disjoint, not both empty");
  if ((K | L) & ~full_mask(n)) throw std::invalid_argument("clip_cycle_flip_map: subset out of range");
  std::vector<int> cycle;
  for (int i = 0; i < n; ++i)
    if (mask_contains(K | L, i)) cycle.push_back(i);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < cycle.size(); ++k)
    perm[cycle[k]] = cycle[(k + 1) % cycle.size()];
  MapExpr dl = MapExpr::sign_flip(n, L);
  MapExpr pkl = MapExpr::clip_nonneg(n, K | L);
  MapExpr s = MapExpr::permutation(std::move(perm));
  return MapExpr::compose(dl, MapExpr::compose(s, MapExpr::compose(pkl, dl)));
}

ProblemFile demo_problem(const std::string& name) {
  ProblemFile p;
  if (name == "fixed-ray") {
    p.norm = PolyhedralNorm::builtin(NormKind::sup, 3);
    p.map = clip_cycle_flip_map(3, 1u << 0, 1u << 1);
    p.query = QueryType::surjective;
    return p;
  }
  if (name == "shrink-sqrt") {
    p.norm = PolyhedralNorm::builtin(NormKind::sup, 1);
    p.map = MapExpr::shrink_sqrt(1, 0);
    p.query = QueryType::surjective;
    return p;
  }
  if (name == "min-clip") {
    p.map = MapExpr::pointwise_min(MapExpr::identity(2), MapExpr::constant(RatVec{Rat(1), Rat(1)}));
    p.query = QueryType::subtopical;
    return p;
  }
  throw std::invalid_argument("unknown demo '" + name + "'; available: fixed-ray, shrink-sqrt, min-clip");
}

std::vector<std::string> demo_names() { return {"fixed-ray", "shrink-sqrt", "min-clip"}; }

}  // namespace polyfix
