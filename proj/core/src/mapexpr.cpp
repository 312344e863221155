#include "polyfix/mapexpr.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace polyfix {

namespace {

using Node = MapExpr::Node;
using Op = MapExpr::Op;

std::shared_ptr<Node> make_node(Op op, int dim) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->dim = dim;
  return n;
}

void require_dim(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

int MapExpr::dimension() const { return node_->dim; }
MapExpr::Op MapExpr::op() const { return node_->op; }
const StructuralFlags& MapExpr::flags() const { return node_->flags; }
bool MapExpr::is_topical() const {
  return node_->flags.order_preserving && node_->flags.additively_homogeneous;
}
bool MapExpr::is_subtopical() const {
  return node_->flags.order_preserving && node_->flags.additively_subhomogeneous;
}

MapExpr MapExpr::identity(int n) {
  if (n < 1) throw std::invalid_argument("identity: dimension must be >= 1");
  auto node = make_node(Op::identity, n);
  node->flags = {true, true, true, true, true, true};
  return MapExpr(node);
}

MapExpr MapExpr::constant(RatVec c) {
  if (c.empty()) throw std::invalid_argument("constant: empty vector");
  auto node = make_node(Op::constant, static_cast<int>(c.size()));
  bool zero = is_zero_vec(c);
  node->vec = std::move(c);
  node->flags = {true, true, false, true, zero, true};
  return MapExpr(node);
}

MapExpr MapExpr::permutation(std::vector<int> perm) {
  int n = static_cast<int>(perm.size());
  if (n < 1) throw std::invalid_argument("permutation: empty");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("permutation: not a bijection");
    seen[p] = true;
  }
  auto node = make_node(Op::permutation, n);
  node->perm = std::move(perm);
  node->flags = {true, true, true, true, true, true};
  return MapExpr(node);
}

MapExpr MapExpr::sign_flip(int n, Mask flip_set) {
  if (n < 1 || (flip_set & ~full_mask(n)) != 0)
    throw std::invalid_argument("sign_flip: bad subset");
  auto node = make_node(Op::sign_flip, n);
  node->mask = flip_set;
  bool trivial = flip_set == 0;
  node->flags = {true, trivial, trivial, true, true, true};
  return MapExpr(node);
}

MapExpr MapExpr::clip_nonneg(int n, Mask keep_set) {
  if (n < 1 || (keep_set & ~full_mask(n)) != 0)
    throw std::invalid_argument("clip_nonneg: bad subset");
  auto node = make_node(Op::clip_nonneg, n);
  node->mask = keep_set;
  node->flags = {true, true, false, true, true, true};
  return MapExpr(node);
}

MapExpr MapExpr::translate(RatVec offset) {
  if (offset.empty()) throw std::invalid_argument("translate: empty vector");
  auto node = make_node(Op::translate, static_cast<int>(offset.size()));
  bool zero = is_zero_vec(offset);
  node->vec = std::move(offset);
  node->flags = {true, true, true, true, zero, true};
  return MapExpr(node);
}

MapExpr MapExpr::scale(Rat c, MapExpr f) {
  auto node = make_node(Op::scale, f.dimension());
  const auto& g = f.flags();
  node->flags.pwa = g.pwa;
  node->flags.order_preserving = c >= 0 && g.order_preserving;
  node->flags.additively_homogeneous = c == 1 && g.additively_homogeneous;
  node->flags.additively_subhomogeneous = c >= 0 && c <= 1 && g.additively_subhomogeneous;
  node->flags.positively_homogeneous = g.positively_homogeneous;
  node->flags.convex = c >= 0 && g.convex;
  node->scalar = std::move(c);
  node->a = f.node_;
  return MapExpr(node);
}

MapExpr MapExpr::compose(MapExpr outer, MapExpr inner) {
  require_dim(outer.dimension(), inner.dimension(), "compose");
  auto node = make_node(Op::compose, outer.dimension());
  const auto& fo = outer.flags();
  const auto& fi = inner.flags();
  node->flags.pwa = fo.pwa && fi.pwa;
  node->flags.order_preserving = fo.order_preserving && fi.order_preserving;
  node->flags.additively_homogeneous = fo.additively_homogeneous && fi.additively_homogeneous;
  node->flags.additively_subhomogeneous =
      (fo.additively_subhomogeneous && fi.additively_homogeneous) ||
      (fo.additively_subhomogeneous && fo.order_preserving && fi.additively_subhomogeneous);
  node->flags.positively_homogeneous = fo.positively_homogeneous && fi.positively_homogeneous;
  node->flags.convex = fo.convex && fo.order_preserving && fi.convex;
  node->a = outer.node_;
  node->b = inner.node_;
  return MapExpr(node);
}

MapExpr MapExpr::binary(Op op, MapExpr a, MapExpr b, bool convex_ok) {
  require_dim(a.dimension(), b.dimension(), "pointwise max/min");
  auto node = make_node(op, a.dimension());
  const auto& fa = a.flags();
  const auto& fb = b.flags();
  node->flags.pwa = fa.pwa && fb.pwa;
  node->flags.order_preserving = fa.order_preserving && fb.order_preserving;
  node->flags.additively_homogeneous = fa.additively_homogeneous && fb.additively_homogeneous;
  node->flags.additively_subhomogeneous =
      fa.additively_subhomogeneous && fb.additively_subhomogeneous;
  node->flags.positively_homogeneous = fa.positively_homogeneous && fb.positively_homogeneous;
  node->flags.convex = convex_ok && fa.convex && fb.convex;
  node->a = a.node_;
  node->b = b.node_;
  return MapExpr(node);
}

MapExpr MapExpr::pointwise_max(MapExpr a, MapExpr b) {
  return binary(Op::pointwise_max, std::move(a), std::move(b), true);
}

MapExpr MapExpr::pointwise_min(MapExpr a, MapExpr b) {
  return binary(Op::pointwise_min, std::move(a), std::move(b), false);
}

MapExpr MapExpr::convex_combo(Rat weight, MapExpr a, MapExpr b) {
  if (!(weight > 0 && weight < 1))
    throw std::invalid_argument("convex_combo: weight must be strictly between 0 and 1");
  require_dim(a.dimension(), b.dimension(), "convex_combo");
  auto node = make_node(Op::convex_combo, a.dimension());
  const auto& fa = a.flags();
  const auto& fb = b.flags();
  node->flags.pwa = fa.pwa && fb.pwa;
  node->flags.order_preserving = fa.order_preserving && fb.order_preserving;
  node->flags.additively_homogeneous = fa.additively_homogeneous && fb.additively_homogeneous;
  node->flags.additively_subhomogeneous =
      fa.additively_subhomogeneous && fb.additively_subhomogeneous;
  node->flags.positively_homogeneous = fa.positively_homogeneous && fb.positively_homogeneous;
  node->flags.convex = fa.convex && fb.convex;
  node->scalar = std::move(weight);
  node->a = a.node_;
  node->b = b.node_;
  return MapExpr(node);
}

MapExpr MapExpr::affine(std::vector<RatVec> matrix_rows, RatVec offset) {
  int n = static_cast<int>(matrix_rows.size());
  if (n < 1) throw std::invalid_argument("affine: empty matrix");
  for (const auto& row : matrix_rows)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("affine: matrix must be square");
  if (static_cast<int>(offset.size()) != n) throw std::invalid_argument("affine: offset dimension");
  auto node = make_node(Op::affine, n);
  bool nonneg = true, rows_one = true, rows_le_one = true;
  for (const auto& row : matrix_rows) {
    Rat s = 0;
    for (const auto& e : row) {
      if (e < 0) nonneg = false;
      s += e;
    }
    if (s != 1) rows_one = false;
    if (s > 1) rows_le_one = false;
  }
  bool zero_offset = is_zero_vec(offset);
  node->flags.pwa = true;
  node->flags.order_preserving = nonneg;
  node->flags.additively_homogeneous = rows_one;
  node->flags.additively_subhomogeneous = rows_le_one;
  node->flags.positively_homogeneous = zero_offset;
  node->flags.convex = true;
  node->matrix = std::move(matrix_rows);
  node->vec = std::move(offset);
  return MapExpr(node);
}

MapExpr MapExpr::max_plus(MaxPlusMatrix a) {
  int n = static_cast<int>(a.size());
  if (n < 1) throw std::invalid_argument("max_plus: empty matrix");
  for (const auto& row : a) {
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("max_plus: matrix must be square");
    bool any = false;
    for (const auto& e : row) any = any || e.has_value();
    if (!any) throw std::invalid_argument("max_plus: row with no finite entries");
  }
  auto node = make_node(Op::max_plus, n);
  node->max_plus = std::move(a);
  node->flags = {true, true, true, true, false, true};
  return MapExpr(node);
}

MapExpr MapExpr::min_max(MinMaxRows rows) {
  int n = static_cast<int>(rows.size());
  if (n < 1) throw std::invalid_argument("min_max: empty");
  for (const auto& group : rows) {
    if (group.empty()) throw std::invalid_argument("min_max: coordinate with no rows");
    for (const auto& row : group) {
      if (static_cast<int>(row.size()) != n) throw std::invalid_argument("min_max: row length");
      bool any = false;
      for (const auto& e : row) any = any || e.has_value();
      if (!any) throw std::invalid_argument("min_max: row with no finite entries");
    }
  }
  auto node = make_node(Op::min_max, n);
  node->min_max = std::move(rows);
  node->flags = {true, true, true, true, false, false};
  return MapExpr(node);
}

MapExpr MapExpr::shrink_sqrt(int n, int coord) {
  if (n < 1 || coord < 0 || coord >= n) throw std::invalid_argument("shrink_sqrt: bad coordinate");
  auto node = make_node(Op::shrink_sqrt, n);
  node->coord = coord;
  node->flags = {false, true, false, true, false, false};
  return MapExpr(node);
}

MapExpr MapExpr::chart_normalize(MapExpr topical_map) {
  if (!topical_map.is_topical())
    throw std::invalid_argument("chart_normalize: map is not structurally topical");
  if (topical_map.dimension() < 2)
    throw std::invalid_argument("chart_normalize: needs dimension >= 2");
  auto node = make_node(Op::chart_normalize, topical_map.dimension() - 1);
  node->flags.pwa = topical_map.flags().pwa;
  node->a = topical_map.node_;
  return MapExpr(node);
}

MapExpr normalize_topical(const MapExpr& T) { return MapExpr::chart_normalize(T); }

namespace {

// Shared evaluation skeleton over an arbitrary "value algebra". The algebra
// must provide: value add(value,value), neg, scale by Rat, add Rat constant,
// max, min, from_rat, plus the identity inputs.
template <typename V, typename Ops>
std::vector<V> eval_node(const Node& node, std::span<const V> x, const Ops& ops) {
  switch (node.op) {
    case Op::identity:
      return std::vector<V>(x.begin(), x.end());
    case Op::constant: {
      std::vector<V> out;
      for (const auto& c : node.vec) out.push_back(ops.from_rat(c));
      return out;
    }
    case Op::permutation: {
      std::vector<V> out;
      out.reserve(node.dim);
      for (int i = 0; i < node.dim; ++i) out.push_back(x[node.perm[i]]);
      return out;
    }
    case Op::sign_flip: {
      std::vector<V> out(x.begin(), x.end());
      for (int i = 0; i < node.dim; ++i)
        if (mask_contains(node.mask, i)) out[i] = ops.neg(out[i]);
      return out;
    }
    case Op::clip_nonneg: {
      std::vector<V> out;
      out.reserve(node.dim);
      V zero = ops.from_rat(Rat(0));
      for (int i = 0; i < node.dim; ++i)
        out.push_back(mask_contains(node.mask, i) ? ops.max(x[i], zero) : zero);
      return out;
    }
    case Op::translate: {
      std::vector<V> out(x.begin(), x.end());
      for (int i = 0; i < node.dim; ++i) out[i] = ops.add_const(out[i], node.vec[i]);
      return out;
    }
    case Op::scale: {
      auto inner = eval_node<V>(*node.a, x, ops);
      for (auto& v : inner) v = ops.scale(node.scalar, v);
      return inner;
    }
    case Op::compose: {
      auto inner = eval_node<V>(*node.b, x, ops);
      return eval_node<V>(*node.a, std::span<const V>(inner), ops);
    }
    case Op::pointwise_max:
    case Op::pointwise_min: {
      auto av = eval_node<V>(*node.a, x, ops);
      auto bv = eval_node<V>(*node.b, x, ops);
      for (int i = 0; i < node.dim; ++i)
        av[i] = node.op == Op::pointwise_max ? ops.max(av[i], bv[i]) : ops.min(av[i], bv[i]);
      return av;
    }
    case Op::convex_combo: {
      auto av = eval_node<V>(*node.a, x, ops);
      auto bv = eval_node<V>(*node.b, x, ops);
      Rat w1 = node.scalar;
      Rat w2 = 1 - node.scalar;
      for (int i = 0; i < node.dim; ++i)
        av[i] = ops.add(ops.scale(w1, av[i]), ops.scale(w2, bv[i]));
      return av;
    }
    case Op::affine: {
      std::vector<V> out;
      out.reserve(node.dim);
      for (int i = 0; i < node.dim; ++i) {
        V acc = ops.from_rat(node.vec[i]);
        for (int j = 0; j < node.dim; ++j) {
          if (node.matrix[i][j] == 0) continue;
          acc = ops.add(acc, ops.scale(node.matrix[i][j], x[j]));
        }
        out.push_back(std::move(acc));
      }
      return out;
    }
    case Op::max_plus: {
      std::vector<V> out;
      out.reserve(node.dim);
      for (int i = 0; i < node.dim; ++i) {
        bool first = true;
        V acc = ops.from_rat(Rat(0));
        for (int j = 0; j < node.dim; ++j) {
          if (!node.max_plus[i][j]) continue;
          V term = ops.add_const(x[j], *node.max_plus[i][j]);
          acc = first ? std::move(term) : ops.max(acc, term);
          first = false;
        }
        out.push_back(std::move(acc));
      }
      return out;
    }
    case Op::min_max: {
      std::vector<V> out;
      out.reserve(node.dim);
      for (int i = 0; i < node.dim; ++i) {
        bool first_row = true;
        V acc = ops.from_rat(Rat(0));
        for (const auto& row : node.min_max[i]) {
          bool first = true;
          V rv = ops.from_rat(Rat(0));
          for (int j = 0; j < node.dim; ++j) {
            if (!row[j]) continue;
            V term = ops.add_const(x[j], *row[j]);
            rv = first ? std::move(term) : ops.max(rv, term);
            first = false;
          }
          acc = first_row ? std::move(rv) : ops.min(acc, rv);
          first_row = false;
        }
        out.push_back(std::move(acc));
      }
      return out;
    }
    case Op::shrink_sqrt:
      return ops.shrink_sqrt(node, x);
    case Op::chart_normalize: {
      // lift chart point to the zero-sum subspace, apply T, project back
      std::vector<V> lifted(x.begin(), x.end());
      V s = ops.from_rat(Rat(0));
      for (const auto& v : x) s = ops.add(s, v);
      lifted.push_back(ops.neg(s));
      auto tv = eval_node<V>(*node.a, std::span<const V>(lifted), ops);
      V mean = ops.from_rat(Rat(0));
      for (const auto& v : tv) mean = ops.add(mean, v);
      mean = ops.scale(Rat(1, node.dim + 1), mean);
      std::vector<V> out;
      out.reserve(node.dim);
      for (int i = 0; i < node.dim; ++i) out.push_back(ops.add(tv[i], ops.neg(mean)));
      return out;
    }
  }
  throw std::logic_error("unreachable map op");
}

struct RatOps {
  Rat from_rat(const Rat& c) const { return c; }
  Rat add(const Rat& a, const Rat& b) const { return a + b; }
  Rat neg(const Rat& a) const { return -a; }
  Rat scale(const Rat& c, const Rat& a) const { return c * a; }
  Rat add_const(const Rat& a, const Rat& c) const { return a + c; }
  Rat max(const Rat& a, const Rat& b) const { return a >= b ? a : b; }
  Rat min(const Rat& a, const Rat& b) const { return a <= b ? a : b; }
  std::vector<Rat> shrink_sqrt(const Node&, std::span<const Rat>) const {
    throw not_pwa_error("exact evaluation requires a piecewise-affine expression");
  }
};

struct DoubleOps {
  double from_rat(const Rat& c) const { return rat_to_double(c); }
  double add(double a, double b) const { return a + b; }
  double neg(double a) const { return -a; }
  double scale(const Rat& c, double a) const { return rat_to_double(c) * a; }
  double add_const(double a, const Rat& c) const { return a + rat_to_double(c); }
  double max(double a, double b) const { return a >= b ? a : b; }
  double min(double a, double b) const { return a <= b ? a : b; }
  std::vector<double> shrink_sqrt(const Node& node, std::span<const double> x) const {
    std::vector<double> out(x.begin(), x.end());
    double v = out[node.coord];
    out[node.coord] = v > 1.0 ? v - std::sqrt(v) : 0.0;
    return out;
  }
};

struct PwaOps {
  PieceBudget* budget;
  Pwa1 from_rat(const Rat& c) const { return Pwa1::constant(c); }
  Pwa1 add(const Pwa1& a, const Pwa1& b) const { return pwa_add(a, b, *budget); }
  Pwa1 neg(const Pwa1& a) const { return pwa_neg(a); }
  Pwa1 scale(const Rat& c, const Pwa1& a) const { return pwa_scale(c, a); }
  Pwa1 add_const(const Pwa1& a, const Rat& c) const { return pwa_offset(a, c); }
  Pwa1 max(const Pwa1& a, const Pwa1& b) const { return pwa_max(a, b, *budget); }
  Pwa1 min(const Pwa1& a, const Pwa1& b) const { return pwa_min(a, b, *budget); }
  std::vector<Pwa1> shrink_sqrt(const Node&, std::span<const Pwa1>) const {
    throw not_pwa_error("symbolic ray restriction requires a piecewise-affine expression");
  }
};

}  // namespace

RatVec MapExpr::operator()(std::span<const Rat> x) const {
  if (static_cast<int>(x.size()) != node_->dim)
    throw std::invalid_argument("evaluate: dimension mismatch");
  if (!node_->flags.pwa)
    throw not_pwa_error("exact evaluation requires a piecewise-affine expression");
  return eval_node<Rat>(*node_, x, RatOps{});
}

VecD MapExpr::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != node_->dim)
    throw std::invalid_argument("evaluate: dimension mismatch");
  return eval_node<double>(*node_, x, DoubleOps{});
}

std::vector<Pwa1> MapExpr::propagate_ray(std::span<const Pwa1> in, PieceBudget& budget) const {
  if (static_cast<int>(in.size()) != node_->dim)
    throw std::invalid_argument("propagate_ray: dimension mismatch");
  if (!node_->flags.pwa)
    throw not_pwa_error("symbolic ray restriction requires a piecewise-affine expression");
  return eval_node<Pwa1>(*node_, in, PwaOps{&budget});
}

namespace {

bool structurally_nonexpansive(const Node& node, const PolyhedralNorm& N);

bool affine_operator_norm_ok(const Node& node, const PolyhedralNorm& N) {
  switch (N.kind()) {
    case NormKind::sup: {
      for (const auto& row : node.matrix) {
        Rat s = 0;
        for (const auto& e : row) s += abs(e);
        if (s > 1) return false;
      }
      return true;
    }
    case NormKind::one: {
      for (int j = 0; j < node.dim; ++j) {
        Rat s = 0;
        for (int i = 0; i < node.dim; ++i) s += abs(node.matrix[i][j]);
        if (s > 1) return false;
      }
      return true;
    }
    default: {
      // exact operator norm on a polytope ball: max over its vertices
      for (const auto& v : N.unit_ball_vertices()) {
        RatVec av(node.dim, Rat(0));
        for (int i = 0; i < node.dim; ++i) av[i] = dot(node.matrix[i], v);
        if (N.value(av) > 1) return false;
      }
      return true;
    }
  }
}

bool structurally_nonexpansive(const Node& node, const PolyhedralNorm& N) {
  bool coordinatewise = N.kind() == NormKind::sup || N.kind() == NormKind::one;
  switch (node.op) {
    case Op::identity:
    case Op::constant:
    case Op::translate:
      return true;
    case Op::scale:
      return abs(node.scalar) <= 1 && structurally_nonexpansive(*node.a, N);
    case Op::compose:
      return structurally_nonexpansive(*node.a, N) && structurally_nonexpansive(*node.b, N);
    case Op::convex_combo:
      return structurally_nonexpansive(*node.a, N) && structurally_nonexpansive(*node.b, N);
    case Op::permutation:
    case Op::sign_flip:
    case Op::clip_nonneg:
    case Op::shrink_sqrt:
      return coordinatewise;
    case Op::pointwise_max:
    case Op::pointwise_min:
      return N.kind() == NormKind::sup && structurally_nonexpansive(*node.a, N) &&
             structurally_nonexpansive(*node.b, N);
    case Op::max_plus:
    case Op::min_max:
      return N.kind() == NormKind::sup;
    case Op::affine:
      return affine_operator_norm_ok(node, N);
    case Op::chart_normalize:
      return N.kind() == NormKind::variation && N.dimension() == node.dim &&
             N.underlying_dimension() == node.dim + 1;
  }
  return false;
}

RatVec random_rat_vec(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> num(-32, 32);
  std::uniform_int_distribution<int> den(1, 8);
  RatVec v(n);
  for (int i = 0; i < n; ++i) v[i] = Rat(num(rng), den(rng));
  return v;
}

}  // namespace

NonexpansivenessReport check_nonexpansive(const MapExpr& f, const PolyhedralNorm& N,
                                          int samples, std::uint64_t seed) {
  if (f.dimension() != N.dimension())
    throw std::invalid_argument("check_nonexpansive: map/norm dimension mismatch");
  NonexpansivenessReport rep;
  bool structural = structurally_nonexpansive(f.node(), N);
  // subtopical maps are sup-norm nonexpansive by order preservation
  if (!structural && N.kind() == NormKind::sup && f.is_subtopical()) structural = true;
  if (structural) {
    rep.mode = NonexpansivenessReport::Mode::structural;
    rep.verdict = NonexpansivenessReport::Verdict::guaranteed;
    return rep;
  }

  rep.mode = NonexpansivenessReport::Mode::sampled;
  rep.sample_count = samples;
  std::mt19937_64 rng(seed);
  bool exact = f.flags().pwa;
  for (int k = 0; k < samples; ++k) {
    RatVec x = random_rat_vec(rng, f.dimension());
    RatVec y = random_rat_vec(rng, f.dimension());
    if (x == y) continue;
    if (exact) {
      RatVec fx = f(std::span<const Rat>(x));
      RatVec fy = f(std::span<const Rat>(y));
      Rat num = N.value(sub(fx, fy));
      Rat den = N.value(sub(x, y));
      double ratio = rat_to_double(num) / rat_to_double(den);
      rep.max_observed_ratio = std::max(rep.max_observed_ratio, ratio);
      if (num > den) {
        rep.verdict = NonexpansivenessReport::Verdict::violated;
        rep.witness = {x, y};
        return rep;
      }
    } else {
      VecD xd = to_double(x), yd = to_double(y);
      VecD fx = f(std::span<const double>(xd));
      VecD fy = f(std::span<const double>(yd));
      VecD d(fx.size()), dxy(xd.size());
      for (std::size_t i = 0; i < fx.size(); ++i) d[i] = fx[i] - fy[i];
      for (std::size_t i = 0; i < xd.size(); ++i) dxy[i] = xd[i] - yd[i];
      double num = N.value(std::span<const double>(d));
      double den = N.value(std::span<const double>(dxy));
      if (den <= 0) continue;
      double ratio = num / den;
      rep.max_observed_ratio = std::max(rep.max_observed_ratio, ratio);
      if (ratio > 1.0 + 1e-9) {
        rep.verdict = NonexpansivenessReport::Verdict::violated;
        rep.witness = {x, y};
        return rep;
      }
    }
  }
  rep.verdict = NonexpansivenessReport::Verdict::consistent;
  return rep;
}

}  // namespace polyfix
