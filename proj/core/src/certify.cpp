#include "polyfix/certify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "polyfix/topical.hpp"

namespace polyfix {

namespace {

void require_nonexpansive(const MapExpr& f, const PolyhedralNorm& N, const CertifyOptions& opts) {
  NonexpansivenessReport rep = check_nonexpansive(f, N, opts.nonexpansive_samples, opts.seed);
  if (rep.verdict == NonexpansivenessReport::Verdict::violated) {
    std::string msg = "map is not nonexpansive in the given norm";
    if (rep.witness)
      msg += "; witness pair " + vec_to_string(rep.witness->first) + ", " +
             vec_to_string(rep.witness->second);
    throw std::invalid_argument(msg);
  }
  if (rep.verdict == NonexpansivenessReport::Verdict::consistent &&
      !opts.accept_sampled_nonexpansive)
    throw std::invalid_argument(
        "nonexpansiveness is not structurally guaranteed; set accept_sampled_nonexpansive to "
        "certify on sampled evidence");
}

void require_fixed_point(const MapExpr& f, std::span<const Rat> u) {
  if (static_cast<int>(u.size()) != f.dimension())
    throw std::invalid_argument("fixed point has wrong dimension");
  if (f.flags().pwa) {
    RatVec fu = f(u);
    for (int i = 0; i < f.dimension(); ++i)
      if (fu[i] != u[i])
        throw std::invalid_argument("u is not a fixed point; residual " +
                                    vec_to_string(sub(fu, u)));
    return;
  }
  VecD ud = to_double(RatVec(u.begin(), u.end()));
  VecD fu = f(std::span<const double>(ud));
  double r = 0;
  for (std::size_t i = 0; i < ud.size(); ++i) r = std::max(r, std::fabs(fu[i] - ud[i]));
  if (r > 1e-9)
    throw std::invalid_argument("u is not a fixed point; residual " + std::to_string(r));
}

LimitVerdict slope_entry(const Rat& slope) {
  LimitVerdict v;
  v.exact = true;
  v.outcome = LimitVerdict::Outcome::finite;
  v.value = slope;
  v.numeric_value = rat_to_double(slope);
  v.eventual_slope = slope;
  return v;
}

// Numeric initial-sign probe at shrinking t. Only a strictly negative slope is
// ever decided; everything else is left open.
std::optional<InitialSign> numeric_initial_sign(const MapExpr& f, const VecD& base,
                                                const VecD& dir, const VecD& pairing,
                                                bool negate) {
  const int n = f.dimension();
  double slope_prev = 0;
  int decided = 0;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    VecD x(n);
    for (int i = 0; i < n; ++i) x[i] = base[i] + t * dir[i];
    VecD fx = f(std::span<const double>(x));
    double g = 0;
    for (int i = 0; i < n; ++i) g += pairing[i] * (fx[i] - x[i]);
    if (negate) g = -g;
    double slope = g / t;
    if (slope < -1e-6) ++decided;
    slope_prev = slope;
  }
  (void)slope_prev;
  if (decided == 3) return InitialSign::negative_for_all_positive_t;
  return std::nullopt;
}

}  // namespace

Certificate certify_surjective(const MapExpr& f, const PolyhedralNorm& N,
                               const CertifyOptions& opts) {
  if (f.dimension() != N.dimension())
    throw std::invalid_argument("certify_surjective: map/norm dimension mismatch");
  require_nonexpansive(f, N, opts);

  Certificate cert;
  cert.method = "face_limits";
  cert.verdict = Verdict::surjective;
  cert.exact = f.flags().pwa;
  const int n = N.dimension();
  RatVec zero(n, Rat(0));
  VecD zerod(n, 0.0);
  bool saw_inconclusive = false;

  const auto& faces = N.proper_faces();
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const FaceDescriptor& F = faces[fi];
    LimitVerdict v;
    bool done = false;
    if (f.flags().pwa) {
      try {
        Pwa1 g = restrict_to_ray(f, zero, F.representative, F.dual_representative,
                                 opts.numeric.piece_cap);
        if (!g.is_nonincreasing())
          throw contract_breach("face pairing is not monotone; map is not nonexpansive");
        v = classify_limit_at_infinity(g);
        done = true;
      } catch (const resource_error&) {
        cert.exact = false;  // fall through to the numeric path for this face
      }
    }
    if (!done) {
      v = classify_limit_numeric(f, zerod, to_double(F.representative),
                                 to_double(F.dual_representative), true, -1, opts.numeric);
      cert.exact = false;
    }
    cert.limit_table.push_back({F.label_str(), v});
    if (v.outcome == LimitVerdict::Outcome::finite && cert.verdict != Verdict::not_surjective) {
      cert.verdict = Verdict::not_surjective;
      FailingFaceWitness w;
      w.face_index = static_cast<int>(fi);
      w.face_label = F.label_str();
      w.limit_value = v.exact ? *v.value : Rat(0);
      if (!v.exact) w.limit_value = Rat(static_cast<long>(std::llround(v.numeric_value * 1024)), 1024);
      cert.witness = w;
    }
    if (v.outcome == LimitVerdict::Outcome::inconclusive) saw_inconclusive = true;
  }
  if (cert.verdict == Verdict::surjective && saw_inconclusive) cert.verdict = Verdict::inconclusive;
  cert.limits_evaluated = cert.limit_table.size();
  return cert;
}

Certificate certify_unique(const MapExpr& f, const PolyhedralNorm& N, std::span<const Rat> u,
                           const CertifyOptions& opts) {
  if (f.dimension() != N.dimension())
    throw std::invalid_argument("certify_unique: map/norm dimension mismatch");
  require_nonexpansive(f, N, opts);
  require_fixed_point(f, u);

  Certificate cert;
  cert.method = "initial_slopes";
  cert.verdict = Verdict::unique;
  cert.exact = f.flags().pwa;
  bool saw_inconclusive = false;
  const auto& faces = N.proper_faces();
  RatVec ubase(u.begin(), u.end());
  VecD ud = to_double(ubase);

  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const FaceDescriptor& F = faces[fi];
    if (f.flags().pwa) {
      Pwa1 g = restrict_to_ray(f, ubase, F.representative, F.dual_representative,
                               opts.numeric.piece_cap);
      if (!g.is_nonincreasing())
        throw contract_breach("face pairing is not monotone; map is not nonexpansive");
      InitialSign s = initial_sign(g);
      cert.limit_table.push_back({F.label_str(), slope_entry(g.first_slope())});
      if (s == InitialSign::zero_on_initial_interval && cert.verdict == Verdict::unique) {
        cert.verdict = Verdict::not_unique;
        cert.witness = InvariantFaceWitness{static_cast<int>(fi), F.label_str()};
      }
    } else {
      auto s = numeric_initial_sign(f, ud, to_double(F.representative),
                                    to_double(F.dual_representative), false);
      LimitVerdict v;
      v.exact = false;
      v.outcome = s ? LimitVerdict::Outcome::finite : LimitVerdict::Outcome::inconclusive;
      cert.limit_table.push_back({F.label_str(), v});
      if (!s) saw_inconclusive = true;
    }
  }
  if (cert.verdict == Verdict::unique && saw_inconclusive) cert.verdict = Verdict::inconclusive;
  cert.limits_evaluated = cert.limit_table.size();
  return cert;
}

Certificate certify_unique_subtopical(const MapExpr& T, std::span<const Rat> u,
                                      const CertifyOptions& opts) {
  require_subtopical_structure(T);
  require_fixed_point(T, u);
  const int n = T.dimension();
  if (n > 20) throw resource_error("certify_unique_subtopical: subset family too large");

  Certificate cert;
  cert.method = "subtopical_slopes";
  cert.verdict = Verdict::unique;
  cert.exact = T.flags().pwa;
  bool saw_inconclusive = false;
  RatVec ubase(u.begin(), u.end());
  VecD ud = to_double(ubase);

  for (Mask I = 1; I <= full_mask(n); ++I) {
    RatVec eI = indicator(n, I);
    RatVec neg = scale(-1, eI);
    if (T.flags().pwa) {
      Pwa1 gp = restrict_to_ray(T, ubase, eI, eI, opts.numeric.piece_cap);
      InitialSign sp = initial_sign(gp);
      cert.limit_table.push_back({"I=" + mask_to_string(I) + " sign=+", slope_entry(gp.first_slope())});
      // mirrored ray <T(u - t e_I) - u + t e_I, -e_I> must stay negative,
      // i.e. <T(u - t e_I) - u, e_I> + t|I| stays positive
      Pwa1 gm = restrict_to_ray(T, ubase, neg, neg, opts.numeric.piece_cap);
      InitialSign sm = initial_sign(gm);
      cert.limit_table.push_back(
          {"I=" + mask_to_string(I) + " sign=-", slope_entry(-gm.first_slope())});
      if (cert.verdict == Verdict::unique) {
        if (sp == InitialSign::zero_on_initial_interval) {
          cert.verdict = Verdict::not_unique;
          cert.witness = SubsetWitness{I, +1, Rat(0)};
        } else if (sm == InitialSign::zero_on_initial_interval) {
          cert.verdict = Verdict::not_unique;
          cert.witness = SubsetWitness{I, -1, Rat(0)};
        }
      }
    } else {
      auto sp = numeric_initial_sign(T, ud, to_double(eI), to_double(eI), false);
      auto sm = numeric_initial_sign(T, ud, to_double(neg), to_double(neg), false);
      LimitVerdict v;
      v.exact = false;
      v.outcome = (sp && sm) ? LimitVerdict::Outcome::finite : LimitVerdict::Outcome::inconclusive;
      cert.limit_table.push_back({"I=" + mask_to_string(I), v});
      if (!sp || !sm) saw_inconclusive = true;
    }
  }
  if (cert.verdict == Verdict::unique && saw_inconclusive) cert.verdict = Verdict::inconclusive;
  cert.limits_evaluated = cert.limit_table.size();
  return cert;
}

Certificate certify_unique_eigenvector(const MapExpr& T, std::span<const Rat> u,
                                       const CertifyOptions& opts) {
  require_topical_structure(T);
  const int n = T.dimension();
  if (n > 20) throw resource_error("certify_unique_eigenvector: subset family too large");
  if (static_cast<int>(u.size()) != n)
    throw std::invalid_argument("eigenvector has wrong dimension");
  if (!T.flags().pwa)
    throw not_pwa_error("eigenvector uniqueness needs exact evaluation (piecewise-affine map)");

  RatVec ubase(u.begin(), u.end());
  RatVec tu = T(std::span<const Rat>(ubase));
  Rat lambda = tu[0] - ubase[0];
  for (int i = 0; i < n; ++i)
    if (tu[i] - ubase[i] != lambda)
      throw std::invalid_argument("u is not an additive eigenvector; residual " +
                                  vec_to_string(sub(tu, ubase)));
  // shift the eigenvalue away so u becomes a genuine fixed point
  MapExpr shifted = MapExpr::compose(MapExpr::translate(RatVec(n, -lambda)), T);

  Certificate cert;
  cert.method = "eigenvector_slopes";
  cert.verdict = Verdict::unique;
  cert.exact = true;
  cert.eigenvalue = lambda;

  const Mask full = full_mask(n);
  std::map<Mask, InitialSign> minus_memo, plus_memo;
  auto minus_sign = [&](Mask I) {
    if (auto it = minus_memo.find(I); it != minus_memo.end()) return it->second;
    RatVec dir = scale(-1, indicator(n, full & ~I));
    RatVec pairing = indicator(n, I);
    Pwa1 a = restrict_to_ray_raw(shifted, ubase, dir, pairing, opts.numeric.piece_cap);
    a = pwa_offset(a, -dot(ubase, pairing));
    InitialSign s = initial_sign(a);
    cert.limit_table.push_back({"minus-slope I=" + mask_to_string(I), slope_entry(a.first_slope())});
    minus_memo.emplace(I, s);
    return s;
  };
  auto plus_sign = [&](Mask J) {
    if (auto it = plus_memo.find(J); it != plus_memo.end()) return it->second;
    RatVec dir = indicator(n, full & ~J);
    RatVec pairing = indicator(n, J);
    Pwa1 b = restrict_to_ray_raw(shifted, ubase, dir, pairing, opts.numeric.piece_cap);
    b = pwa_offset(b, -dot(ubase, pairing));
    cert.limit_table.push_back({"plus-slope J=" + mask_to_string(J), slope_entry(b.first_slope())});
    InitialSign s = initial_sign(pwa_neg(b));
    plus_memo.emplace(J, s);
    return s;
  };

  for (Mask I = 1; I < full; ++I) {
    if (minus_sign(I) == InitialSign::negative_for_all_positive_t) continue;
    for (Mask J = 1; J < full; ++J) {
      if ((I & J) != 0) continue;
      if (plus_sign(J) == InitialSign::negative_for_all_positive_t) continue;
      cert.verdict = Verdict::not_unique;
      cert.witness = PairWitness{I, J};
      cert.limits_evaluated = cert.limit_table.size();
      return cert;
    }
  }
  cert.limits_evaluated = cert.limit_table.size();
  return cert;
}

AsymptoticMap::AsymptoticMap(MapExpr f, RatVec base, Side side, NumericPolicy policy)
    : f_(std::move(f)), base_(std::move(base)), side_(side), policy_(policy) {
  if (static_cast<int>(base_.size()) != f_.dimension())
    throw std::invalid_argument("AsymptoticMap: base dimension mismatch");
  base_d_ = to_double(base_);
}

RatVec AsymptoticMap::operator()(std::span<const Rat> dir) const {
  const int n = f_.dimension();
  if (static_cast<int>(dir.size()) != n)
    throw std::invalid_argument("AsymptoticMap: direction dimension mismatch");
  PieceBudget budget{policy_.piece_cap, 0};
  std::vector<Pwa1> in;
  in.reserve(n);
  for (int i = 0; i < n; ++i) in.push_back(Pwa1::affine(dir[i], base_[i]));
  std::vector<Pwa1> out = f_.propagate_ray(in, budget);
  RatVec result(n);
  for (int i = 0; i < n; ++i)
    result[i] = side_ == Side::at_infinity ? out[i].final_piece().slope : out[i].first_slope();
  return result;
}

std::optional<VecD> AsymptoticMap::estimate(std::span<const double> dir) const {
  const int n = f_.dimension();
  VecD fu = f_(std::span<const double>(base_d_));
  auto value_at = [&](double t) {
    VecD x(n);
    for (int i = 0; i < n; ++i) x[i] = base_d_[i] + t * dir[i];
    VecD fx = f_(std::span<const double>(x));
    VecD est(n);
    for (int i = 0; i < n; ++i)
      est[i] = side_ == Side::at_infinity ? fx[i] / t : (fx[i] - fu[i]) / t;
    return est;
  };
  double t = side_ == Side::at_infinity ? policy_.t0 : 1.0;
  VecD prev = value_at(t);
  int stable = 0;
  for (int k = 0; k < policy_.max_doublings; ++k) {
    t = side_ == Side::at_infinity ? t * policy_.factor : t / policy_.factor;
    VecD cur = value_at(t);
    double diff = 0, scale = 1;
    for (int i = 0; i < n; ++i) {
      diff = std::max(diff, std::fabs(cur[i] - prev[i]));
      scale = std::max(scale, std::fabs(cur[i]));
    }
    if (diff <= 1e-8 * scale)
      ++stable;
    else
      stable = 0;
    if (stable >= 2) return cur;
    prev = cur;
  }
  return std::nullopt;
}

RecessionEstimate recession_map(const MapExpr& f, const NumericPolicy& policy) {
  const int n = f.dimension();
  RecessionEstimate est{AsymptoticMap(f, RatVec(n, Rat(0)), AsymptoticMap::Side::at_infinity, policy)};
  est.exact = f.flags().pwa;
  for (int i = 0; i < n; ++i) {
    RatVec d(n, Rat(0));
    d[i] = 1;
    est.sampled_directions.push_back(d);
    d[i] = -1;
    est.sampled_directions.push_back(d);
  }
  est.sampled_directions.push_back(RatVec(n, Rat(1)));
  for (const auto& d : est.sampled_directions) {
    if (est.exact) {
      est.estimates.push_back(to_double(est.map(std::span<const Rat>(d))));
    } else {
      auto e = est.map.estimate(to_double(d));
      if (!e) est.all_converged = false;
      est.estimates.push_back(e);
    }
  }
  // positive homogeneity spot check on the sampled directions
  est.homogeneity_checked = true;
  for (const auto& d : est.sampled_directions) {
    if (est.exact) {
      RatVec a = est.map(std::span<const Rat>(scale(2, d)));
      RatVec b = scale(2, est.map(std::span<const Rat>(d)));
      if (a != b) est.homogeneity_checked = false;
    }
  }
  return est;
}

AsymptoticMap semiderivative(const MapExpr& f, std::span<const Rat> u, const NumericPolicy& policy) {
  return AsymptoticMap(f, RatVec(u.begin(), u.end()), AsymptoticMap::Side::at_zero, policy);
}

namespace {

// Shared body of the two one-sided homogeneous-limit tests: classify the
// per-face pairing rate <g(x_F) - x_F, x_F*> of a positively homogeneous map
// g given by exact directional slopes (or numeric estimates).
Certificate one_sided_homogeneous_test(const AsymptoticMap& g, const PolyhedralNorm& N,
                                       const char* method, Verdict success) {
  Certificate cert;
  cert.method = method;
  cert.exact = g.exact();
  cert.verdict = success;
  bool saw_flat = false, saw_unconverged = false;

  const auto& faces = N.proper_faces();
  for (const FaceDescriptor& F : faces) {
    if (g.exact()) {
      RatVec w = g(F.representative);
      Rat rate = dot(sub(w, F.representative), F.dual_representative);
      if (rate > 0)
        throw contract_breach("homogeneous limit map expands a face pairing; nonexpansiveness violated");
      LimitVerdict v;
      v.exact = true;
      v.eventual_slope = rate;
      if (rate < 0) {
        v.outcome = LimitVerdict::Outcome::minus_infinity;
      } else {
        v.outcome = LimitVerdict::Outcome::finite;
        v.value = Rat(0);
        saw_flat = true;
      }
      cert.limit_table.push_back({F.label_str(), v});
    } else {
      auto w = g.estimate(to_double(F.representative));
      LimitVerdict v;
      v.exact = false;
      if (!w) {
        v.outcome = LimitVerdict::Outcome::inconclusive;
        saw_unconverged = true;
      } else {
        double rate = 0;
        for (int i = 0; i < N.dimension(); ++i)
          rate += rat_to_double(F.dual_representative[i]) *
                  ((*w)[i] - rat_to_double(F.representative[i]));
        v.last_slope_estimate = rate;
        if (rate < -1e-7) {
          v.outcome = LimitVerdict::Outcome::minus_infinity;
        } else {
          v.outcome = LimitVerdict::Outcome::finite;
          v.numeric_value = 0;
          saw_flat = true;
        }
      }
      cert.limit_table.push_back({F.label_str(), v});
    }
  }
  cert.limits_evaluated = cert.limit_table.size();
  if (saw_unconverged) {
    cert.verdict = Verdict::inconclusive;
    cert.note = "directional limit did not converge numerically";
  } else if (saw_flat) {
    cert.verdict = Verdict::sufficient_only;
    cert.note = "a face pairing rate vanishes; this one-sided test draws no conclusion";
  }
  return cert;
}

}  // namespace

Certificate certify_via_recession(const MapExpr& f, const PolyhedralNorm& N,
                                  const CertifyOptions& opts) {
  if (f.dimension() != N.dimension())
    throw std::invalid_argument("certify_via_recession: map/norm dimension mismatch");
  require_nonexpansive(f, N, opts);
  AsymptoticMap g(f, RatVec(f.dimension(), Rat(0)), AsymptoticMap::Side::at_infinity, opts.numeric);
  return one_sided_homogeneous_test(g, N, "recession", Verdict::surjective);
}

Certificate certify_unique_via_semiderivative(const MapExpr& f, const PolyhedralNorm& N,
                                              std::span<const Rat> u, const CertifyOptions& opts) {
  if (f.dimension() != N.dimension())
    throw std::invalid_argument("certify_unique_via_semiderivative: map/norm dimension mismatch");
  require_nonexpansive(f, N, opts);
  require_fixed_point(f, u);
  AsymptoticMap g(f, RatVec(u.begin(), u.end()), AsymptoticMap::Side::at_zero, opts.numeric);
  return one_sided_homogeneous_test(g, N, "semiderivative", Verdict::unique);
}

namespace {

void require_positively_homogeneous(const MapExpr& g) {
  if (g.flags().positively_homogeneous) return;
  if (!g.flags().pwa)
    throw std::invalid_argument("homogeneity cannot be sampled exactly for a non-piecewise-affine map");
  std::mt19937_64 rng(0x600dULL);
  std::uniform_int_distribution<int> num(-16, 16);
  std::uniform_int_distribution<int> den(1, 4);
  const int n = g.dimension();
  for (int k = 0; k < 50; ++k) {
    RatVec x(n);
    for (int i = 0; i < n; ++i) x[i] = Rat(num(rng), den(rng));
    for (Rat c : {Rat(2), Rat(1, 2), Rat(3)}) {
      RatVec a = g(std::span<const Rat>(scale(c, x)));
      RatVec b = scale(c, g(std::span<const Rat>(x)));
      if (a != b) throw std::invalid_argument("map is not positively homogeneous (sampled)");
    }
  }
}

}  // namespace

Certificate illumination_check(const MapExpr& g, const PolyhedralNorm& N, int budget,
                               std::uint64_t seed, const CertifyOptions& opts) {
  if (g.dimension() != N.dimension())
    throw std::invalid_argument("illumination_check: map/norm dimension mismatch");
  require_positively_homogeneous(g);
  require_nonexpansive(g, N, opts);

  Certificate cert;
  cert.method = "illumination";
  cert.exact = g.flags().pwa;

  const auto& vertices = N.unit_ball_vertices();
  std::vector<bool> lit(vertices.size(), false);
  std::size_t remaining = vertices.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-32, 32);
  std::uniform_int_distribution<int> den(1, 8);
  const int n = g.dimension();

  int used = 0;
  for (; used < budget && remaining > 0; ++used) {
    RatVec w(n);
    for (int i = 0; i < n; ++i) w[i] = Rat(num(rng), den(rng));
    RatVec v;
    if (g.flags().pwa) {
      v = sub(g(std::span<const Rat>(w)), w);
    } else {
      VecD wd = to_double(w);
      VecD gv = g(std::span<const double>(wd));
      v.resize(n);
      for (int i = 0; i < n; ++i)
        v[i] = Rat(static_cast<long long>(std::llround((gv[i] - wd[i]) * (1ll << 32))),
                   1ll << 32);
    }
    if (is_zero_vec(v)) continue;
    for (std::size_t e = 0; e < vertices.size(); ++e) {
      if (lit[e]) continue;
      if (N.illuminates(v, vertices[e])) {
        lit[e] = true;
        --remaining;
      }
    }
  }
  cert.limits_evaluated = static_cast<std::size_t>(used);
  if (remaining == 0) {
    cert.verdict = Verdict::unique;
    cert.note = "every extreme point illuminated after " + std::to_string(used) + " samples";
  } else {
    cert.verdict = Verdict::inconclusive;
    cert.note = std::to_string(remaining) + " extreme points not illuminated within budget " +
                std::to_string(budget);
  }
  return cert;
}

bool FaceLatticeMap::maps_into(const PolyhedralNorm& N, int face) const {
  int img = image[face];
  if (img == kWholeBall) return false;
  return N.face_subset(img, face);
}

FaceLatticeMap face_lattice_map(const MapExpr& g, const PolyhedralNorm& N) {
  if (g.dimension() != N.dimension())
    throw std::invalid_argument("face_lattice_map: map/norm dimension mismatch");
  if (!g.flags().pwa) throw not_pwa_error("face lattice map needs exact evaluation");
  require_positively_homogeneous(g);

  FaceLatticeMap m;
  const auto& faces = N.proper_faces();
  m.image.reserve(faces.size());
  for (const FaceDescriptor& F : faces) {
    RatVec y = g(F.representative);
    Rat nv = N.value(y);
    if (nv > 1)
      throw contract_breach("image of a unit vector leaves the unit ball; map is not nonexpansive");
    m.image.push_back(nv < 1 ? FaceLatticeMap::kWholeBall
                             : N.face_index_of_boundary_point(y));
  }
  return m;
}

bool face_lattice_order_preserved(const FaceLatticeMap& m, const PolyhedralNorm& N) {
  const int count = N.face_count();
  auto contained = [&](int a, int b) {
    // a, b may be kWholeBall (the top element)
    if (b == FaceLatticeMap::kWholeBall) return true;
    if (a == FaceLatticeMap::kWholeBall) return false;
    return N.face_subset(a, b);
  };
  for (int f1 = 0; f1 < count; ++f1)
    for (int f2 = 0; f2 < count; ++f2) {
      if (f1 == f2 || !N.face_subset(f1, f2)) continue;
      if (!contained(m.image[f1], m.image[f2])) return false;
    }
  return true;
}

Certificate invariant_face_search(const MapExpr& g, const PolyhedralNorm& N,
                                  const FaceLatticeMap& m, const CertifyOptions& opts) {
  Certificate cert;
  cert.method = "invariant_face";
  cert.exact = true;
  cert.verdict = Verdict::unique;
  const auto& faces = N.proper_faces();
  RatVec zero(N.dimension(), Rat(0));
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    if (!m.maps_into(N, static_cast<int>(fi))) continue;
    // confirm the candidate through the initial-slope test
    Pwa1 gp = restrict_to_ray(g, zero, faces[fi].representative, faces[fi].dual_representative,
                              opts.numeric.piece_cap);
    InitialSign s = initial_sign(gp);
    cert.limit_table.push_back({faces[fi].label_str(), slope_entry(gp.first_slope())});
    if (s != InitialSign::zero_on_initial_interval)
      throw std::logic_error("face maps into itself but its pairing slope is nonzero");
    cert.verdict = Verdict::not_unique;
    cert.witness = InvariantFaceWitness{static_cast<int>(fi), faces[fi].label_str()};
    break;
  }
  cert.limits_evaluated = cert.limit_table.size();
  return cert;
}

std::vector<RatVec> witness_cone_samples(const PolyhedralNorm& N, const FailingFaceWitness& w,
                                         int count, std::uint64_t seed) {
  const auto& faces = N.proper_faces();
  if (w.face_index < 0 || w.face_index >= static_cast<int>(faces.size()))
    throw std::invalid_argument("witness_cone_samples: bad face index");
  const FaceDescriptor& F = faces[w.face_index];
  const int n = N.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-8, 8);

  std::vector<RatVec> out;
  for (int s = 1; s <= count; ++s) {
    Rat depth(s + 1, 2);  // 1, 3/2, 2, ...
    RatVec dir = scale(-depth, F.representative);
    RatVec jitter(n);
    for (int i = 0; i < n; ++i) jitter[i] = Rat(num(rng), 64);
    RatVec wvec = add(dir, jitter);
    // every active functional must see the sample strictly inside the cone
    bool ok = true;
    for (int a : F.active)
      if (dot(wvec, N.dual_extreme_points()[a]) > Rat(-1, 100)) ok = false;
    if (!ok) wvec = dir;  // fall back to the axis, margin == depth
    out.push_back(add(scale(w.limit_value, F.representative), wvec));
  }
  return out;
}

}  // namespace polyfix
