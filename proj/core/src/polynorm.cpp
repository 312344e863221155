#include "polyfix/polynorm.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "polyfix/pwa1.hpp"  // resource_error

namespace polyfix {

namespace {

// Exact Gaussian elimination: rank of an arbitrary rational matrix.
int rat_rank(std::vector<RatVec> rows) {
  if (rows.empty()) return 0;
  std::size_t cols = rows[0].size();
  int rank = 0;
  std::size_t pivot_col = 0;
  for (std::size_t r = 0; r < rows.size() && pivot_col < cols; ++pivot_col) {
    std::size_t sel = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i) {
      if (rows[i][pivot_col] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][pivot_col] == 0) continue;
      Rat factor = rows[i][pivot_col] / rows[r][pivot_col];
      for (std::size_t c = pivot_col; c < cols; ++c) rows[i][c] -= factor * rows[r][c];
    }
    ++r;
    ++rank;
  }
  return rank;
}

// Solves M x = rhs for square M; nullopt when singular.
std::optional<RatVec> rat_solve(std::vector<RatVec> m, RatVec rhs) {
  std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = n;
    for (std::size_t i = col; i < n; ++i) {
      if (m[i][col] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == n) return std::nullopt;
    std::swap(m[col], m[sel]);
    std::swap(rhs[col], rhs[sel]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || m[i][col] == 0) continue;
      Rat factor = m[i][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[i][c] -= factor * m[col][c];
      rhs[i] -= factor * rhs[col];
    }
  }
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

int affine_rank(const std::vector<RatVec>& pts) {
  if (pts.empty()) return -1;
  std::vector<RatVec> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
  if (diffs.empty()) return 0;
  return rat_rank(std::move(diffs));
}

bool lex_less(const RatVec& a, const RatVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace

std::string norm_kind_name(NormKind k) {
  switch (k) {
    case NormKind::sup: return "sup";
    case NormKind::one: return "one";
    case NormKind::variation: return "variation";
    case NormKind::custom: return "custom";
  }
  return "?";
}

std::string FaceDescriptor::label_str() const {
  if (!label) {
    std::ostringstream os;
    os << "active[";
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (i) os << ",";
      os << active[i];
    }
    os << "]";
    return os.str();
  }
  return "I=" + mask_to_string(label->first) + ",J=" + mask_to_string(label->second);
}

struct PolyhedralNorm::Cache {
  std::once_flag faces_once;
  std::once_flag vertices_once;
  std::vector<FaceDescriptor> faces;
  std::map<std::vector<int>, int> face_by_active;
  std::vector<RatVec> vertices;
  // custom kind only: vertex indices of each face, aligned with `faces`
  std::vector<std::vector<int>> face_vertex_sets;
};

RatVec chart_lift(std::span<const Rat> y) {
  RatVec x(y.size() + 1);
  Rat s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    x[i] = y[i];
    s += y[i];
  }
  x[y.size()] = -s;
  return x;
}

RatVec chart_drop(std::span<const Rat> x) {
  return RatVec(x.begin(), x.end() - 1);
}

RatVec chart_dual(std::span<const Rat> nu) {
  RatVec out(nu.size() - 1);
  for (std::size_t k = 0; k + 1 < nu.size(); ++k) out[k] = nu[k] - nu[nu.size() - 1];
  return out;
}

PolyhedralNorm PolyhedralNorm::builtin(NormKind kind, int n) {
  if (kind == NormKind::custom) throw std::invalid_argument("builtin: use PolyhedralNorm::custom");
  if (n < 1) throw std::invalid_argument("builtin: dimension must be >= 1");
  if (kind == NormKind::variation && n < 2)
    throw std::invalid_argument("builtin: variation norm needs n >= 2");
  if (n > 31) throw std::invalid_argument("builtin: dimension too large");

  PolyhedralNorm N;
  N.kind_ = kind;
  N.underlying_dim_ = n;
  N.cache_ = std::make_shared<Cache>();
  switch (kind) {
    case NormKind::sup: {
      N.dim_ = n;
      for (int i = 0; i < n; ++i) {
        RatVec v(n, Rat(0));
        v[i] = 1;
        N.dual_points_.push_back(v);
      }
      for (int i = 0; i < n; ++i) {
        RatVec v(n, Rat(0));
        v[i] = -1;
        N.dual_points_.push_back(v);
      }
      break;
    }
    case NormKind::one: {
      N.dim_ = n;
      for (Mask s = 0; s < (1u << n); ++s) {
        RatVec v(n);
        for (int i = 0; i < n; ++i) v[i] = mask_contains(s, i) ? 1 : -1;
        N.dual_points_.push_back(std::move(v));
      }
      break;
    }
    case NormKind::variation: {
      N.dim_ = n - 1;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          RatVec nu(n, Rat(0));
          nu[i] = 1;
          nu[j] = -1;
          N.dual_points_.push_back(chart_dual(nu));
        }
      }
      break;
    }
    case NormKind::custom: break;
  }
  return N;
}

PolyhedralNorm PolyhedralNorm::custom(std::vector<RatVec> dual_points) {
  if (dual_points.empty()) throw std::invalid_argument("custom norm: no dual extreme points");
  PolyhedralNorm N;
  N.kind_ = NormKind::custom;
  N.dim_ = static_cast<int>(dual_points[0].size());
  N.underlying_dim_ = N.dim_;
  if (N.dim_ < 1) throw std::invalid_argument("custom norm: dimension must be >= 1");
  if (N.dim_ > 6)
    throw resource_error(
        "custom norms are supported up to dimension 6 (combinatorial face enumeration)");
  N.dual_points_ = std::move(dual_points);
  N.cache_ = std::make_shared<Cache>();
  N.validate_custom();
  return N;
}

void PolyhedralNorm::validate_custom() const {
  const int n = dim_;
  for (const auto& p : dual_points_) {
    if (static_cast<int>(p.size()) != n)
      throw std::invalid_argument("custom norm: inconsistent dual point dimensions");
    if (is_zero_vec(p)) throw std::invalid_argument("custom norm: zero dual point");
  }
  // no duplicates
  for (std::size_t i = 0; i < dual_points_.size(); ++i)
    for (std::size_t j = i + 1; j < dual_points_.size(); ++j)
      if (dual_points_[i] == dual_points_[j])
        throw std::invalid_argument("custom norm: duplicate dual point");
  // symmetry: -nu must be listed for every nu
  for (const auto& p : dual_points_) {
    RatVec neg = scale(-1, p);
    if (std::find(dual_points_.begin(), dual_points_.end(), neg) == dual_points_.end())
      throw std::invalid_argument("custom norm: dual points are not symmetric");
  }
  // positive definiteness: symmetric set defines a norm iff it spans R^n
  std::vector<RatVec> rows(dual_points_.begin(), dual_points_.end());
  if (rat_rank(rows) != n)
    throw std::invalid_argument("custom norm: dual points do not span the space");
  // minimality: every dual point must define a facet of the unit ball,
  // i.e. its contact set with the ball has affine rank n-1
  enumerate_vertices();
  for (std::size_t d = 0; d < dual_points_.size(); ++d) {
    std::vector<RatVec> contact;
    for (const auto& v : cache_->vertices)
      if (dot(v, dual_points_[d]) == 1) contact.push_back(v);
    if (affine_rank(contact) != n - 1)
      throw std::invalid_argument(
          "custom norm: dual point " + vec_to_string(dual_points_[d]) +
          " is not extreme (redundant in the dual ball)");
  }
}

Rat PolyhedralNorm::value(std::span<const Rat> x) const {
  if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("norm value: dimension mismatch");
  Rat best = 0;
  for (const auto& nu : dual_points_) {
    Rat v = dot(x, nu);
    if (v > best) best = v;
  }
  return best;
}

double PolyhedralNorm::value(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("norm value: dimension mismatch");
  double best = 0;
  for (const auto& nu : dual_points_) {
    double v = 0;
    for (int i = 0; i < dim_; ++i) v += x[i] * rat_to_double(nu[i]);
    if (v > best) best = v;
  }
  return best;
}

std::vector<int> PolyhedralNorm::active_set(std::span<const Rat> x) const {
  Rat nv = value(x);
  std::vector<int> act;
  for (std::size_t d = 0; d < dual_points_.size(); ++d)
    if (dot(x, dual_points_[d]) == nv) act.push_back(static_cast<int>(d));
  return act;
}

void PolyhedralNorm::enumerate_vertices() const {
  std::call_once(cache_->vertices_once, [this] {
    auto& out = cache_->vertices;
    const int n = dim_;
    switch (kind_) {
      case NormKind::sup: {
        if (n > 20) throw resource_error("sup vertex enumeration: dimension too large");
        for (Mask s = 0; s < (1u << n); ++s) {
          RatVec v(n);
          for (int i = 0; i < n; ++i) v[i] = mask_contains(s, i) ? 1 : -1;
          out.push_back(std::move(v));
        }
        return;
      }
      case NormKind::one: {
        for (int i = 0; i < n; ++i) {
          RatVec v(n, Rat(0));
          v[i] = 1;
          out.push_back(v);
          v[i] = -1;
          out.push_back(v);
        }
        return;
      }
      case NormKind::variation: {
        const int un = underlying_dim_;
        for (Mask Imask = 1; Imask + 1 < (1u << un); ++Imask) {
          Mask Jmask = full_mask(un) & ~Imask;
          int ci = mask_size(Imask), cj = mask_size(Jmask);
          Rat delta = Rat(1, ci) + Rat(1, cj);
          RatVec x(un);
          for (int i = 0; i < un; ++i)
            x[i] = mask_contains(Imask, i) ? Rat(1, ci) / delta : Rat(-1, cj) / delta;
          out.push_back(chart_drop(x));
        }
        return;
      }
      case NormKind::custom: {
        const auto& pts = dual_points_;
        const std::size_t m = pts.size();
        // brute force over n-subsets of facet hyperplanes
        double combos = 1;
        for (int k = 0; k < n; ++k) combos *= static_cast<double>(m - k) / (k + 1);
        if (combos > 400000.0)
          throw resource_error("custom norm vertex enumeration: too many hyperplane combinations");
        std::vector<int> idx(n);
        std::vector<RatVec> found;
        auto feasible = [&](const RatVec& x) {
          for (const auto& nu : pts)
            if (dot(x, nu) > 1) return false;
          return true;
        };
        // iterate combinations
        std::vector<int> c(n);
        for (int i = 0; i < n; ++i) c[i] = i;
        while (true) {
          std::vector<RatVec> mrows;
          for (int i = 0; i < n; ++i) mrows.push_back(pts[c[i]]);
          RatVec rhs(n, Rat(1));
          if (auto x = rat_solve(std::move(mrows), std::move(rhs)); x && feasible(*x)) {
            if (std::find(found.begin(), found.end(), *x) == found.end()) found.push_back(*x);
          }
          // next combination
          int i = n - 1;
          while (i >= 0 && c[i] == static_cast<int>(m) - n + i) --i;
          if (i < 0) break;
          ++c[i];
          for (int j = i + 1; j < n; ++j) c[j] = c[j - 1] + 1;
        }
        std::sort(found.begin(), found.end(), lex_less);
        out = std::move(found);
        return;
      }
    }
  });
}

const std::vector<RatVec>& PolyhedralNorm::unit_ball_vertices() const {
  enumerate_vertices();
  return cache_->vertices;
}

void PolyhedralNorm::enumerate_faces() const {
  std::call_once(cache_->faces_once, [this] {
    auto& faces = cache_->faces;
    const int n = underlying_dim_;
    switch (kind_) {
      case NormKind::sup: {
        if (n > 12) throw resource_error("face enumeration: dimension too large for sup kind");
        for (Mask I = 0; I < (1u << n); ++I) {
          for (Mask J = 0; J < (1u << n); ++J) {
            if ((I & J) != 0 || (I | J) == 0) continue;
            FaceDescriptor f;
            for (int i = 0; i < n; ++i)
              if (mask_contains(I, i)) f.active.push_back(i);
            for (int j = 0; j < n; ++j)
              if (mask_contains(J, j)) f.active.push_back(n + j);
            std::sort(f.active.begin(), f.active.end());
            RatVec rep(n, Rat(0));
            for (int i = 0; i < n; ++i) {
              if (mask_contains(I, i)) rep[i] = 1;
              if (mask_contains(J, i)) rep[i] = -1;
            }
            f.dual_representative = scale(Rat(1, mask_size(I) + mask_size(J)), rep);
            f.representative = std::move(rep);
            f.label = {I, J};
            faces.push_back(std::move(f));
          }
        }
        break;
      }
      case NormKind::one: {
        if (n > 12) throw resource_error("face enumeration: dimension too large for one kind");
        for (Mask I = 0; I < (1u << n); ++I) {
          for (Mask J = 0; J < (1u << n); ++J) {
            if ((I & J) != 0 || (I | J) == 0) continue;
            FaceDescriptor f;
            // active sign vectors: +1 on I, -1 on J, free elsewhere
            for (Mask s = 0; s < (1u << n); ++s) {
              if ((s & I) == I && (s & J) == 0) f.active.push_back(static_cast<int>(s));
            }
            RatVec dir(n, Rat(0));
            for (int i = 0; i < n; ++i) {
              if (mask_contains(I, i)) dir[i] = 1;
              if (mask_contains(J, i)) dir[i] = -1;
            }
            f.representative = scale(Rat(1, mask_size(I) + mask_size(J)), dir);
            f.dual_representative = std::move(dir);
            f.label = {I, J};
            faces.push_back(std::move(f));
          }
        }
        break;
      }
      case NormKind::variation: {
        if (n > 12) throw resource_error("face enumeration: dimension too large for variation kind");
        // dual point (i,j) sits at index i*(n-1) + (j adjusted for j != i)
        auto pair_index = [n](int i, int j) { return i * (n - 1) + (j < i ? j : j - 1); };
        for (Mask I = 0; I < (1u << n); ++I) {
          for (Mask J = 0; J < (1u << n); ++J) {
            if ((I & J) != 0 || I == 0 || J == 0) continue;
            FaceDescriptor f;
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                if (i != j && mask_contains(I, i) && mask_contains(J, j))
                  f.active.push_back(pair_index(i, j));
            std::sort(f.active.begin(), f.active.end());
            int ci = mask_size(I), cj = mask_size(J);
            RatVec xstar(n);
            for (int i = 0; i < n; ++i) {
              if (mask_contains(I, i))
                xstar[i] = Rat(1, ci);
              else if (mask_contains(J, i))
                xstar[i] = Rat(-1, cj);
              else
                xstar[i] = 0;
            }
            Rat delta = Rat(1, ci) + Rat(1, cj);
            f.representative = chart_drop(scale(1 / delta, xstar));
            f.dual_representative = chart_dual(xstar);
            f.label = {I, J};
            faces.push_back(std::move(f));
          }
        }
        break;
      }
      case NormKind::custom: {
        enumerate_vertices();
        const auto& verts = cache_->vertices;
        const auto& pts = dual_points_;
        // vertex sets of the facets
        std::vector<std::vector<int>> facet_sets;
        for (const auto& nu : pts) {
          std::vector<int> s;
          for (std::size_t v = 0; v < verts.size(); ++v)
            if (dot(verts[v], nu) == 1) s.push_back(static_cast<int>(v));
          facet_sets.push_back(std::move(s));
        }
        // all proper faces arise as intersections of facet vertex sets
        std::vector<std::vector<int>> all = facet_sets;
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        bool grew = true;
        while (grew) {
          grew = false;
          std::size_t count = all.size();
          for (std::size_t a = 0; a < count; ++a) {
            for (std::size_t b = a + 1; b < count; ++b) {
              std::vector<int> inter;
              std::set_intersection(all[a].begin(), all[a].end(), all[b].begin(), all[b].end(),
                                    std::back_inserter(inter));
              if (inter.empty()) continue;
              if (!std::binary_search(all.begin(), all.begin() + count, inter) &&
                  std::find(all.begin() + count, all.end(), inter) == all.end()) {
                all.push_back(std::move(inter));
                grew = true;
              }
            }
          }
          std::sort(all.begin(), all.end());
          all.erase(std::unique(all.begin(), all.end()), all.end());
        }
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
          if (a.size() != b.size()) return a.size() > b.size();
          return a < b;
        });
        for (const auto& vset : all) {
          FaceDescriptor f;
          RatVec centroid(dim_, Rat(0));
          std::vector<RatVec> members;
          for (int v : vset) {
            centroid = add(centroid, verts[v]);
            members.push_back(verts[v]);
          }
          centroid = scale(Rat(1, static_cast<long>(vset.size())), centroid);
          for (std::size_t d = 0; d < pts.size(); ++d) {
            bool all_on = true;
            for (int v : vset)
              if (dot(verts[v], pts[d]) != 1) {
                all_on = false;
                break;
              }
            if (all_on) f.active.push_back(static_cast<int>(d));
          }
          RatVec dcen(dim_, Rat(0));
          for (int d : f.active) dcen = add(dcen, pts[d]);
          f.dual_representative = scale(Rat(1, static_cast<long>(f.active.size())), dcen);
          f.representative = std::move(centroid);
          faces.push_back(std::move(f));
          cache_->face_vertex_sets.push_back(vset);
        }
        break;
      }
    }
    for (std::size_t i = 0; i < faces.size(); ++i)
      cache_->face_by_active[faces[i].active] = static_cast<int>(i);
  });
}

const std::vector<FaceDescriptor>& PolyhedralNorm::proper_faces() const {
  enumerate_faces();
  return cache_->faces;
}

int PolyhedralNorm::face_index_of_boundary_point(std::span<const Rat> x) const {
  if (value(x) != 1) throw std::invalid_argument("face lookup requires a point with norm exactly 1");
  return face_index_by_active(active_set(x));
}

int PolyhedralNorm::face_index_by_active(const std::vector<int>& active) const {
  enumerate_faces();
  auto it = cache_->face_by_active.find(active);
  return it == cache_->face_by_active.end() ? -1 : it->second;
}

bool PolyhedralNorm::face_subset(int f1, int f2) const {
  const auto& a1 = proper_faces()[f1].active;
  const auto& a2 = proper_faces()[f2].active;
  return std::includes(a1.begin(), a1.end(), a2.begin(), a2.end());
}

std::vector<RatVec> PolyhedralNorm::face_vertices(int face_index) const {
  enumerate_faces();
  const FaceDescriptor& f = cache_->faces[face_index];
  const int n = underlying_dim_;
  std::vector<RatVec> out;
  switch (kind_) {
    case NormKind::sup: {
      auto [I, J] = *f.label;
      Mask free = full_mask(n) & ~(I | J);
      std::vector<int> free_idx;
      for (int i = 0; i < n; ++i)
        if (mask_contains(free, i)) free_idx.push_back(i);
      for (Mask s = 0; s < (1u << free_idx.size()); ++s) {
        RatVec v(n);
        for (int i = 0; i < n; ++i) v[i] = mask_contains(I, i) ? 1 : (mask_contains(J, i) ? -1 : 0);
        for (std::size_t k = 0; k < free_idx.size(); ++k)
          v[free_idx[k]] = mask_contains(s, static_cast<int>(k)) ? 1 : -1;
        out.push_back(std::move(v));
      }
      return out;
    }
    case NormKind::one: {
      auto [I, J] = *f.label;
      for (int i = 0; i < n; ++i) {
        if (mask_contains(I, i)) {
          RatVec v(n, Rat(0));
          v[i] = 1;
          out.push_back(std::move(v));
        }
        if (mask_contains(J, i)) {
          RatVec v(n, Rat(0));
          v[i] = -1;
          out.push_back(std::move(v));
        }
      }
      return out;
    }
    case NormKind::variation: {
      auto [I, J] = *f.label;
      Mask free = full_mask(n) & ~(I | J);
      std::vector<int> free_idx;
      for (int i = 0; i < n; ++i)
        if (mask_contains(free, i)) free_idx.push_back(i);
      for (Mask s = 0; s < (1u << free_idx.size()); ++s) {
        Mask Ifull = I, Jfull = J;
        for (std::size_t k = 0; k < free_idx.size(); ++k) {
          if (mask_contains(s, static_cast<int>(k)))
            Ifull |= (1u << free_idx[k]);
          else
            Jfull |= (1u << free_idx[k]);
        }
        int ci = mask_size(Ifull), cj = mask_size(Jfull);
        Rat delta = Rat(1, ci) + Rat(1, cj);
        RatVec x(n);
        for (int i = 0; i < n; ++i)
          x[i] = mask_contains(Ifull, i) ? Rat(1, ci) / delta : Rat(-1, cj) / delta;
        out.push_back(chart_drop(x));
      }
      return out;
    }
    case NormKind::custom: {
      for (int v : cache_->face_vertex_sets[face_index]) out.push_back(cache_->vertices[v]);
      return out;
    }
  }
  return out;
}

bool PolyhedralNorm::illuminates(std::span<const Rat> v, std::span<const Rat> w) const {
  if (value(w) != 1)
    throw std::invalid_argument("illuminates: w must lie on the unit sphere (||w|| == 1)");
  for (int d : active_set(w))
    if (dot(v, dual_points_[d]) >= 0) return false;
  return true;
}

Rat PolyhedralNorm::inactive_gap_constant(int face_index) const {
  const FaceDescriptor& f = proper_faces()[face_index];
  Rat c("-1000000");
  bool any = false;
  std::size_t ai = 0;
  for (std::size_t d = 0; d < dual_points_.size(); ++d) {
    if (ai < f.active.size() && f.active[ai] == static_cast<int>(d)) {
      ++ai;
      continue;
    }
    Rat v = dot(f.representative, dual_points_[d]);
    if (!any || v > c) c = v;
    any = true;
  }
  if (!any) throw std::logic_error("face with every dual point active");
  return c;
}

PolyhedralNorm PolyhedralNorm::load(std::istream& in) {
  std::string header, version;
  in >> header >> version;
  if (header != "polynorm" || version != "1")
    throw std::invalid_argument("norm file: expected 'polynorm 1' header");
  std::string kind_name;
  int dim = 0, underlying = 0;
  std::vector<RatVec> points;
  std::string tok;
  while (in >> tok) {
    if (tok == "kind") {
      in >> kind_name;
    } else if (tok == "dim") {
      in >> dim;
    } else if (tok == "underlying") {
      in >> underlying;
    } else if (tok == "point") {
      if (dim <= 0) throw std::invalid_argument("norm file: 'dim' must precede points");
      RatVec p(dim);
      for (int i = 0; i < dim; ++i) {
        std::string s;
        if (!(in >> s)) throw std::invalid_argument("norm file: truncated point");
        p[i] = rat_from_string(s);
      }
      points.push_back(std::move(p));
    } else {
      throw std::invalid_argument("norm file: unknown directive '" + tok + "'");
    }
  }
  if (kind_name.empty() || kind_name == "custom") return PolyhedralNorm::custom(std::move(points));
  NormKind k;
  if (kind_name == "sup")
    k = NormKind::sup;
  else if (kind_name == "one")
    k = NormKind::one;
  else if (kind_name == "variation")
    k = NormKind::variation;
  else
    throw std::invalid_argument("norm file: unknown kind '" + kind_name + "'");
  int n = (k == NormKind::variation) ? underlying : dim;
  PolyhedralNorm N = PolyhedralNorm::builtin(k, n);
  if (N.dual_extreme_points() != points)
    throw std::invalid_argument("norm file: listed points do not match builtin kind");
  return N;
}

PolyhedralNorm PolyhedralNorm::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open norm file: " + path);
  return load(in);
}

void PolyhedralNorm::save(std::ostream& out) const {
  out << "polynorm 1\n";
  out << "kind " << norm_kind_name(kind_) << "\n";
  out << "dim " << dim_ << "\n";
  if (kind_ == NormKind::variation) out << "underlying " << underlying_dim_ << "\n";
  for (const auto& p : dual_points_) {
    out << "point";
    for (const auto& x : p) out << " " << rat_to_string(x);
    out << "\n";
  }
}

}  // namespace polyfix
