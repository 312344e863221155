#include "polyfix/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "polyfix/pwa1.hpp"

namespace polyfix {

IterationReport minimal_displacement_estimate(const MapExpr& f, const VecD& u,
                                              const PolyhedralNorm& N, const OracleOptions& opts) {
  const int n = f.dimension();
  if (static_cast<int>(u.size()) != n)
    throw std::invalid_argument("minimal_displacement_estimate: u dimension mismatch");
  if (N.dimension() != n)
    throw std::invalid_argument("minimal_displacement_estimate: norm dimension mismatch");

  VecD x = opts.start.empty() ? VecD(n, 0.0) : opts.start;
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("minimal_displacement_estimate: start dimension mismatch");

  IterationReport rep;
  int decimate = std::max(1, opts.max_iter / 500);
  std::vector<double> window;
  double initial_residual = -1;

  for (int k = 0; k < opts.max_iter; ++k) {
    VecD fx = f(std::span<const double>(x));
    VecD disp(n);
    for (int i = 0; i < n; ++i) disp[i] = fx[i] + u[i] - x[i];
    double r = N.value(std::span<const double>(disp));
    if (initial_residual < 0) initial_residual = r;
    if (k % decimate == 0) rep.residual_history.push_back(r);
    rep.iterations = k + 1;
    rep.final_residual = r;
    rep.point = x;
    if (r <= opts.tol) {
      rep.kind = IterationReport::Kind::fixed_point_found;
      return rep;
    }
    if (r > 10 * (initial_residual + 1))
      throw contract_breach("residual grows under the averaged iteration; map is not nonexpansive");
    window.push_back(r);
    if (static_cast<int>(window.size()) > opts.plateau_window) {
      double old = window[window.size() - opts.plateau_window - 1];
      if (old - r <= opts.plateau_rel * std::max(old, 1e-300)) {
        rep.kind = IterationReport::Kind::residual_floor;
        return rep;
      }
    }
    for (int i = 0; i < n; ++i) x[i] = 0.5 * (x[i] + fx[i] + u[i]);
  }
  rep.kind = IterationReport::Kind::budget_exhausted;
  return rep;
}

BoundednessProbe fdelta_boundedness_probe(const MapExpr& f, const PolyhedralNorm& N, double delta,
                                          const std::vector<double>& radii) {
  if (delta <= 0) throw std::invalid_argument("fdelta_boundedness_probe: delta must be positive");
  const int n = f.dimension();
  BoundednessProbe probe;
  double max_radius = *std::max_element(radii.begin(), radii.end());
  for (const FaceDescriptor& F : N.proper_faces()) {
    VecD dir = to_double(F.representative);
    for (double radius : radii) {
      VecD x(n);
      for (int i = 0; i < n; ++i) x[i] = radius * dir[i];
      VecD fx = f(std::span<const double>(x));
      VecD disp(n);
      for (int i = 0; i < n; ++i) disp[i] = fx[i] - x[i];
      if (N.value(std::span<const double>(disp)) <= delta && radius == max_radius) {
        probe.unbounded = true;
        probe.witness = x;
        return probe;
      }
    }
  }
  probe.unbounded = false;
  probe.bounded_up_to = max_radius;
  return probe;
}

std::vector<VecD> multistart_fixed_points(const MapExpr& f, const PolyhedralNorm& N, int starts,
                                          std::uint64_t seed, double tol, int max_iter) {
  const int n = f.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-10.0, 10.0);
  std::vector<VecD> found;
  OracleOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  for (int s = 0; s < starts; ++s) {
    VecD x0(n);
    for (int i = 0; i < n; ++i) x0[i] = box(rng);
    opts.start = x0;
    IterationReport rep = minimal_displacement_estimate(f, VecD(n, 0.0), N, opts);
    if (rep.kind != IterationReport::Kind::fixed_point_found) continue;
    bool fresh = true;
    for (const VecD& p : found) {
      VecD d(n);
      for (int i = 0; i < n; ++i) d[i] = p[i] - rep.point[i];
      if (N.value(std::span<const double>(d)) <= 10 * tol) {
        fresh = false;
        break;
      }
    }
    if (fresh) found.push_back(rep.point);
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace polyfix
