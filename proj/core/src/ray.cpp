#include "polyfix/ray.hpp"

#include <cmath>
#include <stdexcept>

namespace polyfix {

std::string outcome_name(LimitVerdict::Outcome o) {
  switch (o) {
    case LimitVerdict::Outcome::minus_infinity: return "minus_infinity";
    case LimitVerdict::Outcome::plus_infinity: return "plus_infinity";
    case LimitVerdict::Outcome::finite: return "finite";
    case LimitVerdict::Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

Pwa1 pairing_along_ray(const MapExpr& f, std::span<const Rat> base, std::span<const Rat> dir,
                       std::span<const Rat> pairing, bool subtract_ray, std::size_t piece_cap) {
  const int n = f.dimension();
  if (static_cast<int>(base.size()) != n || static_cast<int>(dir.size()) != n ||
      static_cast<int>(pairing.size()) != n)
    throw std::invalid_argument("restrict_to_ray: dimension mismatch");
  PieceBudget budget{piece_cap, 0};
  std::vector<Pwa1> in;
  in.reserve(n);
  for (int i = 0; i < n; ++i) in.push_back(Pwa1::affine(dir[i], base[i]));
  std::vector<Pwa1> out = f.propagate_ray(in, budget);
  Pwa1 g = Pwa1::constant(0);
  for (int i = 0; i < n; ++i) {
    if (pairing[i] == 0) continue;
    Pwa1 term = out[i];
    if (subtract_ray) term = pwa_sub(term, in[i], budget);
    g = pwa_add(g, pwa_scale(pairing[i], term), budget);
  }
  return g;
}

}  // namespace

Pwa1 restrict_to_ray(const MapExpr& f, std::span<const Rat> base, std::span<const Rat> dir,
                     std::span<const Rat> pairing, std::size_t piece_cap) {
  return pairing_along_ray(f, base, dir, pairing, true, piece_cap);
}

Pwa1 restrict_to_ray_raw(const MapExpr& f, std::span<const Rat> base, std::span<const Rat> dir,
                         std::span<const Rat> pairing, std::size_t piece_cap) {
  return pairing_along_ray(f, base, dir, pairing, false, piece_cap);
}

LimitVerdict classify_limit_at_infinity(const Pwa1& g) {
  const auto& last = g.final_piece();
  LimitVerdict v;
  v.exact = true;
  v.eventual_slope = last.slope;
  if (last.slope < 0) {
    v.outcome = LimitVerdict::Outcome::minus_infinity;
    return v;
  }
  if (last.slope == 0) {
    v.outcome = LimitVerdict::Outcome::finite;
    v.value = last.intercept;
    v.numeric_value = rat_to_double(last.intercept);
    return v;
  }
  throw contract_breach(
      "monotone pairing has positive eventual slope; nonexpansiveness must have been violated");
}

LimitVerdict classify_ray_limit(const Pwa1& g) {
  const auto& last = g.final_piece();
  LimitVerdict v;
  v.exact = true;
  v.eventual_slope = last.slope;
  if (last.slope < 0)
    v.outcome = LimitVerdict::Outcome::minus_infinity;
  else if (last.slope > 0)
    v.outcome = LimitVerdict::Outcome::plus_infinity;
  else {
    v.outcome = LimitVerdict::Outcome::finite;
    v.value = last.intercept;
    v.numeric_value = rat_to_double(last.intercept);
  }
  return v;
}

InitialSign initial_sign(const Pwa1& g) {
  if (g.value_at_zero() != 0)
    throw std::invalid_argument("initial_sign: pairing must vanish at t = 0 (base the ray at the fixed point)");
  Rat s = g.first_slope();
  if (s < 0) return InitialSign::negative_for_all_positive_t;
  if (s == 0) return InitialSign::zero_on_initial_interval;
  throw contract_breach("pairing increases from a fixed point; nonexpansiveness must have been violated");
}

LimitVerdict classify_limit_numeric(const MapExpr& f, std::span<const double> base,
                                    std::span<const double> dir, std::span<const double> pairing,
                                    bool subtract_ray, int monotone, const NumericPolicy& policy) {
  const int n = f.dimension();
  if (static_cast<int>(base.size()) != n || static_cast<int>(dir.size()) != n ||
      static_cast<int>(pairing.size()) != n)
    throw std::invalid_argument("classify_limit_numeric: dimension mismatch");

  auto sample = [&](double t) {
    VecD x(n);
    for (int i = 0; i < n; ++i) x[i] = base[i] + t * dir[i];
    VecD fx = f(std::span<const double>(x));
    double g = 0;
    for (int i = 0; i < n; ++i) {
      double c = fx[i];
      if (subtract_ray) c -= x[i];
      g += pairing[i] * c;
    }
    return g;
  };

  LimitVerdict v;
  v.exact = false;
  double t = policy.t0;
  double prev = sample(t);
  double prev_t = t;
  double secant = 0;
  int negative_secants = 0, positive_secants = 0;
  int stable = 0;
  // Two-phase schedule. Finite limits are judged on the precision-safe early
  // phase (sample differences beyond t ~ 2^40 drown in cancellation noise for
  // near-flat pairings); divergence detection runs over the whole schedule,
  // where the values themselves are large and relative precision is fine.
  const int precision_doublings = std::min(policy.max_doublings, 40);
  double finite_candidate = prev;
  double finite_secant = 0;
  for (int k = 0; k < policy.max_doublings; ++k) {
    t *= policy.factor;
    double cur = sample(t);
    double slack = 1e-7 * std::max({1.0, std::fabs(prev), std::fabs(cur)}) + 1e-13 * t;
    if (monotone < 0 && cur > prev + slack)
      throw contract_breach("numeric samples not nonincreasing; check nonexpansiveness of the map");
    if (monotone > 0 && cur < prev - slack)
      throw contract_breach("numeric samples not nondecreasing; check order preservation of the map");
    secant = (cur - prev) / (t - prev_t);
    if (secant < 0) {
      ++negative_secants;
      positive_secants = 0;
    } else if (secant > 0) {
      ++positive_secants;
      negative_secants = 0;
    }
    if (cur < -policy.divergence_bound && negative_secants >= 2) {
      v.outcome = LimitVerdict::Outcome::minus_infinity;
      v.numeric_value = cur;
      v.last_slope_estimate = secant;
      return v;
    }
    if (cur > policy.divergence_bound && positive_secants >= 2) {
      v.outcome = LimitVerdict::Outcome::plus_infinity;
      v.numeric_value = cur;
      v.last_slope_estimate = secant;
      return v;
    }
    if (k < precision_doublings) {
      // a genuine finite limit makes successive samples agree absolutely; a
      // slope-proportional tolerance would eventually accept slow divergence
      // like -sqrt(t), so agreement is anchored at the value scale
      if (std::fabs(cur - prev) <= policy.slope_tol * (1.0 + std::fabs(cur)) + 1e-13 * t)
        ++stable;
      else
        stable = 0;
      if (stable == 3) {
        // freeze the reported value while t is still small enough for full
        // floating-point precision
        finite_candidate = cur;
        finite_secant = secant;
      }
    }
    prev = cur;
    prev_t = t;
  }
  if (stable >= 3) {
    v.outcome = LimitVerdict::Outcome::finite;
    v.numeric_value = finite_candidate;
    v.last_slope_estimate = finite_secant;
    return v;
  }
  v.outcome = LimitVerdict::Outcome::inconclusive;
  v.numeric_value = prev;
  v.last_slope_estimate = secant;
  return v;
}

}  // namespace polyfix
