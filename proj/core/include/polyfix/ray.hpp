#pragma once

#include <optional>
#include <string>

#include "polyfix/mapexpr.hpp"
#include "polyfix/pwa1.hpp"
#include "polyfix/rational.hpp"

namespace polyfix {

// Thresholds and schedules for the numeric fallback paths and the symbolic
// piece budget. Defaults match the documented certifier configuration.
struct NumericPolicy {
  double t0 = 1.0;
  double factor = 2.0;
  int max_doublings = 60;
  double divergence_bound = 1e9;
  double slope_tol = 1e-9;
  std::size_t piece_cap = 1'000'000;
};

// Outcome of a one-sided limit classification at t -> infinity.
struct LimitVerdict {
  enum class Outcome { minus_infinity, plus_infinity, finite, inconclusive };
  Outcome outcome = Outcome::inconclusive;
  bool exact = false;
  std::optional<Rat> value;           // finite outcome, exact mode
  double numeric_value = 0.0;         // finite outcome or last sample, numeric mode
  std::optional<Rat> eventual_slope;  // exact evidence
  double last_slope_estimate = 0.0;   // numeric evidence

  bool is(Outcome o) const { return outcome == o; }
};

std::string outcome_name(LimitVerdict::Outcome o);

// Exact displacement pairing along a ray:
//   g(t) = <f(base + t dir) - base - t dir, pairing>.
// Requires a piecewise-affine f; throws resource_error past the piece budget.
Pwa1 restrict_to_ray(const MapExpr& f, std::span<const Rat> base, std::span<const Rat> dir,
                     std::span<const Rat> pairing, std::size_t piece_cap = 1'000'000);

// Raw pairing without ray subtraction: g(t) = <f(base + t dir), pairing>.
Pwa1 restrict_to_ray_raw(const MapExpr& f, std::span<const Rat> base, std::span<const Rat> dir,
                         std::span<const Rat> pairing, std::size_t piece_cap = 1'000'000);

// Classifies lim_{t->inf} g(t) for a monotone nonincreasing pairing: the limit
// is minus infinity iff the final slope is negative, and the exact finite
// value otherwise. A positive final slope means the nonexpansiveness
// assumption was violated upstream (contract_breach).
LimitVerdict classify_limit_at_infinity(const Pwa1& g);

// General exact classification allowing +infinity (used for coordinate
// limits of order-preserving maps).
LimitVerdict classify_ray_limit(const Pwa1& g);

// Numeric fallback on a doubling schedule. `monotone` is the expected sample
// monotonicity (-1 nonincreasing, +1 nondecreasing, 0 unknown); violations
// beyond tolerance raise contract_breach.
LimitVerdict classify_limit_numeric(const MapExpr& f, std::span<const double> base,
                                    std::span<const double> dir, std::span<const double> pairing,
                                    bool subtract_ray, int monotone, const NumericPolicy& policy);

enum class InitialSign { negative_for_all_positive_t, zero_on_initial_interval };

// For a nonincreasing pairing with g(0) = 0: g < 0 for every t > 0 iff the
// first piece has strictly negative slope.
InitialSign initial_sign(const Pwa1& g);

}  // namespace polyfix
