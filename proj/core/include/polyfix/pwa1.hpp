#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "polyfix/rational.hpp"

namespace polyfix {

// Raised when a symbolic ray computation would exceed its piece budget.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a quantity that must be monotone (by nonexpansiveness or order
// preservation) fails to be, i.e. an upstream precondition was violated.
struct contract_breach : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an exact path is requested for an expression that is not
// piecewise affine.
struct not_pwa_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cumulative piece accounting for a single symbolic ray computation.
struct PieceBudget {
  std::size_t cap = 1'000'000;
  std::size_t used = 0;
  void charge(std::size_t pieces) {
    used += pieces;
    if (used > cap) throw resource_error("piecewise-affine piece budget exceeded");
  }
};

// An exact continuous piecewise-affine function of one variable on [0, inf).
// Pieces are half-open [start_i, start_{i+1}), the last piece extends to
// infinity. Starts are strictly increasing with starts.front() == 0, and the
// function is continuous at every breakpoint by construction.
class Pwa1 {
 public:
  struct Piece {
    Rat start;
    Rat slope;
    Rat intercept;  // value(t) = slope * t + intercept on the piece
  };

  Pwa1() : pieces_{Piece{0, 0, 0}} {}
  explicit Pwa1(std::vector<Piece> pieces);

  static Pwa1 constant(Rat c);
  static Pwa1 affine(Rat slope, Rat intercept);

  Rat operator()(const Rat& t) const;
  Rat value_at_zero() const { return pieces_.front().intercept; }
  Rat first_slope() const { return pieces_.front().slope; }
  const Piece& final_piece() const { return pieces_.back(); }
  std::size_t piece_count() const { return pieces_.size(); }
  const std::vector<Piece>& pieces() const { return pieces_; }

  bool is_nonincreasing() const;
  bool is_nondecreasing() const;

  friend Pwa1 pwa_add(const Pwa1& a, const Pwa1& b, PieceBudget& budget);
  friend Pwa1 pwa_sub(const Pwa1& a, const Pwa1& b, PieceBudget& budget);
  friend Pwa1 pwa_max(const Pwa1& a, const Pwa1& b, PieceBudget& budget);
  friend Pwa1 pwa_min(const Pwa1& a, const Pwa1& b, PieceBudget& budget);

 private:
  std::vector<Piece> pieces_;
};

Pwa1 pwa_neg(const Pwa1& a);
Pwa1 pwa_scale(const Rat& c, const Pwa1& a);
Pwa1 pwa_offset(const Pwa1& a, const Rat& c);

}  // namespace polyfix
