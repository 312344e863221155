#include "polyfix/pwa1.hpp"

#include <algorithm>
#include <cassert>

namespace polyfix {

namespace {

// Drops zero-length pieces and merges adjacent pieces with identical affine
// coefficients. Assumes starts are nondecreasing.
std::vector<Pwa1::Piece> coalesce(std::vector<Pwa1::Piece> pieces) {
  std::vector<Pwa1::Piece> out;
  out.reserve(pieces.size());
  for (auto& p : pieces) {
    if (!out.empty() && out.back().start == p.start) {
      out.back() = p;  // later entry wins a zero-length interval
      continue;
    }
    if (!out.empty() && out.back().slope == p.slope && out.back().intercept == p.intercept) {
      continue;
    }
    out.push_back(std::move(p));
  }
  return out;
}

enum class CombineOp { add, sub, max, min };

Rat apply_scalar(CombineOp op, const Rat& x, const Rat& y) {
  switch (op) {
    case CombineOp::add: return x + y;
    case CombineOp::sub: return x - y;
    case CombineOp::max: return x >= y ? x : y;
    case CombineOp::min: return x <= y ? x : y;
  }
  return 0;
}

Pwa1 combine(const Pwa1& a, const Pwa1& b, CombineOp op, PieceBudget& budget) {
  const auto& pa = a.pieces();
  const auto& pb = b.pieces();
  std::vector<Pwa1::Piece> out;
  out.reserve(pa.size() + pb.size());

  std::size_t ia = 0, ib = 0;
  Rat cursor = 0;
  bool linear = (op == CombineOp::add || op == CombineOp::sub);
  while (true) {
    const Pwa1::Piece& qa = pa[ia];
    const Pwa1::Piece& qb = pb[ib];
    // End of the current common interval (infinite when both pieces are last).
    bool a_last = (ia + 1 == pa.size());
    bool b_last = (ib + 1 == pb.size());
    bool has_end = !(a_last && b_last);
    Rat end = 0;
    if (!a_last && !b_last)
      end = std::min(pa[ia + 1].start, pb[ib + 1].start);
    else if (!a_last)
      end = pa[ia + 1].start;
    else if (!b_last)
      end = pb[ib + 1].start;

    if (linear) {
      Rat slope = apply_scalar(op, qa.slope, qb.slope);
      Rat intercept = apply_scalar(op, qa.intercept, qb.intercept);
      out.push_back({cursor, slope, intercept});
    } else {
      // max/min of two affine pieces on [cursor, end): split at a strict
      // interior crossing, otherwise one piece wins throughout.
      Rat ds = qa.slope - qb.slope;
      Rat di = qa.intercept - qb.intercept;
      bool want_a_when_positive = (op == CombineOp::max);
      auto emit = [&](const Rat& from, bool use_a) {
        const Pwa1::Piece& w = use_a ? qa : qb;
        out.push_back({from, w.slope, w.intercept});
      };
      if (ds == 0) {
        bool use_a = want_a_when_positive ? (di >= 0) : (di <= 0);
        emit(cursor, use_a);
      } else {
        Rat tau = -di / ds;  // diff(t) = ds*t + di vanishes at tau
        bool crosses_inside = tau > cursor && (!has_end || tau < end);
        if (!crosses_inside) {
          // Sign of diff on the whole interval: sample at cursor; when the
          // functions touch exactly at cursor, the sign just after is sign(ds).
          Rat at_cursor = ds * cursor + di;
          bool diff_positive = at_cursor != 0 ? (at_cursor > 0) : (ds > 0);
          emit(cursor, want_a_when_positive ? diff_positive : !diff_positive);
        } else {
          Rat at_cursor = ds * cursor + di;
          bool diff_positive_before = at_cursor != 0 ? (at_cursor > 0) : (ds < 0);
          bool first_a = want_a_when_positive ? diff_positive_before : !diff_positive_before;
          emit(cursor, first_a);
          emit(tau, !first_a);
        }
      }
    }

    if (!has_end) break;
    cursor = end;
    if (!a_last && pa[ia + 1].start == end) ++ia;
    if (!b_last && pb[ib + 1].start == end) ++ib;
  }

  out = coalesce(std::move(out));
  budget.charge(out.size());
  return Pwa1(std::move(out));
}

}  // namespace

Pwa1::Pwa1(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("Pwa1: no pieces");
  if (pieces_.front().start != 0) throw std::invalid_argument("Pwa1: first piece must start at 0");
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (!(pieces_[i - 1].start < pieces_[i].start))
      throw std::invalid_argument("Pwa1: starts must be strictly increasing");
    // continuity at the breakpoint
    const Rat& t = pieces_[i].start;
    Rat left = pieces_[i - 1].slope * t + pieces_[i - 1].intercept;
    Rat right = pieces_[i].slope * t + pieces_[i].intercept;
    if (left != right) throw std::invalid_argument("Pwa1: discontinuous at breakpoint");
  }
}

Pwa1 Pwa1::constant(Rat c) {
  return Pwa1({Piece{0, 0, std::move(c)}});
}

Pwa1 Pwa1::affine(Rat slope, Rat intercept) {
  return Pwa1({Piece{0, std::move(slope), std::move(intercept)}});
}

Rat Pwa1::operator()(const Rat& t) const {
  if (t < 0) throw std::invalid_argument("Pwa1: negative argument");
  std::size_t lo = 0;
  for (std::size_t i = 1; i < pieces_.size() && pieces_[i].start <= t; ++i) lo = i;
  return pieces_[lo].slope * t + pieces_[lo].intercept;
}

bool Pwa1::is_nonincreasing() const {
  for (const auto& p : pieces_)
    if (p.slope > 0) return false;
  return true;
}

bool Pwa1::is_nondecreasing() const {
  for (const auto& p : pieces_)
    if (p.slope < 0) return false;
  return true;
}

Pwa1 pwa_add(const Pwa1& a, const Pwa1& b, PieceBudget& budget) {
  return combine(a, b, CombineOp::add, budget);
}

Pwa1 pwa_sub(const Pwa1& a, const Pwa1& b, PieceBudget& budget) {
  return combine(a, b, CombineOp::sub, budget);
}

Pwa1 pwa_max(const Pwa1& a, const Pwa1& b, PieceBudget& budget) {
  return combine(a, b, CombineOp::max, budget);
}

Pwa1 pwa_min(const Pwa1& a, const Pwa1& b, PieceBudget& budget) {
  return combine(a, b, CombineOp::min, budget);
}

Pwa1 pwa_neg(const Pwa1& a) {
  std::vector<Pwa1::Piece> out = a.pieces();
  for (auto& p : out) {
    p.slope = -p.slope;
    p.intercept = -p.intercept;
  }
  return Pwa1(std::move(out));
}

Pwa1 pwa_scale(const Rat& c, const Pwa1& a) {
  if (c == 0) return Pwa1::constant(0);
  std::vector<Pwa1::Piece> out = a.pieces();
  for (auto& p : out) {
    p.slope *= c;
    p.intercept *= c;
  }
  return Pwa1(std::move(out));
}

Pwa1 pwa_offset(const Pwa1& a, const Rat& c) {
  std::vector<Pwa1::Piece> out = a.pieces();
  for (auto& p : out) p.intercept += c;
  return Pwa1(std::move(out));
}

}  // namespace polyfix
