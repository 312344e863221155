#include "polyfix/rational.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace polyfix {

Rat rat_from_string(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw std::invalid_argument("bad rational literal: " + text);
  bool seen_slash = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (c == '/') {
      if (seen_slash || i == start || i + 1 == text.size())
        throw std::invalid_argument("bad rational literal: " + text);
      seen_slash = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("bad rational literal: " + text);
  }
  Rat r(text);
  return r;
}

std::string rat_to_string(const Rat& r) {
  return r.str();
}

double rat_to_double(const Rat& r) {
  return r.convert_to<double>();
}

Rat dot(std::span<const Rat> a, std::span<const Rat> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec add(std::span<const Rat> a, std::span<const Rat> b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RatVec sub(std::span<const Rat> a, std::span<const Rat> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RatVec scale(const Rat& c, std::span<const Rat> v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
  return out;
}

bool is_zero_vec(std::span<const Rat> v) {
  for (const Rat& x : v)
    if (x != 0) return false;
  return true;
}

VecD to_double(const RatVec& v) {
  VecD out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = rat_to_double(v[i]);
  return out;
}

std::string vec_to_string(std::span<const Rat> v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << rat_to_string(v[i]);
  }
  os << ")";
  return os.str();
}

double ddot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Mask full_mask(int n) {
  if (n < 0 || n > 31) throw std::invalid_argument("subset mask supports up to 31 coordinates");
  return n == 0 ? 0u : ((1u << n) - 1u);
}

int mask_size(Mask m) {
  return std::popcount(m);
}

bool mask_contains(Mask m, int i) {
  return (m >> i) & 1u;
}

RatVec indicator(int n, Mask m) {
  RatVec v(n, Rat(0));
  for (int i = 0; i < n; ++i)
    if (mask_contains(m, i)) v[i] = 1;
  return v;
}

std::string mask_to_string(Mask m) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if (!mask_contains(m, i)) continue;
    if (!first) os << ",";
    os << (i + 1);
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace polyfix
