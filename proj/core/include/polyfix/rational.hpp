#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polyfix {

// Exact rational scalar used throughout the exact paths of the library.
using Rat = boost::multiprecision::mpq_rational;
using RatVec = std::vector<Rat>;
using VecD = std::vector<double>;

// Parses "p", "p/q" (q > 0 after normalization). Throws std::invalid_argument
// on malformed input.
Rat rat_from_string(const std::string& text);

// Canonical form: "p" when the denominator is 1, otherwise "p/q" reduced.
std::string rat_to_string(const Rat& r);

double rat_to_double(const Rat& r);

Rat dot(std::span<const Rat> a, std::span<const Rat> b);
RatVec add(std::span<const Rat> a, std::span<const Rat> b);
RatVec sub(std::span<const Rat> a, std::span<const Rat> b);
RatVec scale(const Rat& c, std::span<const Rat> v);
bool is_zero_vec(std::span<const Rat> v);

VecD to_double(const RatVec& v);
std::string vec_to_string(std::span<const Rat> v);

double ddot(std::span<const double> a, std::span<const double> b);

// Index-subset helpers. Coordinates are 0-based internally; masks cover
// dimensions up to 31.
using Mask = std::uint32_t;

Mask full_mask(int n);
int mask_size(Mask m);
bool mask_contains(Mask m, int i);
// Indicator vector e_I of a subset.
RatVec indicator(int n, Mask m);
// Renders a mask as "{1,3}" using 1-based coordinate names.
std::string mask_to_string(Mask m);

}  // namespace polyfix
