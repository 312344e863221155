#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyfix/rational.hpp"

namespace polyfix {

enum class NormKind { sup, one, variation, custom };

std::string norm_kind_name(NormKind k);

// One proper face of the unit ball, carrying exact certificates of its own
// validity: the representative satisfies <x_F, nu> = 1 exactly for the active
// dual extreme points and < 1 strictly for all others, and the dual
// representative is the uniform centroid of the active dual extreme points.
struct FaceDescriptor {
  std::vector<int> active;  // sorted indices into dual_extreme_points()
  RatVec representative;    // x_F, ||x_F|| = 1, in ri F
  RatVec dual_representative;  // x_F*, ||x_F*||_* = 1, in ri F*
  // For the builtin kinds, the combinatorial label (I, J): sup faces fix
  // x_i = +1 on I and -1 on J; one-norm faces have signed support (+I, -J);
  // variation faces pin the top set I and bottom set J.
  std::optional<std::pair<Mask, Mask>> label;

  std::string label_str() const;
};

// A polyhedral norm given by the extreme points of its dual unit ball.
// Instances are immutable after construction and safe to share across
// threads; face enumeration is deterministic.
class PolyhedralNorm {
 public:
  static PolyhedralNorm builtin(NormKind kind, int n);
  static PolyhedralNorm custom(std::vector<RatVec> dual_points);

  // Structured text round-trip for norms ("dim"/"kind"/"point" lines with
  // rational entries as integer fractions).
  static PolyhedralNorm load(std::istream& in);
  static PolyhedralNorm load_file(const std::string& path);
  void save(std::ostream& out) const;

  NormKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  // For the variation kind, the dimension n of the ambient space the chart
  // represents (dimension() == n - 1); otherwise equal to dimension().
  int underlying_dimension() const { return underlying_dim_; }

  const std::vector<RatVec>& dual_extreme_points() const { return dual_points_; }

  Rat value(std::span<const Rat> x) const;
  double value(std::span<const double> x) const;

  // Indices of dual extreme points nu with <x, nu> == ||x||; for boundary
  // points this is the active set that identifies the face containing x in
  // its relative interior.
  std::vector<int> active_set(std::span<const Rat> x) const;

  const std::vector<FaceDescriptor>& proper_faces() const;
  int face_count() const { return static_cast<int>(proper_faces().size()); }

  // Face of B_1 whose relative interior contains the boundary point x
  // (requires ||x|| == 1); nullopt is never returned for valid input.
  int face_index_of_boundary_point(std::span<const Rat> x) const;
  // Lookup by exact active set; -1 when no face matches.
  int face_index_by_active(const std::vector<int>& active) const;

  // F1 subset-of F2 in the face lattice (actives of F1 contain actives of F2).
  bool face_subset(int f1, int f2) const;

  // Vertices (extreme points) of the given proper face, and of the whole
  // unit ball.
  std::vector<RatVec> face_vertices(int face_index) const;
  const std::vector<RatVec>& unit_ball_vertices() const;

  // True iff ||w + eps v|| < 1 for all small eps > 0 (requires ||w|| = 1);
  // for a polyhedral norm this is <v, nu> < 0 for every active nu at w.
  bool illuminates(std::span<const Rat> v, std::span<const Rat> w) const;

  // Exposed for tests: max over inactive nu of <x_F, nu> for a face (the
  // constant c < 1 controlling how far scaled faces stay flat).
  Rat inactive_gap_constant(int face_index) const;

 private:
  PolyhedralNorm() = default;
  void validate_custom() const;
  void enumerate_faces() const;
  void enumerate_vertices() const;

  NormKind kind_ = NormKind::custom;
  int dim_ = 0;
  int underlying_dim_ = 0;
  std::vector<RatVec> dual_points_;

  struct Cache;
  std::shared_ptr<Cache> cache_;
};

// Chart helpers for the variation norm: V0 = {x : <x, e_N> = 0} in R^n is
// charted by dropping the last coordinate.
RatVec chart_lift(std::span<const Rat> y);            // R^{n-1} -> V0 in R^n
RatVec chart_drop(std::span<const Rat> x);            // V0 point -> chart
RatVec chart_dual(std::span<const Rat> nu);           // functional on V0 -> chart covector

}  // namespace polyfix
