// Nearly convex sets represented as finite unions of relatively open
// polyhedra, with the set calculus (products, intersections, images,
// preimages, sums) and the closure / relative interior test.
#pragma once

#include "nearconvex/polyhedron.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nearconvex {

/// ri(base) for a nonempty polyhedron kept in canonical form.
class ROPoly {
 public:
  /// ri(q), or nullopt when q is empty.
  static std::optional<ROPoly> of(const HPoly& q);
  /// Nonempty set given by a mixed system known to equal ri of its closure,
  /// e.g. T^-1(ri Q) or ri Q1 cap ri Q2; nullopt when infeasible.
  static std::optional<ROPoly> of_open_system(const MixedSystem& s);
  /// ri(q) for q already in canonical form and nonempty.
  static ROPoly of_canonical(HPoly canonical);

  std::size_t dim() const { return base_.dim; }
  const HPoly& base() const { return base_; }
  /// Equalities plus strict facet rows.
  MixedSystem system() const { return base_.strict_system(); }
  bool contains(const Vec& x) const { return system().contains(x); }
  const std::string& key() const { return key_; }

  friend bool operator==(const ROPoly& a, const ROPoly& b) { return a.key_ == b.key_; }
  friend bool operator<(const ROPoly& a, const ROPoly& b) { return a.key_ < b.key_; }

 private:
  explicit ROPoly(HPoly canonical);
  HPoly base_;
  std::string key_;
};

struct NearConvexityReport {
  bool nearly_convex = false;
  /// Point of conv(closure) outside the closure of the union, or of ri of the
  /// hull outside the union.
  std::optional<Vec> witness;
  std::string reason;
  std::optional<HPoly> hull;
};

class NCSet {
 public:
  explicit NCSet(std::size_t dim = 0) : dim_(dim) {}
  /// Pieces are sorted and deduplicated; the result is not validated.
  NCSet(std::size_t dim, std::vector<ROPoly> pieces);
  static NCSet from_hpolys(std::size_t dim, const std::vector<HPoly>& bases);
  /// ri Q as a single piece; validated with hull Q.
  static NCSet relatively_open(const HPoly& q);
  /// The closed polyhedron Q as the union of ri of all its faces; validated.
  static NCSet closed(const HPoly& q);
  /// ri Q together with ri F for every face F obtained by turning the listed
  /// inequality rows of q into equalities.
  static NCSet with_faces(const HPoly& q, const std::vector<std::vector<std::size_t>>& faces);
  static NCSet point(const Vec& x) { return closed(HPoly::point(x)); }

  std::size_t dim() const { return dim_; }
  const std::vector<ROPoly>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  bool contains(const Vec& x) const;

  bool validated() const { return hull_.has_value(); }
  /// Copy with the closure hull cached; throws NotNearlyConvex.
  NCSet validate() const;
  /// Cached hull without a re-check (caller guarantees near-convexity).
  NCSet assume_validated(HPoly hull) const;

  /// cl S; throws NotNearlyConvex when S fails the test.
  HPoly closure() const;
  /// ri S = ri cl S; throws NotNearlyConvex or EmptyPolyhedron when empty.
  ROPoly relative_interior() const;
  HPoly affine_hull() const;

  /// Plain union (not validated).
  NCSet unite(const NCSet& other) const;

 private:
  std::size_t dim_;
  std::vector<ROPoly> pieces_;
  std::optional<HPoly> hull_;
};

/// Closure convexity and ri containment test with a witness on failure.
NearConvexityReport is_nearly_convex(const NCSet& s, std::size_t cap = kDimCap);

/// A point of cell minus the union of covers, or nullopt when the
/// difference is empty.
std::optional<Vec> uncovered_point(const MixedSystem& cell, const std::vector<MixedSystem>& covers);

bool is_subset(const NCSet& a, const NCSet& b);
/// Witness of a minus b.
std::optional<Vec> difference_point(const NCSet& a, const NCSet& b);
bool same_set(const NCSet& a, const NCSet& b);
/// cl a = cl b, compared as unions of piece closures (no convexity needed).
bool same_closure(const NCSet& a, const NCSet& b);
/// Equality of the solution sets of two mixed systems.
bool same_set(const MixedSystem& a, const MixedSystem& b);

/// Deterministic points of S: a relative interior point of every piece, the
/// vertices of its closure, and the midpoints between the two.
std::vector<Vec> sample_points(const NCSet& s);

NCSet product(const NCSet& a, const NCSet& b);

struct QualifiedSet {
  NCSet set;
  bool qc_satisfied = false;
};

/// Pieces ri(Q_i cap Q'_j) over overlapping pairs; qc is ri a cap ri b != empty
/// and is only evaluated for validated inputs.
QualifiedSet intersect(const NCSet& a, const NCSet& b);
/// {T x : x in S}; validated (ri T(S) = T(ri S)) when S is.
NCSet linear_image(const NCSet& s, const Matrix& t);
NCSet minkowski_sum(const NCSet& a, const NCSet& b);
/// {x : T x + c in S}; qc is T^-1(ri S) != empty.
QualifiedSet preimage(const NCSet& s, const Matrix& t, const Vec& c);
QualifiedSet preimage(const NCSet& s, const Matrix& t);

}  // namespace nearconvex
