// Independent verifiers and a seeded random instance generator. The
// verifiers never call the simplex code: nonemptiness of a relatively open
// polyhedron is decided by vertex enumeration and a barycenter test, set
// containment by hyperplane refinement of cells, and conjugates by maxima
// over generators.
#pragma once

#include "nearconvex/duality.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace nearconvex {

struct InstanceSpec {
  std::uint64_t seed = 0;
  std::size_t max_dim = 3;
  std::size_t max_pieces = 4;
  std::size_t max_constraints = 6;
  long max_denominator = 8;
  /// Half-width of the bounding box [-box, box]^dim.
  long box = 4;
};

/// Deterministic per seed. Nearly convex sets are ri(Q) plus a random
/// selection of faces of Q, optionally with one face split in two halves
/// that omit the dividing slice; they contain the requested anchor in their
/// relative interior so that instances sharing an anchor satisfy every qc.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(InstanceSpec spec);

  const InstanceSpec& spec() const { return spec_; }
  std::uint64_t next() { return rng_(); }
  /// True with probability num / den.
  bool coin(unsigned num, unsigned den) { return next() % den < num; }
  std::size_t uniform(std::size_t lo, std::size_t hi) { return lo + next() % (hi - lo + 1); }

  /// Rational in [lo, hi] with denominator at most max_denominator.
  Rational rational(long lo, long hi);
  Vec vector(std::size_t d, long lo, long hi);
  Vec nonzero_vector(std::size_t d, long range);
  /// Point with coordinates in [-2, 2], well inside the box.
  Vec anchor(std::size_t d);
  Matrix matrix(std::size_t rows, std::size_t cols);

  /// Closed polyhedron with the anchor in its relative interior.
  HPoly polyhedron(std::size_t d, const Vec& anchor);
  NCSet nearly_convex_set(std::size_t d, const Vec& anchor);
  NCSet nearly_convex_set(std::size_t d) { return nearly_convex_set(d, anchor(d)); }
  /// A set that is not nearly convex: a slice removed through the relative
  /// interior, an isolated extra point, or two facets without the interior.
  NCSet corrupted_set(std::size_t d);
  /// Nearly convex graph with the anchor (in R^(n+p)) in its relative interior.
  SVMap map(std::size_t n, std::size_t p, const Vec& anchor);
  /// Proper nearly convex max-affine function on a nearly convex domain
  /// whose relative interior contains the anchor.
  PLFunction function(std::size_t n, const Vec& anchor);
  /// Polyhedral convex cone.
  HPoly cone(std::size_t q);

 private:
  InstanceSpec spec_;
  std::mt19937_64 rng_;
};

/// A union of nonempty relatively open polyhedra, each given by strict and
/// equality rows only, so each piece is the relative interior of its closure.
struct OracleSet {
  std::size_t dim = 0;
  std::vector<MixedSystem> pieces;

  bool contains(const Vec& x) const;
  bool empty() const { return pieces.empty(); }
};

namespace oracle {

/// V-representation of the closure of s by double description.
VPoly generators(const MixedSystem& s);
/// Convex hull of generators as facets plus affine-hull equalities.
HPoly hull(const VPoly& v);
/// Relative interior of a closed polyhedron as strict plus equality rows.
MixedSystem relative_interior(const HPoly& q);

/// A point of s when s (strict and equality rows) is nonempty: the
/// barycenter of the generators of its closure.
std::optional<Vec> relint_point(const MixedSystem& s);

OracleSet from(const NCSet& s);
/// ri(conv s): for a nearly convex s this is ri s.
MixedSystem hull_interior(const OracleSet& s);
HPoly closed_hull(const OracleSet& s);
OracleSet image(const OracleSet& s, const Matrix& t);
/// {z : t z + c in s}.
OracleSet preimage(const OracleSet& s, const Matrix& t, const Vec& c);
OracleSet intersect(const OracleSet& a, const OracleSet& b);
OracleSet product(const OracleSet& a, const OracleSet& b);
OracleSet unite(const OracleSet& a, const OracleSet& b);
/// Embeds s into R^dim on the given coordinates.
OracleSet lift(const OracleSet& s, std::size_t dim, const std::vector<std::size_t>& coords);
OracleSet single(const MixedSystem& s);

/// A point of cell (strict, weak and equality rows) covered by none of the
/// covers, found by splitting cell along the hyperplanes of each cover.
std::optional<Vec> uncovered(const MixedSystem& cell, const std::vector<MixedSystem>& covers);
/// A point of a not in b.
std::optional<Vec> difference(const OracleSet& a, const OracleSet& b);
/// A point of a not in cl b (cl a is in cl b exactly when none exists).
std::optional<Vec> closure_difference(const OracleSet& a, const OracleSet& b);
/// A point of ri(conv s) missing from s; none exactly when s is nearly convex.
std::optional<Vec> nonconvexity_witness(const OracleSet& s);

/// sup over the generators of the closure; -inf when empty.
ExtReal support(const OracleSet& s, const Vec& v);
/// inf of the last coordinate over the generators of the closure.
ExtReal min_last(const OracleSet& s);

/// Exact polyhedral equality through generators and row checks.
bool same_polyhedron(const HPoly& a, const HPoly& b);

}  // namespace oracle

struct GridMismatch {
  Vec point;
  bool expected = false;
  bool got = false;
};

/// Every lattice point of [-box, box]^dim with the given denominator where
/// membership in s disagrees with the defining predicate.
std::vector<GridMismatch> grid_membership_oracle(const NCSet& s, const std::function<bool(const Vec&)>& expected,
                                                 long denominator = 16, long box = 4);
/// Defining-formula membership y in A(s): some piece meets {x : A x = y}.
bool image_member(const NCSet& s, const Matrix& a, const Vec& y);

/// f*(w) as a maximum over the generators of cl epi f, with no LP.
ExtReal generator_conjugate_oracle(const PLFunction& f, const Vec& w);

/// inf {b : (w, b) in epi} read off the rows of a closed epigraph in
/// (w, b) space without an LP.
ExtReal value_from_epigraph(const HPoly& epi, const Vec& w);

enum class Mutation { None, CorruptPiece, CorruptConjugate };

struct SuiteFailure {
  std::uint64_t seed = 0;
  std::string detail;
};

struct SuiteReport {
  std::string theorem;
  std::size_t count = 0;
  std::size_t passes = 0;
  std::vector<SuiteFailure> failures;
  /// Instances drawn in total, rejected ones included.
  std::size_t drawn = 0;
  /// Mutation the suite ran under.
  Mutation mutation = Mutation::None;
};

/// Registered theorem ids, e.g. "prop2.1", "thm2.2c", "cor3.2", "thm5.3".
std::vector<std::string> theorem_ids();
/// Canonical id for a user-supplied one (case and prefix insensitive);
/// throws UnknownTheorem.
std::string canonical_theorem_id(const std::string& id);
/// Whether the suite has a hook for the mutation.
bool supports_mutation(const std::string& id, Mutation m);
/// Runs count instances derived from seed. Throws UnknownTheorem.
SuiteReport theorem_suite(const std::string& id, std::size_t count, std::uint64_t seed,
                          Mutation mutation = Mutation::None);
/// Seed of the i-th instance of a suite.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t index);

const char* mutation_name(Mutation m);

}  // namespace nearconvex
