// Exact linear programming over Q: a dense two-phase simplex with Bland's
// rule, strict-inequality feasibility, and exact linear solves.
#pragma once

#include "nearconvex/extreal.hpp"
#include "nearconvex/rational.hpp"

#include <optional>
#include <vector>

namespace nearconvex {

/// One linear row <coeffs, x> (rel) rhs; the relation lives in the container.
struct Row {
  Vec coeffs;
  Rational rhs;
  bool operator==(const Row&) const = default;
};

/// Conjunction of weak (<=), strict (<) and equality (=) rows over R^dim.
struct MixedSystem {
  std::size_t dim = 0;
  std::vector<Row> weak;
  std::vector<Row> strict;
  std::vector<Row> eq;

  explicit MixedSystem(std::size_t d = 0) : dim(d) {}
  void add_weak(Vec a, Rational b) { weak.push_back({std::move(a), std::move(b)}); }
  void add_strict(Vec a, Rational b) { strict.push_back({std::move(a), std::move(b)}); }
  void add_eq(Vec a, Rational b) { eq.push_back({std::move(a), std::move(b)}); }
  /// Appends all rows of `other` (same dim).
  void append(const MixedSystem& other);
  /// True if x satisfies every row exactly.
  bool contains(const Vec& x) const;
  /// Same system with every strict row relaxed to weak.
  MixedSystem closure() const;
  std::size_t row_count() const { return weak.size() + strict.size() + eq.size(); }
  /// Throws DimensionMismatch when any row has the wrong length.
  void check_dims() const;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPOutcome {
  LPStatus status = LPStatus::Infeasible;
  /// Optimal value; -inf when unbounded, +inf when infeasible.
  ExtReal value = ExtReal::plus_inf();
  std::optional<Vec> primal_witness;
  /// Farkas multipliers (weak rows first, then eq rows) when infeasible;
  /// an improving feasible ray when unbounded.
  std::optional<Vec> certificate;
};

/// min <objective, x> over a closed system (strict part must be empty).
LPOutcome solve_lp(const Vec& objective, const MixedSystem& system);
/// max <objective, x>; value is +inf when unbounded.
LPOutcome maximize_lp(const Vec& objective, const MixedSystem& system);

struct StrictFeasibility {
  bool feasible = false;
  std::optional<Vec> witness;
  /// Farkas multipliers for the closed relaxation (weak, strict, eq order)
  /// when even the closure is infeasible.
  std::optional<Vec> closure_certificate;
  /// Optimal common slack of the strict rows (0 when strict part is empty
  /// and the system is feasible).
  Rational slack = 0;
};

/// Decides whether the mixed system has a solution by maximizing a common
/// slack t (t <= 1) added to every strict row; feasible iff optimum t > 0.
StrictFeasibility strict_feasible(const MixedSystem& system);
/// Cheaper yes/no variant of strict_feasible without certificates.
bool is_feasible(const MixedSystem& system);

/// Checks a Farkas certificate for the closed system with rows ordered
/// (weak, strict, eq): y >= 0 on inequality rows, y^T A = 0, y^T b < 0.
bool verify_farkas(const MixedSystem& system, const Vec& certificate);

struct LinearSolution {
  Vec particular;
  std::vector<Vec> nullspace;
};

/// Exact solution set of A x = b via reduced row echelon form; nullopt when
/// inconsistent.
std::optional<LinearSolution> solve_linear(const Matrix& a, const Vec& b);

/// Reduced row echelon form of [A | b]; returns pivot columns. Rows that
/// reduce to zero are dropped; an inconsistent row yields nullopt.
struct Echelon {
  std::vector<Row> rows;            // in RREF, pivots have coefficient 1
  std::vector<std::size_t> pivots;  // pivot column of each row
};
std::optional<Echelon> row_echelon(const std::vector<Row>& rows, std::size_t dim);

/// Rank of a list of vectors.
std::size_t rank_of(const std::vector<Vec>& vectors, std::size_t dim);

}  // namespace nearconvex
