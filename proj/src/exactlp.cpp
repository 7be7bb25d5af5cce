#include "nearconvex/exactlp.hpp"

#include "nearconvex/error.hpp"

#include <algorithm>
#include <utility>

namespace nearconvex {

void MixedSystem::append(const MixedSystem& other) {
  require_dim(other.dim, dim, "MixedSystem::append");
  weak.insert(weak.end(), other.weak.begin(), other.weak.end());
  strict.insert(strict.end(), other.strict.begin(), other.strict.end());
  eq.insert(eq.end(), other.eq.begin(), other.eq.end());
}

bool MixedSystem::contains(const Vec& x) const {
  require_dim(x.size(), dim, "MixedSystem::contains");
  for (const auto& r : eq)
    if (dot(r.coeffs, x) != r.rhs) return false;
  for (const auto& r : weak)
    if (dot(r.coeffs, x) > r.rhs) return false;
  for (const auto& r : strict)
    if (dot(r.coeffs, x) >= r.rhs) return false;
  return true;
}

MixedSystem MixedSystem::closure() const {
  MixedSystem c(dim);
  c.weak = weak;
  c.weak.insert(c.weak.end(), strict.begin(), strict.end());
  c.eq = eq;
  return c;
}

void MixedSystem::check_dims() const {
  for (const auto* list : {&weak, &strict, &eq})
    for (const auto& r : *list) require_dim(r.coeffs.size(), dim, "MixedSystem row");
}

namespace {

struct TrackedEchelon {
  std::vector<Row> rows;
  std::vector<Vec> combos;  // combination of input rows producing each row
  std::vector<std::size_t> pivots;
  std::optional<Vec> inconsistency;  // combination giving 0 = rhs with rhs < 0
};

// Gauss-Jordan elimination with multiplier tracking.
TrackedEchelon tracked_echelon(const std::vector<Row>& input, std::size_t dim, bool track) {
  const std::size_t m = input.size();
  std::vector<Row> rows = input;
  std::vector<Vec> combos;
  if (track) {
    combos.reserve(m);
    for (std::size_t i = 0; i < m; ++i) combos.push_back(unit_vector(m, i));
  }
  TrackedEchelon out;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < dim && rank < m; ++col) {
    std::size_t piv = rank;
    while (piv < m && sgn(rows[piv].coeffs[col]) == 0) ++piv;
    if (piv == m) continue;
    std::swap(rows[piv], rows[rank]);
    if (track) std::swap(combos[piv], combos[rank]);
    Rational inv = 1 / rows[rank].coeffs[col];
    for (auto& x : rows[rank].coeffs) x *= inv;
    rows[rank].rhs *= inv;
    if (track)
      for (auto& x : combos[rank]) x *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == rank || sgn(rows[r].coeffs[col]) == 0) continue;
      Rational f = rows[r].coeffs[col];
      for (std::size_t c = 0; c < dim; ++c)
        if (sgn(rows[rank].coeffs[c]) != 0) rows[r].coeffs[c] -= f * rows[rank].coeffs[c];
      rows[r].rhs -= f * rows[rank].rhs;
      if (track)
        for (std::size_t c = 0; c < m; ++c)
          if (sgn(combos[rank][c]) != 0) combos[r][c] -= f * combos[rank][c];
    }
    out.pivots.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < m; ++r) {
    if (sgn(rows[r].rhs) != 0) {
      if (track) {
        Vec c = combos[r];
        if (sgn(rows[r].rhs) > 0) c = negate(c);
        out.inconsistency = std::move(c);
      } else {
        out.inconsistency = Vec{};
      }
      break;
    }
  }
  rows.resize(rank);
  out.rows = std::move(rows);
  if (track) {
    combos.resize(rank);
    out.combos = std::move(combos);
  }
  return out;
}

enum class CoreStatus { Optimal, Infeasible, Unbounded };

struct CoreResult {
  CoreStatus status = CoreStatus::Infeasible;
  Vec z;
  Rational value = 0;
  Vec farkas;  // multipliers on inequality rows
  Vec ray;
};

// min c.z subject to A z <= b with z free. Dense tableau, Bland's rule.
class InequalitySimplex {
 public:
  InequalitySimplex(const Vec& c, const std::vector<Row>& rows, std::size_t n)
      : n_(n), m_(rows.size()), c_(c) {
    std::size_t artificials = 0;
    for (const auto& r : rows)
      if (sgn(r.rhs) < 0) ++artificials;
    slack0_ = 2 * n_;
    art0_ = slack0_ + m_;
    ncols_ = art0_ + artificials;
    tab_.assign(m_, Vec(ncols_, Rational(0)));
    rhs_.resize(m_);
    basis_.resize(m_);
    ident_.resize(m_);
    sigma_.resize(m_);
    std::size_t a = art0_;
    for (std::size_t i = 0; i < m_; ++i) {
      const int s = sgn(rows[i].rhs) < 0 ? -1 : 1;
      sigma_[i] = s;
      for (std::size_t j = 0; j < n_; ++j) {
        const auto& v = rows[i].coeffs[j];
        if (sgn(v) == 0) continue;
        tab_[i][j] = s > 0 ? v : Rational(-v);
        tab_[i][n_ + j] = -tab_[i][j];
      }
      tab_[i][slack0_ + i] = s;
      rhs_[i] = s > 0 ? rows[i].rhs : Rational(-rows[i].rhs);
      if (s > 0) {
        basis_[i] = slack0_ + i;
      } else {
        tab_[i][a] = 1;
        basis_[i] = a++;
      }
      ident_[i] = basis_[i];
    }
  }

  CoreResult run() {
    CoreResult res;
    if (art0_ < ncols_) {
      Vec cost(ncols_, Rational(0));
      for (std::size_t j = art0_; j < ncols_; ++j) cost[j] = 1;
      price(cost);
      iterate(ncols_);
      if (sgn(obj_) > 0) {
        res.status = CoreStatus::Infeasible;
        res.farkas.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
          Rational y = cost[ident_[i]] - red_[ident_[i]];
          res.farkas[i] = sigma_[i] > 0 ? Rational(-y) : y;
        }
        return res;
      }
      drive_out_artificials();
    }
    Vec cost(ncols_, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) {
      cost[j] = c_[j];
      cost[n_ + j] = -c_[j];
    }
    price(cost);
    auto unbounded_col = iterate(art0_);
    if (unbounded_col) {
      res.status = CoreStatus::Unbounded;
      Vec dir(ncols_, Rational(0));
      dir[*unbounded_col] = 1;
      for (std::size_t i = 0; i < m_; ++i) dir[basis_[i]] = -tab_[i][*unbounded_col];
      res.ray.resize(n_);
      for (std::size_t j = 0; j < n_; ++j) res.ray[j] = dir[j] - dir[n_ + j];
      return res;
    }
    res.status = CoreStatus::Optimal;
    Vec full(ncols_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) full[basis_[i]] = rhs_[i];
    res.z.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) res.z[j] = full[j] - full[n_ + j];
    res.value = obj_;
    return res;
  }

 private:
  void price(const Vec& cost) {
    red_ = cost;
    obj_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < ncols_; ++j)
        if (sgn(tab_[i][j]) != 0) red_[j] -= cb * tab_[i][j];
      obj_ += cb * rhs_[i];
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    Rational inv = 1 / tab_[r][col];
    auto& prow = tab_[r];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nz.push_back(j);
      }
    }
    rhs_[r] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || sgn(tab_[i][col]) == 0) continue;
      Rational f = tab_[i][col];
      for (std::size_t j : nz) tab_[i][j] -= f * prow[j];
      rhs_[i] -= f * rhs_[r];
    }
    if (sgn(red_[col]) != 0) {
      Rational f = red_[col];
      for (std::size_t j : nz) red_[j] -= f * prow[j];
      obj_ += f * rhs_[r];
    }
    basis_[r] = col;
  }

  // Runs Bland's rule over columns [0, limit). Returns an unbounded column.
  std::optional<std::size_t> iterate(std::size_t limit) {
    while (true) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (sgn(red_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return std::nullopt;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(tab_[i][enter]) <= 0) continue;
        Rational ratio = rhs_[i] / tab_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return enter;
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < art0_) continue;
      for (std::size_t j = 0; j < art0_; ++j) {
        if (sgn(tab_[i][j]) != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  std::size_t n_, m_, ncols_ = 0, slack0_ = 0, art0_ = 0;
  Vec c_;
  std::vector<Vec> tab_;
  Vec rhs_;
  Vec red_;
  Rational obj_;
  std::vector<std::size_t> basis_, ident_;
  std::vector<int> sigma_;
};

// Solves min c.x over {weak rows, eq rows}; certificate layout (weak, eq).
LPOutcome solve_closed(const Vec& c, const std::vector<Row>& weak, const std::vector<Row>& eq, std::size_t dim,
                       bool want_certificate) {
  LPOutcome out;
  auto ech = tracked_echelon(eq, dim, want_certificate);
  if (ech.inconsistency) {
    out.status = LPStatus::Infeasible;
    out.value = ExtReal::plus_inf();
    if (want_certificate) out.certificate = concat(zeros(weak.size()), *ech.inconsistency);
    return out;
  }
  // x = x0 + N z over the free (non-pivot) columns.
  std::vector<bool> is_pivot(dim, false);
  for (auto p : ech.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < dim; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  const std::size_t nz = free_cols.size();
  Vec x0 = zeros(dim);
  for (std::size_t r = 0; r < ech.rows.size(); ++r) x0[ech.pivots[r]] = ech.rows[r].rhs;
  // N as dim x nz
  std::vector<Vec> ncols(nz, zeros(dim));
  for (std::size_t k = 0; k < nz; ++k) {
    std::size_t f = free_cols[k];
    ncols[k][f] = 1;
    for (std::size_t r = 0; r < ech.rows.size(); ++r) ncols[k][ech.pivots[r]] = -ech.rows[r].coeffs[f];
  }
  auto reduce = [&](const Vec& a) {
    Vec out_row(nz);
    for (std::size_t k = 0; k < nz; ++k) out_row[k] = dot(a, ncols[k]);
    return out_row;
  };
  std::vector<Row> reduced;
  reduced.reserve(weak.size());
  for (const auto& r : weak) reduced.push_back({reduce(r.coeffs), r.rhs - dot(r.coeffs, x0)});
  Vec cz = reduce(c);
  InequalitySimplex simplex(cz, reduced, nz);
  CoreResult core = simplex.run();
  auto lift = [&](const Vec& z, bool affine) {
    Vec x = affine ? x0 : zeros(dim);
    for (std::size_t k = 0; k < nz; ++k)
      if (sgn(z[k]) != 0)
        for (std::size_t j = 0; j < dim; ++j) x[j] += z[k] * ncols[k][j];
    return x;
  };
  switch (core.status) {
    case CoreStatus::Optimal: {
      out.status = LPStatus::Optimal;
      out.primal_witness = lift(core.z, true);
      out.value = ExtReal(dot(c, *out.primal_witness));
      break;
    }
    case CoreStatus::Unbounded: {
      out.status = LPStatus::Unbounded;
      out.value = ExtReal::minus_inf();
      out.certificate = lift(core.ray, false);
      break;
    }
    case CoreStatus::Infeasible: {
      out.status = LPStatus::Infeasible;
      out.value = ExtReal::plus_inf();
      if (want_certificate) {
        // g = sum lambda_i a_i lies in rowspace(E); find mu with E^T mu = -g.
        Vec g = zeros(dim);
        for (std::size_t i = 0; i < weak.size(); ++i)
          if (sgn(core.farkas[i]) != 0)
            for (std::size_t j = 0; j < dim; ++j) g[j] += core.farkas[i] * weak[i].coeffs[j];
        Vec mu = zeros(eq.size());
        if (!eq.empty()) {
          Matrix et(dim, eq.size());
          for (std::size_t r = 0; r < eq.size(); ++r)
            for (std::size_t j = 0; j < dim; ++j) et(j, r) = eq[r].coeffs[j];
          auto sol = solve_linear(et, negate(g));
          if (sol) mu = sol->particular;
        }
        out.certificate = concat(core.farkas, mu);
      }
      break;
    }
  }
  return out;
}

}  // namespace

LPOutcome solve_lp(const Vec& objective, const MixedSystem& system) {
  system.check_dims();
  require_dim(objective.size(), system.dim, "solve_lp objective");
  if (!system.strict.empty()) throw Error(ErrorKind::Usage, "solve_lp requires a closed system");
  return solve_closed(objective, system.weak, system.eq, system.dim, true);
}

LPOutcome maximize_lp(const Vec& objective, const MixedSystem& system) {
  LPOutcome out = solve_lp(negate(objective), system);
  out.value = -out.value;
  return out;
}

namespace {

StrictFeasibility strict_feasible_impl(const MixedSystem& system, bool want_certificate) {
  system.check_dims();
  StrictFeasibility res;
  const std::size_t n = system.dim;
  if (system.strict.empty()) {
    LPOutcome lp = solve_closed(zeros(n), system.weak, system.eq, n, want_certificate);
    if (lp.status == LPStatus::Infeasible) {
      if (want_certificate && lp.certificate) {
        // layout (weak, eq) -> (weak, strict=none, eq)
        res.closure_certificate = lp.certificate;
      }
      return res;
    }
    res.feasible = true;
    res.witness = lp.primal_witness;
    return res;
  }
  // Variables (x, t) with 0 <= t <= 1; maximize t. The LP is infeasible
  // exactly when the closure is.
  std::vector<Row> weak;
  weak.reserve(system.weak.size() + system.strict.size() + 1);
  for (const auto& r : system.weak) weak.push_back({concat(r.coeffs, Vec{Rational(0)}), r.rhs});
  for (const auto& r : system.strict) weak.push_back({concat(r.coeffs, Vec{Rational(1)}), r.rhs});
  weak.push_back({unit_vector(n + 1, n), Rational(1)});
  weak.push_back({negate(unit_vector(n + 1, n)), Rational(0)});
  std::vector<Row> eq;
  eq.reserve(system.eq.size());
  for (const auto& r : system.eq) eq.push_back({concat(r.coeffs, Vec{Rational(0)}), r.rhs});
  LPOutcome lp = solve_closed(negate(unit_vector(n + 1, n)), weak, eq, n + 1, want_certificate);
  if (lp.status == LPStatus::Infeasible) {
    if (want_certificate && lp.certificate) {
      const Vec& c = *lp.certificate;
      Vec cert;
      cert.reserve(system.row_count());
      const std::size_t nw = system.weak.size(), ns = system.strict.size();
      for (std::size_t i = 0; i < nw + ns; ++i) cert.push_back(c[i]);
      for (std::size_t i = 0; i < system.eq.size(); ++i) cert.push_back(c[nw + ns + 2 + i]);
      res.closure_certificate = std::move(cert);
    }
    return res;
  }
  const Vec& xt = *lp.primal_witness;
  res.slack = xt[n];
  if (sgn(xt[n]) > 0) {
    res.feasible = true;
    res.witness = Vec(xt.begin(), xt.begin() + static_cast<std::ptrdiff_t>(n));
  }
  return res;
}

}  // namespace

StrictFeasibility strict_feasible(const MixedSystem& system) { return strict_feasible_impl(system, true); }

bool is_feasible(const MixedSystem& system) { return strict_feasible_impl(system, false).feasible; }

bool verify_farkas(const MixedSystem& system, const Vec& certificate) {
  const std::size_t nw = system.weak.size(), ns = system.strict.size(), ne = system.eq.size();
  if (certificate.size() != nw + ns + ne) return false;
  Vec g = zeros(system.dim);
  Rational rhs = 0;
  auto accumulate = [&](const Row& r, const Rational& y) {
    for (std::size_t j = 0; j < system.dim; ++j) g[j] += y * r.coeffs[j];
    rhs += y * r.rhs;
  };
  for (std::size_t i = 0; i < nw; ++i) {
    if (sgn(certificate[i]) < 0) return false;
    accumulate(system.weak[i], certificate[i]);
  }
  for (std::size_t i = 0; i < ns; ++i) {
    if (sgn(certificate[nw + i]) < 0) return false;
    accumulate(system.strict[i], certificate[nw + i]);
  }
  for (std::size_t i = 0; i < ne; ++i) accumulate(system.eq[i], certificate[nw + ns + i]);
  return is_zero(g) && sgn(rhs) < 0;
}

std::optional<Echelon> row_echelon(const std::vector<Row>& rows, std::size_t dim) {
  for (const auto& r : rows) require_dim(r.coeffs.size(), dim, "row_echelon");
  auto t = tracked_echelon(rows, dim, false);
  if (t.inconsistency) return std::nullopt;
  return Echelon{std::move(t.rows), std::move(t.pivots)};
}

std::optional<LinearSolution> solve_linear(const Matrix& a, const Vec& b) {
  require_dim(b.size(), a.rows(), "solve_linear");
  std::vector<Row> rows;
  rows.reserve(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) rows.push_back({a.row(r), b[r]});
  auto ech = row_echelon(rows, a.cols());
  if (!ech) return std::nullopt;
  const std::size_t n = a.cols();
  LinearSolution sol;
  sol.particular = zeros(n);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t r = 0; r < ech->rows.size(); ++r) {
    sol.particular[ech->pivots[r]] = ech->rows[r].rhs;
    is_pivot[ech->pivots[r]] = true;
  }
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vec v = zeros(n);
    v[f] = 1;
    for (std::size_t r = 0; r < ech->rows.size(); ++r) v[ech->pivots[r]] = -ech->rows[r].coeffs[f];
    sol.nullspace.push_back(std::move(v));
  }
  return sol;
}

std::size_t rank_of(const std::vector<Vec>& vectors, std::size_t dim) {
  std::vector<Row> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) rows.push_back({v, Rational(0)});
  return row_echelon(rows, dim)->rows.size();
}

}  // namespace nearconvex
