#include "nearconvex/polyhedron.hpp"

#include "nearconvex/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace nearconvex {

namespace {

bool vec_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool row_less(const Row& a, const Row& b) {
  if (a.coeffs != b.coeffs) return vec_less(a.coeffs, b.coeffs);
  return a.rhs < b.rhs;
}

// Positive rescaling making the coefficient vector primitive.
Row normalize_row(const Row& r) {
  if (is_zero(r.coeffs)) return r;
  Rational f = primitive_factor(r.coeffs);
  return {scale(r.coeffs, f), r.rhs * f};
}

Vec positive_primitive(const Vec& v) { return primitive(v); }

void sort_unique(std::vector<Vec>& vs) {
  std::sort(vs.begin(), vs.end(), vec_less);
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

}  // namespace

HPoly HPoly::empty(std::size_t d) {
  HPoly p(d);
  p.add_ineq(zeros(d), -1);
  return p;
}

HPoly HPoly::from_system(const MixedSystem& s) {
  HPoly p(s.dim);
  p.ineq = s.weak;
  p.ineq.insert(p.ineq.end(), s.strict.begin(), s.strict.end());
  p.eq = s.eq;
  return p;
}

HPoly HPoly::point(const Vec& x) {
  HPoly p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p.add_eq(unit_vector(x.size(), i), x[i]);
  return p;
}

HPoly HPoly::box(std::size_t d, const Rational& lo, const Rational& hi) {
  HPoly p(d);
  for (std::size_t i = 0; i < d; ++i) {
    p.add_ineq(unit_vector(d, i), hi);
    p.add_ineq(negate(unit_vector(d, i)), -lo);
  }
  return p;
}

MixedSystem HPoly::system() const {
  MixedSystem s(dim);
  s.weak = ineq;
  s.eq = eq;
  return s;
}

MixedSystem HPoly::strict_system() const {
  MixedSystem s(dim);
  s.strict = ineq;
  s.eq = eq;
  return s;
}

bool HPoly::contains(const Vec& x) const { return system().contains(x); }

bool HPoly::is_empty() const { return !is_feasible(system()); }

void HPoly::check_dims() const { system().check_dims(); }

bool NormalConeRep::contains(const Vec& v) const {
  require_dim(v.size(), dim, "NormalConeRep::contains");
  const std::size_t ng = generators.size(), nl = lineality.size();
  MixedSystem s(ng + nl);
  for (std::size_t j = 0; j < dim; ++j) {
    Vec row(ng + nl);
    for (std::size_t i = 0; i < ng; ++i) row[i] = generators[i][j];
    for (std::size_t i = 0; i < nl; ++i) row[ng + i] = lineality[i][j];
    s.add_eq(std::move(row), v[j]);
  }
  for (std::size_t i = 0; i < ng; ++i) s.add_weak(negate(unit_vector(ng + nl, i)), 0);
  return is_feasible(s);
}

HPoly NormalConeRep::to_hpoly() const {
  VPoly v(dim);
  v.points.push_back(zeros(dim));
  v.rays = generators;
  for (const auto& l : lineality) {
    v.rays.push_back(l);
    v.rays.push_back(negate(l));
  }
  return to_hrep(v, std::max(dim, kDimCap));
}

ConeGenerators cone_generators(const std::vector<Vec>& ineq, const std::vector<Vec>& eq, std::size_t dim) {
  std::vector<Vec> constraints;
  for (const auto& e : eq) {
    constraints.push_back(e);
    constraints.push_back(negate(e));
  }
  constraints.insert(constraints.end(), ineq.begin(), ineq.end());
  const std::size_t total = constraints.size();

  std::vector<Vec> lin;
  for (std::size_t i = 0; i < dim; ++i) lin.push_back(unit_vector(dim, i));
  std::vector<Vec> rays;
  std::vector<std::vector<char>> zero;  // zero[r][k]: constraint k tight on ray r

  for (std::size_t k = 0; k < total; ++k) {
    const Vec& h = constraints[k];
    std::size_t pick = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i) {
      if (sgn(dot(h, lin[i])) != 0) {
        pick = i;
        break;
      }
    }
    if (pick < lin.size()) {
      Vec l = lin[pick];
      Rational hl = dot(h, l);
      if (sgn(hl) > 0) {
        l = negate(l);
        hl = -hl;
      }
      lin.erase(lin.begin() + static_cast<std::ptrdiff_t>(pick));
      for (auto& v : lin) {
        Rational hv = dot(h, v);
        if (sgn(hv) != 0) v = primitive(sub(v, scale(l, hv / hl)));
      }
      for (std::size_t r = 0; r < rays.size(); ++r) {
        Rational hv = dot(h, rays[r]);
        if (sgn(hv) != 0) rays[r] = positive_primitive(sub(rays[r], scale(l, hv / hl)));
        zero[r][k] = 1;
      }
      rays.push_back(positive_primitive(l));
      std::vector<char> z(total, 0);
      for (std::size_t j = 0; j < k; ++j) z[j] = 1;
      zero.push_back(std::move(z));
      continue;
    }
    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Vec> next;
    std::vector<std::vector<char>> next_zero;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(h, rays[r]);
      const int s = sgn(val[r]);
      if (s > 0) {
        pos.push_back(r);
        continue;
      }
      if (s < 0) neg.push_back(r);
      next.push_back(rays[r]);
      auto z = zero[r];
      z[k] = s == 0 ? 1 : 0;
      next_zero.push_back(std::move(z));
    }
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        std::vector<char> common(total, 0);
        for (std::size_t j = 0; j < k; ++j) common[j] = zero[p][j] && zero[q][j];
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          bool superset = true;
          for (std::size_t j = 0; j < k; ++j) {
            if (common[j] && !zero[r][j]) {
              superset = false;
              break;
            }
          }
          if (superset) adjacent = false;
        }
        if (!adjacent) continue;
        Vec combo = add(scale(rays[q], val[p]), scale(rays[p], -val[q]));
        if (is_zero(combo)) continue;
        next.push_back(positive_primitive(combo));
        common[k] = 1;
        next_zero.push_back(std::move(common));
      }
    }
    rays = std::move(next);
    zero = std::move(next_zero);
  }
  sort_unique(rays);
  return {rays, lin};
}

VPoly to_vrep(const HPoly& input, std::size_t cap) {
  input.check_dims();
  if (input.dim > cap) throw Error(ErrorKind::DimensionCap, "to_vrep: dimension " + std::to_string(input.dim) + " exceeds cap");
  const HPoly* p = &input;
  HPoly reduced;
  if (input.ineq.size() + input.eq.size() > kConstraintCap) {
    reduced = canonicalize(input);
    if (reduced.ineq.size() + reduced.eq.size() > kConstraintCap)
      throw Error(ErrorKind::DimensionCap, "to_vrep: constraint count exceeds cap");
    p = &reduced;
  }
  const std::size_t n = p->dim;
  std::vector<Vec> ineq, eq;
  for (const auto& r : p->ineq) ineq.push_back(concat(r.coeffs, Vec{Rational(-r.rhs)}));
  for (const auto& r : p->eq) eq.push_back(concat(r.coeffs, Vec{Rational(-r.rhs)}));
  ineq.push_back(negate(unit_vector(n + 1, n)));
  auto gens = cone_generators(ineq, eq, n + 1);
  VPoly v(n);
  for (const auto& r : gens.rays) {
    Vec x(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
    if (sgn(r[n]) > 0) v.points.push_back(scale(x, 1 / r[n]));
    else v.rays.push_back(primitive(x));
  }
  if (v.points.empty()) return VPoly(n);
  for (const auto& l : gens.lineality) {
    Vec x(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(n));
    v.rays.push_back(primitive(x));
    v.rays.push_back(primitive(negate(x)));
  }
  sort_unique(v.points);
  sort_unique(v.rays);
  return v;
}

HPoly to_hrep(const VPoly& v, std::size_t cap) {
  if (v.dim > cap) throw Error(ErrorKind::DimensionCap, "to_hrep: dimension " + std::to_string(v.dim) + " exceeds cap");
  if (v.points.empty()) return HPoly::empty(v.dim);
  const std::size_t n = v.dim;
  std::vector<Vec> ineq;
  for (const auto& p : v.points) {
    require_dim(p.size(), n, "to_hrep point");
    ineq.push_back(concat(p, Vec{Rational(-1)}));
  }
  for (const auto& r : v.rays) {
    require_dim(r.size(), n, "to_hrep ray");
    ineq.push_back(concat(r, Vec{Rational(0)}));
  }
  auto gens = cone_generators(ineq, {}, n + 1);
  HPoly h(n);
  for (const auto& g : gens.rays) {
    Vec a(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n));
    if (is_zero(a)) continue;
    h.add_ineq(std::move(a), g[n]);
  }
  for (const auto& g : gens.lineality) {
    Vec a(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n));
    if (is_zero(a)) continue;
    h.add_eq(std::move(a), g[n]);
  }
  return canonicalize(h);
}

namespace {

MixedSystem empty_system(std::size_t dim) {
  MixedSystem s(dim);
  s.add_weak(zeros(dim), -1);
  return s;
}

// Primitive rows, trivial rows dropped, duplicates merged (strict wins over
// weak with the same data). Returns false on a trivially false row.
bool tidy(MixedSystem& s) {
  auto clean = [](std::vector<Row>& rows, bool strict) {
    std::vector<Row> out;
    for (const auto& r0 : rows) {
      Row r = normalize_row(r0);
      if (is_zero(r.coeffs)) {
        const int sb = sgn(r.rhs);
        if (sb < 0 || (strict && sb == 0)) return false;
        continue;
      }
      out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), row_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    rows = std::move(out);
    return true;
  };
  if (!clean(s.weak, false) || !clean(s.strict, true)) return false;
  std::vector<Row> weak;
  for (const auto& r : s.weak)
    if (!std::binary_search(s.strict.begin(), s.strict.end(), r, row_less)) weak.push_back(r);
  s.weak = std::move(weak);
  if (!s.eq.empty()) {
    auto ech = row_echelon(s.eq, s.dim);
    if (!ech) return false;
    s.eq = ech->rows;
  }
  return true;
}

}  // namespace

MixedSystem remove_redundant(const MixedSystem& input) {
  input.check_dims();
  MixedSystem s = input;
  if (!tidy(s) || !is_feasible(s)) return empty_system(s.dim);
  // weak rows first, then strict; test each against the rows still kept.
  std::vector<Row> weak_keep = s.weak, strict_keep = s.strict;
  auto test = [&](bool strict_row, std::size_t idx) {
    MixedSystem t(s.dim);
    t.eq = s.eq;
    t.weak = weak_keep;
    t.strict = strict_keep;
    Row r = strict_row ? strict_keep[idx] : weak_keep[idx];
    if (strict_row) {
      t.strict.erase(t.strict.begin() + static_cast<std::ptrdiff_t>(idx));
      t.add_weak(negate(r.coeffs), -r.rhs);
    } else {
      t.weak.erase(t.weak.begin() + static_cast<std::ptrdiff_t>(idx));
      t.add_strict(negate(r.coeffs), -r.rhs);
    }
    return !is_feasible(t);
  };
  for (std::size_t i = 0; i < weak_keep.size();) {
    if (test(false, i)) weak_keep.erase(weak_keep.begin() + static_cast<std::ptrdiff_t>(i));
    else ++i;
  }
  for (std::size_t i = 0; i < strict_keep.size();) {
    if (test(true, i)) strict_keep.erase(strict_keep.begin() + static_cast<std::ptrdiff_t>(i));
    else ++i;
  }
  s.weak = std::move(weak_keep);
  s.strict = std::move(strict_keep);
  return s;
}

MixedSystem project(const MixedSystem& input, const std::vector<std::size_t>& coords) {
  input.check_dims();
  const std::size_t n = input.dim;
  std::vector<bool> keep(n, false);
  for (auto c : coords) {
    if (c >= n) throw Error(ErrorKind::DimensionMismatch, "project: coordinate out of range");
    if (keep[c]) throw Error(ErrorKind::Usage, "project: repeated coordinate");
    keep[c] = true;
  }
  MixedSystem s = input;
  if (!tidy(s) || !is_feasible(s)) return empty_system(coords.size());
  for (std::size_t j = 0; j < n; ++j) {
    if (keep[j]) continue;
    auto eq_it = std::find_if(s.eq.begin(), s.eq.end(), [&](const Row& r) { return sgn(r.coeffs[j]) != 0; });
    if (eq_it != s.eq.end()) {
      Row e = *eq_it;
      s.eq.erase(eq_it);
      auto substitute = [&](std::vector<Row>& rows) {
        for (auto& r : rows) {
          if (sgn(r.coeffs[j]) == 0) continue;
          Rational f = r.coeffs[j] / e.coeffs[j];
          r.coeffs = sub(r.coeffs, scale(e.coeffs, f));
          r.rhs -= f * e.rhs;
        }
      };
      substitute(s.eq);
      substitute(s.weak);
      substitute(s.strict);
    } else {
      struct Tagged {
        const Row* row;
        bool strict;
      };
      std::vector<Tagged> pos, neg;
      MixedSystem next(n);
      next.eq = s.eq;
      auto split = [&](const std::vector<Row>& rows, bool strict) {
        for (const auto& r : rows) {
          const int sg = sgn(r.coeffs[j]);
          if (sg > 0) pos.push_back({&r, strict});
          else if (sg < 0) neg.push_back({&r, strict});
          else (strict ? next.strict : next.weak).push_back(r);
        }
      };
      split(s.weak, false);
      split(s.strict, true);
      for (const auto& p : pos) {
        for (const auto& q : neg) {
          const Rational& cp = p.row->coeffs[j];
          Rational cq = -q.row->coeffs[j];
          Row r{add(scale(p.row->coeffs, cq), scale(q.row->coeffs, cp)), cq * p.row->rhs + cp * q.row->rhs};
          r.coeffs[j] = 0;
          ((p.strict || q.strict) ? next.strict : next.weak).push_back(std::move(r));
        }
      }
      s = std::move(next);
    }
    if (!tidy(s)) return empty_system(coords.size());
    s = remove_redundant(s);
  }
  MixedSystem out(coords.size());
  auto pick = [&](const Row& r) {
    Vec a(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) a[i] = r.coeffs[coords[i]];
    return Row{std::move(a), r.rhs};
  };
  for (const auto& r : s.weak) out.weak.push_back(pick(r));
  for (const auto& r : s.strict) out.strict.push_back(pick(r));
  for (const auto& r : s.eq) out.eq.push_back(pick(r));
  return remove_redundant(out);
}

HPoly project(const HPoly& p, const std::vector<std::size_t>& coords) { return HPoly::from_system(project(p.system(), coords)); }

namespace {

// Rows of p.ineq that are tight on all of p (p assumed nonempty).
std::vector<std::size_t> tight_rows(const HPoly& p) {
  const std::size_t n = p.dim;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < p.ineq.size(); ++i) candidates.push_back(i);
  while (!candidates.empty()) {
    const std::size_t k = candidates.size();
    std::vector<bool> is_candidate(p.ineq.size(), false);
    for (auto c : candidates) is_candidate[c] = true;
    MixedSystem s(n + k);
    for (std::size_t i = 0; i < p.ineq.size(); ++i) {
      if (!is_candidate[i]) s.add_weak(concat(p.ineq[i].coeffs, zeros(k)), p.ineq[i].rhs);
    }
    for (std::size_t c = 0; c < k; ++c) {
      const Row& r = p.ineq[candidates[c]];
      Vec row = concat(r.coeffs, zeros(k));
      row[n + c] = 1;
      s.add_weak(std::move(row), r.rhs);
      s.add_weak(unit_vector(n + k, n + c), 1);
      s.add_weak(negate(unit_vector(n + k, n + c)), 0);
    }
    for (const auto& r : p.eq) s.add_eq(concat(r.coeffs, zeros(k)), r.rhs);
    Vec objective = concat(zeros(n), Vec(k, Rational(1)));
    auto out = maximize_lp(objective, s);
    if (out.status != LPStatus::Optimal) throw Error(ErrorKind::EmptyPolyhedron, "implicit_equalities: empty polyhedron");
    if (sgn(out.value.value()) == 0) break;
    std::vector<std::size_t> rest;
    for (std::size_t c = 0; c < k; ++c)
      if (sgn((*out.primal_witness)[n + c]) == 0) rest.push_back(candidates[c]);
    candidates = std::move(rest);
  }
  return candidates;
}

HPoly canonical_from(const HPoly& p, const std::vector<std::size_t>& implicit, bool drop_redundant = true) {
  const std::size_t n = p.dim;
  std::vector<Row> eqrows = p.eq;
  std::vector<bool> is_implicit(p.ineq.size(), false);
  for (auto i : implicit) {
    is_implicit[i] = true;
    eqrows.push_back(p.ineq[i]);
  }
  auto ech = row_echelon(eqrows, n);
  if (!ech) return HPoly::empty(n);
  HPoly c(n);
  c.eq = ech->rows;
  std::vector<Row> rows;
  for (std::size_t i = 0; i < p.ineq.size(); ++i) {
    if (is_implicit[i]) continue;
    Row r = p.ineq[i];
    for (std::size_t e = 0; e < c.eq.size(); ++e) {
      Rational f = r.coeffs[ech->pivots[e]];
      if (sgn(f) == 0) continue;
      r.coeffs = sub(r.coeffs, scale(c.eq[e].coeffs, f));
      r.rhs -= f * c.eq[e].rhs;
    }
    if (is_zero(r.coeffs)) continue;
    rows.push_back(normalize_row(r));
  }
  // same direction: keep the tightest
  std::sort(rows.begin(), rows.end(), row_less);
  std::vector<Row> dedup;
  for (auto& r : rows)
    if (dedup.empty() || dedup.back().coeffs != r.coeffs) dedup.push_back(std::move(r));
  for (std::size_t i = 0; drop_redundant && i < dedup.size();) {
    MixedSystem s(n);
    s.eq = c.eq;
    for (std::size_t j = 0; j < dedup.size(); ++j)
      if (j != i) s.weak.push_back(dedup[j]);
    auto out = maximize_lp(dedup[i].coeffs, s);
    if (out.status == LPStatus::Optimal && out.value.value() <= dedup[i].rhs) dedup.erase(dedup.begin() + static_cast<std::ptrdiff_t>(i));
    else ++i;
  }
  c.ineq = std::move(dedup);
  return c;
}

}  // namespace

ImplicitEqualities implicit_equalities(const HPoly& p) {
  p.check_dims();
  if (p.is_empty()) throw Error(ErrorKind::EmptyPolyhedron, "implicit_equalities: empty polyhedron");
  auto rows = tight_rows(p);
  return {rows, canonical_from(p, rows)};
}

HPoly canonicalize(const HPoly& p) {
  p.check_dims();
  if (p.is_empty()) return HPoly::empty(p.dim);
  return canonical_from(p, tight_rows(p));
}

HPoly canonical_product(const HPoly& a, const HPoly& b) {
  // Facets of a product are the lifted facets of the factors, and no row of a
  // canonical factor is an implicit equality, so no LP is needed.
  return canonical_from(product(a, b), {}, false);
}

HPoly affine_hull(const HPoly& p) {
  HPoly c = canonicalize(p);
  if (c.eq.empty() && !c.ineq.empty() && is_zero(c.ineq[0].coeffs))
    throw Error(ErrorKind::EmptyPolyhedron, "affine_hull: empty polyhedron");
  c.ineq.clear();
  return c;
}

long dimension(const HPoly& p) {
  HPoly c = canonicalize(p);
  if (c.ineq.size() == 1 && is_zero(c.ineq[0].coeffs)) return -1;
  return static_cast<long>(p.dim) - static_cast<long>(c.eq.size());
}

Vec relative_interior_point(const HPoly& p) {
  HPoly c = canonicalize(p);
  auto r = strict_feasible(c.strict_system());
  if (!r.feasible) throw Error(ErrorKind::EmptyPolyhedron, "relative_interior_point: empty polyhedron");
  return *r.witness;
}

NormalConeRep normal_cone_at(const HPoly& p, const Vec& x) {
  require_dim(x.size(), p.dim, "normal_cone_at");
  if (!p.contains(x)) throw Error(ErrorKind::PointNotInSet, "normal_cone_at: point " + format_vec(x) + " not in polyhedron");
  HPoly c = canonicalize(p);
  NormalConeRep n;
  n.dim = p.dim;
  for (const auto& r : c.ineq)
    if (dot(r.coeffs, x) == r.rhs) n.generators.push_back(r.coeffs);
  for (const auto& r : c.eq) n.lineality.push_back(r.coeffs);
  sort_unique(n.generators);
  return n;
}

std::vector<HPoly> faces(const HPoly& p) {
  HPoly c = canonicalize(p);
  if (c.ineq.size() == 1 && is_zero(c.ineq[0].coeffs)) return {};
  const std::size_t m = c.ineq.size();
  std::map<std::string, HPoly> found;
  found.emplace(serialize(c), c);
  std::deque<std::vector<bool>> queue;
  queue.emplace_back(m, false);
  while (!queue.empty()) {
    auto active = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < m; ++i) {
      if (active[i]) continue;
      HPoly child(c.dim);
      child.ineq = c.ineq;
      child.eq = c.eq;
      for (std::size_t j = 0; j < m; ++j)
        if (active[j] || j == i) child.eq.push_back(c.ineq[j]);
      if (child.is_empty()) continue;
      auto rows = tight_rows(child);
      HPoly canon = canonical_from(child, rows);
      auto key = serialize(canon);
      if (found.count(key)) continue;
      found.emplace(key, canon);
      std::vector<bool> next(m, false);
      for (auto r : rows) next[r] = true;
      queue.push_back(std::move(next));
    }
  }
  std::vector<HPoly> out;
  for (auto& [k, f] : found) out.push_back(std::move(f));
  return out;
}

bool is_subset(const HPoly& a, const HPoly& b) {
  require_dim(b.dim, a.dim, "is_subset");
  if (a.is_empty()) return true;
  MixedSystem s = a.system();
  for (const auto& r : b.ineq) {
    auto out = maximize_lp(r.coeffs, s);
    if (out.status != LPStatus::Optimal || out.value.value() > r.rhs) return false;
  }
  for (const auto& r : b.eq) {
    auto hi = maximize_lp(r.coeffs, s);
    if (hi.status != LPStatus::Optimal || hi.value.value() != r.rhs) return false;
    auto lo = solve_lp(r.coeffs, s);
    if (lo.status != LPStatus::Optimal || lo.value.value() != r.rhs) return false;
  }
  return true;
}

bool same_set(const HPoly& a, const HPoly& b) { return is_subset(a, b) && is_subset(b, a); }

HPoly intersect(const HPoly& a, const HPoly& b) {
  require_dim(b.dim, a.dim, "intersect");
  HPoly p = a;
  p.ineq.insert(p.ineq.end(), b.ineq.begin(), b.ineq.end());
  p.eq.insert(p.eq.end(), b.eq.begin(), b.eq.end());
  return p;
}

HPoly product(const HPoly& a, const HPoly& b) {
  HPoly p(a.dim + b.dim);
  for (const auto& r : a.ineq) p.add_ineq(concat(r.coeffs, zeros(b.dim)), r.rhs);
  for (const auto& r : a.eq) p.add_eq(concat(r.coeffs, zeros(b.dim)), r.rhs);
  for (const auto& r : b.ineq) p.add_ineq(concat(zeros(a.dim), r.coeffs), r.rhs);
  for (const auto& r : b.eq) p.add_eq(concat(zeros(a.dim), r.coeffs), r.rhs);
  return p;
}

MixedSystem pullback(const MixedSystem& s, const Matrix& t, const Vec& c) {
  require_dim(t.rows(), s.dim, "pullback");
  require_dim(c.size(), s.dim, "pullback offset");
  MixedSystem out(t.cols());
  auto map = [&](const Row& r) { return Row{t.apply_transpose(r.coeffs), r.rhs - dot(r.coeffs, c)}; };
  for (const auto& r : s.weak) out.weak.push_back(map(r));
  for (const auto& r : s.strict) out.strict.push_back(map(r));
  for (const auto& r : s.eq) out.eq.push_back(map(r));
  return out;
}

HPoly preimage(const HPoly& p, const Matrix& t, const Vec& c) { return HPoly::from_system(pullback(p.system(), t, c)); }

HPoly linear_image(const HPoly& p, const Matrix& t) {
  require_dim(t.cols(), p.dim, "linear_image");
  const std::size_t n = p.dim, m = t.rows();
  // graph {(x, y) : x in P, y = T x}
  HPoly g = product(p, HPoly::whole(m));
  for (std::size_t i = 0; i < m; ++i) {
    Vec row = concat(t.row(i), zeros(m));
    row[n + i] = -1;
    g.add_eq(std::move(row), 0);
  }
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < m; ++i) coords.push_back(n + i);
  return project(g, coords);
}

HPoly add_rays(const HPoly& p, const std::vector<Vec>& rays) {
  if (rays.empty()) return p;
  const std::size_t n = p.dim, k = rays.size();
  // x = q + sum lambda_i r_i with q in P: rows a.(x - R lambda) <= b, lambda >= 0.
  MixedSystem s(n + k);
  auto lift = [&](const Row& r) {
    Vec a = concat(r.coeffs, zeros(k));
    for (std::size_t i = 0; i < k; ++i) a[n + i] = -dot(r.coeffs, rays[i]);
    return Row{std::move(a), r.rhs};
  };
  for (const auto& r : p.ineq) s.weak.push_back(lift(r));
  for (const auto& r : p.eq) s.eq.push_back(lift(r));
  for (std::size_t i = 0; i < k; ++i) s.add_weak(negate(unit_vector(n + k, n + i)), 0);
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back(i);
  return HPoly::from_system(project(s, coords));
}

std::string serialize(const HPoly& p) {
  std::string s = std::to_string(p.dim) + "|E";
  for (const auto& r : p.eq) s += "[" + format_vec(r.coeffs) + ";" + format_rational(r.rhs) + "]";
  s += "|I";
  for (const auto& r : p.ineq) s += "[" + format_vec(r.coeffs) + ";" + format_rational(r.rhs) + "]";
  return s;
}

}  // namespace nearconvex
