#include "nearconvex/io.hpp"

#include <fstream>
#include <sstream>

namespace nearconvex::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t size_from_json(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    fail(std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  return j;
}

std::vector<Row> rows_from_json(const Json& j, std::size_t dim, const char* what) {
  std::vector<Row> rows;
  for (const Json& r : array(j, what)) {
    Vec v = vec_from_json(r);
    if (v.size() != dim + 1) fail(std::string(what) + " row needs " + std::to_string(dim + 1) + " entries");
    Rational rhs = v.back();
    v.pop_back();
    rows.push_back({std::move(v), std::move(rhs)});
  }
  return rows;
}

Json rows_to_json(const std::vector<Row>& rows) {
  Json out = Json::array();
  for (const Row& r : rows) {
    Json row = to_json(r.coeffs);
    row.push_back(to_json(r.rhs));
    out.push_back(std::move(row));
  }
  return out;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? to_json(*v) : Json(nullptr);
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error&) {
      fail("bad rational \"" + j.get<std::string>() + "\"");
    } catch (const std::exception&) {
      fail("bad rational \"" + j.get<std::string>() + "\"");
    }
  }
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  fail("rationals must be strings or integers, got " + j.dump());
}

Vec vec_from_json(const Json& j) {
  Vec v;
  for (const Json& x : array(j, "vector")) v.push_back(rational_from_json(x));
  return v;
}

Matrix matrix_from_json(const Json& j) {
  std::vector<Vec> rows;
  for (const Json& r : array(j, "matrix")) rows.push_back(vec_from_json(r));
  if (rows.empty()) fail("matrix needs at least one row");
  for (const Vec& r : rows)
    if (r.size() != rows[0].size()) fail("matrix rows differ in length");
  return Matrix::from_rows(rows, rows[0].size());
}

HPoly hpoly_from_json(const Json& j) {
  HPoly p(size_from_json(field(j, "dim"), "dim"));
  if (j.contains("ineq")) p.ineq = rows_from_json(j.at("ineq"), p.dim, "ineq");
  if (j.contains("eq")) p.eq = rows_from_json(j.at("eq"), p.dim, "eq");
  return p;
}

NCSet ncset_from_json(const Json& j) {
  if (j.is_object() && j.contains("closure")) {
    HPoly q = hpoly_from_json(j.at("closure"));
    std::vector<std::vector<std::size_t>> faces;
    if (j.contains("faces")) {
      for (const Json& f : array(j.at("faces"), "faces")) {
        std::vector<std::size_t> active;
        for (const Json& i : array(f, "face")) {
          std::size_t k = size_from_json(i, "face index");
          if (k >= q.ineq.size()) fail("face index out of range");
          active.push_back(k);
        }
        faces.push_back(std::move(active));
      }
    }
    return NCSet::with_faces(q, faces);
  }
  const std::size_t dim = size_from_json(field(j, "dim"), "dim");
  std::vector<HPoly> bases;
  for (const Json& p : array(field(j, "pieces"), "pieces")) {
    HPoly h = hpoly_from_json(p);
    if (h.dim != dim) fail("piece dimension differs from set dimension");
    bases.push_back(std::move(h));
  }
  return NCSet::from_hpolys(dim, bases);
}

SVMap svmap_from_json(const Json& j) {
  if (j.is_object() && j.contains("g_affine")) {
    const Json& g = j.at("g_affine");
    return SVMap::cone_constraint(matrix_from_json(field(g, "G")), vec_from_json(field(g, "c")),
                                  hpoly_from_json(field(j, "cone")));
  }
  return SVMap(size_from_json(field(j, "n"), "n"), size_from_json(field(j, "p"), "p"),
               ncset_from_json(field(j, "graph")));
}

PLFunction plfunction_from_json(const Json& j) {
  if (j.is_object() && j.contains("max_affine")) {
    std::vector<AffinePiece> pieces;
    for (const Json& r : array(j.at("max_affine"), "max_affine")) {
      Vec v = vec_from_json(r);
      if (v.empty()) fail("affine piece needs at least the constant");
      Rational b = v.back();
      v.pop_back();
      pieces.push_back({std::move(v), std::move(b)});
    }
    if (pieces.empty()) fail("max_affine needs at least one piece");
    const std::size_t n = pieces[0].a.size();
    for (const AffinePiece& p : pieces)
      if (p.a.size() != n) fail("affine pieces differ in length");
    if (j.contains("domain")) return PLFunction::max_affine(n, pieces, ncset_from_json(j.at("domain")));
    return PLFunction::max_affine(n, pieces);
  }
  if (j.is_object() && j.contains("indicator")) return PLFunction::indicator(ncset_from_json(j.at("indicator")));
  return PLFunction(size_from_json(field(j, "n"), "n"), ncset_from_json(field(j, "epi")));
}

OVFInstance ovf_from_json(const Json& j) {
  return build_ovf(plfunction_from_json(field(j, "f")), svmap_from_json(field(j, "F")));
}

Json to_json(const Rational& r) { return format_rational(r); }

Json to_json(const ExtReal& v) { return v.str(); }

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (const Rational& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(to_json(m.row(r)));
  return out;
}

Json to_json(const HPoly& p) {
  Json out;
  out["dim"] = p.dim;
  out["ineq"] = rows_to_json(p.ineq);
  out["eq"] = rows_to_json(p.eq);
  return out;
}

Json to_json(const VPoly& v) {
  Json out;
  out["dim"] = v.dim;
  Json points = Json::array(), rays = Json::array();
  for (const Vec& p : v.points) points.push_back(to_json(p));
  for (const Vec& r : v.rays) rays.push_back(to_json(r));
  out["points"] = std::move(points);
  out["rays"] = std::move(rays);
  return out;
}

Json to_json(const NCSet& s) {
  Json out;
  out["dim"] = s.dim();
  Json pieces = Json::array();
  for (const ROPoly& p : s.pieces()) pieces.push_back(to_json(p.base()));
  out["pieces"] = std::move(pieces);
  return out;
}

Json to_json(const SVMap& f) {
  Json out;
  out["n"] = f.n();
  out["p"] = f.p();
  out["graph"] = to_json(f.graph());
  return out;
}

Json to_json(const PLFunction& f) {
  Json out;
  out["n"] = f.n();
  out["epi"] = to_json(f.epi());
  return out;
}

Json to_json(const NearConvexityReport& r) {
  Json out;
  out["nearly_convex"] = r.nearly_convex;
  out["witness"] = optional_json(r.witness);
  out["reason"] = r.reason;
  out["hull"] = optional_json(r.hull);
  return out;
}

Json to_json(const SupportEvaluation& s) {
  Json out;
  out["value"] = to_json(s.value);
  out["maximizer"] = optional_json(s.maximizer);
  out["ray"] = optional_json(s.ray);
  return out;
}

Json to_json(const NormalConeRep& n) {
  Json out;
  out["dim"] = n.dim;
  Json gens = Json::array(), lin = Json::array();
  for (const Vec& g : n.generators) gens.push_back(to_json(g));
  for (const Vec& l : n.lineality) lin.push_back(to_json(l));
  out["generators"] = std::move(gens);
  out["lineality"] = std::move(lin);
  out["hpoly"] = to_json(n.to_hpoly());
  return out;
}

Json to_json(const OVFSubdifferential& s) {
  Json out;
  out["lhs"] = to_json(s.lhs);
  out["rhs"] = to_json(s.rhs);
  out["verdict"] = s.equal;
  return out;
}

Json to_json(const ConjugateCheck& c) {
  Json out;
  out["lhs"] = to_json(c.lhs);
  out["rhs"] = to_json(c.rhs);
  if (c.witness) {
    Json w;
    w["w1"] = to_json(c.witness->w1);
    w["w2"] = to_json(c.witness->w2);
    w["v"] = optional_json(c.witness->v);
    w["parts"] = Json::array({to_json(c.witness->parts.first), to_json(c.witness->parts.second)});
    out["witness"] = std::move(w);
  } else {
    out["witness"] = nullptr;
  }
  out["qc"] = c.qc_satisfied;
  out["verdict"] = c.equal;
  out["witness_verified"] = c.witness_verified;
  return out;
}

Json to_json(const QCFlag& q) {
  Json out;
  out["name"] = q.name;
  out["holds"] = q.holds;
  out["witness"] = optional_json(q.witness);
  out["farkas"] = optional_json(q.farkas);
  return out;
}

Json to_json(const DualityReport& r) {
  Json out;
  out["V"] = to_json(r.primal);
  out["V_d"] = to_json(r.dual);
  out["gap"] = to_json(r.gap);
  out["scheme"] = scheme_name(r.scheme);
  Json qc = Json::array();
  for (const QCFlag& q : r.qc) qc.push_back(to_json(q));
  out["qc"] = std::move(qc);
  out["all_qc"] = r.all_qc();
  out["weak_duality"] = r.weak_duality();
  out["strong_duality"] = r.strong_duality();
  out["primal_witness"] = optional_json(r.primal_witness);
  out["dual_witness"] = optional_json(r.dual_witness);
  out["scheme_dual_value"] = optional_json(r.scheme_dual_value);
  out["scheme_dual_agrees"] = r.scheme_dual_agrees ? Json(*r.scheme_dual_agrees) : Json(nullptr);
  out["value_function_identity"] = r.value_function_identity ? Json(*r.value_function_identity) : Json(nullptr);
  out["subdifferential_nonempty"] = r.subdifferential_nonempty ? Json(*r.subdifferential_nonempty) : Json(nullptr);
  return out;
}

Json to_json(const SuiteReport& r) {
  Json out;
  out["theorem"] = r.theorem;
  out["count"] = r.count;
  out["passes"] = r.passes;
  Json failures = Json::array();
  for (const SuiteFailure& f : r.failures) {
    Json e;
    e["seed"] = f.seed;
    e["detail"] = f.detail;
    failures.push_back(std::move(e));
  }
  out["failures"] = std::move(failures);
  out["drawn"] = r.drawn;
  out["mutation"] = mutation_name(r.mutation);
  return out;
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

}  // namespace nearconvex::io
