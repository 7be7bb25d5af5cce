// JSON encoding of every value and report type. Rationals travel as exact
// strings "p/q" or "p"; the extended values as "inf" and "-inf". Malformed
// input raises Error(Parse).
#pragma once

#include "nearconvex/error.hpp"
#include "nearconvex/oracle.hpp"

#include "json.hpp"

#include <string>

namespace nearconvex::io {

using Json = nlohmann::ordered_json;

/// Parses a whole document; throws Error(Parse).
Json parse(const std::string& text);
Json read_file(const std::string& path);

Rational rational_from_json(const Json& j);
Vec vec_from_json(const Json& j);
/// Rows as arrays of rationals.
Matrix matrix_from_json(const Json& j);
/// {"dim":n, "ineq":[[a..., b]...], "eq":[[e..., d]...]}.
HPoly hpoly_from_json(const Json& j);
/// {"dim":n, "pieces":[HPoly...]} with each piece read as the relative
/// interior of the listed polyhedron, or {"closure":HPoly, "faces":[[i...]...]}.
NCSet ncset_from_json(const Json& j);
/// {"n":.., "p":.., "graph":NCSet} or {"g_affine":{"G":..,"c":..}, "cone":HPoly}.
SVMap svmap_from_json(const Json& j);
/// {"n":.., "epi":NCSet} or {"max_affine":[[a..., b]...], "domain":NCSet}.
PLFunction plfunction_from_json(const Json& j);
/// {"f":PLFunction, "F":SVMap}.
OVFInstance ovf_from_json(const Json& j);

Json to_json(const Rational& r);
Json to_json(const ExtReal& v);
Json to_json(const Vec& v);
Json to_json(const Matrix& m);
Json to_json(const HPoly& p);
Json to_json(const VPoly& v);
Json to_json(const NCSet& s);
Json to_json(const SVMap& f);
Json to_json(const PLFunction& f);
Json to_json(const NearConvexityReport& r);
Json to_json(const SupportEvaluation& s);
Json to_json(const NormalConeRep& n);
Json to_json(const OVFSubdifferential& s);
/// {lhs, rhs, witness, qc, verdict, witness_verified}.
Json to_json(const ConjugateCheck& c);
Json to_json(const QCFlag& q);
/// {"V", "V_d", "gap", scheme, qc flags with witnesses, optional fields}.
Json to_json(const DualityReport& r);
/// {theorem, count, passes, failures:[{seed, detail}], drawn, mutation}.
Json to_json(const SuiteReport& r);

/// Compact single-line rendering with a trailing newline.
std::string dump(const Json& j);

}  // namespace nearconvex::io
