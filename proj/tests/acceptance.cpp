// Acceptance criteria 1 to 9. Run with no argument for all of them or with a
// criterion number; prints one PASS/FAIL line per criterion and exits
// nonzero when any fails.
#include "nearconvex/io.hpp"

#include "fixtures.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace nearconvex;
using fixtures::q;

namespace {

constexpr std::uint64_t kSeed = 7;
constexpr double kSuiteLimit = 300.0;

struct Verdict {
  bool ok = true;
  std::string summary;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Runs one suite and prints a detail line; all instances must pass
/// within the time limit.
bool run_suite(const std::string& id, std::size_t count, double limit = kSuiteLimit) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport r = theorem_suite(id, count, kSeed);
  const double t = seconds_since(t0);
  const bool ok = r.passes == count && r.failures.empty() && t < limit;
  std::cout << "  " << std::left << std::setw(8) << id << " " << r.passes << "/" << count << " drawn " << r.drawn
            << " " << std::fixed << std::setprecision(1) << t << "s" << (ok ? "" : "  <-- FAIL") << "\n";
  for (std::size_t i = 0; i < r.failures.size() && i < 3; ++i)
    std::cout << "    seed " << r.failures[i].seed << ": " << r.failures[i].detail << "\n";
  return ok;
}

Verdict run_suites(const std::vector<std::string>& ids, std::size_t count) {
  bool ok = true;
  for (const std::string& id : ids) ok = run_suite(id, count) && ok;
  return {ok, std::to_string(ids.size()) + " suites x " + std::to_string(count) + " instances"};
}

Verdict check(bool ok, const std::string& what) {
  std::cout << "  " << what << (ok ? "" : "  <-- FAIL") << "\n";
  return {ok, what};
}

Verdict criterion1() {
  bool ok = run_suite("prop2.1", 200, 120.0);
  return {ok, "prop2.1 agrees with the oracle on 200 sets within 2 min"};
}

Verdict criterion2() {
  return run_suites({"thm2.2a", "thm2.2c", "thm2.2d", "thm2.3", "thm2.4", "thm3.1", "cor3.2", "thm3.3", "cor3.4",
                     "thm3.5", "cor3.6", "thm3.7", "thm3.8"},
                    100);
}

Verdict criterion3() {
  return run_suites({"thm4.1", "cor4.2", "cor4.3", "cor4.4", "thm4.5", "cor4.6", "cor4.7", "cor4.8", "thm4.9", "cor4.10"},
                    100);
}

Verdict criterion4() { return run_suites({"thm5.2", "lem5.1"}, 100); }

/// mu(x) = inf {y : y in [x, x + 1]} on [0, 2], i.e. x + delta_[0,2].
Verdict criterion5() {
  bool ok = run_suite("thm5.3", 100);
  HPoly g(2);
  g.add_ineq(make_vec({-1, 0}), 0);
  g.add_ineq(make_vec({1, 0}), 2);
  g.add_ineq(make_vec({1, -1}), 0);
  g.add_ineq(make_vec({-1, 1}), 1);
  OVFInstance inst = build_ovf(PLFunction::max_affine(2, {{make_vec({0, 1}), 0}}), SVMap::from_closed_graph(1, 1, g));
  HPoly at1(1), at0(1);
  at1.add_eq(make_vec({1}), 1);
  at0.add_ineq(make_vec({1}), 1);
  OVFSubdifferential s1 = ovf_subdifferential(inst, fixtures::v1(1), fixtures::v1(1));
  OVFSubdifferential s0 = ovf_subdifferential(inst, fixtures::v1(0), fixtures::v1(0));
  ok = check(s1.equal && oracle::same_polyhedron(s1.lhs, at1) && oracle::same_polyhedron(s1.rhs, at1),
             "d mu(1) = {1} on both sides")
           .ok &&
       ok;
  ok = check(s0.equal && oracle::same_polyhedron(s0.lhs, at0) && oracle::same_polyhedron(s0.rhs, at0),
             "d mu(0) = (-inf, 1] on both sides")
           .ok &&
       ok;
  return {ok, "thm5.3 on 100 instances and both worked subdifferentials"};
}

Verdict criterion6() {
  return run_suites({"thm6.1", "prop6.2", "thm6.3", "cor6.4", "thm6.6", "thm6.7", "ex6.8"}, 100);
}

Verdict criterion7() {
  Verdict v = run_suites({"thm7.1a", "thm7.1b", "cor7.2", "thm7.3", "lem7.4", "cor7.5", "thm7.6", "thm7.8"}, 100);
  // min x over [0, 3] subject to 1 - x <=_K 0 with K = R+.
  HPoly cone(1);
  cone.add_ineq(make_vec({-1}), 0);
  DualityReport lag = lagrange_cone_duality(PLFunction::max_affine(1, {{fixtures::v1(1), 0}}), fixtures::interval(0, 3),
                                            Matrix{{-1}}, fixtures::v1(1), cone);
  v.ok = check(lag.all_qc() && lag.primal == ExtReal(q(1)) && lag.dual == ExtReal(q(1)) && lag.gap == ExtReal(q(0)),
               "Lagrange x >= 1 instance: V = " + lag.primal.str() + ", V_d = " + lag.dual.str())
             .ok &&
         v.ok;
  // min |x| + |x - 1|.
  PLFunction h = PLFunction::max_affine(1, {{fixtures::v1(1), -1}, {fixtures::v1(-1), 1}});
  DualityReport fen = fenchel_duality(fixtures::abs1(), h, Matrix{{1}});
  v.ok = check(fen.all_qc() && fen.primal == ExtReal(q(1)) && fen.dual == ExtReal(q(1)) && fen.gap == ExtReal(q(0)),
               "Fenchel |x| + |x - 1| instance: V = " + fen.primal.str() + ", V_d = " + fen.dual.str())
             .ok &&
         v.ok;
  v.summary += ", weak duality on every draw, both worked instances";
  return v;
}

/// Repeated runs of one suite per section, mutated runs included, must
/// serialize to identical bytes.
Verdict criterion8() {
  const std::vector<std::pair<std::string, Mutation>> runs{
      {"prop2.1", Mutation::None},         {"thm2.2c", Mutation::None},       {"thm3.7", Mutation::None},
      {"cor4.3", Mutation::None},          {"thm5.3", Mutation::None},        {"thm6.3", Mutation::None},
      {"thm7.3", Mutation::None},          {"cor3.2", Mutation::CorruptPiece}, {"cor6.4", Mutation::CorruptConjugate}};
  bool ok = true;
  for (const auto& [id, m] : runs) {
    const std::string a = io::dump(io::to_json(theorem_suite(id, 10, 11, m)));
    const std::string b = io::dump(io::to_json(theorem_suite(id, 10, 11, m)));
    ok = check(a == b, id + " (" + mutation_name(m) + "): " + std::to_string(a.size()) + " bytes, identical").ok && ok;
  }
  return {ok, "byte-identical reports across repeated runs"};
}

/// Every supported mutation must make every instance of its suite fail.
Verdict criterion9() {
  constexpr std::size_t kCount = 50;
  bool ok = true;
  std::size_t suites = 0;
  for (const std::string& id : theorem_ids()) {
    for (Mutation m : {Mutation::CorruptPiece, Mutation::CorruptConjugate}) {
      if (!supports_mutation(id, m)) continue;
      ++suites;
      auto t0 = std::chrono::steady_clock::now();
      SuiteReport r = theorem_suite(id, kCount, kSeed, m);
      const bool all_failed = r.passes == 0 && r.failures.size() == kCount;
      std::ostringstream line;
      line << std::left << std::setw(8) << id << " " << std::setw(17) << mutation_name(m) << " detected "
           << r.failures.size() << "/" << kCount << " " << std::fixed << std::setprecision(1) << seconds_since(t0)
           << "s";
      ok = check(all_failed, line.str()).ok && ok;
    }
  }
  return {ok, std::to_string(suites) + " mutated suites fail on 100% of " + std::to_string(kCount) + " instances"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Verdict (*)()> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                            criterion6, criterion7, criterion8, criterion9};
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const long k = std::strtol(argv[i], nullptr, 10);
    if (k < 1 || k > static_cast<long>(criteria.size())) {
      std::cerr << "usage: acceptance [criterion 1-9]...\n";
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(k));
  }
  if (selected.empty())
    for (std::size_t k = 1; k <= criteria.size(); ++k) selected.push_back(k);

  bool all = true;
  for (std::size_t k : selected) {
    std::cout << "criterion " << k << ":\n";
    Verdict v;
    auto t0 = std::chrono::steady_clock::now();
    try {
      v = criteria[k - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("threw ") + e.what()};
    }
    std::cout << "[" << (v.ok ? "PASS" : "FAIL") << "] criterion " << k << ": " << v.summary << " (" << std::fixed
              << std::setprecision(1) << seconds_since(t0) << "s)\n"
              << std::flush;
    all = all && v.ok;
  }
  return all ? 0 : 1;
}
