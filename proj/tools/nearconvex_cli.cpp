// Command-line front end. Every verb reads JSON files, writes one JSON
// document to stdout and diagnostics to stderr. Exit codes: 0 when the
// operation succeeds and every checked identity holds, 1 when an identity
// or qc assertion fails, 2 on usage or parse errors.
#include "nearconvex/io.hpp"

#include "CLI11.hpp"

#include <functional>
#include <iostream>
#include <map>

using namespace nearconvex;
using io::Json;

namespace {

struct Outcome {
  Json doc;
  bool ok = true;
};

struct Args {
  std::string file1, file2, id, mutation = "none";
  std::string point, y, u, v;
  bool certify = false;
  bool no_qc = false;
  std::size_t count = 100;
  std::uint64_t seed = 7;
};

Vec parse_point(const std::string& text, const char* name) {
  if (text.empty()) throw Error(ErrorKind::Usage, std::string("--") + name + " is required");
  try {
    return parse_vec(text);
  } catch (const Error&) {
    throw Error(ErrorKind::Parse, std::string("bad --") + name + " \"" + text + "\"");
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, std::string("bad --") + name + " \"" + text + "\"");
  }
}

bool is_map(const Json& j) { return j.is_object() && (j.contains("graph") || j.contains("g_affine")); }

/// A matrix file is either a bare array of rows or {"A": rows, "c": vec}.
Matrix matrix_of(const Json& j) { return io::matrix_from_json(j.is_object() ? j.at("A") : j); }

Json optional_bool(const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); }

bool certified(const std::optional<bool>& b) { return !b || *b; }

Outcome report_duality(const DualityReport& r) {
  bool ok = r.weak_duality() && (!r.all_qc() || r.strong_duality());
  if (r.scheme_dual_agrees) ok = ok && *r.scheme_dual_agrees;
  if (r.value_function_identity) ok = ok && *r.value_function_identity;
  return {io::to_json(r), ok};
}

Outcome report_conjugate(const ConjugateCheck& c) {
  bool ok = !c.qc_satisfied || (c.equal && (!c.witness || c.witness_verified));
  return {io::to_json(c), ok};
}

int fail_with(ErrorKind kind, const std::string& message) {
  const bool assertion = kind == ErrorKind::QCViolated || kind == ErrorKind::NotNearlyConvex;
  Json doc;
  doc["error"] = error_kind_name(kind);
  doc["detail"] = message;
  std::cout << io::dump(doc);
  std::cerr << "nearconvex: " << message << "\n";
  return assertion ? 1 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact calculus and duality on finite unions of relatively open polyhedra.", "nearconvex"};
  app.require_subcommand(1);
  Args a;
  std::map<CLI::App*, std::function<Outcome()>> actions;

  auto verb = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  std::vector<std::pair<std::string, std::string*>> files, std::function<Outcome()> run) {
    CLI::App* sub = parent->add_subcommand(name, help);
    for (auto& [fname, target] : files) sub->add_option(fname, *target, fname)->required()->check(CLI::ExistingFile);
    actions[sub] = std::move(run);
    return sub;
  };
  auto point = [&](CLI::App* sub, const std::string& flag = "--point", const std::string& help = "point") {
    std::string* target = flag == "--point" ? &a.point : flag == "--y" ? &a.y : flag == "--u" ? &a.u : &a.v;
    sub->add_option(flag, *target, help + " as comma-separated rationals")->required();
    return sub;
  };
  auto certify = [&](CLI::App* sub) {
    sub->add_flag("--certify", a.certify, "certify the relative interior formula");
    return sub;
  };
  auto no_qc = [&](CLI::App* sub) {
    sub->add_flag("--no-require-qc", a.no_qc, "report both sides even when the qc fails");
    return sub;
  };
  auto set1 = [&] { return io::ncset_from_json(io::read_file(a.file1)); };
  auto set2 = [&] { return io::ncset_from_json(io::read_file(a.file2)); };

  verb(&app, "check", "near convexity of a set", {{"set", &a.file1}}, [&] {
    return Outcome{io::to_json(is_nearly_convex(set1())), true};
  });
  verb(&app, "ri", "relative interior of a nearly convex set", {{"set", &a.file1}}, [&] {
    Json doc;
    doc["ri"] = io::to_json(set1().validate().relative_interior().base());
    doc["relatively_open"] = true;
    return Outcome{doc, true};
  });
  verb(&app, "closure", "closure of a nearly convex set", {{"set", &a.file1}}, [&] {
    Json doc;
    doc["closure"] = io::to_json(set1().validate().closure());
    return Outcome{doc, true};
  });
  point(verb(&app, "member", "membership test", {{"set", &a.file1}}, [&] {
    NCSet s = set1();
    Vec x = parse_point(a.point, "point");
    if (x.size() != s.dim()) throw Error(ErrorKind::DimensionMismatch, "point and set dimensions differ");
    Json doc;
    doc["member"] = s.contains(x);
    return Outcome{doc, true};
  }));
  certify(verb(&app, "image", "image of a set under a matrix or a set-valued map",
               {{"set", &a.file1}, {"map", &a.file2}}, [&] {
    Json m = io::read_file(a.file2);
    NCSet s = set1();
    Json doc;
    if (!is_map(m)) {
      doc["set"] = io::to_json(linear_image(s, matrix_of(m)));
      return Outcome{doc, true};
    }
    ImageResult r = image_of_set(io::svmap_from_json(m), s, a.certify);
    doc["set"] = io::to_json(r.set);
    doc["qc"] = r.qc_satisfied;
    doc["ri_formula_holds"] = optional_bool(r.ri_formula_holds);
    return Outcome{doc, certified(r.ri_formula_holds)};
  }));
  certify(verb(&app, "preimage", "preimage of a set under an affine or a set-valued map",
               {{"set", &a.file1}, {"map", &a.file2}}, [&] {
    Json m = io::read_file(a.file2);
    NCSet s = set1();
    Json doc;
    if (!is_map(m)) {
      Matrix t = matrix_of(m);
      Vec c = m.is_object() && m.contains("c") ? io::vec_from_json(m.at("c")) : zeros(t.rows());
      QualifiedSet r = preimage(s, t, c);
      doc["set"] = io::to_json(r.set);
      doc["qc"] = r.qc_satisfied;
      return Outcome{doc, true};
    }
    ImageResult r = inverse_image(io::svmap_from_json(m), s, a.certify);
    doc["set"] = io::to_json(r.set);
    doc["qc"] = r.qc_satisfied;
    doc["ri_formula_holds"] = optional_bool(r.ri_formula_holds);
    return Outcome{doc, certified(r.ri_formula_holds)};
  }));
  verb(&app, "intersect", "intersection of two sets", {{"a", &a.file1}, {"b", &a.file2}}, [&] {
    QualifiedSet r = intersect(set1().validate(), set2().validate());
    Json doc;
    doc["set"] = io::to_json(r.set);
    doc["qc"] = r.qc_satisfied;
    return Outcome{doc, true};
  });
  verb(&app, "product", "Cartesian product of two sets", {{"a", &a.file1}, {"b", &a.file2}}, [&] {
    Json doc;
    doc["set"] = io::to_json(product(set1(), set2()));
    return Outcome{doc, true};
  });
  certify(verb(&app, "restrict", "restriction of a map or a function to a set",
               {{"object", &a.file1}, {"set", &a.file2}}, [&] {
    Json obj = io::read_file(a.file1);
    NCSet omega = set2();
    Json doc;
    if (is_map(obj)) {
      MapResult r = restrict(io::svmap_from_json(obj), omega, a.certify);
      doc["map"] = io::to_json(r.map);
      doc["qc"] = r.qc_satisfied;
      doc["ri_formula_holds"] = optional_bool(r.ri_formula_holds);
      return Outcome{doc, certified(r.ri_formula_holds)};
    }
    FunctionResult r = restrict_function(io::plfunction_from_json(obj), omega, a.certify);
    doc["function"] = io::to_json(r.f);
    doc["qc"] = r.qc_satisfied;
    doc["ri_formula_holds"] = optional_bool(r.ri_formula_holds);
    return Outcome{doc, certified(r.ri_formula_holds)};
  }));

  CLI::App* map = app.add_subcommand("map", "set-valued map operations");
  map->require_subcommand(1);
  auto map1 = [&] { return io::svmap_from_json(io::read_file(a.file1)); };
  auto map2 = [&] { return io::svmap_from_json(io::read_file(a.file2)); };
  auto map_result = [](const MapResult& r) {
    Json doc;
    doc["map"] = io::to_json(r.map);
    doc["qc"] = r.qc_satisfied;
    doc["ri_formula_holds"] = optional_bool(r.ri_formula_holds);
    return Outcome{doc, certified(r.ri_formula_holds)};
  };
  certify(verb(map, "sum", "F1 + F2", {{"f1", &a.file1}, {"f2", &a.file2}},
               [&] { return map_result(sum(map1(), map2(), a.certify)); }));
  certify(verb(map, "compose", "F o G", {{"f", &a.file1}, {"g", &a.file2}},
               [&] { return map_result(compose(map1(), map2(), a.certify)); }));
  verb(map, "inverse", "F^-1", {{"f", &a.file1}}, [&] {
    Json doc;
    doc["map"] = io::to_json(map1().inverse());
    return Outcome{doc, true};
  });
  point(verb(map, "eval", "F(x)", {{"f", &a.file1}}, [&] {
    Json doc;
    doc["set"] = io::to_json(map1().eval(parse_point(a.point, "point")));
    return Outcome{doc, true};
  }));

  CLI::App* ovf = app.add_subcommand("ovf", "optimal value function mu(x) = inf {f(x,y) : y in F(x)}");
  ovf->require_subcommand(1);
  auto ovf_inst = [&] { return io::ovf_from_json(io::read_file(a.file1)); };
  auto ovf_flags = [](Json& doc, const OVFInstance& inst) {
    doc["qc"] = inst.qc_satisfied;
    doc["mu_nearly_convex"] = inst.mu_nearly_convex;
    doc["mu_proper"] = inst.mu_proper;
  };
  point(verb(ovf, "eval", "mu(x)", {{"instance", &a.file1}}, [&] {
    OVFInstance inst = ovf_inst();
    Json doc;
    doc["mu"] = io::to_json(inst.mu.eval(parse_point(a.point, "point")));
    ovf_flags(doc, inst);
    return Outcome{doc, true};
  }));
  CLI::App* subdiff = point(verb(ovf, "subdiff", "both sides of the subdifferential formula at x", {{"instance", &a.file1}}, [&] {
    OVFInstance inst = ovf_inst();
    Vec x = parse_point(a.point, "point");
    Vec y;
    if (a.y.empty()) {
      NCSet s = solution_map(inst, x);
      if (s.empty()) throw Error(ErrorKind::EmptySolutionMap, "S(x) is empty");
      y = sample_points(s).front();
    } else {
      y = parse_point(a.y, "y");
    }
    OVFSubdifferential r = ovf_subdifferential(inst, x, y);
    Json doc = io::to_json(r);
    doc["y"] = io::to_json(y);
    ovf_flags(doc, inst);
    return Outcome{doc, r.equal};
  }));
  subdiff->add_option("--y", a.y, "solution y in S(x); defaults to a relative interior point of S(x)");
  point(verb(ovf, "solutions", "S(x)", {{"instance", &a.file1}}, [&] {
    OVFInstance inst = ovf_inst();
    Json doc;
    doc["set"] = io::to_json(solution_map(inst, parse_point(a.point, "point")));
    ovf_flags(doc, inst);
    return Outcome{doc, true};
  }));
  no_qc(point(verb(ovf, "conjugate", "mu*(w) against the infimal convolution formula", {{"instance", &a.file1}}, [&] {
    return report_conjugate(ovf_conjugate(ovf_inst(), parse_point(a.point, "point"), !a.no_qc));
  })));

  CLI::App* conj = app.add_subcommand("conj", "Fenchel conjugates");
  conj->require_subcommand(1);
  auto fn1 = [&] { return io::plfunction_from_json(io::read_file(a.file1)); };
  auto fn2 = [&] { return io::plfunction_from_json(io::read_file(a.file2)); };
  point(verb(conj, "fn", "f*(w)", {{"f", &a.file1}}, [&] {
    PLFunction f = fn1();
    Json doc;
    doc["value"] = io::to_json(fenchel_value(f, parse_point(a.point, "point")));
    doc["epigraph"] = io::to_json(canonicalize(conjugate_epigraph(f)));
    return Outcome{doc, true};
  }));
  point(point(verb(conj, "svm", "F*(u, v), the support function of gph F", {{"f", &a.file1}}, [&] {
    return Outcome{io::to_json(svm_conjugate(map1(), parse_point(a.u, "u"), parse_point(a.v, "v"))), true};
  }), "--u", "u"), "--v", "v");
  no_qc(point(verb(conj, "sum", "(f1 + f2)*(w) against f1* box f2*", {{"f1", &a.file1}, {"f2", &a.file2}}, [&] {
    return report_conjugate(conjugate_sum(fn1(), fn2(), parse_point(a.point, "point"), !a.no_qc));
  })));
  no_qc(point(verb(conj, "chain", "(g o A)*(w) against inf {g*(v) : A^T v = w}", {{"g", &a.file1}, {"A", &a.file2}}, [&] {
    return report_conjugate(
        conjugate_chain(fn1(), matrix_of(io::read_file(a.file2)), parse_point(a.point, "point"), !a.no_qc));
  })));

  point(verb(&app, "support", "support function of a set", {{"set", &a.file1}}, [&] {
    return Outcome{io::to_json(support(set1(), parse_point(a.point, "point"))), true};
  }), "--point", "direction");
  point(verb(&app, "ncone", "normal cone at a point of a set", {{"set", &a.file1}}, [&] {
    return Outcome{io::to_json(normal_cone(set1(), parse_point(a.point, "point"))), true};
  }));
  point(point(point(verb(&app, "coderiv", "coderivative D*F(x, y)(v)", {{"f", &a.file1}}, [&] {
    Json doc;
    doc["set"] = io::to_json(
        coderivative(map1(), parse_point(a.point, "point"), parse_point(a.y, "y"), parse_point(a.v, "v")));
    return Outcome{doc, true};
  }), "--y", "y"), "--v", "v"));

  CLI::App* duality = app.add_subcommand("duality", "primal and dual values of a duality scheme");
  duality->require_subcommand(1);
  auto inst = [&] { return io::read_file(a.file1); };
  verb(duality, "general", "inf f(x, 0) against sup -f*(0, y*); instance {\"f\", \"n\"}", {{"instance", &a.file1}}, [&] {
    Json j = inst();
    return report_duality(
        general_duality(io::plfunction_from_json(j.at("f")), j.at("n").get<std::size_t>()));
  });
  verb(duality, "lagrange", "min phi(x) s.t. x in theta, 0 in G(x)", {{"instance", &a.file1}}, [&] {
    Json j = inst();
    PLFunction phi = io::plfunction_from_json(j.at("phi"));
    NCSet theta = io::ncset_from_json(j.at("theta"));
    const Json& g = j.at("G");
    if (g.contains("g_affine")) {
      const Json& ga = g.at("g_affine");
      return report_duality(lagrange_cone_duality(phi, theta, io::matrix_from_json(ga.at("G")),
                                                  io::vec_from_json(ga.at("c")), io::hpoly_from_json(g.at("cone"))));
    }
    return report_duality(lagrange_duality(phi, theta, io::svmap_from_json(g)));
  });
  verb(duality, "fenchel-lagrange", "Lagrange primal with the perturbation phi(x + u)", {{"instance", &a.file1}}, [&] {
    Json j = inst();
    return report_duality(fenchel_lagrange_duality(io::plfunction_from_json(j.at("phi")),
                                                   io::ncset_from_json(j.at("theta")), io::svmap_from_json(j.at("G"))));
  });
  verb(duality, "fenchel", "min g(x) + h(A x); instance {\"g\", \"h\", \"A\"}", {{"instance", &a.file1}}, [&] {
    Json j = inst();
    return report_duality(fenchel_duality(io::plfunction_from_json(j.at("g")), io::plfunction_from_json(j.at("h")),
                                          io::matrix_from_json(j.at("A"))));
  });

  CLI::App* verify = app.add_subcommand("verify", "run a randomized theorem suite");
  verify->add_option("theorem", a.id, "theorem id, e.g. thm6.3")->required();
  verify->add_option("--count", a.count, "instances")->capture_default_str();
  verify->add_option("--seed", a.seed, "suite seed")->capture_default_str();
  verify->add_option("--mutation", a.mutation, "none, corrupt-piece or corrupt-conjugate")
      ->check(CLI::IsMember({"none", "corrupt-piece", "corrupt-conjugate"}))
      ->capture_default_str();
  actions[verify] = [&] {
    Mutation m = a.mutation == "corrupt-piece"       ? Mutation::CorruptPiece
                 : a.mutation == "corrupt-conjugate" ? Mutation::CorruptConjugate
                                                     : Mutation::None;
    SuiteReport r = theorem_suite(canonical_theorem_id(a.id), a.count, a.seed, m);
    return Outcome{io::to_json(r), r.failures.empty()};
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* leaf = &app;
  while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
  auto it = actions.find(leaf);
  if (it == actions.end()) {
    std::cerr << app.help();
    return 2;
  }
  try {
    Outcome out = it->second();
    std::cout << io::dump(out.doc);
    return out.ok ? 0 : 1;
  } catch (const Error& e) {
    return fail_with(e.kind(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail_with(ErrorKind::Parse, e.what());
  }
}
