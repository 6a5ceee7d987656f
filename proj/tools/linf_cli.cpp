// linf: batch front end over JSON fixture documents.

#include <CLI11.hpp>
#include <iostream>
#include <linf/fixture_io.hpp>

using namespace linf;

namespace {

struct Options {
  std::string command;
  std::string fixture;
  std::string algebra;
  std::string morphism;
  std::string along;
  std::string seed;
  std::string pair;
  std::string coeff = "Q";
  int level = -1;
  int degree = 0;
  int max_poly_degree = 2;
  int samples = 20;
  std::uint64_t rng = 0;
  bool json = false;
};

struct Outcome {
  json report = json::object();
  bool ok = true;
};

// ---------------------------------------------------------------------------
// helpers

json element_out(const FilteredSpace& s, const Element& v) { return io::element_json(s, v); }
json forms_out(const FilteredSpace& s, const Cdga& b, const FormElement& v) { return io::forms_json(s, b, v); }
json table_out(const MultiMap& m) { return io::table_json(m); }

json report_json(const ValidationReport& r) {
  json fails = json::array();
  for (const auto& f : r.failures) fails.push_back({{"check", f.check}, {"word", f.word}, {"detail", f.detail}});
  return {{"ok", r.ok()}, {"failures", fails}};
}

json classification_json(const Classification& c) {
  json levels = json::array();
  for (const auto& l : c.levels)
    levels.push_back({{"level", l.level},
                      {"quasi_isomorphism", l.quasi_isomorphism},
                      {"surjective", l.surjective},
                      {"non_quasi_iso_degrees", l.non_quasi_iso_degrees},
                      {"non_surjective_degrees", l.non_surjective_degrees}});
  return {{"weak_equivalence", c.weak_equivalence},
          {"fibration", c.fibration},
          {"acyclic_fibration", c.acyclic_fibration()},
          {"levels", levels}};
}

std::vector<std::string> split_pair(const std::string& s) {
  auto parts = io::split(s, ',');
  if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
    throw ArgumentError("--pair expects two comma-separated names");
  return parts;
}

struct Context {
  const Options& opt;
  FixtureDocument doc;

  const AlgebraPtr& algebra() const {
    if (!opt.algebra.empty()) return doc.algebra(opt.algebra);
    // a named seed carries its algebra
    if (auto it = doc.elements.find(opt.seed); it != doc.elements.end()) return doc.algebra(it->second.algebra);
    throw ArgumentError("--algebra is required");
  }
  const NamedMorphism& morphism() const {
    if (opt.morphism.empty()) throw ArgumentError("--morphism is required");
    return doc.morphism(opt.morphism);
  }
  const NamedMorphism& along() const {
    if (opt.along.empty()) throw ArgumentError("--along is required");
    return doc.morphism(opt.along);
  }
  int level() const {
    if (opt.level < 0) throw ArgumentError("--level is required");
    return opt.level;
  }

  /** Named element or inline "id=p/q,id=p/q" ("0" for zero). */
  NamedElement element(const std::string& text, const std::string& algebra_name, Cdga b = {}) const {
    if (text.empty()) throw ArgumentError("--seed is required");
    if (auto it = doc.elements.find(text); it != doc.elements.end()) {
      if (!algebra_name.empty() && it->second.algebra != algebra_name)
        throw ArgumentError("element '" + text + "' lives in " + it->second.algebra + ", not " + algebra_name);
      return it->second;
    }
    if (algebra_name.empty()) throw ArgumentError("inline elements need --algebra");
    const auto& s = *doc.algebra(algebra_name)->space;
    NamedElement e{algebra_name, b, std::nullopt, {}};
    if (text == "0") return e;
    json obj = json::object();
    for (const auto& term : io::split(text, ',')) {
      auto eq = term.find('=');
      if (eq == std::string::npos) throw ArgumentError("inline element term '" + term + "' is not id=coefficient");
      obj[term.substr(0, eq)] = term.substr(eq + 1);
    }
    try {
      e.value = io::forms_of(s, b, obj, "--seed");
    } catch (const FixtureError& ex) {
      throw ArgumentError(ex.what());
    }
    return e;
  }
  Element plain_seed() const { return element(opt.seed, opt.algebra).plain(); }
};

LInftyMorphism plain(const NamedMorphism& m, const char* what) {
  if (m.target.coefficients) throw ArgumentError(std::string(what) + " must have an untensored target");
  return m.morphism;
}

// ---------------------------------------------------------------------------
// commands

Outcome cmd_validate(const Context& c) {
  Outcome o;
  for (const auto& [name, r] : validate_document(c.doc)) {
    if (!c.opt.algebra.empty() && name != "algebra " + c.opt.algebra) continue;
    if (!c.opt.morphism.empty() && name != "morphism " + c.opt.morphism) continue;
    o.report[name] = report_json(r);
    o.ok = o.ok && r.ok();
  }
  return o;
}

Outcome cmd_classify(const Context& c) {
  return {{{"classification", classification_json(classify_linfty_morphism(c.morphism().morphism))}}, true};
}

Outcome cmd_curvature(const Context& c) {
  const auto& l = c.algebra();
  Element curv = curvature(*l, c.plain_seed());
  return {{{"curvature", element_out(*l->space, curv)}, {"is_mc", curv.is_zero()}}, true};
}

Outcome cmd_is_mc(const Context& c) {
  const auto& l = c.algebra();
  auto r = is_mc(*l, c.plain_seed());
  return {{{"is_mc", r.is_mc}, {"residual", element_out(*l->space, r.residual)}}, r.is_mc};
}

Outcome cmd_twist(const Context& c) {
  auto t = twist_algebra(c.algebra(), c.plain_seed());
  auto r = validate_algebra(*t);
  return {{{"algebra", algebra_json(*t)}, {"validation", report_json(r)}}, r.ok()};
}

Outcome cmd_push(const Context& c) {
  const auto& m = c.morphism();
  auto f = plain(m, "--morphism");
  Element a = c.element(c.opt.seed, m.source).plain();
  Element img = pushforward(f, a);
  bool src_mc = is_mc(*f.source, a).is_mc;
  bool tgt_mc = is_mc(*f.target, img).is_mc;
  return {{{"image", element_out(*f.target->space, img)}, {"source_is_mc", src_mc}, {"image_is_mc", tgt_mc}},
          !src_mc || tgt_mc};
}

json obstruction_json(const FilteredSpace& s, const ObstructionReport& r) {
  json out{{"level", r.level}, {"cocycle", element_out(s, r.cocycle)}, {"class_trivial", r.class_trivial}};
  if (r.eta) out["eta"] = element_out(s, *r.eta);
  if (r.lifted) out["lifted"] = element_out(s, *r.lifted);
  return out;
}

Outcome cmd_lift_mc(const Context& c) {
  const auto& l = c.algebra();
  auto r = lift_mc_full(*l, c.plain_seed());
  Outcome o;
  json steps = json::array();
  for (const auto& s : r.steps) steps.push_back(obstruction_json(*l->space, s));
  o.report["steps"] = steps;
  if (r.element) o.report["element"] = element_out(*l->space, *r.element);
  if (r.obstruction) o.report["obstruction"] = obstruction_json(*l->space, *r.obstruction);
  o.ok = r.element.has_value();
  return o;
}

Outcome cmd_obstruction(const Context& c) {
  const auto& l = c.algebra();
  return {{{"step", obstruction_json(*l->space, obstruction_step(*l, c.level(), c.plain_seed()))}}, true};
}

Outcome cmd_torsor(const Context& c) {
  const auto& l = c.algebra();
  auto t = fiber_torsor(*l, c.level(), c.plain_seed());
  json basis = json::array();
  for (const auto& b : t.basis) basis.push_back(element_out(*l->space, b));
  json out{{"basis", basis}, {"dimension", t.basis.size()}};
  out["base"] = t.base ? element_out(*l->space, *t.base) : json(nullptr);
  return {out, t.base.has_value()};
}

Outcome cmd_strictify(const Context& c) {
  auto f = plain(c.morphism(), "--morphism");
  auto s = strictify_fibration(f);
  bool strict_ok = is_strict(s.strict_fib.maps) && s.strict_fib.linear() == f.linear();
  bool round = !first_difference(compose(s.psi, s.psi_inverse).maps, identity(f.source).maps) &&
               !first_difference(compose(s.psi_inverse, s.psi).maps, identity(s.bar).maps);
  return {{{"bar_algebra", algebra_json(*s.bar)},
           {"psi", table_out(s.psi.maps)},
           {"strict_fibration", table_out(s.strict_fib.maps)},
           {"strict", strict_ok},
           {"psi_invertible", round}},
          strict_ok && round};
}

Outcome cmd_pullback(const Context& c) {
  auto f = plain(c.morphism(), "--morphism");
  auto t = plain(c.along(), "--along");
  auto p = pullback_linfty(f, t);
  auto r = validate_algebra(*p.algebra);
  bool square = !first_difference(compose(f, p.to_source).maps, compose(t, p.to_other).maps);
  return {{{"algebra", algebra_json(*p.algebra)},
           {"validation", report_json(r)},
           {"to_other", table_out(p.to_other.maps)},
           {"to_source", table_out(p.to_source.maps)},
           {"square_commutes", square},
           {"to_other_classification", classification_json(classify_linfty_morphism(p.to_other))}},
          r.ok() && square};
}

Outcome cmd_decompose(const Context& c) {
  auto f = plain(c.morphism(), "--morphism");
  auto d = decompose_acyclic_fibration(f);
  bool iso_ok = validate_morphism(d.iso).ok();
  bool round = !first_difference(compose(d.inverse, d.iso).maps, identity(f.source).maps) &&
               !first_difference(compose(d.iso, d.inverse).maps, identity(d.product.algebra).maps);
  return {{{"kernel", algebra_json(*d.kernel_algebra)},
           {"psi", table_out(d.psi.maps)},
           {"iso_valid", iso_ok},
           {"inverse_round_trip", round}},
          iso_ok && round};
}

Outcome cmd_retraction(const Context& c) {
  auto f = plain(c.morphism(), "--morphism");
  auto chi = retraction(f);
  auto diff = first_difference(compose(f, chi).maps, identity(f.target).maps);
  json out{{"retraction", table_out(chi.maps)}, {"section", !diff}};
  if (diff) out["witness"] = *diff;
  return {out, !diff};
}

Outcome cmd_factorize(const Context& c) {
  auto f = plain(c.morphism(), "--morphism");
  auto fac = factorize(f);
  auto cj = classify_linfty_morphism(fac.j);
  auto cp = classify_linfty_morphism(fac.p);
  bool comp = !first_difference(compose(fac.p, fac.j).maps, f.maps);
  bool valid = validate_algebra(*fac.pullback.algebra).ok();
  return {{{"mapping_path_space", algebra_json(*fac.pullback.algebra)},
           {"j", table_out(fac.j.maps)},
           {"p", table_out(fac.p.maps)},
           {"p_after_j_equals_f", comp},
           {"j_weak_equivalence", cj.weak_equivalence},
           {"p_fibration", cp.fibration}},
          valid && comp && cj.weak_equivalence && cp.fibration};
}

json homotopy_json(const HomotopyReport& r) { return {{"ok", r.ok}, {"problems", r.problems}}; }

Outcome cmd_homotopy_inverse(const Context& c) {
  auto f = plain(c.morphism(), "--morphism");
  auto h = homotopy_inverse(f);
  auto right = verify_homotopy(h.cert_right);
  auto left = verify_homotopy(h.cert_left);
  json links = json::array();
  for (const auto& l : h.cert_left.links) links.push_back(homotopy_json(verify_homotopy(l)));
  bool we = classify_linfty_morphism(h.inverse).weak_equivalence;
  return {{{"inverse", table_out(h.inverse.maps)},
           {"cert_right", homotopy_json(right)},
           {"cert_left", homotopy_json(left)},
           {"cert_left_links", links},
           {"inverse_weak_equivalence", we}},
          right.ok && left.ok && we};
}

Outcome cmd_verify_homotopy(const Context& c) {
  const auto& m = c.morphism();
  if (!m.tensor_target || m.target.coefficients->kind != CdgaKind::omega1)
    throw ArgumentError("verify-homotopy needs a morphism into <algebra>⊗Omega1");
  auto l = c.doc.algebra(m.target.algebra);
  Outcome o;
  for (int end = 0; end < 2; ++end)
    o.report["d" + std::to_string(end)] =
        table_out(compose(path_evaluation(*m.tensor_target, l, end), m.morphism).maps);
  if (!c.opt.pair.empty()) {
    auto names = split_pair(c.opt.pair);
    HomotopyCertificate cert{*m.tensor_target, m.morphism, plain(c.doc.morphism(names[0]), "endpoint"),
                             plain(c.doc.morphism(names[1]), "endpoint")};
    auto r = verify_homotopy(cert);
    o.report["verification"] = homotopy_json(r);
    o.ok = r.ok;
  }
  return o;
}

Outcome cmd_cohomology(const Context& c) {
  const auto& l = c.algebra();
  int n = c.opt.level < 0 ? 1 : c.opt.level;
  auto h = cohomology(l->complex(), n, c.opt.degree);
  json reps = json::array();
  for (const auto& r : h.representatives) reps.push_back(element_out(*l->space, r));
  return {{{"level", n}, {"degree", c.opt.degree}, {"dimension", h.dimension}, {"representatives", reps}}, true};
}

Outcome cmd_lcs(const Context& c) {
  auto r = lower_central_series(*c.algebra());
  json dims = json::array();
  for (const auto& g : r.gamma) dims.push_back(g.echelon().size());
  return {{{"dimensions", dims}, {"nilpotency_index", r.nilpotency_index}}, true};
}

json simplex_faces(const SimplexElement& s) {
  json faces = json::array();
  for (int i = 0; i <= s.n && s.n > 0; ++i)
    faces.push_back(forms_out(*s.owner->space, simplex_cdga(s.n - 1), face(s, i).value));
  return faces;
}

Outcome cmd_simplex_validate(const Context& c) {
  const auto& l = c.algebra();
  if (!c.opt.pair.empty()) {
    auto names = split_pair(c.opt.pair);
    Element a = c.element(names[0], c.opt.algebra).plain(), b = c.element(names[1], c.opt.algebra).plain();
    auto r = synthesize_edge(l, a, b, c.opt.max_poly_degree);
    if (!r.edge)
      return {{{"found", false}, {"failed_weight", r.failed_weight}, {"max_poly_degree", c.opt.max_poly_degree}},
              false};
    return {{{"found", true},
             {"edge", forms_out(*l->space, simplex_cdga(1), r.edge->value)},
             {"faces", simplex_faces(*r.edge)}},
            true};
  }
  auto e = c.element(c.opt.seed, c.opt.algebra);
  int n = e.simplex.value_or(0);
  auto chk = validate_simplex(*l, n, e.value);
  json out{{"simplex", n}, {"valid", chk.valid}, {"residual", forms_out(*l->space, simplex_cdga(n), chk.residual)}};
  if (chk.valid) out["faces"] = simplex_faces({l, n, e.value});
  return {out, chk.valid};
}

Outcome cmd_smc_map(const Context& c) {
  const auto& m = c.morphism();
  auto f = plain(m, "--morphism");
  auto e = c.element(c.opt.seed, m.source);
  int n = e.simplex.value_or(0);
  auto img = smc_map(f, make_simplex(f.source, n, e.value));
  bool commutes = true;
  for (int i = 0; i <= n && n > 0; ++i)
    commutes = commutes && face(img, i).value == smc_map(f, face(make_simplex(f.source, n, e.value), i)).value;
  return {{{"image", forms_out(*f.target->space, simplex_cdga(n), img.value)}, {"commutes_with_faces", commutes}},
          commutes};
}

Outcome cmd_mc_pullback_check(const Context& c) {
  auto f = plain(c.morphism(), "--morphism");
  auto t = plain(c.along(), "--along");
  Cdga b = cdga_from_name(c.opt.coeff);
  if (b.kind != CdgaKind::rationals && b.kind != CdgaKind::omega1) throw ArgumentError("--coeff must be Q or Omega1");
  auto p = pullback_linfty(f, t);
  auto ctx = mc_pullback_context(p, b);
  Outcome o;
  auto one = [&](const Element& a1, const Element& a2) {
    auto r = mc_pullback_check(ctx, a1, a2);
    o.ok = o.ok && r.mc.is_mc && r.recovers;
    return json{{"phi", forms_out(*p.algebra->space, b, ctx.tilde.forms(r.phi))},
                {"is_mc", r.mc.is_mc},
                {"recovers_pair", r.recovers}};
  };
  if (!c.opt.pair.empty()) {
    auto names = split_pair(c.opt.pair);
    auto e1 = c.element(names[0], c.along().source, b), e2 = c.element(names[1], c.morphism().source, b);
    if (e1.coefficients.kind != b.kind || e2.coefficients.kind != b.kind)
      throw ArgumentError("pair coefficients must match --coeff");
    o.report["pair"] = one(ctx.other.element(e1.value), ctx.source.element(e2.value));
    return o;
  }
  std::mt19937_64 rng(c.opt.rng);
  int checked = 0, sampled = 0;
  bool bijective = true;
  for (int i = 0; i < c.opt.samples; ++i) {
    auto x = sample_mc(*ctx.tilde.algebra, rng);
    if (!x) continue;
    ++sampled;
    auto [a1, a2] = mc_pullback_project(ctx, *x);
    auto r = mc_pullback_check(ctx, a1, a2);
    bijective = bijective && r.phi == *x;
    o.ok = o.ok && r.mc.is_mc && r.recovers;
    ++checked;
  }
  o.ok = o.ok && bijective;
  o.report = {{"coefficients", io::cdga_name(b)},
              {"samples", sampled},
              {"checked", checked},
              {"phi_inverts_projection", bijective},
              {"all_ok", o.ok}};
  return o;
}

// ---------------------------------------------------------------------------
// output

void print_human(const json& v, int indent, std::ostream& out) {
  std::string pad(indent, ' ');
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (x.is_object() && !x.empty()) {
        out << pad << k << ":\n";
        print_human(x, indent + 2, out);
      } else if (x.is_array() && !x.empty() && (x.front().is_object() || x.front().is_array())) {
        out << pad << k << ":\n";
        for (std::size_t i = 0; i < x.size(); ++i) {
          out << pad << "  [" << i << "]\n";
          print_human(x[i], indent + 4, out);
        }
      } else {
        out << pad << k << ": " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
      }
    }
  } else {
    out << pad << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

using Handler = Outcome (*)(const Context&);

const std::map<std::string, Handler>& commands() {
  static const std::map<std::string, Handler> table{
      {"validate", cmd_validate},
      {"classify", cmd_classify},
      {"curvature", cmd_curvature},
      {"is-mc", cmd_is_mc},
      {"twist", cmd_twist},
      {"push", cmd_push},
      {"lift-mc", cmd_lift_mc},
      {"obstruction", cmd_obstruction},
      {"torsor", cmd_torsor},
      {"strictify", cmd_strictify},
      {"pullback", cmd_pullback},
      {"decompose", cmd_decompose},
      {"retraction", cmd_retraction},
      {"factorize", cmd_factorize},
      {"homotopy-inverse", cmd_homotopy_inverse},
      {"verify-homotopy", cmd_verify_homotopy},
      {"cohomology", cmd_cohomology},
      {"lcs", cmd_lcs},
      {"simplex-validate", cmd_simplex_validate},
      {"smc-map", cmd_smc_map},
      {"mc-pullback-check", cmd_mc_pullback_check},
  };
  return table;
}

int emit(const Options& opt, json report, bool ok, std::ostream& out) {
  if (opt.json) {
    json doc{{"command", opt.command}, {"ok", ok}, {"report", std::move(report)}};
    out << doc.dump(2) << "\n";
  } else {
    out << opt.command << ": " << (ok ? "ok" : "FAILED") << "\n";
    print_human(report, 2, out);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Filtered L-infinity algebras: validation, Maurer-Cartan theory and homotopy constructions"};
  std::vector<std::string> names;
  for (const auto& [k, v] : commands()) names.push_back(k);
  app.add_option("command", opt.command, "operation to run")->required()->check(CLI::IsMember(names));
  app.add_option("--fixture", opt.fixture, "fixture document (JSON)")->required();
  app.add_option("--algebra", opt.algebra, "algebra name");
  app.add_option("--morphism", opt.morphism, "morphism name");
  app.add_option("--along", opt.along, "second morphism for pullbacks");
  app.add_option("--level", opt.level, "filtration level");
  app.add_option("--degree", opt.degree, "cohomological degree");
  app.add_option("--seed", opt.seed, "element name or inline id=p/q,...");
  app.add_option("--pair", opt.pair, "two comma-separated names");
  app.add_option("--coeff", opt.coeff, "coefficient cdga: Q or Omega1");
  app.add_option("--samples", opt.samples, "sample count for mc-pullback-check");
  app.add_option("--rng", opt.rng, "sampler seed");
  app.add_option("--max-poly-degree", opt.max_poly_degree, "polynomial degree bound for simplex synthesis");
  app.add_flag("--json", opt.json, "machine-readable output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    Context ctx{opt, load_document(opt.fixture)};
    if (opt.command != "validate") {
      json bad = json::object();
      for (const auto& [name, r] : validate_document(ctx.doc))
        if (!r.ok()) bad[name] = report_json(r);
      if (!bad.empty()) return emit(opt, {{"invalid_fixture", bad}}, false, std::cout);
    }
    auto o = commands().at(opt.command)(ctx);
    return emit(opt, std::move(o.report), o.ok, std::cout);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    return emit(opt, {{"error", e.what()}}, false, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
