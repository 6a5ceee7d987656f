#pragma once

// JSON fixture documents: named algebras, morphisms and elements.

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "linf.hpp"

namespace linf {

using json = nlohmann::json;

class FixtureError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/** Target of a morphism record: a named algebra, optionally tensored with a cdga. */
struct TargetSpec {
  std::string algebra;
  std::optional<Cdga> coefficients;
  int cap = 1;
};

struct NamedMorphism {
  std::string source;
  TargetSpec target;
  LInftyMorphism morphism;
  std::optional<TensorAlgebra> tensor_target;
};

/** Element of L⊗B; B = ℚ for plain elements. simplex marks values meant as n-simplices. */
struct NamedElement {
  std::string algebra;
  Cdga coefficients;
  std::optional<int> simplex;
  FormElement value;

  Element plain() const {
    Element out;
    for (const auto& [k, c] : value) {
      if (!(k.second == FormMonomial{})) throw ArgumentError("element has non-constant form coefficients");
      out.add(k.first, c);
    }
    return out;
  }
};

struct FixtureDocument {
  std::map<std::string, AlgebraPtr> algebras;
  std::map<std::string, NamedMorphism> morphisms;
  std::map<std::string, NamedElement> elements;

  const AlgebraPtr& algebra(const std::string& name) const {
    auto it = algebras.find(name);
    if (it == algebras.end()) throw FixtureError("unknown algebra '" + name + "'");
    return it->second;
  }
  const NamedMorphism& morphism(const std::string& name) const {
    auto it = morphisms.find(name);
    if (it == morphisms.end()) throw FixtureError("unknown morphism '" + name + "'");
    return it->second;
  }
};

namespace io {

inline std::string cdga_name(const Cdga& b) {
  switch (b.kind) {
    case CdgaKind::rationals: return "Q";
    case CdgaKind::omega1: return "Omega1";
    case CdgaKind::omega2: return "Omega2";
    case CdgaKind::rational_pair: return "QxQ";
  }
  return "Q";
}

inline Scalar scalar_of(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_scalar(v.get<std::string>());
    if (v.is_number_integer()) return Scalar(v.get<long>());
  } catch (const ArgumentError& e) {
    throw FixtureError(where + ": " + e.what());
  }
  throw FixtureError(where + ": coefficient must be a rational string \"p/q\"");
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw FixtureError(where + ": missing '" + key + "'");
  return obj.at(key);
}

inline int int_field(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_number_integer()) throw FixtureError(where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

inline std::size_t gen_index(const FilteredSpace& s, const std::string& id, const std::string& where) {
  auto i = s.find(id);
  if (!i) throw FixtureError(where + ": unknown generator '" + id + "'");
  return *i;
}

inline Element element_of(const FilteredSpace& s, const json& v, const std::string& where) {
  if (!v.is_object()) throw FixtureError(where + ": element must be an object {id: \"p/q\"}");
  Element out;
  for (const auto& [id, c] : v.items()) out.add(gen_index(s, id, where), scalar_of(c, where + "." + id));
  return out;
}

inline FormElement forms_of(const FilteredSpace& s, const Cdga& b, const json& v, const std::string& where) {
  if (!v.is_object()) throw FixtureError(where + ": element must be an object {\"id*form\": \"p/q\"}");
  FormElement out;
  for (const auto& [key, c] : v.items()) {
    auto star = key.find('*');
    std::string id = key.substr(0, star);
    FormMonomial m;
    if (star != std::string::npos) {
      try {
        m = parse_monomial(b, key.substr(star + 1));
      } catch (const ArgumentError& e) {
        throw FixtureError(where + "." + key + ": " + e.what());
      }
    } else if (b.kind == CdgaKind::rational_pair) {
      throw FixtureError(where + "." + key + ": QxQ terms need a slot label");
    }
    out.add({gen_index(s, id, where), m}, scalar_of(c, where + "." + key));
  }
  return out;
}

/** Reads a table {"a.b": element} into canonical words. */
inline void table_of(const json& t, const FilteredSpace& src, const FilteredSpace& tgt, MultiMap& out,
                     const std::string& where) {
  if (!t.is_object()) throw FixtureError(where + ": table must be an object");
  for (const auto& [key, v] : t.items()) {
    Word raw;
    for (const auto& id : split(key, '.')) raw.push_back(gen_index(src, id, where + "." + key));
    auto n = normalize_word(src, raw);
    Element val = element_of(tgt, v, where + "." + key);
    if (!n) {
      if (!val.is_zero()) throw FixtureError(where + "." + key + ": word vanishes by graded symmetry");
      continue;
    }
    out.add(n->word, val * Scalar(n->sign));
  }
}

inline std::string key_of(const FilteredSpace& s, const std::vector<std::size_t>& raw) {
  std::string out;
  for (auto g : raw) out += (out.empty() ? "" : ".") + s.id(g);
  return out;
}

inline json element_json(const FilteredSpace& s, const Element& v) {
  json out = json::object();
  for (const auto& [g, c] : v) out[s.id(g)] = to_string(c);
  return out;
}

inline json forms_json(const FilteredSpace& s, const Cdga& b, const FormElement& v) {
  json out = json::object();
  for (const auto& [k, c] : v) {
    std::string key = s.id(k.first);
    if (!(k.second == FormMonomial{}) || b.kind == CdgaKind::rational_pair)
      key += "*" + monomial_to_string(b, k.second);
    out[key] = to_string(c);
  }
  return out;
}

/** Table keyed by id-sorted words; values carry the reordering sign. */
inline json table_json(const MultiMap& m) {
  const auto& s = *m.source();
  json out = json::object();
  for (const auto& [w, v] : m.entries()) {
    std::vector<std::size_t> raw(w.begin(), w.end());
    std::stable_sort(raw.begin(), raw.end(), [&](auto a, auto b) { return s.id(a) < s.id(b); });
    auto n = normalize_word(s, raw);
    out[key_of(s, raw)] = element_json(*m.target(), v * Scalar(n->sign));
  }
  return out;
}

}  // namespace io

inline json algebra_json(const LInftyAlgebra& l) {
  const auto& s = *l.space;
  json gens = json::array();
  for (std::size_t i = 0; i < s.dim(); ++i)
    gens.push_back({{"id", s.id(i)}, {"degree", s.degree(i)}, {"weight", s.weight(i)}});
  MultiMap d(l.space, l.space, 1), br(l.space, l.space, 1);
  for (const auto& [w, v] : l.q.entries()) (w.size() == 1 ? d : br).set(w, v);
  return {{"bound", s.bound()}, {"generators", gens}, {"differential", io::table_json(d)},
          {"brackets", io::table_json(br)}};
}

inline AlgebraPtr parse_algebra(const json& a, const std::string& where) {
  int bound = io::int_field(a, "bound", where);
  const auto& gl = io::field(a, "generators", where);
  if (!gl.is_array()) throw FixtureError(where + ".generators: must be an array");
  std::vector<Generator> gens;
  for (std::size_t i = 0; i < gl.size(); ++i) {
    std::string w = where + ".generators[" + std::to_string(i) + "]";
    const auto& idv = io::field(gl[i], "id", w);
    if (!idv.is_string()) throw FixtureError(w + ": id must be a string");
    std::string id = idv.get<std::string>();
    if (id.empty() || id.find_first_of(".*|, =") != std::string::npos)
      throw FixtureError(w + ": id '" + id + "' must be nonempty without . * | , = or spaces");
    gens.push_back({id, io::int_field(gl[i], "degree", w), io::int_field(gl[i], "weight", w)});
  }
  SpacePtr s;
  try {
    s = make_space(std::move(gens), bound);
  } catch (const ArgumentError& e) {
    throw FixtureError(where + ": " + e.what());
  }
  MultiMap q(s, s, 1);
  if (a.contains("differential")) {
    MultiMap d(s, s, 1);
    io::table_of(a.at("differential"), *s, *s, d, where + ".differential");
    for (const auto& [w, v] : d.entries())
      if (w.size() != 1) throw FixtureError(where + ".differential: keys must be single generators");
    accumulate(q, d);
  }
  if (a.contains("brackets")) {
    MultiMap b(s, s, 1);
    io::table_of(a.at("brackets"), *s, *s, b, where + ".brackets");
    for (const auto& [w, v] : b.entries())
      if (w.size() < 2) throw FixtureError(where + ".brackets: keys must have at least two generators");
    accumulate(q, b);
  }
  return std::make_shared<const LInftyAlgebra>(s, std::move(q));
}

inline json morphism_json(const NamedMorphism& m) {
  json tgt = m.target.algebra;
  if (m.target.coefficients)
    tgt = {{"algebra", m.target.algebra}, {"coefficients", io::cdga_name(*m.target.coefficients)},
           {"cap", m.target.cap}};
  return {{"source", m.source}, {"target", tgt}, {"components", io::table_json(m.morphism.maps)}};
}

inline json element_json(const FixtureDocument& doc, const NamedElement& e) {
  json out{{"algebra", e.algebra},
           {"value", io::forms_json(*doc.algebra(e.algebra)->space, e.coefficients, e.value)}};
  if (e.coefficients.kind != CdgaKind::rationals) out["coefficients"] = io::cdga_name(e.coefficients);
  if (e.simplex) out["simplex"] = *e.simplex;
  return out;
}

inline json document_json(const FixtureDocument& doc) {
  json out{{"algebras", json::object()}, {"morphisms", json::object()}, {"elements", json::object()}};
  for (const auto& [n, a] : doc.algebras) out["algebras"][n] = algebra_json(*a);
  for (const auto& [n, m] : doc.morphisms) out["morphisms"][n] = morphism_json(m);
  for (const auto& [n, e] : doc.elements) out["elements"][n] = element_json(doc, e);
  return out;
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline FixtureDocument parse_document(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte);
    std::string what = e.what();
    if (auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
    throw FixtureError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
  }
  if (!root.is_object()) throw FixtureError("fixture: top level must be an object");
  for (const auto& [k, v] : root.items())
    if (k != "algebras" && k != "morphisms" && k != "elements") throw FixtureError("fixture: unknown key '" + k + "'");
  FixtureDocument doc;
  if (root.contains("algebras"))
    for (const auto& [n, a] : root.at("algebras").items()) doc.algebras[n] = parse_algebra(a, "algebras." + n);
  if (root.contains("morphisms")) {
    for (const auto& [n, m] : root.at("morphisms").items()) {
      std::string where = "morphisms." + n;
      NamedMorphism nm;
      const auto& sv = io::field(m, "source", where);
      if (!sv.is_string()) throw FixtureError(where + ".source: must be an algebra name");
      nm.source = sv.get<std::string>();
      const auto& tv = io::field(m, "target", where);
      if (tv.is_string()) {
        nm.target.algebra = tv.get<std::string>();
      } else {
        const auto& ta = io::field(tv, "algebra", where + ".target");
        if (!ta.is_string()) throw FixtureError(where + ".target.algebra: must be a string");
        nm.target.algebra = ta.get<std::string>();
        const auto& cv = io::field(tv, "coefficients", where + ".target");
        if (!cv.is_string()) throw FixtureError(where + ".target.coefficients: must be a string");
        try {
          nm.target.coefficients = cdga_from_name(cv.get<std::string>());
        } catch (const ArgumentError& e) {
          throw FixtureError(where + ".target: " + e.what());
        }
        if (tv.contains("cap")) nm.target.cap = io::int_field(tv, "cap", where + ".target");
      }
      auto src = doc.algebra(nm.source);
      auto tgt = doc.algebra(nm.target.algebra);
      if (nm.target.coefficients) {
        nm.tensor_target = tensor_cdga(tgt, *nm.target.coefficients, nm.target.cap);
        tgt = nm.tensor_target->algebra;
      }
      MultiMap maps(src->space, tgt->space, 0);
      io::table_of(io::field(m, "components", where), *src->space, *tgt->space, maps, where + ".components");
      nm.morphism = {src, tgt, std::move(maps)};
      doc.morphisms[n] = std::move(nm);
    }
  }
  if (root.contains("elements")) {
    for (const auto& [n, e] : root.at("elements").items()) {
      std::string where = "elements." + n;
      NamedElement ne;
      const auto& av = io::field(e, "algebra", where);
      if (!av.is_string()) throw FixtureError(where + ".algebra: must be a string");
      ne.algebra = av.get<std::string>();
      ne.coefficients = {CdgaKind::rationals};
      if (e.contains("simplex")) {
        ne.simplex = io::int_field(e, "simplex", where);
        if (*ne.simplex < 0 || *ne.simplex > 2) throw FixtureError(where + ".simplex: must be 0, 1 or 2");
        ne.coefficients = simplex_cdga(*ne.simplex);
      }
      if (e.contains("coefficients")) {
        const auto& cv = e.at("coefficients");
        if (!cv.is_string()) throw FixtureError(where + ".coefficients: must be a string");
        try {
          ne.coefficients = cdga_from_name(cv.get<std::string>());
        } catch (const ArgumentError& ex) {
          throw FixtureError(where + ": " + ex.what());
        }
        if (ne.simplex && ne.coefficients.kind != simplex_cdga(*ne.simplex).kind)
          throw FixtureError(where + ": coefficients disagree with the simplex dimension");
      }
      ne.value = io::forms_of(*doc.algebra(ne.algebra)->space, ne.coefficients, io::field(e, "value", where), where);
      doc.elements[n] = std::move(ne);
    }
  }
  return doc;
}

inline FixtureDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open fixture '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

/** Validation reports for every algebra and morphism, keyed by name. */
inline std::vector<std::pair<std::string, ValidationReport>> validate_document(const FixtureDocument& doc) {
  std::vector<std::pair<std::string, ValidationReport>> out;
  for (const auto& [n, a] : doc.algebras) out.emplace_back("algebra " + n, validate_algebra(*a));
  for (const auto& [n, m] : doc.morphisms) out.emplace_back("morphism " + n, validate_morphism(m.morphism));
  return out;
}

}  // namespace linf
