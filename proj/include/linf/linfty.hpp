#pragma once

#include <sstream>

#include "filtered_complexes.hpp"

namespace linf {

/** Bounded filtered shifted L∞-algebra: a space and the degree-1 maps Q¹_k (Q¹₁ = d). */
struct LInftyAlgebra {
  SpacePtr space;
  MultiMap q;

  LInftyAlgebra() = default;
  LInftyAlgebra(SpacePtr s, MultiMap structure) : space(std::move(s)), q(std::move(structure)) {
    require_same_space(q.source(), space, "structure maps source");
    require_same_space(q.target(), space, "structure maps target");
  }

  LinearMap d() const { return linear_part(q); }
  FilteredComplex complex() const { return FilteredComplex(space, d()); }
  int bound() const { return space->bound(); }
  std::size_t dim() const { return space->dim(); }
};

using AlgebraPtr = std::shared_ptr<const LInftyAlgebra>;

struct LInftyMorphism {
  AlgebraPtr source, target;
  MultiMap maps;

  LinearMap linear() const { return linear_part(maps); }
};

struct ValidationFailure {
  std::string check;  // "degree", "weight", "square", "morphism", "shape"
  std::string word;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationFailure> failures;
  bool ok() const { return failures.empty(); }
  bool has(const std::string& check, const std::string& word) const {
    for (const auto& f : failures)
      if (f.check == check && f.word == word) return true;
    return false;
  }
  std::string summary() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (const auto& f : failures) os << f.check << " failure at " << f.word << ": " << f.detail << "\n";
    return os.str();
  }
};

namespace detail {

inline void check_entry_degrees(const MultiMap& m, ValidationReport& r) {
  const auto& s = *m.source();
  const auto& t = *m.target();
  for (const auto& [w, v] : m.entries())
    for (const auto& [g, c] : v)
      if (t.degree(g) != word_degree(s, w) + m.degree()) {
        r.failures.push_back({"degree", word_to_string(s, w),
                              "component " + t.id(g) + " has degree " + std::to_string(t.degree(g)) + ", expected " +
                                  std::to_string(word_degree(s, w) + m.degree())});
        break;
      }
}

inline void check_entry_weights(const MultiMap& m, ValidationReport& r) {
  for (const auto& v : check_filtration_compat(m).violations)
    r.failures.push_back({"weight", v.word, "component " + v.generator + " lies below the word weight"});
}

}  // namespace detail

/** (Q∘Q)¹ on every word of weight below the bound. */
inline MultiMap square(const MultiMap& q) {
  MultiMap out(q.source(), q.target(), 2 * q.degree());
  for (const auto& w : live_words(*q.source(), q.target()->bound())) {
    Element v;
    for (std::size_t t = 1; t <= w.size(); ++t) v += q.apply(coderivation_component(q, t, w));
    if (!v.is_zero()) out.set(w, std::move(v));
  }
  return out;
}

inline ValidationReport validate_algebra(const LInftyAlgebra& l) {
  ValidationReport r;
  if (l.q.degree() != 1) r.failures.push_back({"shape", "", "structure maps must have degree 1"});
  detail::check_entry_degrees(l.q, r);
  detail::check_entry_weights(l.q, r);
  MultiMap sq = square(l.q);
  for (const auto& [w, v] : sq.entries())
    r.failures.push_back({"square", word_to_string(*l.space, w), "(Q∘Q)¹ = " + element_to_string(*l.space, v)});
  return r;
}

inline AlgebraPtr make_algebra(SpacePtr space, MultiMap q) {
  auto l = std::make_shared<const LInftyAlgebra>(std::move(space), std::move(q));
  auto r = validate_algebra(*l);
  if (!r.ok()) throw ArgumentError("invalid L-infinity algebra:\n" + r.summary());
  return l;
}

/** Abelian algebra on a complex. */
inline AlgebraPtr abelian_algebra(const FilteredComplex& c) {
  MultiMap q(c.space(), c.space(), 1);
  for (std::size_t i = 0; i < c.space()->dim(); ++i)
    if (!c.d().column(i).is_zero()) q.set({i}, c.d().column(i));
  return std::make_shared<const LInftyAlgebra>(c.space(), std::move(q));
}

inline ValidationReport validate_morphism(const LInftyMorphism& f) {
  ValidationReport r;
  require_same_space(f.maps.source(), f.source->space, "morphism source");
  require_same_space(f.maps.target(), f.target->space, "morphism target");
  if (f.maps.degree() != 0) r.failures.push_back({"shape", "", "morphism components must have degree 0"});
  detail::check_entry_degrees(f.maps, r);
  detail::check_entry_weights(f.maps, r);
  MultiMap lhs = compose_coderivation(f.maps, f.source->q, Side::pre);
  MultiMap rhs = compose_coderivation(f.maps, f.target->q, Side::post);
  const auto& s = *f.source->space;
  for (const auto& w : live_words(s, f.target->bound())) {
    Element diff = lhs.at(w) - rhs.at(w);
    if (!diff.is_zero())
      r.failures.push_back({"morphism", word_to_string(s, w),
                            "(ΦQ)¹ - (Q'Φ)¹ = " + element_to_string(*f.target->space, diff)});
  }
  return r;
}

inline LInftyMorphism make_morphism(AlgebraPtr source, AlgebraPtr target, MultiMap maps) {
  LInftyMorphism f{std::move(source), std::move(target), std::move(maps)};
  auto r = validate_morphism(f);
  if (!r.ok()) throw ArgumentError("invalid L-infinity morphism:\n" + r.summary());
  return f;
}

inline LInftyMorphism identity(const AlgebraPtr& l) { return {l, l, identity_morphism(l->space)}; }

inline LInftyMorphism strict(const AlgebraPtr& source, const AlgebraPtr& target, const LinearMap& f) {
  return {source, target, strict_morphism(f)};
}

/** Ψ∘Φ. */
inline LInftyMorphism compose(const LInftyMorphism& psi, const LInftyMorphism& phi) {
  return {phi.source, psi.target, compose_morphisms(psi.maps, phi.maps)};
}

inline bool same_maps(const LInftyMorphism& a, const LInftyMorphism& b) { return a.maps == b.maps; }

/** First word on which two component tables differ, if any. */
inline std::optional<std::string> first_difference(const MultiMap& a, const MultiMap& b) {
  std::set<Word> words;
  for (const auto& [w, v] : a.entries()) words.insert(w);
  for (const auto& [w, v] : b.entries()) words.insert(w);
  std::vector<Word> sorted(words.begin(), words.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Word& x, const Word& y) { return x.size() < y.size(); });
  for (const auto& w : sorted)
    if (!(a.at(w) == b.at(w))) return word_to_string(*a.source(), w);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Products

struct Product {
  AlgebraPtr algebra;
  SumMaps maps;
  LInftyMorphism pr1, pr2, in1, in2;
};

inline MultiMap reindex(const MultiMap& m, const SpacePtr& src, const SpacePtr& tgt, std::size_t src_offset,
                        std::size_t tgt_offset) {
  MultiMap out(src, tgt, m.degree());
  for (const auto& [w, v] : m.entries()) {
    Word nw;
    for (auto g : w) nw.push_back(g + src_offset);
    Element nv;
    for (const auto& [g, c] : v) nv.add(g + tgt_offset, c);
    out.set(nw, std::move(nv));
  }
  return out;
}

/** Adds the entries of b into a (same spaces). */
inline void accumulate(MultiMap& a, const MultiMap& b) {
  for (const auto& [w, v] : b.entries()) a.add(w, v);
}

inline Product product(const AlgebraPtr& a, const AlgebraPtr& b) {
  Product p;
  p.maps = sum_maps(a->space, b->space);
  const auto& s = p.maps.sum;
  MultiMap q = reindex(a->q, s, s, 0, 0);
  accumulate(q, reindex(b->q, s, s, a->dim(), a->dim()));
  p.algebra = std::make_shared<const LInftyAlgebra>(s, std::move(q));
  p.pr1 = strict(p.algebra, a, p.maps.pr1);
  p.pr2 = strict(p.algebra, b, p.maps.pr2);
  p.in1 = strict(a, p.algebra, p.maps.in1);
  p.in2 = strict(b, p.algebra, p.maps.in2);
  return p;
}

/** The morphism T -> A ⊕ B induced by Φ: T -> A and Ψ: T -> B. */
inline LInftyMorphism pair(const Product& p, const LInftyMorphism& f, const LInftyMorphism& g) {
  const auto& s = p.maps.sum;
  MultiMap m = reindex(f.maps, f.source->space, s, 0, 0);
  accumulate(m, reindex(g.maps, g.source->space, s, 0, f.target->dim()));
  return {f.source, p.algebra, std::move(m)};
}

// ---------------------------------------------------------------------------
// Quotient towers

struct Quotient {
  AlgebraPtr algebra;                // L / F_n L, bounded at n
  LInftyMorphism projection;         // p_(n), strict
  std::vector<std::size_t> kept;     // generator indices of L that survive
  AlgebraPtr piece;                  // F_{n-1}L / F_n L as an abelian algebra
  LInftyMorphism piece_inclusion;    // strict, into L / F_n L
};

inline Quotient quotient_truncation(const AlgebraPtr& l, int n) {
  const auto& s = *l->space;
  if (n < 1 || n > s.bound()) throw ArgumentError("quotient level must lie in [1, bound]");
  Quotient out;
  std::vector<Generator> gens, piece_gens;
  std::vector<long> pos(s.dim(), -1), piece_pos(s.dim(), -1);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (s.weight(i) >= n) continue;
    pos[i] = static_cast<long>(out.kept.size());
    out.kept.push_back(i);
    gens.push_back(s.gen(i));
    if (s.weight(i) == n - 1) {
      piece_pos[i] = static_cast<long>(piece_gens.size());
      piece_gens.push_back(s.gen(i));
    }
  }
  auto qs = make_space(std::move(gens), n);
  auto ps = make_space(std::move(piece_gens), n);
  auto project = [&](const Element& v, const std::vector<long>& where) {
    Element e;
    for (const auto& [g, c] : v)
      if (where[g] >= 0) e.add(static_cast<std::size_t>(where[g]), c);
    return e;
  };
  MultiMap q(qs, qs, 1);
  for (const auto& [w, v] : l->q.entries()) {
    if (word_weight(s, w) >= n) continue;
    Word nw;
    for (auto g : w) nw.push_back(static_cast<std::size_t>(pos[g]));
    q.set(nw, project(v, pos));
  }
  out.algebra = std::make_shared<const LInftyAlgebra>(qs, std::move(q));
  LinearMap p(l->space, qs, 0);
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (pos[i] >= 0) p.set_column(i, Element::unit(static_cast<std::size_t>(pos[i])));
  out.projection = strict(l, out.algebra, p);
  MultiMap dq(ps, ps, 1);
  LinearMap inc(ps, qs, 0);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (piece_pos[i] < 0) continue;
    auto pi = static_cast<std::size_t>(piece_pos[i]);
    Element dv = project(l->q.at({i}), piece_pos);
    if (!dv.is_zero()) dq.set({pi}, dv);
    inc.set_column(pi, Element::unit(static_cast<std::size_t>(pos[i])));
  }
  out.piece = std::make_shared<const LInftyAlgebra>(ps, std::move(dq));
  out.piece_inclusion = strict(out.piece, out.algebra, inc);
  return out;
}

/** Φ_(n) : L/F_n L -> L'/F_n L'. */
inline LInftyMorphism quotient_morphism(const LInftyMorphism& f, const Quotient& src, const Quotient& tgt) {
  const auto& s = *f.source->space;
  const auto& t = *f.target->space;
  int n = src.algebra->bound();
  std::vector<long> spos(s.dim(), -1), tpos(t.dim(), -1);
  for (std::size_t i = 0; i < src.kept.size(); ++i) spos[src.kept[i]] = static_cast<long>(i);
  for (std::size_t i = 0; i < tgt.kept.size(); ++i) tpos[tgt.kept[i]] = static_cast<long>(i);
  MultiMap m(src.algebra->space, tgt.algebra->space, 0);
  for (const auto& [w, v] : f.maps.entries()) {
    if (word_weight(s, w) >= n) continue;
    Word nw;
    for (auto g : w) nw.push_back(static_cast<std::size_t>(spos[g]));
    Element e;
    for (const auto& [g, c] : v)
      if (tpos[g] >= 0) e.add(static_cast<std::size_t>(tpos[g]), c);
    m.set(nw, std::move(e));
  }
  return {src.algebra, tgt.algebra, std::move(m)};
}

// ---------------------------------------------------------------------------
// Lower central series

struct LowerCentralSeries {
  std::vector<Subspace> gamma;  // gamma[k-1] = Γ_k
  int nilpotency_index = 1;     // first k with Γ_k = 0
};

inline LowerCentralSeries lower_central_series(const LInftyAlgebra& l) {
  const auto& s = *l.space;
  LowerCentralSeries out;
  std::vector<Element> all;
  for (std::size_t i = 0; i < s.dim(); ++i) all.push_back(Element::unit(i));
  out.gamma.emplace_back(all);
  if (s.dim() == 0) return out;
  const std::size_t max_m = l.q.max_arity();
  for (int k = 2;; ++k) {
    Subspace g;
    for (std::size_t m = 2; m <= max_m; ++m) {
      // nondecreasing index tuples i_1 <= ... <= i_m, each < k, summing to >= k
      std::vector<int> idx(m, 1);
      auto rec = [&](auto&& self, std::size_t pos, int from, int sum) -> void {
        if (pos == m) {
          if (sum < k) return;
          std::vector<const std::vector<Element>*> bases;
          for (auto i : idx) bases.push_back(&out.gamma[i - 1].basis());
          std::vector<const Element*> args(m);
          auto fill = [&](auto&& inner, std::size_t j) -> void {
            if (j == m) {
              g.insert(l.q.evaluate(std::span<const Element* const>(args.data(), m)));
              return;
            }
            for (const auto& b : *bases[j]) {
              args[j] = &b;
              inner(inner, j + 1);
            }
          };
          fill(fill, 0);
          return;
        }
        for (int i = from; i < k; ++i) {
          idx[pos] = i;
          self(self, pos + 1, i, sum + i);
        }
      };
      rec(rec, 0, 1, 0);
    }
    bool zero = g.dim() == 0;
    out.gamma.push_back(std::move(g));
    if (zero) {
      out.nilpotency_index = k;
      break;
    }
    if (k > 4 * s.bound() + 8) throw std::logic_error("lower central series does not terminate");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tensoring with coefficient cdgas

struct TensorAlgebra {
  TensorBasis basis;
  AlgebraPtr algebra;

  FormElement forms(const Element& v) const { return basis.to_forms(v); }
  Element element(const FormElement& f) const { return basis.to_element(f); }
};

inline TensorAlgebra tensor_cdga(const AlgebraPtr& l, Cdga b, int cap = 1) {
  TensorAlgebra t;
  t.basis = make_tensor_basis(l->space, b, cap);
  t.algebra = std::make_shared<const LInftyAlgebra>(t.basis.space, tensor_table(l->q, t.basis, t.basis, true));
  return t;
}

inline LInftyMorphism tensor_morphism(const LInftyMorphism& f, const TensorAlgebra& src, const TensorAlgebra& tgt) {
  return {src.algebra, tgt.algebra, tensor_table(f.maps, src.basis, tgt.basis, false)};
}

/** Strict morphism L⊗B -> L⊗B' induced by a cdga map given on basis monomials. */
template <class F>
LInftyMorphism coefficient_morphism(const TensorAlgebra& src, const TensorAlgebra& tgt, F&& on_monomial) {
  LinearMap m(src.algebra->space, tgt.algebra->space, 0);
  for (std::size_t i = 0; i < src.basis.decode.size(); ++i) {
    const auto& [g, mono] = src.basis.decode[i];
    PolyForm img = on_monomial(mono);
    m.set_column(i, tgt.basis.to_element(tensor(Element::unit(g), img)));
  }
  return strict(src.algebra, tgt.algebra, m);
}

/** Evaluation L⊗Ω₁ -> L at z = point. */
inline LInftyMorphism path_evaluation(const TensorAlgebra& path, const AlgebraPtr& l, int point) {
  return strict(path.algebra, l, evaluate_path(path.basis, point));
}

/** Constant paths L -> L⊗Ω₁. */
inline LInftyMorphism constant_path(const AlgebraPtr& l, const TensorAlgebra& path) {
  return strict(l, path.algebra, constant_paths(path.basis));
}

/** Reversal z ↦ 1 - z on L⊗Ω₁. */
inline LInftyMorphism path_reversal(const TensorAlgebra& path) {
  Cdga b{CdgaKind::omega1};
  PolyForm one_minus_z = PolyForm::coordinate(b, 0);
  return coefficient_morphism(path, path, [&](const FormMonomial& m) {
    return substitute(PolyForm(b, Sparse<FormMonomial>::unit(m)), b, {one_minus_z});
  });
}

// ---------------------------------------------------------------------------
// Classification, inversion, transport

inline Classification classify_linfty_morphism(const LInftyMorphism& f) {
  return classify_linear(f.source->complex(), f.target->complex(), f.linear());
}

/** Inverse of an L∞ isomorphism, or nullopt when the linear term has no filtered inverse. */
inline std::optional<LInftyMorphism> invert(const LInftyMorphism& f) {
  auto inv = filtered_inverse(f.linear());
  if (!inv) return std::nullopt;
  return LInftyMorphism{f.target, f.source, invert_coalgebra_map(f.maps, *inv)};
}

/** Q̄ = Ψ⁻¹ Q Ψ for a coalgebra isomorphism Ψ: S(L̄) -> S(L). */
inline MultiMap conjugate_structure(const MultiMap& q, const MultiMap& psi, const MultiMap& psi_inv) {
  MultiMap out(psi.source(), psi.source(), q.degree());
  for (const auto& w : live_words(*psi.source(), psi.source()->bound())) {
    WordSum x = apply_coderivation(q, apply_morphism(psi, WordSum::unit(w)));
    Element v = psi_inv.apply(x);
    if (!v.is_zero()) out.set(w, std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builders keyed by generator ids

using Terms = std::vector<std::pair<std::string, Scalar>>;

inline Element element_from_terms(const FilteredSpace& s, const Terms& terms) {
  Element e;
  for (const auto& [id, c] : terms) e.add(s.index(id), c);
  return e;
}

/** Assembles an algebra from generator records and id-keyed table entries. */
class AlgebraBuilder {
 public:
  explicit AlgebraBuilder(int bound) : bound_(bound) {}

  AlgebraBuilder& gen(std::string id, int degree, int weight) {
    gens_.push_back({std::move(id), degree, weight});
    return *this;
  }
  AlgebraBuilder& d(std::string x, Terms value) { return bracket({std::move(x)}, std::move(value)); }
  AlgebraBuilder& bracket(std::vector<std::string> word, Terms value) {
    entries_.emplace_back(std::move(word), std::move(value));
    return *this;
  }

  SpacePtr space() const { return make_space(gens_, bound_); }

  /** Builds without validation (for perturbation experiments). */
  AlgebraPtr build_raw() const {
    auto s = space();
    MultiMap q(s, s, 1);
    for (const auto& [word, value] : entries_) {
      Word raw;
      for (const auto& id : word) raw.push_back(s->index(id));
      auto n = normalize_word(*s, raw);
      if (!n) throw ArgumentError("bracket entry on a vanishing word");
      q.add(n->word, element_from_terms(*s, value) * Scalar(n->sign));
    }
    return std::make_shared<const LInftyAlgebra>(s, std::move(q));
  }

  AlgebraPtr build() const {
    auto l = build_raw();
    auto r = validate_algebra(*l);
    if (!r.ok()) throw ArgumentError("invalid L-infinity algebra:\n" + r.summary());
    return l;
  }

 private:
  int bound_;
  std::vector<Generator> gens_;
  std::vector<std::pair<std::vector<std::string>, Terms>> entries_;
};

/** Component table of a morphism keyed by ids. */
inline MultiMap morphism_table(const AlgebraPtr& source, const AlgebraPtr& target,
                               const std::vector<std::pair<std::vector<std::string>, Terms>>& entries) {
  MultiMap m(source->space, target->space, 0);
  for (const auto& [word, value] : entries) {
    Word raw;
    for (const auto& id : word) raw.push_back(source->space->index(id));
    auto n = normalize_word(*source->space, raw);
    if (!n) throw ArgumentError("morphism entry on a vanishing word");
    m.add(n->word, element_from_terms(*target->space, value) * Scalar(n->sign));
  }
  return m;
}

}  // namespace linf
