#pragma once

#include "forms.hpp"

namespace linf {

/** Complete filtered cochain complex with a generator-aligned bounded filtration. */
class FilteredComplex {
 public:
  FilteredComplex() = default;
  FilteredComplex(SpacePtr space, LinearMap d) : space_(std::move(space)), d_(std::move(d)) {
    require_same_space(d_.source(), space_, "differential source");
    require_same_space(d_.target(), space_, "differential target");
    if (d_.shift() != 1) throw ArgumentError("differential must have degree +1");
    if (!d_.degrees_ok()) throw ArgumentError("differential has a component of the wrong degree");
    if (!d_.is_filtered()) throw ArgumentError("differential does not preserve the filtration");
    if (!compose(d_, d_).is_zero()) throw ArgumentError("differential does not square to zero");
  }

  static FilteredComplex zero_differential(const SpacePtr& s) { return FilteredComplex(s, LinearMap(s, s, 1)); }

  const SpacePtr& space() const { return space_; }
  const LinearMap& d() const { return d_; }

 private:
  SpacePtr space_;
  LinearMap d_;
};

/** Filtered chain map. */
class ChainMap {
 public:
  ChainMap(FilteredComplex source, FilteredComplex target, LinearMap f)
      : source_(std::move(source)), target_(std::move(target)), f_(std::move(f)) {
    require_same_space(f_.source(), source_.space(), "chain map source");
    require_same_space(f_.target(), target_.space(), "chain map target");
    if (f_.shift() != 0 || !f_.degrees_ok()) throw ArgumentError("chain map must have degree 0");
    if (!f_.is_filtered()) throw ArgumentError("chain map is not filtered");
    if (!(compose(target_.d(), f_) == compose(f_, source_.d())))
      throw ArgumentError("map does not commute with the differentials");
  }

  const FilteredComplex& source() const { return source_; }
  const FilteredComplex& target() const { return target_; }
  const LinearMap& map() const { return f_; }

 private:
  FilteredComplex source_, target_;
  LinearMap f_;
};

namespace detail {

inline Element vector_to_element(const std::vector<Scalar>& x, const std::vector<std::size_t>& idx) {
  Element e;
  for (std::size_t i = 0; i < idx.size(); ++i) e.add(idx[i], x[i]);
  return e;
}

inline std::vector<Scalar> element_to_vector(const Element& v, const std::vector<std::size_t>& idx) {
  std::vector<Scalar> x(idx.size());
  std::unordered_map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = i;
  for (const auto& [g, c] : v) {
    auto it = pos.find(g);
    if (it != pos.end()) x[it->second] = c;
  }
  return x;
}

inline int min_degree(const FilteredSpace& a) {
  auto d = a.degrees();
  return d.empty() ? 0 : d.front();
}
inline int max_degree(const FilteredSpace& a) {
  auto d = a.degrees();
  return d.empty() ? 0 : d.back();
}

/** Solves the graded piece gr_n f (x) = rhs with x spanned by weight-n source generators. */
class GradedSolver {
 public:
  GradedSolver(const LinearMap& f, int n) : f_(f), n_(n) {}

  std::optional<Element> solve(int degree, const Element& rhs) {
    auto& sys = system(degree);
    auto r = rref_solve(sys.m, element_to_vector(rhs, sys.rows));
    if (!r.solution) return std::nullopt;
    return vector_to_element(*r.solution, sys.cols);
  }

  /** Basis of ker gr_n f in the given degree. */
  std::vector<Element> kernel(int degree) {
    auto& sys = system(degree);
    std::vector<Element> out;
    for (const auto& v : null_space(sys.m)) out.push_back(vector_to_element(v, sys.cols));
    return out;
  }

 private:
  struct System {
    std::vector<std::size_t> cols, rows;
    Matrix m;
  };
  System& system(int degree) {
    auto it = cache_.find(degree);
    if (it != cache_.end()) return it->second;
    System s;
    s.cols = f_.source()->select(degree, n_, n_);
    s.rows = f_.target()->select(degree + f_.shift(), n_, n_);
    s.m = restrict_matrix(f_, s.cols, s.rows);
    return cache_.emplace(degree, std::move(s)).first->second;
  }
  const LinearMap& f_;
  int n_;
  std::map<int, System> cache_;
};

}  // namespace detail

struct Cohomology {
  std::size_t dimension = 0;
  std::vector<Element> representatives;
};

/** H^k(F_n C). */
inline Cohomology cohomology(const FilteredComplex& c, int n, int k) {
  const auto& s = *c.space();
  auto ck = s.select(k, n);
  auto ck1 = s.select(k + 1, n);
  auto ckm = s.select(k - 1, n);
  Subspace boundaries;
  for (auto g : ckm) boundaries.insert(weight_band(s, c.d().column(g), n, s.bound()));
  Cohomology out;
  for (const auto& z : null_space(restrict_matrix(c.d(), ck, ck1))) {
    Element v = detail::vector_to_element(z, ck);
    if (boundaries.insert(v)) out.representatives.push_back(v);
  }
  out.dimension = out.representatives.size();
  return out;
}

namespace detail {

/** Whether H^k(F_n f) : H^k(F_n V) -> H^k(F_n W) is bijective. */
inline bool induced_iso(const FilteredComplex& v, const FilteredComplex& w, const LinearMap& f, int n, int k) {
  const auto& sw = *w.space();
  auto hv = cohomology(v, n, k);
  auto hw = cohomology(w, n, k);
  if (hv.dimension != hw.dimension) return false;
  Subspace image;
  for (auto g : sw.select(k - 1, n)) image.insert(weight_band(sw, w.d().column(g), n, sw.bound()));
  std::size_t boundaries = image.dim();
  for (const auto& z : hv.representatives) image.insert(f(z));
  return image.dim() - boundaries == hw.dimension;
}

}  // namespace detail

struct LevelEvidence {
  int level = 0;
  bool quasi_isomorphism = true;
  bool surjective = true;
  std::vector<int> non_quasi_iso_degrees;
  std::vector<int> non_surjective_degrees;
};

struct Classification {
  bool weak_equivalence = true;
  bool fibration = true;
  std::vector<LevelEvidence> levels;
  bool acyclic_fibration() const { return weak_equivalence && fibration; }
};

/** Level-wise quasi-isomorphism (mapping cone acyclicity) and surjectivity of F_n f. */
inline Classification classify_linear(const FilteredComplex& v, const FilteredComplex& w, const LinearMap& f) {
  const auto& sv = *v.space();
  const auto& sw = *w.space();
  Classification out;
  int top = std::max(sv.bound(), sw.bound());
  int lo = std::min(detail::min_degree(sv), detail::min_degree(sw)) - 2;
  int hi = std::max(detail::max_degree(sv), detail::max_degree(sw)) + 2;
  for (int n = 1; n < top; ++n) {
    LevelEvidence ev;
    ev.level = n;
    // cone^k = V^{k+1} ⊕ W^k, d(x, y) = (-dx, f x + d y)
    auto cone_rank = [&](int k) {
      auto vc = sv.select(k + 1, n), wc = sw.select(k, n);
      auto vr = sv.select(k + 2, n), wr = sw.select(k + 1, n);
      Matrix m(vr.size() + wr.size(), vc.size() + wc.size());
      std::unordered_map<std::size_t, std::size_t> rv, rw;
      for (std::size_t i = 0; i < vr.size(); ++i) rv[vr[i]] = i;
      for (std::size_t i = 0; i < wr.size(); ++i) rw[wr[i]] = vr.size() + i;
      for (std::size_t c = 0; c < vc.size(); ++c) {
        for (const auto& [g, x] : v.d().column(vc[c]))
          if (rv.count(g)) m.set(rv[g], c, -x);
        for (const auto& [g, x] : f.column(vc[c]))
          if (rw.count(g)) m.add(rw[g], c, x);
      }
      for (std::size_t c = 0; c < wc.size(); ++c)
        for (const auto& [g, x] : w.d().column(wc[c]))
          if (rw.count(g)) m.set(rw[g], vc.size() + c, x);
      return std::pair{rank(m), vc.size() + wc.size()};
    };
    std::map<int, std::pair<std::size_t, std::size_t>> ranks;
    for (int k = lo - 1; k <= hi; ++k) ranks[k] = cone_rank(k);
    bool cone_acyclic = true;
    for (int k = lo; k <= hi; ++k) {
      auto [rk, dim] = ranks[k];
      if (dim != rk + ranks[k - 1].first) cone_acyclic = false;
    }
    // report the degrees where H^k(F_n f) itself fails to be bijective
    for (int k = lo; k <= hi; ++k)
      if (!detail::induced_iso(v, w, f, n, k)) ev.non_quasi_iso_degrees.push_back(k);
    if (cone_acyclic != ev.non_quasi_iso_degrees.empty())
      throw std::logic_error("mapping cone and induced map disagree");
    for (int k = lo; k <= hi; ++k) {
      auto cols = sv.select(k, n), rows = sw.select(k, n);
      if (rank(restrict_matrix(f, cols, rows)) != rows.size()) ev.non_surjective_degrees.push_back(k);
    }
    ev.quasi_isomorphism = ev.non_quasi_iso_degrees.empty();
    ev.surjective = ev.non_surjective_degrees.empty();
    out.weak_equivalence = out.weak_equivalence && ev.quasi_isomorphism;
    out.fibration = out.fibration && ev.surjective;
    out.levels.push_back(std::move(ev));
  }
  return out;
}

inline Classification classify_chain_map(const ChainMap& f) { return classify_linear(f.source(), f.target(), f.map()); }

namespace detail {

/** One step of the tower construction of a section: corrects sigma at weight n. */
inline void section_step(const LinearMap& f, LinearMap& sigma, int n, GradedSolver& gr) {
  const auto& sw = *f.target();
  for (std::size_t y = 0; y < sw.dim(); ++y) {
    if (sw.weight(y) > n) continue;
    Element approx = sw.weight(y) < n ? sigma.column(y) : Element{};
    Element theta = weight_band(sw, f(approx) - Element::unit(y), n, n);
    Element x;
    if (!theta.is_zero()) {
      auto sol = gr.solve(sw.degree(y), theta);
      if (!sol)
        throw PreconditionError("map is not surjective at filtration level " + std::to_string(n) + ", degree " +
                                std::to_string(sw.degree(y)));
      x = *sol;
    }
    sigma.set_column(y, approx - x);
  }
}

/** Index bookkeeping for unknown linear maps into a fixed list of basis vectors per degree. */
struct HomUnknowns {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;  // (source gen, basis slot) -> column
  std::vector<std::pair<std::size_t, std::size_t>> slots;
};

/**
 * Solves for a map e from the generators of weight <= n (of `space`) into the
 * span of `basis_of(degree)` satisfying   outer(e(x)) + sign * e(inner(x)) = rhs(x),
 * all read in weight-n components. `shift` is the degree of e.
 */
template <class Outer, class Inner, class Basis>
std::optional<std::vector<Element>> solve_hom_equation(const FilteredSpace& src, const FilteredSpace& tgt, int n,
                                                       int shift, const std::vector<Element>& rhs, Outer&& outer,
                                                       Inner&& inner, int sign, Basis&& basis_of) {
  HomUnknowns u;
  std::vector<std::size_t> xs;
  std::map<std::size_t, std::vector<Element>> bases;
  for (std::size_t x = 0; x < src.dim(); ++x) {
    if (src.weight(x) > n) continue;
    xs.push_back(x);
    auto& b = bases[x] = basis_of(src.degree(x) + shift);
    for (std::size_t j = 0; j < b.size(); ++j) {
      u.index[{x, j}] = u.slots.size();
      u.slots.push_back({x, j});
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> row_of;
  auto row = [&](std::size_t x, std::size_t g) {
    auto [it, ins] = row_of.try_emplace({x, g}, row_of.size());
    return it->second;
  };
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> entries;
  for (auto x : xs) {
    for (std::size_t j = 0; j < bases[x].size(); ++j) {
      Element img = weight_band(tgt, outer(bases[x][j]), n, n);
      for (const auto& [g, c] : img) entries.emplace_back(row(x, g), u.index[{x, j}], c);
    }
    Element ix = weight_band(src, inner(x), 0, n);
    for (const auto& [y, c] : ix) {
      if (src.weight(y) > n) continue;
      for (std::size_t j = 0; j < bases[y].size(); ++j)
        for (const auto& [g, v] : weight_band(tgt, bases[y][j], n, n))
          entries.emplace_back(row(x, g), u.index[{y, j}], c * v * sign);
    }
    for (const auto& [g, c] : weight_band(tgt, rhs[x], n, n)) row(x, g);
  }
  Matrix m(row_of.size(), u.slots.size());
  for (const auto& [r, c, v] : entries) m.add(r, c, v);
  std::vector<Scalar> b(row_of.size());
  for (auto x : xs)
    for (const auto& [g, c] : weight_band(tgt, rhs[x], n, n)) b[row_of.at({x, g})] = c;
  auto sol = rref_solve(m, b);
  if (!sol.solution) return std::nullopt;
  std::vector<Element> out(src.dim());
  for (std::size_t k = 0; k < u.slots.size(); ++k) {
    const auto& [x, j] = u.slots[k];
    out[x].add_scaled(bases[x][j], (*sol.solution)[k]);
  }
  return out;
}

}  // namespace detail

/** Filtered degree-0 section σ of a level-wise surjective filtered map, built level by level. */
inline LinearMap split_section_linear(const LinearMap& f) {
  LinearMap sigma(f.target(), f.source(), 0);
  int top = std::max(f.source()->bound(), f.target()->bound());
  for (int n = 1; n < top; ++n) {
    detail::GradedSolver gr(f, n);
    detail::section_step(f, sigma, n, gr);
  }
  return sigma;
}

/**
 * Section of f. With chain_level, a chain map τ with fτ = id, obtained by
 * correcting each level's section inside the acyclic complex ker gr_n f.
 */
inline LinearMap split_section(const ChainMap& fc, bool chain_level) {
  if (!chain_level) return split_section_linear(fc.map());
  const auto& f = fc.map();
  const auto& sv = *f.source();
  const auto& sw = *f.target();
  const auto& d = fc.source().d();
  const auto& dp = fc.target().d();
  LinearMap tau(f.target(), f.source(), 0);
  int top = std::max(sv.bound(), sw.bound());
  for (int n = 1; n < top; ++n) {
    detail::GradedSolver gr(f, n);
    detail::section_step(f, tau, n, gr);
    std::vector<Element> theta(sw.dim());
    for (std::size_t y = 0; y < sw.dim(); ++y) {
      if (sw.weight(y) > n) continue;
      Element t = d(tau.column(y)) - tau(weight_band(sw, dp.column(y), 0, n));
      if (!weight_band(sv, t, 0, n - 1).is_zero()) throw std::logic_error("section step left a low-weight defect");
      theta[y] = weight_band(sv, t, n, n);
    }
    auto eta = detail::solve_hom_equation(
        sw, sv, n, 0, theta, [&](const Element& e) { return d(e); },
        [&](std::size_t y) { return dp.column(y); }, -1, [&](int k) { return gr.kernel(k); });
    if (!eta) throw PreconditionError("not an acyclic fibration at filtration level " + std::to_string(n));
    for (std::size_t y = 0; y < sw.dim(); ++y)
      if (sw.weight(y) <= n) tau.set_column(y, tau.column(y) - (*eta)[y]);
  }
  return tau;
}

/**
 * Degree -1 map h into ker f with id - τf = dh + hd, built level by level:
 * lift the previous h into ker f_(n+1), then remove the defect by solving in
 * Hom(V/F_{n+1}, ker F_n f_(n+1)).
 */
inline LinearMap acyclic_fib_homotopy(const ChainMap& fc, const LinearMap& tau) {
  const auto& f = fc.map();
  const auto& sv = *f.source();
  const auto& d = fc.source().d();
  if (!(compose(f, tau) == LinearMap::identity(f.target()))) throw PreconditionError("f∘τ is not the identity");
  LinearMap g = LinearMap::identity(f.source()) - compose(tau, f);
  LinearMap h(f.source(), f.source(), -1);
  int top = std::max(sv.bound(), f.target()->bound());
  for (int n = 1; n < top; ++n) {
    detail::GradedSolver gr(f, n);
    LinearMap kappa(f.source(), f.source(), -1);
    for (std::size_t x = 0; x < sv.dim(); ++x) {
      if (sv.weight(x) >= n) continue;
      Element v = h.column(x);
      Element r = weight_band(*f.target(), f(v), n, n);
      Element c;
      if (!r.is_zero()) {
        auto sol = gr.solve(sv.degree(x) - 1, r);
        if (!sol) throw PreconditionError("not a fibration at filtration level " + std::to_string(n));
        c = *sol;
      }
      kappa.set_column(x, v - c);
    }
    std::vector<Element> lambda(sv.dim());
    for (std::size_t x = 0; x < sv.dim(); ++x) {
      if (sv.weight(x) > n) continue;
      Element l = d(kappa.column(x)) + kappa(weight_band(sv, d.column(x), 0, n)) - g.column(x);
      if (!weight_band(sv, l, 0, n - 1).is_zero()) throw std::logic_error("homotopy step left a low-weight defect");
      lambda[x] = weight_band(sv, l, n, n);
    }
    auto rho = detail::solve_hom_equation(
        sv, sv, n, -1, lambda, [&](const Element& e) { return d(e); }, [&](std::size_t x) { return d.column(x); },
        +1, [&](int k) { return gr.kernel(k); });
    if (!rho) throw PreconditionError("not an acyclic fibration at filtration level " + std::to_string(n));
    for (std::size_t x = 0; x < sv.dim(); ++x)
      if (sv.weight(x) <= n) h.set_column(x, kappa.column(x) - (*rho)[x]);
  }
  return h;
}

struct AcyclicFibData {
  LinearMap tau;  // chain-map section
  LinearMap h;    // degree -1, id - τf = dh + hd, lands in ker f
};

inline AcyclicFibData acyclic_fib_data(const ChainMap& f) {
  auto cls = classify_chain_map(f);
  if (!cls.acyclic_fibration()) throw PreconditionError("map is not an acyclic fibration");
  LinearMap tau = split_section(f, true);
  LinearMap h = acyclic_fib_homotopy(f, tau);
  return {std::move(tau), std::move(h)};
}

/** ker f with a filtration-adapted basis, as a space of its own. */
struct FilteredKernel {
  SpacePtr space;
  LinearMap inclusion;  // space -> source of f
  Subspace span;

  Element coordinates(const Element& v) const {
    auto c = span.coordinates(v);
    if (!c) throw std::logic_error("vector does not lie in the kernel");
    return *c;
  }
  bool contains(const Element& v) const { return span.contains(v); }
};

inline FilteredKernel filtered_kernel(const LinearMap& f, const std::string& prefix = "ker") {
  const auto& sv = *f.source();
  const auto& sw = *f.target();
  struct Found {
    int degree, weight;
    Element vec;
  };
  std::vector<Found> found;
  for (int k : sv.degrees()) {
    Subspace acc;
    for (int n = sv.bound() - 1; n >= 1; --n) {
      auto cols = sv.select(k, n);
      auto rows = sw.select(k + f.shift());
      for (const auto& z : null_space(restrict_matrix(f, cols, rows))) {
        Element v = detail::vector_to_element(z, cols);
        if (acc.insert(v)) found.push_back({k, n, v});
      }
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const Found& a, const Found& b) { return a.vec.begin()->first < b.vec.begin()->first; });
  std::vector<Generator> gens;
  FilteredKernel out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    gens.push_back({prefix + std::to_string(i + 1), found[i].degree, found[i].weight});
    out.span.insert(found[i].vec);
  }
  out.space = make_space(std::move(gens), sv.bound());
  out.inclusion = LinearMap(out.space, f.source(), 0);
  for (std::size_t i = 0; i < found.size(); ++i) out.inclusion.set_column(i, found[i].vec);
  return out;
}

/** Direct sum inclusions/projections between a, b and a ⊕ b (as built by direct_sum_space). */
struct SumMaps {
  SpacePtr sum;
  LinearMap in1, in2, pr1, pr2;
};

inline SumMaps sum_maps(const SpacePtr& a, const SpacePtr& b) {
  SumMaps m{direct_sum_space(*a, *b), {}, {}, {}, {}};
  m.in1 = LinearMap(a, m.sum);
  m.in2 = LinearMap(b, m.sum);
  m.pr1 = LinearMap(m.sum, a);
  m.pr2 = LinearMap(m.sum, b);
  for (std::size_t i = 0; i < a->dim(); ++i) {
    m.in1.set_column(i, Element::unit(i));
    m.pr1.set_column(i, Element::unit(i));
  }
  for (std::size_t i = 0; i < b->dim(); ++i) {
    m.in2.set_column(i, Element::unit(a->dim() + i));
    m.pr2.set_column(a->dim() + i, Element::unit(i));
  }
  return m;
}

/** (f, g): T -> A ⊕ B. */
inline LinearMap pair_maps(const SumMaps& s, const LinearMap& f, const LinearMap& g) {
  return compose(s.in1, f) + compose(s.in2, g);
}

/** f ⊕ g on a direct sum. */
inline LinearMap sum_of_maps(const SumMaps& src, const SumMaps& tgt, const LinearMap& f, const LinearMap& g) {
  return compose(tgt.in1, compose(f, src.pr1)) + compose(tgt.in2, compose(g, src.pr2));
}

/** Pullback of a fibration f : V -> U along g : W -> U, realized on W ⊕ ker f. */
struct ComplexPullback {
  FilteredComplex complex;
  FilteredKernel kernel;
  LinearMap section;  // σ : U -> V with fσ = id
  SumMaps pk;         // W ⊕ K
  SumMaps wv;         // W ⊕ V
  LinearMap h;        // P -> W ⊕ V, (w, k) ↦ (w, σg(w) + k)
  LinearMap g;
  LinearMap to_w, to_v;

  /** j(w, v) = (w, v - σg(w)); requires v - σg(w) ∈ ker f. */
  Element j(const Element& wv_elem) const {
    Element w = wv.pr1(wv_elem);
    Element v = wv.pr2(wv_elem) - section(g(w));
    return pk.in1(w) + pk.in2(kernel.coordinates(v));
  }

  /** The unique map T -> P with to_w∘m = a and to_v∘m = b. */
  LinearMap mediator(const LinearMap& a, const LinearMap& b) const {
    LinearMap m(a.source(), complex.space(), 0);
    for (std::size_t t = 0; t < a.source()->dim(); ++t)
      m.set_column(t, j(wv.in1(a.column(t)) + wv.in2(b.column(t))));
    return m;
  }
};

inline ComplexPullback pullback_complexes(const ChainMap& f, const ChainMap& g) {
  require_same_space(f.target().space(), g.target().space(), "pullback: common target");
  auto cls = classify_chain_map(f);
  if (!cls.fibration) throw PreconditionError("pullback: map is not a fibration");
  ComplexPullback p;
  p.section = split_section(f, false);
  p.kernel = filtered_kernel(f.map());
  p.g = g.map();
  const auto& W = g.source().space();
  const auto& V = f.source().space();
  p.pk = sum_maps(W, p.kernel.space);
  p.wv = sum_maps(W, V);
  p.h = LinearMap(p.pk.sum, p.wv.sum, 0);
  for (std::size_t i = 0; i < W->dim(); ++i) {
    Element w = Element::unit(i);
    p.h.set_column(i, p.wv.in1(w) + p.wv.in2(p.section(p.g(w))));
  }
  for (std::size_t i = 0; i < p.kernel.space->dim(); ++i)
    p.h.set_column(W->dim() + i, p.wv.in2(p.kernel.inclusion.column(i)));
  LinearMap dsum = sum_of_maps(p.wv, p.wv, g.source().d(), f.source().d());
  LinearMap dt(p.pk.sum, p.pk.sum, 1);
  for (std::size_t i = 0; i < p.pk.sum->dim(); ++i) dt.set_column(i, p.j(dsum(p.h.column(i))));
  p.complex = FilteredComplex(p.pk.sum, dt);
  p.to_w = compose(p.wv.pr1, p.h);
  p.to_v = compose(p.wv.pr2, p.h);
  return p;
}

/** C⊗Ω₁ (size-capped) with the constant inclusion s and endpoint evaluations. */
struct PathComplex {
  FilteredComplex complex;
  TensorBasis basis;
  LinearMap s, d0, d1;
  SumMaps doubled;  // C ⊕ C
  LinearMap ends;   // (d0, d1)
};

/** Evaluation of L⊗Ω₁ at z = point (0 or 1), as a strict linear map. */
inline LinearMap evaluate_path(const TensorBasis& tb, int point) {
  LinearMap ev(tb.space, tb.base, 0);
  for (std::size_t i = 0; i < tb.decode.size(); ++i) {
    const auto& [g, m] = tb.decode[i];
    if (m.mask == 0 && (point == 1 || m.exp[0] == 0)) ev.set_column(i, Element::unit(g));
  }
  return ev;
}

inline LinearMap constant_paths(const TensorBasis& tb) {
  LinearMap s(tb.base, tb.space, 0);
  for (std::size_t g = 0; g < tb.base->dim(); ++g) s.set_column(g, Element::unit(*tb.index({g, FormMonomial{}})));
  return s;
}

inline PathComplex path_complex(const FilteredComplex& c, int cap = 1) {
  PathComplex p;
  p.basis = make_tensor_basis(c.space(), {CdgaKind::omega1}, cap);
  MultiMap d(c.space(), c.space(), 1);
  for (std::size_t i = 0; i < c.space()->dim(); ++i)
    if (!c.d().column(i).is_zero()) d.set({i}, c.d().column(i));
  p.complex = FilteredComplex(p.basis.space, linear_part(tensor_table(d, p.basis, p.basis, true)));
  p.s = constant_paths(p.basis);
  p.d0 = evaluate_path(p.basis, 0);
  p.d1 = evaluate_path(p.basis, 1);
  p.doubled = sum_maps(c.space(), c.space());
  p.ends = pair_maps(p.doubled, p.d0, p.d1);
  return p;
}

}  // namespace linf
