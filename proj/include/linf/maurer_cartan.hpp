#pragma once

#include "linfty.hpp"

namespace linf {

namespace detail {

inline void require_degree(const FilteredSpace& s, const Element& a, int degree, const char* what) {
  if (!homogeneous_of_degree(s, a, degree))
    throw ArgumentError(std::string(what) + ": element must be homogeneous of degree " + std::to_string(degree));
}

/** Σ_{k>=k0} (1/k!) f(a^k · rest), truncated where arities reach the bound. */
inline Element exp_series(const MultiMap& f, const Element& a, const std::vector<const Element*>& rest, std::size_t k0) {
  Element out;
  const std::size_t top = static_cast<std::size_t>(f.target()->bound());
  for (std::size_t k = k0; k + rest.size() < top; ++k) {
    if (k + rest.size() == 0) continue;
    std::vector<const Element*> args(k, &a);
    args.insert(args.end(), rest.begin(), rest.end());
    Element v = f.evaluate(std::span<const Element* const>(args.data(), args.size()));
    out.add_scaled(v, 1 / factorial(k));
  }
  return out;
}

}  // namespace detail

/** curv(a) = da + Σ_{m>=2} (1/m!) Q¹_m(a…a). */
inline Element curvature(const LInftyAlgebra& l, const Element& a) {
  detail::require_degree(*l.space, a, 0, "curvature");
  return detail::exp_series(l.q, a, {}, 1);
}

struct McCheck {
  bool is_mc = false;
  Element residual;
};

inline McCheck is_mc(const LInftyAlgebra& l, const Element& a) {
  Element c = curvature(l, a);
  return {c.is_zero(), std::move(c)};
}

/** Φ_*(a) = Σ_{m>=1} (1/m!) Φ¹_m(a…a). */
inline Element pushforward(const LInftyMorphism& f, const Element& a) {
  detail::require_degree(*f.source->space, a, 0, "pushforward");
  return detail::exp_series(f.maps, a, {}, 1);
}

/** d(curv a) + Σ_{m>=1} (1/m!) Q¹_{m+1}(a^m · curv a); zero for every a. */
inline Element bianchi_defect(const LInftyAlgebra& l, const Element& a) {
  Element c = curvature(l, a);
  return detail::exp_series(l.q, a, {&c}, 0);
}

/** Right-hand side of the curvature naturality identity: Σ_{m>=0} (1/m!) Φ¹_{m+1}(a^m · curv a). */
inline Element curvature_transport(const LInftyMorphism& f, const Element& a) {
  Element c = curvature(*f.source, a);
  return detail::exp_series(f.maps, a, {&c}, 0);
}

/**
 * Twisted structure maps (Q^a)¹_m(w) = Σ_k (1/k!) Q¹_{k+m}(a^k · w) for any
 * degree-0 a. The result squares to zero only when a is MC.
 */
inline LInftyAlgebra twist_raw(const LInftyAlgebra& l, const Element& a) {
  detail::require_degree(*l.space, a, 0, "twist");
  const auto& s = *l.space;
  MultiMap q(l.space, l.space, 1);
  std::vector<Element> units(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) units[i] = Element::unit(i);
  for (const auto& w : live_words(s, s.bound())) {
    std::vector<const Element*> rest;
    for (auto g : w) rest.push_back(&units[g]);
    Element v = detail::exp_series(l.q, a, rest, 0);
    if (!v.is_zero()) q.set(w, std::move(v));
  }
  return LInftyAlgebra(l.space, std::move(q));
}

inline AlgebraPtr twist_algebra(const AlgebraPtr& l, const Element& alpha) {
  auto mc = is_mc(*l, alpha);
  if (!mc.is_mc)
    throw PreconditionError("twisting element is not Maurer-Cartan; curvature = " +
                            element_to_string(*l->space, mc.residual));
  return std::make_shared<const LInftyAlgebra>(twist_raw(*l, alpha));
}

/** (Φ^α)¹_m(w) = Σ_k (1/k!) Φ¹_{m+k}(α^k · w), as a morphism L^α -> L'^{Φ_*α}. */
inline LInftyMorphism twist_morphism(const LInftyMorphism& f, const Element& alpha) {
  auto src = twist_algebra(f.source, alpha);
  auto tgt = twist_algebra(f.target, pushforward(f, alpha));
  const auto& s = *f.source->space;
  MultiMap m(f.source->space, f.target->space, 0);
  std::vector<Element> units(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) units[i] = Element::unit(i);
  for (const auto& w : live_words(s, f.target->bound())) {
    std::vector<const Element*> rest;
    for (auto g : w) rest.push_back(&units[g]);
    Element v = detail::exp_series(f.maps, alpha, rest, 0);
    if (!v.is_zero()) m.set(w, std::move(v));
  }
  return {src, tgt, std::move(m)};
}

/** Twisted differential d^a(x) = Σ_k (1/k!) Q¹_{k+1}(a^k · x). */
inline Element twisted_differential(const LInftyAlgebra& l, const Element& a, const Element& x) {
  return detail::exp_series(l.q, a, {&x}, 0);
}

}  // namespace linf
