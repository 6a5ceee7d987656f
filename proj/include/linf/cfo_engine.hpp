#pragma once

#include "maurer_cartan.hpp"

namespace linf {

/** x⊗b ↦ f(x)⊗b. */
inline FormElement apply_linear(const LinearMap& f, const FormElement& x) {
  FormElement out;
  for (const auto& [k, c] : x)
    for (const auto& [g, v] : f.column(k.first)) out.add({g, k.second}, c * v);
  return out;
}

// ---------------------------------------------------------------------------
// Strictification of fibrations

struct Strictification {
  AlgebraPtr bar;             // (L̄, Q̄), same space as L
  LInftyMorphism psi;         // L̄ -> L, Ψ¹₁ = id
  LInftyMorphism psi_inverse; // L -> L̄
  LInftyMorphism strict_fib;  // ΦΨ, strict with linear term Φ¹₁
  LinearMap sigma;            // section of Φ¹₁
};

inline Strictification strictify_fibration(const LInftyMorphism& f) {
  if (!classify_linfty_morphism(f).fibration) throw PreconditionError("strictify: morphism is not a fibration");
  const auto& l = f.source;
  Strictification out;
  out.sigma = split_section_linear(f.linear());
  MultiMap psi = identity_morphism(l->space);
  for (const auto& w : live_words(*l->space, l->bound())) {
    if (w.size() < 2) continue;
    WordSum higher;
    for (std::size_t k = 2; k <= w.size(); ++k) higher += morphism_component(psi, k, w);
    Element v = -out.sigma(f.maps.apply(higher));
    if (!v.is_zero()) psi.set(w, std::move(v));
  }
  MultiMap psi_inv = invert_coalgebra_map(psi, LinearMap::identity(l->space));
  out.bar = std::make_shared<const LInftyAlgebra>(l->space, conjugate_structure(l->q, psi, psi_inv));
  out.psi = {out.bar, l, psi};
  out.psi_inverse = {l, out.bar, psi_inv};
  out.strict_fib = {out.bar, f.target, compose_morphisms(f.maps, psi)};
  return out;
}

// ---------------------------------------------------------------------------
// Pullbacks along fibrations

/**
 * Pullback of a fibration Φ: L -> L'' along Θ: L' -> L'', realized on
 * L̃ = L' ⊕ ker Φ¹₁ after strictifying Φ. M = L' ⊕ L̄ is the ambient product.
 */
struct LinftyPullback {
  LInftyMorphism fib, theta;
  Strictification strict;
  FilteredKernel kernel;
  Product ambient;         // M = L' ⊕ L̄
  MultiMap H, J;           // coalgebra automorphisms of S(M)
  LinearMap iota;          // L̃ -> M
  MultiMap H_iota;         // (H∘ι)¹ : S(L̃) -> M
  AlgebraPtr algebra;      // L̃
  LInftyMorphism to_other;  // Pr'∘H : L̃ -> L'
  LInftyMorphism to_bar;    // Pr∘H  : L̃ -> L̄
  LInftyMorphism to_source; // Ψ∘Pr∘H : L̃ -> L
  LInftyMorphism embed;     // H∘ι : L̃ -> M

  /** L̃-coordinates of an element of M lying in L' ⊕ ker. */
  Element tilde_coords(const Element& m) const {
    const std::size_t n1 = theta.source->dim();
    Element out, v;
    for (const auto& [g, c] : m) {
      if (g < n1)
        out.add(g, c);
      else
        v.add(g - n1, c);
    }
    for (const auto& [g, c] : kernel.coordinates(v)) out.add(n1 + g, c);
    return out;
  }

  /** J∘(b ⊗ Ψ⁻¹a): the morphism into L̃ induced by a cone Φa = Θb. */
  LInftyMorphism mediator(const LInftyMorphism& a, const LInftyMorphism& b) const {
    LInftyMorphism abar = compose(strict.psi_inverse, a);
    LInftyMorphism into_m = pair(ambient, b, abar);
    MultiMap jm = compose_morphisms(J, into_m.maps);
    MultiMap out(a.source->space, algebra->space, 0);
    for (const auto& [w, v] : jm.entries()) out.set(w, tilde_coords(v));
    return {a.source, algebra, std::move(out)};
  }
};

inline LinftyPullback pullback_linfty(const LInftyMorphism& fib, const LInftyMorphism& theta) {
  require_same_space(fib.target->space, theta.target->space, "pullback: common target");
  LinftyPullback p;
  p.fib = fib;
  p.theta = theta;
  p.strict = strictify_fibration(fib);
  const auto& sigma = p.strict.sigma;
  p.kernel = filtered_kernel(fib.linear());
  p.ambient = product(theta.source, p.strict.bar);
  const auto& M = p.ambient.maps.sum;
  const std::size_t n1 = theta.source->dim();
  p.H = MultiMap(M, M, 0);
  p.J = MultiMap(M, M, 0);
  for (std::size_t i = 0; i < n1; ++i) {
    Element lift = p.ambient.maps.in2(sigma(theta.maps.at({i})));
    p.H.set({i}, Element::unit(i) + lift);
    p.J.set({i}, Element::unit(i) - lift);
  }
  for (std::size_t j = 0; j < p.strict.bar->dim(); ++j) {
    p.H.set({n1 + j}, Element::unit(n1 + j));
    p.J.set({n1 + j}, Element::unit(n1 + j));
  }
  for (const auto& [w, v] : theta.maps.entries()) {
    if (w.size() < 2) continue;
    Element lift = p.ambient.maps.in2(sigma(v));
    p.H.set(w, lift);
    p.J.set(w, -lift);
  }
  auto tilde = direct_sum_space(*theta.source->space, *p.kernel.space);
  p.iota = LinearMap(tilde, M, 0);
  for (std::size_t i = 0; i < n1; ++i) p.iota.set_column(i, Element::unit(i));
  for (std::size_t k = 0; k < p.kernel.space->dim(); ++k)
    p.iota.set_column(n1 + k, p.ambient.maps.in2(p.kernel.inclusion.column(k)));
  p.H_iota = compose_morphisms(p.H, strict_morphism(p.iota));
  MultiMap qt(tilde, tilde, 1);
  const auto& qm = p.ambient.algebra->q;
  for (const auto& w : live_words(*tilde, tilde->bound())) {
    WordSum x = apply_coderivation(qm, apply_morphism(p.H_iota, WordSum::unit(w)));
    Element v = p.J.apply(x);
    if (!v.is_zero()) qt.set(w, p.tilde_coords(v));
  }
  p.algebra = std::make_shared<const LInftyAlgebra>(tilde, std::move(qt));
  p.embed = {p.algebra, p.ambient.algebra, p.H_iota};
  p.to_other = compose(p.ambient.pr1, p.embed);
  p.to_bar = compose(p.ambient.pr2, p.embed);
  p.to_source = compose(p.strict.psi, p.to_bar);
  return p;
}

struct SolvedMediator {
  std::optional<LInftyMorphism> morphism;
  bool unique = true;
};

/**
 * Mediator for the cone (a, b) found by solving (H∘ι)∘m = (b, Ψ⁻¹a) arity by
 * arity; independent of J. unique reports whether every solve had a unique solution.
 */
inline SolvedMediator solve_mediator(const LinftyPullback& p, const LInftyMorphism& a, const LInftyMorphism& b) {
  SolvedMediator out;
  const auto& src = a.source;
  LInftyMorphism target = pair(p.ambient, b, compose(p.strict.psi_inverse, a));
  const auto& tilde = *p.algebra->space;
  const auto& M = *p.ambient.maps.sum;
  MultiMap m(src->space, p.algebra->space, 0);
  LinearMap lin = p.iota;
  for (std::size_t i = 0; i < tilde.dim(); ++i) lin.set_column(i, p.H_iota.at({i}));
  for (const auto& w : live_words(*src->space, tilde.bound())) {
    WordSum higher;
    for (std::size_t k = 2; k <= w.size(); ++k) higher += morphism_component(m, k, w);
    Element rhs = target.maps.at(w) - p.H_iota.apply(higher);
    int deg = word_degree(*src->space, w);
    auto cols = tilde.select(deg);
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < M.dim(); ++r)
      if (M.degree(r) == deg) rows.push_back(r);
    for (const auto& [g, c] : rhs)
      if (M.degree(g) != deg) return out;
    auto sol = rref_solve(restrict_matrix(lin, cols, rows), detail::element_to_vector(rhs, rows));
    if (!sol.solution) return out;
    out.unique = out.unique && sol.unique();
    Element v = detail::vector_to_element(*sol.solution, cols);
    if (!v.is_zero()) m.set(w, std::move(v));
  }
  out.morphism = LInftyMorphism{src, p.algebra, std::move(m)};
  return out;
}

// ---------------------------------------------------------------------------
// Acyclic fibrations: decomposition and retraction

struct Decomposition {
  FilteredKernel kernel;
  AlgebraPtr kernel_algebra;  // abelian
  LinearMap tau, h, theta;
  LInftyMorphism psi;      // L -> ker
  Product product;         // L' ⊕ ker
  LInftyMorphism iso;      // (Φ, Ψ)
  LInftyMorphism inverse;  // (Φ, Ψ)⁻¹
};

inline Decomposition decompose_acyclic_fibration(const LInftyMorphism& f) {
  if (!classify_linfty_morphism(f).acyclic_fibration())
    throw PreconditionError("decompose: morphism is not an acyclic fibration");
  Decomposition out;
  ChainMap fc(f.source->complex(), f.target->complex(), f.linear());
  auto data = acyclic_fib_data(fc);
  out.tau = data.tau;
  out.h = data.h;
  out.kernel = filtered_kernel(f.linear());
  const auto& ks = out.kernel.space;
  const auto& l = *f.source;
  LinearMap dk(ks, ks, 1);
  for (std::size_t i = 0; i < ks->dim(); ++i)
    dk.set_column(i, out.kernel.coordinates(l.d()(out.kernel.inclusion.column(i))));
  out.kernel_algebra = abelian_algebra(FilteredComplex(ks, dk));
  LinearMap psi11 = LinearMap::identity(l.space) - compose(out.tau, f.linear());
  MultiMap psi(l.space, ks, 0);
  for (std::size_t i = 0; i < l.dim(); ++i) {
    Element v = out.kernel.coordinates(psi11.column(i));
    if (!v.is_zero()) psi.set({i}, std::move(v));
  }
  for (const auto& [w, v] : l.q.entries()) {
    if (w.size() < 2) continue;
    Element z = out.kernel.coordinates(psi11(out.h(v)));
    if (!z.is_zero()) psi.set(w, std::move(z));
  }
  out.psi = {f.source, out.kernel_algebra, std::move(psi)};
  out.product = product(f.target, out.kernel_algebra);
  out.iso = pair(out.product, f, out.psi);
  out.theta = LinearMap(out.product.maps.sum, l.space, 0);
  for (std::size_t i = 0; i < f.target->dim(); ++i) out.theta.set_column(i, out.tau.column(i));
  for (std::size_t i = 0; i < ks->dim(); ++i)
    out.theta.set_column(f.target->dim() + i, out.kernel.inclusion.column(i));
  out.inverse = {out.product.algebra, f.source, invert_coalgebra_map(out.iso.maps, out.theta)};
  return out;
}

/** χ with Φ∘χ = id for an acyclic fibration Φ. */
inline LInftyMorphism retraction(const LInftyMorphism& f) {
  auto dec = decompose_acyclic_fibration(f);
  return compose(dec.inverse, dec.product.in1);
}

// ---------------------------------------------------------------------------
// Factorization through the mapping path space

struct Factorization {
  TensorAlgebra path;  // L'⊗Ω₁
  LInftyMorphism s, d0, d1;
  LinftyPullback pullback;  // L ×_{L'} L'⊗Ω₁ (pullback of d0 along Φ)
  LInftyMorphism j;         // L -> mapping path space, weak equivalence
  LInftyMorphism p;         // mapping path space -> L', fibration
  LInftyMorphism pr1;       // mapping path space -> L
  LInftyMorphism pr2;       // mapping path space -> L'⊗Ω₁
};

inline Factorization factorize(const LInftyMorphism& f, int cap = 1) {
  Factorization out;
  out.path = tensor_cdga(f.target, {CdgaKind::omega1}, cap);
  out.s = constant_path(f.target, out.path);
  out.d0 = path_evaluation(out.path, f.target, 0);
  out.d1 = path_evaluation(out.path, f.target, 1);
  out.pullback = pullback_linfty(out.d0, f);
  out.pr1 = out.pullback.to_other;
  out.pr2 = out.pullback.to_source;
  out.j = out.pullback.mediator(compose(out.s, f), identity(f.source));
  out.p = compose(out.d1, out.pr2);
  return out;
}

// ---------------------------------------------------------------------------
// Homotopies

/** h: A -> L⊗Ω₁ exhibiting f ≃ g via d₀h = f, d₁h = g. */
struct HomotopyCertificate {
  TensorAlgebra path;
  LInftyMorphism h, f, g;
};

struct ZigzagCertificate {
  std::vector<HomotopyCertificate> links;
};

struct HomotopyReport {
  bool ok = true;
  std::vector<std::string> problems;
};

inline HomotopyCertificate constant_homotopy(const LInftyMorphism& f, const TensorAlgebra& path) {
  return {path, compose(constant_path(f.target, path), f), f, f};
}

inline HomotopyReport verify_homotopy(const HomotopyCertificate& c) {
  HomotopyReport r;
  const auto& l = c.f.target;
  for (int end = 0; end < 2; ++end) {
    auto got = compose(path_evaluation(c.path, l, end), c.h);
    const auto& want = end == 0 ? c.f : c.g;
    if (auto w = first_difference(got.maps, want.maps)) {
      r.ok = false;
      r.problems.push_back("d" + std::to_string(end) + "∘h differs from the claimed endpoint at " + *w);
    }
  }
  return r;
}

inline HomotopyReport verify_homotopy(const ZigzagCertificate& z) {
  HomotopyReport r;
  for (std::size_t i = 0; i < z.links.size(); ++i) {
    auto link = verify_homotopy(z.links[i]);
    for (const auto& p : link.problems) r.problems.push_back("link " + std::to_string(i) + ": " + p);
    if (i + 1 < z.links.size())
      if (auto w = first_difference(z.links[i].g.maps, z.links[i + 1].f.maps))
        r.problems.push_back("links " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not chain at " +
                             *w);
  }
  r.ok = r.problems.empty();
  return r;
}

struct HomotopyInverse {
  LInftyMorphism inverse;          // Ψ
  HomotopyCertificate cert_right;  // ΦΨ ≃ id
  ZigzagCertificate cert_left;     // ΨΦ ≃ id
};

namespace detail {

struct OneSided {
  Factorization fac;
  LInftyMorphism g;
  HomotopyCertificate cert;  // fg ≃ id
};

inline OneSided one_sided_inverse(const LInftyMorphism& f, int cap) {
  auto fac = factorize(f, cap);
  auto chi = retraction(fac.p);
  auto g = compose(fac.pr1, chi);
  auto h = compose(fac.pr2, chi);
  HomotopyCertificate cert{fac.path, h, compose(f, g), identity(f.target)};
  return {std::move(fac), std::move(g), std::move(cert)};
}

}  // namespace detail

inline HomotopyInverse homotopy_inverse(const LInftyMorphism& f, int cap = 1) {
  if (!classify_linfty_morphism(f).weak_equivalence)
    throw PreconditionError("homotopy_inverse: morphism is not a weak equivalence");
  auto first = detail::one_sided_inverse(f, cap);
  const auto& psi = first.g;
  auto second = detail::one_sided_inverse(psi, cap);  // Ψ f̃ ≃ id_L
  const auto& ft = second.g;
  const auto& path_l = second.fac.path;
  const auto& path_lp = first.fac.path;
  auto psi_phi = compose(psi, f);
  auto psi_ft = compose(psi, ft);
  auto mid = compose(psi_phi, psi_ft);  // ΨΦΨf̃

  HomotopyInverse out{psi, first.cert, {}};
  // ΨΦ ≃ ΨΦΨf̃: reverse (ΨΦ)^I ∘ H₂
  auto l1 = compose(path_reversal(path_l), compose(tensor_morphism(psi_phi, path_l, path_l), second.cert.h));
  out.cert_left.links.push_back({path_l, l1, psi_phi, mid});
  // ΨΦΨf̃ ≃ Ψf̃: Ψ^I ∘ H₁ ∘ f̃
  auto l2 = compose(tensor_morphism(psi, path_lp, path_l), compose(first.cert.h, ft));
  out.cert_left.links.push_back({path_l, l2, mid, psi_ft});
  // Ψf̃ ≃ id
  out.cert_left.links.push_back(second.cert);
  return out;
}

// ---------------------------------------------------------------------------
// Maurer–Cartan sets of pullbacks

/** The pullback data tensored with a coefficient cdga. */
struct McPullbackContext {
  const LinftyPullback* pb = nullptr;
  Cdga cdga;
  TensorAlgebra other, source, base, tilde, ambient;
  LInftyMorphism fib_b, theta_b, embed_b;
};

inline McPullbackContext mc_pullback_context(const LinftyPullback& pb, Cdga b, int cap = 1) {
  if (!is_strict(pb.fib.maps)) throw ArgumentError("mc_pullback_check expects a strict fibration");
  McPullbackContext c;
  c.pb = &pb;
  c.cdga = b;
  c.other = tensor_cdga(pb.theta.source, b, cap);
  c.source = tensor_cdga(pb.fib.source, b, cap);
  c.base = tensor_cdga(pb.fib.target, b, cap);
  c.tilde = tensor_cdga(pb.algebra, b, cap);
  c.ambient = tensor_cdga(pb.ambient.algebra, b, cap);
  c.fib_b = tensor_morphism(pb.fib, c.source, c.base);
  c.theta_b = tensor_morphism(pb.theta, c.other, c.base);
  c.embed_b = tensor_morphism(pb.embed, c.tilde, c.ambient);
  return c;
}

struct McPullbackResult {
  Element phi;  // in L̃⊗B
  McCheck mc;
  bool recovers = false;  // H_B*(φ) = (α', α)
};

/** φ(α', α) = (α', α − (σ⊗id)Θ_B*(α')), with α' ∈ L'⊗B and α ∈ L⊗B. */
inline McPullbackResult mc_pullback_check(const McPullbackContext& c, const Element& alpha_other,
                                          const Element& alpha) {
  const auto& pb = *c.pb;
  Element lhs = pushforward(c.fib_b, alpha);
  Element rhs = pushforward(c.theta_b, alpha_other);
  if (!(lhs == rhs))
    throw PreconditionError("incompatible pair: Φ_*(α) − Θ_*(α') = " +
                            element_to_string(*c.base.algebra->space, lhs - rhs));
  FormElement diff = c.source.forms(alpha) - apply_linear(pb.strict.sigma, c.base.forms(rhs));
  FormElement phi = c.other.forms(alpha_other);
  const std::size_t n1 = pb.theta.source->dim();
  std::map<FormMonomial, Element> by_form;
  for (const auto& [k, v] : diff) by_form[k.second].add(k.first, v);
  for (const auto& [m, v] : by_form)
    for (const auto& [g, x] : pb.kernel.coordinates(v)) phi.add({n1 + g, m}, x);
  McPullbackResult r;
  r.phi = c.tilde.element(phi);
  r.mc = is_mc(*c.tilde.algebra, r.phi);
  FormElement pair_forms = c.other.forms(alpha_other);
  for (const auto& [k, v] : c.source.forms(alpha)) pair_forms.add({n1 + k.first, k.second}, v);
  r.recovers = pushforward(c.embed_b, r.phi) == c.ambient.element(pair_forms);
  return r;
}

/** H_B*: MC(L̃⊗B) -> compatible pairs, as (α', α). */
inline std::pair<Element, Element> mc_pullback_project(const McPullbackContext& c, const Element& x) {
  const std::size_t n1 = c.pb->theta.source->dim();
  FormElement a1, a2;
  for (const auto& [k, v] : c.ambient.forms(pushforward(c.embed_b, x))) {
    if (k.first < n1)
      a1.add(k, v);
    else
      a2.add({k.first - n1, k.second}, v);
  }
  return {c.other.element(a1), c.source.element(a2)};
}

}  // namespace linf
