#pragma once

#include <functional>

#include "cfo_engine.hpp"

namespace linf {

/** Ω_n for n ≤ 2 (Ω₀ = ℚ). */
inline Cdga simplex_cdga(int n) {
  switch (n) {
    case 0: return {CdgaKind::rationals};
    case 1: return {CdgaKind::omega1};
    case 2: return {CdgaKind::omega2};
    default: throw ArgumentError("simplicial dimension must be 0, 1 or 2");
  }
}

namespace detail {

inline bool monomial_in(const Cdga& b, const FormMonomial& m) {
  if (m.slot != 0) return false;
  for (int i = b.variables(); i < 2; ++i)
    if (m.exp[i] != 0 || (m.mask & (1u << i))) return false;
  return true;
}

inline void require_forms(const FilteredSpace& s, int n, const FormElement& x, int degree, const char* what) {
  Cdga b = simplex_cdga(n);
  for (const auto& [k, c] : x)
    if (k.first >= s.dim() || !monomial_in(b, k.second))
      throw ArgumentError(std::string(what) + ": term outside L⊗Ω_" + std::to_string(n));
  if (!forms_of_degree(s, x, degree))
    throw ArgumentError(std::string(what) + ": value must have total degree " + std::to_string(degree));
}

/** Σ_{m=m0}^{top-1} (1/m!) f_B(a, ..., a). */
inline FormElement form_exp_series(const MultiMap& f, const Cdga& b, const FormElement& a, std::size_t m0) {
  FormElement out;
  const std::size_t top = static_cast<std::size_t>(f.target()->bound());
  for (std::size_t m = m0; m < top; ++m) {
    std::vector<const FormElement*> args(m, &a);
    FormElement v = tensor_evaluate(f, b, std::span<const FormElement* const>(args.data(), args.size()));
    out += v * (1 / factorial(m));
  }
  return out;
}

/** Part of x on generators of weight exactly w. */
inline FormElement weight_part(const FilteredSpace& s, const FormElement& x, int w) {
  FormElement out;
  for (const auto& [k, c] : x)
    if (s.weight(k.first) == w) out.add(k, c);
  return out;
}

inline FormElement substitute_forms(const Cdga& src, const Cdga& tgt, const FormElement& x,
                                    const std::vector<PolyForm>& images) {
  FormElement out;
  for (const auto& [k, c] : x) {
    PolyForm img = substitute(PolyForm(src, Sparse<FormMonomial>::unit(k.second)), tgt, images);
    for (const auto& [m, v] : img.terms()) out.add({k.first, m}, c * v);
  }
  return out;
}

}  // namespace detail

/** curv(a) in L⊗Ω_n, computed term by term on generator⊗monomial sums. */
inline FormElement simplex_curvature(const LInftyAlgebra& l, int n, const FormElement& value) {
  detail::require_forms(*l.space, n, value, 0, "simplex");
  Cdga b = simplex_cdga(n);
  return tensor_differential(l.q, b, value) + detail::form_exp_series(l.q, b, value, 2);
}

struct SimplexCheck {
  bool valid = false;
  FormElement residual;
};

inline SimplexCheck validate_simplex(const LInftyAlgebra& l, int n, const FormElement& value) {
  FormElement r = simplex_curvature(l, n, value);
  return {r.is_zero(), std::move(r)};
}

struct SimplexElement {
  AlgebraPtr owner;
  int n = 0;
  FormElement value;
};

inline SimplexElement make_simplex(const AlgebraPtr& l, int n, FormElement value) {
  auto chk = validate_simplex(*l, n, value);
  if (!chk.valid)
    throw PreconditionError("not a Maurer-Cartan simplex; curvature = " +
                            forms_to_string(*l->space, simplex_cdga(n), chk.residual));
  return {l, n, std::move(value)};
}

/** Constant n-simplex on an MC element of L. */
inline SimplexElement constant_simplex(const AlgebraPtr& l, int n, const Element& alpha) {
  return make_simplex(l, n, constant_forms(alpha));
}

/** Image of the pullback of t_j, j = 1..n, along the i-th coface Δ^{n-1} -> Δ^n. */
inline std::vector<PolyForm> coface_images(int n, int i) {
  Cdga tgt = simplex_cdga(n - 1);
  std::vector<PolyForm> out;
  for (int j = 1; j <= n; ++j) {
    if (j < i)
      out.push_back(PolyForm::coordinate(tgt, j));
    else if (j == i)
      out.push_back(PolyForm(tgt));
    else
      out.push_back(PolyForm::coordinate(tgt, j - 1));
  }
  return out;
}

/** Image of t_j, j = 1..n, along the i-th codegeneracy Δ^{n+1} -> Δ^n. */
inline std::vector<PolyForm> codegeneracy_images(int n, int i) {
  Cdga tgt = simplex_cdga(n + 1);
  std::vector<PolyForm> out;
  for (int j = 1; j <= n; ++j) {
    if (j < i)
      out.push_back(PolyForm::coordinate(tgt, j));
    else if (j == i)
      out.push_back(PolyForm::coordinate(tgt, j) + PolyForm::coordinate(tgt, j + 1));
    else
      out.push_back(PolyForm::coordinate(tgt, j + 1));
  }
  return out;
}

/** d_i: sets t_i = 0 and renumbers. */
inline SimplexElement face(const SimplexElement& s, int i) {
  if (s.n < 1 || i < 0 || i > s.n) throw ArgumentError("face index out of range");
  return make_simplex(s.owner, s.n - 1,
                      detail::substitute_forms(simplex_cdga(s.n), simplex_cdga(s.n - 1), s.value,
                                               coface_images(s.n, i)));
}

/** s_i: substitutes t_i ↦ t_i + t_{i+1}. */
inline SimplexElement degeneracy(const SimplexElement& s, int i) {
  if (s.n > 1 || i < 0 || i > s.n) throw ArgumentError("degeneracy index out of range (dimension ≤ 2)");
  return make_simplex(s.owner, s.n + 1,
                      detail::substitute_forms(simplex_cdga(s.n), simplex_cdga(s.n + 1), s.value,
                                               codegeneracy_images(s.n, i)));
}

/** Value of a 1-simplex at z = point. */
inline Element evaluate_edge(const FormElement& value, const Scalar& point) {
  Element out;
  for (const auto& [k, c] : value) {
    if (k.second.mask) continue;
    Scalar p = 1;
    for (int e = 0; e < k.second.exp[0]; ++e) p *= point;
    out.add(k.first, c * p);
  }
  return out;
}

/** (Φ⊗Ω_n)_*: Σ_m (1/m!) Φ_B(a, ..., a). */
inline SimplexElement smc_map(const LInftyMorphism& f, const SimplexElement& s) {
  auto chk = validate_simplex(*f.source, s.n, s.value);
  if (!chk.valid) throw PreconditionError("smc_map: input is not a Maurer-Cartan simplex");
  Cdga b = simplex_cdga(s.n);
  FormElement v;
  const std::size_t top = static_cast<std::size_t>(f.target->bound());
  for (std::size_t m = 1; m < top; ++m) {
    std::vector<const FormElement*> args(m, &s.value);
    v += tensor_evaluate(f.maps, b, std::span<const FormElement* const>(args.data(), args.size())) *
         (1 / factorial(m));
  }
  return make_simplex(f.target, s.n, std::move(v));
}

// ---------------------------------------------------------------------------
// 1-simplices by weight-by-weight polynomial solving

namespace detail {

/** Linear constraint x ↦ op(x) = rhs on weight-w unknowns; rows keyed per constraint. */
struct EdgeConstraint {
  std::function<FormElement(const FormElement&)> op;
  FormElement rhs;
};

/**
 * Unknowns x = Σ g⊗z^k (|g| = 0) + g⊗z^k dz (|g| = -1) over weight-w generators
 * with k ≤ max_deg; returns the canonical solution of all constraints.
 */
inline std::optional<FormElement> solve_edge_piece(const FilteredSpace& s, int w, int max_deg,
                                                   const std::vector<EdgeConstraint>& cons) {
  std::vector<FormElement> unknowns;
  for (std::size_t g = 0; g < s.dim(); ++g) {
    if (s.weight(g) != w) continue;
    for (int k = 0; k <= max_deg; ++k) {
      if (s.degree(g) == 0) unknowns.push_back(FormElement::unit({g, FormMonomial{{k, 0}, 0, 0}}));
      if (s.degree(g) == -1) unknowns.push_back(FormElement::unit({g, FormMonomial{{k, 0}, 1, 0}}));
    }
  }
  std::map<std::pair<std::size_t, TensorKey>, std::size_t> rows;
  auto row = [&](std::size_t c, const TensorKey& k) {
    return rows.try_emplace({c, k}, rows.size()).first->second;
  };
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> cols(unknowns.size());
  for (std::size_t u = 0; u < unknowns.size(); ++u)
    for (std::size_t c = 0; c < cons.size(); ++c)
      for (const auto& [k, v] : cons[c].op(unknowns[u])) cols[u].push_back({row(c, k), v});
  std::vector<std::pair<std::size_t, Scalar>> rhs;
  for (std::size_t c = 0; c < cons.size(); ++c)
    for (const auto& [k, v] : cons[c].rhs) rhs.push_back({row(c, k), v});
  Matrix a(rows.size(), unknowns.size());
  for (std::size_t u = 0; u < unknowns.size(); ++u)
    for (const auto& [r, v] : cols[u]) a.set(r, u, v);
  std::vector<Scalar> b(rows.size());
  for (const auto& [r, v] : rhs) b[r] = v;
  auto sol = rref_solve(a, b);
  if (!sol.solution) return std::nullopt;
  FormElement out;
  for (std::size_t u = 0; u < unknowns.size(); ++u)
    if (sgn((*sol.solution)[u]) != 0) out += unknowns[u] * (*sol.solution)[u];
  return out;
}

inline FormElement at_point(const FormElement& x, int point) {
  return constant_forms(evaluate_edge(x, point));
}

}  // namespace detail

struct EdgeResult {
  std::optional<SimplexElement> edge;
  int failed_weight = 0;  // weight at which no polynomial solution of the given degree exists
};

/** A 1-simplex with value a at z = 0 and b at z = 1, polynomial degree ≤ max_deg. */
inline EdgeResult synthesize_edge(const AlgebraPtr& l, const Element& a, const Element& b, int max_deg) {
  const auto& s = *l->space;
  if (!is_mc(*l, a).is_mc || !is_mc(*l, b).is_mc) throw PreconditionError("edge endpoints must be Maurer-Cartan");
  Cdga om{CdgaKind::omega1};
  FormElement cur;
  for (int w = 1; w < s.bound(); ++w) {
    FormElement curv = detail::weight_part(s, tensor_differential(l->q, om, cur) +
                                                  detail::form_exp_series(l->q, om, cur, 2), w);
    std::vector<detail::EdgeConstraint> cons;
    cons.push_back({[&](const FormElement& x) { return detail::weight_part(s, tensor_differential(l->q, om, x), w); },
                    FormElement() - curv});
    cons.push_back({[](const FormElement& x) { return detail::at_point(x, 0); },
                    constant_forms(weight_band(s, a, w, w))});
    cons.push_back({[](const FormElement& x) { return detail::at_point(x, 1); },
                    constant_forms(weight_band(s, b, w, w))});
    auto piece = detail::solve_edge_piece(s, w, max_deg, cons);
    if (!piece) return {std::nullopt, w};
    cur += *piece;
  }
  return {make_simplex(l, 1, cur), 0};
}

struct HornStep {
  int level = 0;
  FormElement eta;    // curvature piece in the graded piece ⊗ Ω₁
  bool eta_closed = false;
  FormElement theta;  // correction in ker Φ ⊗ Ω₁, vanishing at z = 0
};

struct HornFill {
  std::optional<SimplexElement> edge;
  std::vector<HornStep> steps;
  int failed_level = 0;
};

/**
 * Lifts a (1,0)-horn for a strict fibration Φ: L -> L'': given a vertex α₀ of L
 * and a 1-simplex β of L'' starting at Φα₀, builds ᾱ with ᾱ(0) = α₀ and Φ_*ᾱ = β
 * one weight at a time; each level adds the correction θ solving dθ = -η.
 */
inline HornFill lift_horn(const LInftyMorphism& f, const Element& alpha0, const SimplexElement& beta, int max_deg) {
  if (!is_strict(f.maps)) throw ArgumentError("lift_horn expects a strict fibration");
  if (!classify_linfty_morphism(f).fibration) throw PreconditionError("lift_horn: morphism is not a fibration");
  if (beta.n != 1) throw ArgumentError("horn base must be a 1-simplex");
  if (!is_mc(*f.source, alpha0).is_mc) throw PreconditionError("horn vertex is not Maurer-Cartan");
  LinearMap phi = f.linear();
  if (!(phi(alpha0) == evaluate_edge(beta.value, 0))) throw PreconditionError("horn vertex does not lie over β(0)");
  const auto& l = *f.source;
  const auto& s = *l.space;
  Cdga om{CdgaKind::omega1};
  LinearMap sigma = split_section_linear(phi);
  HornFill out;
  FormElement cur = constant_forms(alpha0) + apply_linear(sigma, beta.value - constant_forms(phi(alpha0)));
  for (int w = 1; w < s.bound(); ++w) {
    HornStep step;
    step.level = w;
    step.eta = detail::weight_part(s, simplex_curvature(l, 1, cur), w);
    step.eta_closed = detail::weight_part(s, tensor_differential(l.q, om, step.eta), w).is_zero();
    if (!step.eta.is_zero()) {
      std::vector<detail::EdgeConstraint> cons;
      cons.push_back({[&](const FormElement& x) { return detail::weight_part(s, tensor_differential(l.q, om, x), w); },
                      FormElement() - step.eta});
      cons.push_back({[&](const FormElement& x) { return apply_linear(phi, x); }, FormElement()});
      cons.push_back({[](const FormElement& x) { return detail::at_point(x, 0); }, FormElement()});
      auto theta = detail::solve_edge_piece(s, w, max_deg, cons);
      if (!theta) {
        out.steps.push_back(step);
        out.failed_level = w;
        return out;
      }
      step.theta = *theta;
      cur += *theta;
    }
    out.steps.push_back(step);
  }
  out.edge = make_simplex(f.source, 1, cur);
  return out;
}

}  // namespace linf
