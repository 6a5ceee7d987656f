#pragma once

// Shared morphism cases for the homotopy-construction checks.

#include <optional>

#include "random.hpp"

namespace cases {

using namespace linf;

struct Fib {
  std::string name;
  LInftyMorphism f;
};

// fibrations with a nonzero quadratic component
inline std::vector<Fib> nonstrict_fibrations(fx::Rng& rng) {
  std::vector<Fib> out{{"G4xF1c->G4", fx::G4_fib()}};
  for (const auto& base : {fx::F3g(), fx::G4()}) {
    auto p = product(base, fx::F1());
    auto c = fx::random_conjugate(rng, p.algebra, 3);
    out.push_back({"random conjugate over " + std::to_string(base->dim()), compose(p.pr1, c.psi)});
  }
  auto q = quotient_truncation(fx::G4(), 3);
  auto c = fx::random_conjugate(rng, fx::G4(), 2);
  out.push_back({"conjugated tower projection", compose(q.projection, c.psi)});
  return out;
}

inline std::vector<Fib> acyclic_fibrations(fx::Rng& rng) {
  auto p = product(fx::G4(), fx::F1());
  std::vector<Fib> out{{"G4xF1->G4", p.pr1},
                       {"G4xF1c->G4", fx::G4_fib()},
                       {"F3g->F3g/F2", quotient_truncation(fx::F3g(), 2).projection}};
  auto c = fx::random_conjugate(rng, product(fx::F3(), fx::F1()).algebra, 3);
  out.push_back({"random F3xF1", compose(product(fx::F3(), fx::F1()).pr1, c.psi)});
  return out;
}

struct Cone {
  LInftyMorphism a, b;  // a: T -> L (fibration side), b: T -> L' (other side)
};

struct PullbackCase {
  std::string name;
  LInftyMorphism fib, theta;
  std::vector<Cone> cones;
};

// the three pullback fixtures with two independently built cones each
inline std::vector<PullbackCase> pullback_cases(fx::Rng& rng) {
  std::vector<PullbackCase> out;
  {
    // F3 -> F3/F2 along the inclusion of zero: the pullback is the fiber F2 F3
    auto f3 = fx::F3();
    auto q = quotient_truncation(f3, 2);
    auto zero = fx::zero_algebra(2);
    LInftyMorphism theta = strict(zero, q.algebra, LinearMap(zero->space, q.algebra->space, 0));
    auto fiber = AlgebraBuilder(3).gen("u", 0, 2).gen("c", 1, 2).d("u", {{"c", 1}}).build();
    LinearMap inc(fiber->space, f3->space, 0);
    inc.set_column(0, Element::unit(f3->space->index("u")));
    inc.set_column(1, Element::unit(f3->space->index("c")));
    auto ia = strict(fiber, f3, inc);
    auto cf = fx::random_conjugate(rng, fiber, 2);
    auto zf = [&](const AlgebraPtr& t) { return LInftyMorphism{t, zero, MultiMap(t->space, zero->space, 0)}; };
    out.push_back({"F3 tower projection", q.projection, theta,
                   {{ia, zf(fiber)}, {compose(ia, cf.psi), zf(cf.algebra)}}});
  }
  {
    // nonstrict acyclic fibration along a nonstrict isomorphism
    auto fib = fx::G4_fib();
    auto conj = fx::G4c();
    auto back = conj.psi_inv;  // G4 -> G4c
    auto t1 = fib.source;
    auto c2 = fx::random_conjugate(rng, t1, 2);
    out.push_back({"nonstrict fibration", fib, conj.psi,
                   {{identity(t1), compose(back, fib)}, {c2.psi, compose(back, compose(fib, c2.psi))}}});
  }
  {
    // strict projection along a random automorphism
    auto p = product(fx::G4(), fx::F1());
    auto c = fx::random_conjugate(rng, fx::G4(), 3);
    auto t2 = fx::random_conjugate(rng, p.algebra, 3);
    out.push_back({"strict projection", p.pr1, c.psi,
                   {{identity(p.algebra), compose(c.psi_inv, p.pr1)},
                    {t2.psi, compose(c.psi_inv, compose(p.pr1, t2.psi))}}});
  }
  return out;
}

/**
 * MC element of L⊗B over β = Φ_*(α) for a strict fibration Φ, found without the
 * pullback: start at σβ and kill the curvature weight by weight inside ker Φ,
 * adding random fiber cocycles on the way.
 */
inline std::optional<Element> lift_in_fiber(fx::Rng& rng, const LInftyMorphism& fib, const Element& beta) {
  const auto& l = *fib.source;
  const auto& s = *l.space;
  auto ker = filtered_kernel(fib.linear());
  Element alpha = split_section_linear(fib.linear())(beta);
  for (int n = 1; n < s.bound(); ++n) {
    std::vector<Element> cols;
    for (std::size_t i = 0; i < ker.space->dim(); ++i)
      if (ker.space->degree(i) == 0 && ker.space->weight(i) >= n) cols.push_back(ker.inclusion.column(i));
    Element c = weight_band(s, curvature(l, alpha), n, n);
    auto rows = s.select(1, n, n);
    Matrix m(rows.size(), cols.size());
    std::vector<Scalar> rhs(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      rhs[r] = c.coeff(rows[r]);
      for (std::size_t k = 0; k < cols.size(); ++k) m.set(r, k, l.d()(cols[k]).coeff(rows[r]));
    }
    auto sol = rref_solve(m, rhs);
    if (!sol.solution) return std::nullopt;
    for (std::size_t k = 0; k < cols.size(); ++k) alpha -= cols[k] * (*sol.solution)[k];
    // random translate by a fiber cocycle of weight exactly n
    for (const auto& z : null_space(m)) {
      Element v;
      for (std::size_t k = 0; k < cols.size(); ++k) v.add_scaled(cols[k], z[k]);
      if (min_weight(s, v) == n) alpha += v * fx::small(rng, -1, 1);
    }
  }
  return alpha;
}

struct McCase {
  std::string name;
  LInftyMorphism fib, theta;
};

// strict fibrations for the MC-pullback comparison
inline std::vector<McCase> mc_pullback_cases() {
  auto p = product(fx::G4(), fx::F1());
  auto f3q = quotient_truncation(fx::F3(), 2);
  auto f3gq = quotient_truncation(fx::F3g(), 2);
  auto zero = fx::zero_algebra(2);
  return {{"G4xF1 -> G4 along a nonstrict iso", p.pr1, fx::G4c().psi},
          {"F3g -> F3g/F2 along the identity", f3gq.projection, identity(f3gq.algebra)},
          {"F3 -> F3/F2 along zero", f3q.projection,
           strict(zero, f3q.algebra, LinearMap(zero->space, f3q.algebra->space, 0))}};
}

/** Base complexes for the chain-level checks. */
inline std::vector<FilteredComplex> base_complexes() {
  return {fx::F1()->complex(), fx::F3()->complex(), fx::F3g()->complex(), fx::F3torsor()->complex(),
          fx::G4()->complex()};
}

}  // namespace cases
