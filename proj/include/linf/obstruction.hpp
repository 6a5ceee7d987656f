#pragma once

#include <random>

#include "maurer_cartan.hpp"

namespace linf {

struct ObstructionReport {
  int level = 0;
  Element cocycle;  // degree 1, supported on weight level-1
  bool class_trivial = false;
  std::optional<Element> eta;     // dη = cocycle in the graded piece
  std::optional<Element> lifted;  // MC in L / F_level L
};

namespace detail {

/** Matrix of the graded-piece differential F_{n-1}/F_n in degrees k -> k+1. */
struct PieceDifferential {
  std::vector<std::size_t> cols, rows;
  Matrix m;
};

inline PieceDifferential piece_differential(const LInftyAlgebra& l, int w, int k) {
  PieceDifferential p;
  p.cols = l.space->select(k, w, w);
  p.rows = l.space->select(k + 1, w, w);
  p.m = restrict_matrix(l.d(), p.cols, p.rows);
  return p;
}

inline Element truncate_below(const FilteredSpace& s, const Element& v, int n) { return weight_band(s, v, 1, n - 1); }

}  // namespace detail

/**
 * One tower step: β is MC in L/F_{n-1}L (given by its canonical lift, supported
 * on weights < n-1). Computes the obstruction cocycle in F_{n-1}/F_n and, when
 * it is exact, the lift α = β − η that is MC in L/F_n L.
 */
inline ObstructionReport obstruction_step(const LInftyAlgebra& l, int n, const Element& beta) {
  const auto& s = *l.space;
  if (n < 2 || n > s.bound()) throw ArgumentError("obstruction level must lie in [2, bound]");
  detail::require_degree(s, beta, 0, "obstruction_step");
  Element a = detail::truncate_below(s, beta, n - 1);
  if (!(a == beta)) throw ArgumentError("seed has components of weight >= " + std::to_string(n - 1));
  Element curv = detail::truncate_below(s, curvature(l, a), n);
  if (!weight_band(s, curv, 1, n - 2).is_zero())
    throw PreconditionError("seed is not Maurer-Cartan modulo F_" + std::to_string(n - 1) +
                            "; curvature = " + element_to_string(s, curv));
  ObstructionReport r;
  r.level = n;
  r.cocycle = curv;
  if (!weight_band(s, l.d()(curv), n - 1, n - 1).is_zero())
    throw std::logic_error("obstruction cocycle is not closed");
  auto pd = detail::piece_differential(l, n - 1, 0);
  auto sol = rref_solve(pd.m, detail::element_to_vector(curv, pd.rows));
  if (!sol.solution) return r;
  r.class_trivial = true;
  r.eta = detail::vector_to_element(*sol.solution, pd.cols);
  r.lifted = a - *r.eta;
  return r;
}

struct LiftResult {
  std::optional<Element> element;                // MC in L when the tower lifts all the way
  std::optional<ObstructionReport> obstruction;  // the first nontrivial class otherwise
  std::vector<ObstructionReport> steps;
};

/** Lifts a 0-cocycle of L/F₂L through every tower level L/F_n, n = 3..bound. */
inline LiftResult lift_mc_full(const LInftyAlgebra& l, const Element& seed) {
  const auto& s = *l.space;
  LiftResult out;
  detail::require_degree(s, seed, 0, "lift_mc_full");
  Element cur = detail::truncate_below(s, seed, 2);
  if (!(cur == seed)) throw ArgumentError("seed must be supported on weight-1 generators");
  if (!weight_band(s, l.d()(cur), 1, 1).is_zero()) throw PreconditionError("seed is not a cocycle modulo F_2");
  for (int n = 3; n <= s.bound(); ++n) {
    auto step = obstruction_step(l, n, cur);
    out.steps.push_back(step);
    if (!step.class_trivial) {
      out.obstruction = step;
      return out;
    }
    cur = *step.lifted;
  }
  out.element = cur;
  return out;
}

struct Torsor {
  std::optional<Element> base;
  std::vector<Element> basis;  // Z⁰ of F_{n-1}/F_n, echelon
};

inline Torsor fiber_torsor(const LInftyAlgebra& l, int n, const Element& beta) {
  Torsor t;
  auto step = obstruction_step(l, n, beta);
  t.base = step.lifted;
  auto pd = detail::piece_differential(l, n - 1, 0);
  Subspace z;
  for (const auto& v : null_space(pd.m)) z.insert(detail::vector_to_element(v, pd.cols));
  t.basis = z.echelon();
  return t;
}

/** Z⁰ of the graded piece F_{w}/F_{w+1} in degree 0 (basis). */
inline std::vector<Element> piece_cocycles(const LInftyAlgebra& l, int w) {
  auto pd = detail::piece_differential(l, w, 0);
  std::vector<Element> out;
  for (const auto& v : null_space(pd.m)) out.push_back(detail::vector_to_element(v, pd.cols));
  return out;
}

/**
 * Pseudo-random MC element: a random weight-1 cocycle lifted through the tower
 * with a random torsor translate at every level. Coefficients lie in [-2, 2].
 * nullopt when some level is obstructed.
 */
inline std::optional<Element> sample_mc(const LInftyAlgebra& l, std::mt19937_64& rng) {
  const auto& s = *l.space;
  std::uniform_int_distribution<int> coeff(-2, 2);
  auto combo = [&](const std::vector<Element>& basis) {
    Element out;
    for (const auto& b : basis) out.add_scaled(b, Scalar(coeff(rng)));
    return out;
  };
  if (s.bound() < 2) return Element{};
  Element cur = combo(piece_cocycles(l, 1));
  for (int n = 3; n <= s.bound(); ++n) {
    auto step = obstruction_step(l, n, cur);
    if (!step.class_trivial) return std::nullopt;
    cur = *step.lifted + combo(piece_cocycles(l, n - 1));
  }
  return cur;
}

}  // namespace linf
