#pragma once

// Reference model of S(V) inside the tensor algebra: a word v1⋯vn is the
// signed symmetrization Σ_σ ε(σ) v_σ(1)⊗⋯⊗v_σ(n), products are shuffle
// products, and coalgebra maps / coderivations are expanded term by term.
// Nothing here calls the library's coalgebra calculus.

#include <algorithm>
#include <numeric>

#include <linf/linf.hpp>

namespace oracle {

using namespace linf;
using Tuple = std::vector<std::size_t>;
using Tensor = std::map<Tuple, Scalar>;

inline void add(Tensor& t, const Tuple& k, const Scalar& c) {
  if (c == 0) return;
  auto& v = t[k];
  v += c;
  if (v == 0) t.erase(k);
}

/** Sign of listing w in the order given by positions `order`. */
inline int reorder_sign(const FilteredSpace& s, const Tuple& w, const std::vector<std::size_t>& order) {
  int sign = 1;
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b)
      if (order[a] > order[b] && (s.degree(w[order[a]]) & 1) && (s.degree(w[order[b]]) & 1)) sign = -sign;
  return sign;
}

inline Tensor symmetrize(const FilteredSpace& s, const Tuple& w) {
  Tensor out;
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  do {
    Tuple t;
    for (auto i : order) t.push_back(w[i]);
    add(out, t, reorder_sign(s, w, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

inline Tensor shuffle(const FilteredSpace& s, const Tensor& a, const Tensor& b) {
  Tensor out;
  for (const auto& [ta, ca] : a)
    for (const auto& [tb, cb] : b) {
      Tuple joined = ta;
      joined.insert(joined.end(), tb.begin(), tb.end());
      const std::size_t n = joined.size(), p = ta.size();
      // choose the positions of ta's letters
      std::vector<char> mask(n, 0);
      std::fill(mask.begin(), mask.begin() + p, 1);
      do {
        std::vector<std::size_t> order;
        std::size_t ia = 0, ib = p;
        for (std::size_t k = 0; k < n; ++k) order.push_back(mask[k] ? ia++ : ib++);
        Tuple t;
        for (auto i : order) t.push_back(joined[i]);
        add(out, t, ca * cb * reorder_sign(s, joined, order));
      } while (std::prev_permutation(mask.begin(), mask.end()));
    }
  return out;
}

inline Tensor from_element(const Element& v) {
  Tensor out;
  for (const auto& [g, c] : v) add(out, {g}, c);
  return out;
}

/** f¹ on an arbitrarily ordered tuple, read from the table after sorting with signs. */
inline Element value_on(const MultiMap& f, const Tuple& raw) {
  const auto& s = *f.source();
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return raw[a] < raw[b]; });
  Tuple sorted;
  for (auto i : order) sorted.push_back(raw[i]);
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1] && (s.degree(sorted[i]) & 1)) return {};
  return f.at(sorted) * Scalar(reorder_sign(s, raw, order));
}

/** Set partitions of {0..n-1}, blocks increasing and ordered by their minima. */
inline std::vector<std::vector<Tuple>> set_partitions(std::size_t n) {
  std::vector<std::vector<Tuple>> out;
  if (n == 0) return out;
  // restricted growth strings
  std::vector<std::size_t> a(n, 0);
  while (true) {
    std::size_t k = *std::max_element(a.begin(), a.end()) + 1;
    std::vector<Tuple> blocks(k);
    for (std::size_t i = 0; i < n; ++i) blocks[a[i]].push_back(i);
    out.push_back(blocks);
    std::size_t i = n - 1;
    while (i > 0) {
      std::size_t mx = *std::max_element(a.begin(), a.begin() + i);
      if (a[i] <= mx) break;
      --i;
    }
    if (i == 0) break;
    ++a[i];
    std::fill(a.begin() + i + 1, a.end(), 0);
  }
  return out;
}

/** Φ(v1⋯vn) in the tensor model: Σ over partitions of ε Φ¹(B1)·Φ¹(B2)⋯. */
inline Tensor expand_morphism(const MultiMap& f, const Tuple& w) {
  const auto& s = *f.source();
  const auto& t = *f.target();
  Tensor out;
  for (const auto& blocks : set_partitions(w.size())) {
    std::vector<std::size_t> order;
    Tensor prod{{Tuple{}, Scalar(1)}};
    for (const auto& b : blocks) {
      Tuple sub;
      for (auto i : b) {
        sub.push_back(w[i]);
        order.push_back(i);
      }
      prod = shuffle(t, prod, from_element(value_on(f, sub)));
    }
    int eps = reorder_sign(s, w, order);
    for (const auto& [k, c] : prod) add(out, k, c * eps);
  }
  return out;
}

/** Q(v1⋯vn) = Σ ε Q¹(v_σ(1)…v_σ(p)) · v_σ(p+1)⋯v_σ(n). */
inline Tensor expand_coderivation(const MultiMap& q, const Tuple& w) {
  const auto& s = *q.source();
  const std::size_t n = w.size();
  Tensor out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> order, rest_pos;
    Tuple head, rest;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        order.push_back(i);
        head.push_back(w[i]);
      }
    for (std::size_t i = 0; i < n; ++i)
      if (!(mask & (1u << i))) {
        order.push_back(i);
        rest.push_back(w[i]);
      }
    Tensor tail = rest.empty() ? Tensor{{Tuple{}, Scalar(1)}} : symmetrize(s, rest);
    Tensor term = shuffle(s, from_element(value_on(q, head)), tail);
    int eps = reorder_sign(s, w, order);
    for (const auto& [k, c] : term) add(out, k, c * eps);
  }
  return out;
}

/** Coefficients on canonical words of a symmetric tensor. */
inline std::map<Word, Scalar> words_of(const Tensor& t) {
  std::map<Word, Scalar> out;
  for (const auto& [k, c] : t) {
    if (!std::is_sorted(k.begin(), k.end())) continue;
    Scalar mult = 1;
    for (std::size_t i = 0, run = 1; i < k.size(); ++i) {
      run = (i > 0 && k[i] == k[i - 1]) ? run + 1 : 1;
      mult *= Scalar(static_cast<long>(run));
    }
    out[k] = c / mult;
  }
  return out;
}

inline Element project(const MultiMap& f, const std::map<Word, Scalar>& x) {
  Element out;
  for (const auto& [w, c] : x) out.add_scaled(f.at(w), c);
  return out;
}

/** (ΨΦ)¹(w) by full expansion. */
inline Element compose(const MultiMap& psi, const MultiMap& phi, const Word& w) {
  return project(psi, words_of(expand_morphism(phi, w)));
}
/** (Q'Φ)¹(w). */
inline Element post_coderivation(const MultiMap& q, const MultiMap& phi, const Word& w) {
  return project(q, words_of(expand_morphism(phi, w)));
}
/** (ΦQ)¹(w). */
inline Element pre_coderivation(const MultiMap& phi, const MultiMap& q, const Word& w) {
  return project(phi, words_of(expand_coderivation(q, w)));
}

/** Words of length 1..max_len in canonical form (no weight cap). */
inline std::vector<Word> words_up_to(const FilteredSpace& s, std::size_t max_len) {
  std::vector<Word> out;
  Word cur;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (cur.size() == max_len) return;
    for (std::size_t g = from; g < s.dim(); ++g) {
      if (!cur.empty() && cur.back() == g && (s.degree(g) & 1)) continue;
      cur.push_back(g);
      out.push_back(cur);
      self(self, g);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace oracle
