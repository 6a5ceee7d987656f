#pragma once

#include "graded_core.hpp"

namespace linf {

/**
 * Family of multilinear maps f¹_k : S^k(source) -> target of fixed degree,
 * stored on canonical words. Houses codifferentials Q (degree 1) and
 * coalgebra morphisms Φ (degree 0). Absent entries are zero.
 */
class MultiMap {
 public:
  MultiMap() = default;
  MultiMap(SpacePtr source, SpacePtr target, int degree)
      : source_(std::move(source)), target_(std::move(target)), degree_(degree) {}

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  int degree() const { return degree_; }
  const std::map<Word, Element>& entries() const { return table_; }

  void set(const Word& w, Element value) {
    check_word(w);
    if (value.is_zero()) {
      table_.erase(w);
      return;
    }
    for (const auto& [j, c] : value)
      if (j >= target_->dim()) throw ArgumentError("MultiMap: value outside the target space");
    max_weight_ = std::max(max_weight_, word_weight(*source_, w));
    table_[w] = std::move(value);
  }

  void add(const Word& w, const Element& value) {
    if (value.is_zero()) return;
    auto it = table_.find(w);
    if (it == table_.end()) {
      set(w, value);
      return;
    }
    it->second += value;
    if (it->second.is_zero()) table_.erase(it);
  }

  /** Sets the value on an arbitrarily ordered word, folding in the Koszul sign. */
  void set_ordered(std::span<const std::size_t> raw, Element value) {
    auto n = normalize_word(*source_, raw);
    if (!n) {
      if (!value.is_zero()) throw ArgumentError("MultiMap: nonzero value on a vanishing word");
      return;
    }
    set(n->word, value * Scalar(n->sign));
  }

  const Element& at(const Word& w) const {
    static const Element zero;
    auto it = table_.find(w);
    return it == table_.end() ? zero : it->second;
  }

  Element evaluate_ordered(std::span<const std::size_t> raw) const {
    auto n = normalize_word(*source_, raw);
    if (!n) return {};
    auto it = table_.find(n->word);
    if (it == table_.end()) return {};
    return it->second * Scalar(n->sign);
  }

  /** Multilinear evaluation f¹_k(x_1, ..., x_k) on an ordered tuple of elements. */
  Element evaluate(std::span<const Element* const> args) const {
    Element out;
    if (args.empty()) return out;
    std::vector<std::size_t> gens(args.size());
    auto rec = [&](auto&& self, std::size_t i, const Scalar& coeff, int weight) -> void {
      if (weight > max_weight_) return;
      if (i == args.size()) {
        auto n = normalize_word(*source_, gens);
        if (!n) return;
        auto it = table_.find(n->word);
        if (it == table_.end()) return;
        out.add_scaled(it->second, coeff * n->sign);
        return;
      }
      for (const auto& [g, c] : *args[i]) {
        gens[i] = g;
        self(self, i + 1, coeff * c, weight + source_->weight(g));
      }
    };
    rec(rec, 0, Scalar(1), 0);
    return out;
  }

  Element evaluate(std::initializer_list<const Element*> args) const {
    return evaluate(std::span<const Element* const>(args.begin(), args.size()));
  }

  /** Linear extension to a combination of words: the projection to the primitives. */
  Element apply(const WordSum& x) const {
    Element out;
    for (const auto& [w, c] : x) {
      auto it = table_.find(w);
      if (it != table_.end()) out.add_scaled(it->second, c);
    }
    return out;
  }

  std::size_t max_arity() const {
    std::size_t m = 0;
    for (const auto& [w, v] : table_) m = std::max(m, w.size());
    return m;
  }

  MultiMap arity_part(std::size_t k) const {
    MultiMap out(source_, target_, degree_);
    for (const auto& [w, v] : table_)
      if (w.size() == k) out.set(w, v);
    return out;
  }

  friend bool operator==(const MultiMap& a, const MultiMap& b) {
    return same_space(a.source_, b.source_) && same_space(a.target_, b.target_) && a.degree_ == b.degree_ &&
           a.table_ == b.table_;
  }

 private:
  void check_word(const Word& w) const {
    if (w.empty()) throw ArgumentError("MultiMap: empty word");
    if (!is_canonical(*source_, w)) throw ArgumentError("MultiMap: word is not canonical");
    for (auto g : w)
      if (g >= source_->dim()) throw ArgumentError("MultiMap: word outside the source space");
    if (static_cast<int>(w.size()) >= target_->bound())
      throw ArgumentError("MultiMap: arity " + std::to_string(w.size()) + " reaches the filtration bound");
  }

  SpacePtr source_, target_;
  int degree_ = 0;
  int max_weight_ = 0;
  std::map<Word, Element> table_;
};

using StructureMaps = MultiMap;
using MorphismMaps = MultiMap;

/** Canonical words of length >= 1 with total weight below weight_cap. */
inline std::vector<Word> live_words(const FilteredSpace& s, int weight_cap) {
  std::vector<Word> out;
  Word cur;
  auto rec = [&](auto&& self, std::size_t from, int weight) -> void {
    for (std::size_t g = from; g < s.dim(); ++g) {
      int w = weight + s.weight(g);
      if (w >= weight_cap) continue;
      if (!cur.empty() && cur.back() == g && is_odd(s.degree(g))) continue;
      cur.push_back(g);
      out.push_back(cur);
      self(self, g, w);
      cur.pop_back();
    }
  };
  rec(rec, 0, 0);
  std::stable_sort(out.begin(), out.end(), [](const Word& a, const Word& b) { return a.size() < b.size(); });
  return out;
}

/** Product in S(V) of a list of elements. */
inline WordSum multiply(const FilteredSpace& s, std::span<const Element> factors) {
  WordSum out;
  std::vector<std::size_t> gens(factors.size());
  auto rec = [&](auto&& self, std::size_t i, const Scalar& coeff) -> void {
    if (i == factors.size()) {
      auto n = normalize_word(s, gens);
      if (n) out.add(n->word, coeff * n->sign);
      return;
    }
    for (const auto& [g, c] : factors[i]) {
      gens[i] = g;
      self(self, i + 1, coeff * c);
    }
  };
  rec(rec, 0, Scalar(1));
  return out;
}

inline std::vector<int> word_degrees(const FilteredSpace& s, const Word& w) {
  std::vector<int> d;
  for (auto g : w) d.push_back(s.degree(g));
  return d;
}

/** Q^t_n(w): the S^t-component of the coderivation extending Q¹. */
inline WordSum coderivation_component(const MultiMap& q, std::size_t t, const Word& w) {
  const std::size_t n = w.size();
  if (t < 1 || t > n) throw ArgumentError("coderivation_component: need 1 <= t <= n");
  const auto& s = *q.source();
  require_same_space(q.source(), q.target(), "coderivation source and target");
  const std::size_t p = n - t + 1;
  auto degs = word_degrees(s, w);
  WordSum out;
  for (const auto& perm : shuffles(p, t - 1)) {
    Word head, tail;
    for (std::size_t i = 0; i < p; ++i) head.push_back(w[perm[i]]);
    for (std::size_t i = p; i < n; ++i) tail.push_back(w[perm[i]]);
    const Element& val = q.at(head);
    if (val.is_zero()) continue;
    int eps = koszul_sign(perm, degs);
    std::vector<std::size_t> raw(t);
    for (std::size_t i = 0; i < tail.size(); ++i) raw[i + 1] = tail[i];
    for (const auto& [g, c] : val) {
      raw[0] = g;
      auto nw = normalize_word(s, raw);
      if (nw) out.add(nw->word, c * (eps * nw->sign));
    }
  }
  return out;
}

/** Φ^p_m(w): the S^p-component of the coalgebra map extending Φ¹. */
inline WordSum morphism_component(const MultiMap& phi, std::size_t p, const Word& w) {
  const std::size_t m = w.size();
  if (p < 1 || p > m) throw ArgumentError("morphism_component: need 1 <= p <= m");
  const auto& s = *phi.source();
  auto degs = word_degrees(s, w);
  WordSum out;
  std::vector<Element> images(p);
  for (const auto& blocks : ordered_block_partitions(m, p)) {
    std::vector<std::size_t> perm;
    bool zero = false;
    for (std::size_t b = 0; b < p && !zero; ++b) {
      Word sub;
      for (auto i : blocks[b]) {
        sub.push_back(w[i]);
        perm.push_back(i);
      }
      images[b] = phi.at(sub);
      zero = images[b].is_zero();
    }
    if (zero) continue;
    int eps = koszul_sign(perm, degs);
    out.add_scaled(multiply(*phi.target(), images), Scalar(eps));
  }
  return out;
}

/** Full coderivation extension applied to a combination of words. */
inline WordSum apply_coderivation(const MultiMap& q, const WordSum& x) {
  WordSum out;
  for (const auto& [w, c] : x)
    for (std::size_t t = 1; t <= w.size(); ++t) out.add_scaled(coderivation_component(q, t, w), c);
  return out;
}

/** Full coalgebra-map extension applied to a combination of words. */
inline WordSum apply_morphism(const MultiMap& phi, const WordSum& x) {
  WordSum out;
  for (const auto& [w, c] : x)
    for (std::size_t p = 1; p <= w.size(); ++p) out.add_scaled(morphism_component(phi, p, w), c);
  return out;
}

/** (ΨΦ)¹_n = Σ_t Ψ¹_t Φ^t_n on every live word of the source. */
inline MultiMap compose_morphisms(const MultiMap& psi, const MultiMap& phi) {
  require_same_space(phi.target(), psi.source(), "compose_morphisms");
  MultiMap out(phi.source(), psi.target(), phi.degree() + psi.degree());
  for (const auto& w : live_words(*phi.source(), psi.target()->bound())) {
    Element v;
    for (std::size_t t = 1; t <= w.size(); ++t) v += psi.apply(morphism_component(phi, t, w));
    if (!v.is_zero()) out.set(w, std::move(v));
  }
  return out;
}

enum class Side { pre, post };

/**
 * Side::pre gives (ΦQ)¹ with Q a codifferential on the source of Φ;
 * Side::post gives (QΦ)¹ with Q on the target.
 */
inline MultiMap compose_coderivation(const MultiMap& phi, const MultiMap& q, Side side) {
  MultiMap out(phi.source(), phi.target(), phi.degree() + q.degree());
  if (side == Side::pre) {
    require_same_space(q.source(), phi.source(), "compose_coderivation (pre)");
    for (const auto& w : live_words(*phi.source(), phi.target()->bound())) {
      Element v;
      for (std::size_t t = 1; t <= w.size(); ++t) v += phi.apply(coderivation_component(q, t, w));
      if (!v.is_zero()) out.set(w, std::move(v));
    }
  } else {
    require_same_space(q.source(), phi.target(), "compose_coderivation (post)");
    for (const auto& w : live_words(*phi.source(), phi.target()->bound())) {
      Element v;
      for (std::size_t t = 1; t <= w.size(); ++t) v += q.apply(morphism_component(phi, t, w));
      if (!v.is_zero()) out.set(w, std::move(v));
    }
  }
  return out;
}

struct FiltrationViolation {
  std::string word;
  std::string generator;
};

struct FiltrationReport {
  std::vector<FiltrationViolation> violations;
  bool ok() const { return violations.empty(); }
};

/** Weight additivity: each value lies in F_{weight(word)}. */
inline FiltrationReport check_filtration_compat(const MultiMap& m) {
  FiltrationReport r;
  for (const auto& [w, v] : m.entries()) {
    int ww = word_weight(*m.source(), w);
    for (const auto& [g, c] : v)
      if (m.target()->weight(g) < ww) r.violations.push_back({word_to_string(*m.source(), w), m.target()->id(g)});
  }
  return r;
}

inline MultiMap strict_morphism(const LinearMap& f) {
  if (f.shift() != 0) throw ArgumentError("strict_morphism: map must have degree 0");
  MultiMap out(f.source(), f.target(), 0);
  for (std::size_t i = 0; i < f.source()->dim(); ++i)
    if (!f.column(i).is_zero()) out.set({i}, f.column(i));
  return out;
}

inline MultiMap identity_morphism(const SpacePtr& s) { return strict_morphism(LinearMap::identity(s)); }

inline LinearMap linear_part(const MultiMap& m) {
  LinearMap f(m.source(), m.target(), m.degree());
  for (std::size_t i = 0; i < m.source()->dim(); ++i) f.set_column(i, m.at({i}));
  return f;
}

inline bool is_strict(const MultiMap& m) { return m.max_arity() <= 1; }

/**
 * Recursive inverse of a coalgebra map whose linear term has the filtered
 * inverse psi11: Ψ¹_m = -psi11 Σ_{t>=2} Φ¹_t Ψ^t_m, arity by arity.
 */
inline MultiMap invert_coalgebra_map(const MultiMap& phi, const LinearMap& psi11) {
  MultiMap psi(phi.target(), phi.source(), 0);
  auto words = live_words(*phi.target(), phi.source()->bound());
  for (const auto& w : words)
    if (w.size() == 1 && !psi11.column(w[0]).is_zero()) psi.set(w, psi11.column(w[0]));
  for (const auto& w : words) {
    if (w.size() < 2) continue;
    Element acc;
    for (std::size_t t = 2; t <= w.size(); ++t) acc += phi.apply(morphism_component(psi, t, w));
    Element v = -psi11(acc);
    if (!v.is_zero()) psi.set(w, std::move(v));
  }
  return psi;
}

}  // namespace linf
