#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace linf {

using Scalar = mpq_class;

/** Raised for malformed input: bad indices, mismatched spaces, wrong degrees. */
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/** Raised when a construction's mathematical precondition fails. */
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Scalar parse_scalar(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ArgumentError("empty rational literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  std::size_t slash = s.find('/');
  auto digits = [&](std::size_t b, std::size_t e) {
    if (b >= e) return false;
    for (std::size_t i = b; i < e; ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  bool ok = slash == std::string::npos ? digits(start, s.size())
                                       : digits(start, slash) && digits(slash + 1, s.size());
  if (!ok) throw ArgumentError("malformed rational literal '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  Scalar q;
  q.set_str(s, 10);
  if (q.get_den() == 0) throw ArgumentError("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Scalar& q) { return q.get_str(); }

/** n/d in lowest terms (mpq_class(n, d) alone does not canonicalize). */
inline Scalar ratio(long n, long d) {
  if (d == 0) throw ArgumentError("zero denominator");
  Scalar q(n, d);
  q.canonicalize();
  return q;
}

inline Scalar factorial(std::size_t n) {
  Scalar r = 1;
  for (std::size_t i = 2; i <= n; ++i) r *= static_cast<unsigned long>(i);
  return r;
}

inline bool is_odd(int degree) { return (degree % 2) != 0; }

// ---------------------------------------------------------------------------
// Sparse vectors with exact coefficients

template <class Key>
class Sparse {
 public:
  using map_type = std::map<Key, Scalar>;
  using const_iterator = typename map_type::const_iterator;

  Sparse() = default;

  static Sparse unit(const Key& k, const Scalar& c = 1) {
    Sparse s;
    s.add(k, c);
    return s;
  }

  const map_type& terms() const { return terms_; }
  const_iterator begin() const { return terms_.begin(); }
  const_iterator end() const { return terms_.end(); }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Scalar coeff(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add(const Key& k, const Scalar& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  void set(const Key& k, const Scalar& c) {
    if (sgn(c) == 0)
      terms_.erase(k);
    else
      terms_[k] = c;
  }

  void add_scaled(const Sparse& o, const Scalar& s) {
    if (sgn(s) == 0) return;
    for (const auto& [k, c] : o.terms_) add(k, c * s);
  }

  Sparse& operator+=(const Sparse& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  Sparse& operator-=(const Sparse& o) {
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  Sparse& operator*=(const Scalar& s) {
    if (sgn(s) == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend Sparse operator+(Sparse a, const Sparse& b) { return a += b; }
  friend Sparse operator-(Sparse a, const Sparse& b) { return a -= b; }
  friend Sparse operator-(Sparse a) { return a *= Scalar(-1); }
  friend Sparse operator*(Sparse a, const Scalar& s) { return a *= s; }
  friend Sparse operator*(const Scalar& s, Sparse a) { return a *= s; }
  friend bool operator==(const Sparse& a, const Sparse& b) { return a.terms_ == b.terms_; }

 private:
  map_type terms_;
};

/** A vector in a FilteredSpace, keyed by generator index. */
using Element = Sparse<std::size_t>;

// ---------------------------------------------------------------------------
// Filtered graded spaces

struct Generator {
  std::string id;
  int degree = 0;
  int weight = 1;
  friend bool operator==(const Generator&, const Generator&) = default;
};

/**
 * Finite graded space with a generator-aligned bounded filtration:
 * F_n is spanned by the generators of weight >= n and F_bound = 0.
 */
class FilteredSpace {
 public:
  FilteredSpace() = default;
  FilteredSpace(std::vector<Generator> gens, int bound) : gens_(std::move(gens)), bound_(bound) {
    if (bound_ < 1) throw ArgumentError("filtration bound must be >= 1");
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      const auto& g = gens_[i];
      if (g.weight < 1) throw ArgumentError("generator '" + g.id + "' has weight < 1");
      if (g.weight >= bound_)
        throw ArgumentError("generator '" + g.id + "' has weight >= bound " + std::to_string(bound_));
      if (!index_.emplace(g.id, i).second) throw ArgumentError("duplicate generator id '" + g.id + "'");
    }
  }

  std::size_t dim() const { return gens_.size(); }
  int bound() const { return bound_; }
  const std::vector<Generator>& generators() const { return gens_; }
  const Generator& gen(std::size_t i) const { return gens_.at(i); }
  int degree(std::size_t i) const { return gens_.at(i).degree; }
  int weight(std::size_t i) const { return gens_.at(i).weight; }
  const std::string& id(std::size_t i) const { return gens_.at(i).id; }

  std::optional<std::size_t> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index(std::string_view id) const {
    auto i = find(id);
    if (!i) throw ArgumentError("unknown generator '" + std::string(id) + "'");
    return *i;
  }

  /** Indices of generators with the given degree and weight >= level. */
  std::vector<std::size_t> select(int degree, int min_weight = 1, int max_weight = 1 << 30) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].degree == degree && gens_[i].weight >= min_weight && gens_[i].weight <= max_weight)
        out.push_back(i);
    return out;
  }

  std::vector<int> degrees() const {
    std::vector<int> d;
    for (const auto& g : gens_) d.push_back(g.degree);
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
  }

  friend bool operator==(const FilteredSpace& a, const FilteredSpace& b) {
    return a.bound_ == b.bound_ && a.gens_ == b.gens_;
  }

 private:
  std::vector<Generator> gens_;
  int bound_ = 1;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const FilteredSpace>;

inline SpacePtr make_space(std::vector<Generator> gens, int bound) {
  return std::make_shared<const FilteredSpace>(std::move(gens), bound);
}

inline bool same_space(const SpacePtr& a, const SpacePtr& b) { return a == b || (a && b && *a == *b); }

inline void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what) {
  if (!same_space(a, b)) throw ArgumentError(std::string("space mismatch: ") + what);
}

/** Direct sum; ids of the second summand get primes appended on collision. */
inline SpacePtr direct_sum_space(const FilteredSpace& a, const FilteredSpace& b) {
  std::vector<Generator> gens = a.generators();
  std::unordered_map<std::string, int> taken;
  for (const auto& g : gens) taken[g.id] = 1;
  for (const auto& g : b.generators()) taken[g.id] = 1;
  for (const auto& g : b.generators()) {
    Generator h = g;
    if (a.find(h.id)) {
      do h.id += "'";
      while (taken.count(h.id));
      taken[h.id] = 1;
    }
    gens.push_back(h);
  }
  return make_space(std::move(gens), std::max(a.bound(), b.bound()));
}

inline int min_weight(const FilteredSpace& s, const Element& v) {
  int w = s.bound();
  for (const auto& [i, c] : v) w = std::min(w, s.weight(i));
  return w;
}

/** Components of v with weight in [lo, hi]. */
inline Element weight_band(const FilteredSpace& s, const Element& v, int lo, int hi) {
  Element out;
  for (const auto& [i, c] : v)
    if (s.weight(i) >= lo && s.weight(i) <= hi) out.add(i, c);
  return out;
}

inline bool homogeneous_of_degree(const FilteredSpace& s, const Element& v, int degree) {
  for (const auto& [i, c] : v)
    if (s.degree(i) != degree) return false;
  return true;
}

inline std::string element_to_string(const FilteredSpace& s, const Element& v) {
  if (v.is_zero()) return "0";
  std::string out;
  for (const auto& [i, c] : v) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(c) + ")" + s.id(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Koszul signs, words, shuffles

/**
 * Sign e with x_{p[0]} ... x_{p[n-1]} = e * x_0 ... x_{n-1} in the free
 * graded-commutative algebra. Permutations are 0-based.
 */
inline int koszul_sign(std::span<const std::size_t> perm, std::span<const int> degrees) {
  const std::size_t n = perm.size();
  if (degrees.size() != n) throw ArgumentError("koszul_sign: permutation and degree lengths differ");
  std::vector<char> seen(n, 0);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw ArgumentError("koszul_sign: not a permutation");
    seen[p] = 1;
  }
  int sign = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (perm[i] > perm[j] && is_odd(degrees[perm[i]]) && is_odd(degrees[perm[j]])) sign = -sign;
  return sign;
}

/** Multiset of generator indices in ascending order; an element of S(V). */
using Word = std::vector<std::size_t>;

struct SignedWord {
  Word word;
  int sign = 1;
};

/** Sorts to canonical order with the Koszul sign; nullopt if an odd generator repeats. */
inline std::optional<SignedWord> normalize_word(const FilteredSpace& s, std::span<const std::size_t> raw) {
  const std::size_t n = raw.size();
  for (auto g : raw)
    if (g >= s.dim()) throw ArgumentError("normalize_word: generator index outside the space");
  SignedWord out{Word(raw.begin(), raw.end()), 1};
  // insertion sort, counting odd-odd transpositions
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = i; j > 0 && out.word[j - 1] > out.word[j]; --j) {
      if (is_odd(s.degree(out.word[j - 1])) && is_odd(s.degree(out.word[j]))) out.sign = -out.sign;
      std::swap(out.word[j - 1], out.word[j]);
    }
  }
  for (std::size_t i = 1; i < n; ++i)
    if (out.word[i] == out.word[i - 1] && is_odd(s.degree(out.word[i]))) return std::nullopt;
  return out;
}

inline std::optional<SignedWord> normalize_word(const FilteredSpace& s, const std::vector<std::string>& ids) {
  Word raw;
  for (const auto& id : ids) raw.push_back(s.index(id));
  return normalize_word(s, raw);
}

inline bool is_canonical(const FilteredSpace& s, const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] < w[i - 1]) return false;
    if (w[i] == w[i - 1] && is_odd(s.degree(w[i]))) return false;
  }
  return true;
}

inline int word_degree(const FilteredSpace& s, const Word& w) {
  int d = 0;
  for (auto g : w) d += s.degree(g);
  return d;
}

inline int word_weight(const FilteredSpace& s, const Word& w) {
  int d = 0;
  for (auto g : w) d += s.weight(g);
  return d;
}

inline std::string word_to_string(const FilteredSpace& s, const Word& w) {
  std::string out;
  for (auto g : w) {
    if (!out.empty()) out += ".";
    out += s.id(g);
  }
  return out;
}

/** Linear combination of words of S(V). */
using WordSum = Sparse<Word>;

/** All (p,q)-shuffles of {0..p+q-1}, as permutations listed slot by slot. */
inline std::vector<std::vector<std::size_t>> shuffles(std::size_t p, std::size_t q) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = p + q;
  // choose which values occupy the first p slots
  std::vector<std::size_t> pick(p);
  std::vector<char> chosen(n, 0);
  auto emit = [&] {
    std::vector<std::size_t> perm(pick);
    for (std::size_t v = 0; v < n; ++v)
      if (!chosen[v]) perm.push_back(v);
    out.push_back(std::move(perm));
  };
  auto rec = [&](auto&& self, std::size_t slot, std::size_t from) -> void {
    if (slot == p) {
      emit();
      return;
    }
    for (std::size_t v = from; v + (p - slot) <= n; ++v) {
      pick[slot] = v;
      chosen[v] = 1;
      self(self, slot + 1, v + 1);
      chosen[v] = 0;
    }
  };
  rec(rec, 0, 0);
  return out;
}

/**
 * Partitions of {0..m-1} into exactly t nonempty blocks, each block increasing
 * and blocks ordered by their minima (the unshuffles Sh^>).
 */
inline std::vector<std::vector<std::vector<std::size_t>>> ordered_block_partitions(std::size_t m, std::size_t t) {
  std::vector<std::vector<std::vector<std::size_t>>> out;
  std::vector<std::vector<std::size_t>> blocks;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (blocks.size() > t) return;
    if (m - i < t - blocks.size()) return;
    if (i == m) {
      if (blocks.size() == t) out.push_back(blocks);
      return;
    }
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      blocks[j].push_back(i);
      self(self, i + 1);
      blocks[j].pop_back();
    }
    blocks.push_back({i});
    self(self, i + 1);
    blocks.pop_back();
  };
  if (t == 0) {
    if (m == 0) out.push_back({});
    return out;
  }
  rec(rec, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Exact linear algebra

/** Rational matrix with sparse row storage. */
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows) {
    for (const auto& r : rows) {
      cols_ = std::max(cols_, r.size());
      std::map<std::size_t, Scalar> row;
      std::size_t c = 0;
      for (long v : r) {
        if (v != 0) row[c] = v;
        ++c;
      }
      data_.push_back(std::move(row));
    }
  }

  std::size_t rows() const { return data_.size(); }
  std::size_t cols() const { return cols_; }

  Scalar get(std::size_t r, std::size_t c) const {
    auto it = data_.at(r).find(c);
    return it == data_[r].end() ? Scalar(0) : it->second;
  }
  void set(std::size_t r, std::size_t c, const Scalar& v) {
    check(r, c);
    if (sgn(v) == 0)
      data_[r].erase(c);
    else
      data_[r][c] = v;
  }
  void add(std::size_t r, std::size_t c, const Scalar& v) {
    check(r, c);
    if (sgn(v) == 0) return;
    auto [it, ins] = data_[r].try_emplace(c, v);
    if (!ins) {
      it->second += v;
      if (sgn(it->second) == 0) data_[r].erase(it);
    }
  }
  std::size_t add_row() {
    data_.emplace_back();
    return data_.size() - 1;
  }
  void resize_cols(std::size_t c) { cols_ = std::max(cols_, c); }

  const std::map<std::size_t, Scalar>& row(std::size_t r) const { return data_.at(r); }
  std::map<std::size_t, Scalar>& row(std::size_t r) { return data_.at(r); }
  void swap_rows(std::size_t a, std::size_t b) { std::swap(data_[a], data_[b]); }

  std::vector<Scalar> multiply(const std::vector<Scalar>& x) const {
    std::vector<Scalar> y(rows());
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& [c, v] : data_[r]) y[r] += v * x.at(c);
    return y;
  }

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= data_.size() || c >= cols_) throw ArgumentError("matrix index out of range");
  }
  std::size_t cols_ = 0;
  std::vector<std::map<std::size_t, Scalar>> data_;
};

struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of row i
  std::size_t rank() const { return pivots.size(); }
};

/**
 * Reduced row echelon form. Pivots are taken leftmost-first, from the first
 * available row; only the first pivot_limit columns may hold pivots.
 */
inline Rref rref(Matrix m, std::size_t pivot_limit = static_cast<std::size_t>(-1)) {
  Rref out;
  const std::size_t limit = std::min(pivot_limit, m.cols());
  const std::size_t nrows = m.rows();
  // column -> rows having a nonzero there, kept lazily
  std::size_t prow = 0;
  for (std::size_t c = 0; c < limit && prow < nrows; ++c) {
    std::size_t found = nrows;
    for (std::size_t r = prow; r < nrows; ++r) {
      auto& row = m.row(r);
      auto it = row.find(c);
      if (it != row.end()) {
        found = r;
        break;
      }
    }
    if (found == nrows) continue;
    m.swap_rows(prow, found);
    auto& piv = m.row(prow);
    Scalar inv = 1 / piv.at(c);
    if (inv != 1)
      for (auto& [k, v] : piv) v *= inv;
    for (std::size_t r = 0; r < nrows; ++r) {
      if (r == prow) continue;
      auto& row = m.row(r);
      auto it = row.find(c);
      if (it == row.end()) continue;
      Scalar f = it->second;
      for (const auto& [k, v] : piv) {
        auto [jt, ins] = row.try_emplace(k, -f * v);
        if (!ins) {
          jt->second -= f * v;
          if (sgn(jt->second) == 0) row.erase(jt);
        }
      }
    }
    out.pivots.push_back(c);
    ++prow;
  }
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank(); }

struct SolveResult {
  std::optional<std::vector<Scalar>> solution;  // free variables set to zero
  std::size_t rank = 0;
  std::size_t unknowns = 0;
  std::optional<std::size_t> inconsistent_row;  // row of the reduced system reading 0 = nonzero
  bool consistent() const { return solution.has_value(); }
  bool unique() const { return solution.has_value() && rank == unknowns; }
};

/** Solves A x = b for each right-hand side column of B. */
inline std::vector<SolveResult> rref_solve_many(const Matrix& a, const std::vector<std::vector<Scalar>>& rhs) {
  const std::size_t n = a.cols();
  Matrix aug(a.rows(), n + rhs.size());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (const auto& [c, v] : a.row(r)) aug.set(r, c, v);
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    if (rhs[k].size() != a.rows()) throw ArgumentError("rref_solve: right-hand side length mismatch");
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (sgn(rhs[k][r]) != 0) aug.set(r, n + k, rhs[k][r]);
  }
  Rref red = rref(std::move(aug), n);
  std::vector<SolveResult> out(rhs.size());
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    auto& res = out[k];
    res.rank = red.rank();
    res.unknowns = n;
    for (std::size_t r = red.rank(); r < red.reduced.rows(); ++r) {
      const auto& row = red.reduced.row(r);
      if (row.count(n + k)) {
        res.inconsistent_row = r;
        break;
      }
    }
    if (res.inconsistent_row) continue;
    std::vector<Scalar> x(n);
    for (std::size_t i = 0; i < red.rank(); ++i) {
      const auto& row = red.reduced.row(i);
      auto it = row.find(n + k);
      if (it != row.end()) x[red.pivots[i]] = it->second;
    }
    res.solution = std::move(x);
  }
  return out;
}

inline SolveResult rref_solve(const Matrix& a, const std::vector<Scalar>& b) { return rref_solve_many(a, {b}).front(); }

/** Basis of the null space, one vector per free column (that column set to 1). */
inline std::vector<std::vector<Scalar>> null_space(const Matrix& a) {
  Rref red = rref(a);
  std::vector<char> is_pivot(a.cols(), 0);
  for (auto p : red.pivots) is_pivot[p] = 1;
  std::vector<std::vector<Scalar>> out;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> v(a.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < red.rank(); ++i) v[red.pivots[i]] = -red.reduced.get(i, f);
    out.push_back(std::move(v));
  }
  return out;
}

/**
 * Span of a list of elements. Keeps an independent sub-list as its basis (in
 * insertion order) and answers membership and coordinate queries exactly.
 */
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(const std::vector<Element>& spanning) {
    for (const auto& v : spanning) insert(v);
  }

  /** Adds v if it is independent of the current basis; returns whether it was added. */
  bool insert(const Element& v) {
    auto [rem, comb] = reduce(v);
    if (rem.is_zero()) return false;
    std::size_t idx = basis_.size();
    basis_.push_back(v);
    std::size_t p = rem.begin()->first;
    Scalar inv = 1 / rem.begin()->second;
    rem *= inv;
    comb *= inv;
    comb.add(idx, inv);
    // keep the echelon rows fully reduced at the new pivot
    for (auto& row : rows_) {
      Scalar f = row.vec.coeff(p);
      if (sgn(f) == 0) continue;
      row.vec.add_scaled(rem, -f);
      row.comb.add_scaled(comb, -f);
    }
    rows_.push_back({p, std::move(rem), std::move(comb)});
    return true;
  }

  const std::vector<Element>& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }
  bool contains(const Element& v) const { return reduce(v).first.is_zero(); }

  /** Coordinates of v in basis(), or nullopt if v is outside the span. */
  std::optional<Element> coordinates(const Element& v) const {
    auto [rem, comb] = reduce(v);
    if (!rem.is_zero()) return std::nullopt;
    return -comb;
  }

  /** Echelon-reduced basis vectors of the same span (pivot coefficient 1). */
  std::vector<Element> echelon() const {
    std::vector<std::pair<std::size_t, Element>> rows;
    for (const auto& r : rows_) rows.emplace_back(r.pivot, r.vec);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Element> out;
    for (auto& r : rows) out.push_back(std::move(r.second));
    return out;
  }

 private:
  struct Row {
    std::size_t pivot;
    Element vec;   // echelon row
    Element comb;  // vec = sum comb[j] basis_[j]
  };

  // returns (rem, comb) with rem = v + sum_j comb[j] basis_[j]
  std::pair<Element, Element> reduce(const Element& v) const {
    Element rem = v;
    Element comb;
    for (const auto& r : rows_) {
      Scalar f = rem.coeff(r.pivot);
      if (sgn(f) == 0) continue;
      rem.add_scaled(r.vec, -f);
      comb.add_scaled(r.comb, -f);
    }
    return {std::move(rem), std::move(comb)};
  }

  std::vector<Element> basis_;
  std::vector<Row> rows_;
};

// ---------------------------------------------------------------------------
// Linear maps

/** Linear map given by the image of each source generator. */
class LinearMap {
 public:
  LinearMap() = default;
  LinearMap(SpacePtr source, SpacePtr target, int shift = 0)
      : source_(std::move(source)), target_(std::move(target)), shift_(shift), columns_(source_->dim()) {}

  static LinearMap identity(const SpacePtr& s) {
    LinearMap m(s, s, 0);
    for (std::size_t i = 0; i < s->dim(); ++i) m.columns_[i] = Element::unit(i);
    return m;
  }

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  int shift() const { return shift_; }

  const Element& column(std::size_t i) const { return columns_.at(i); }
  void set_column(std::size_t i, Element v) { columns_.at(i) = std::move(v); }
  void add_to_column(std::size_t i, const Element& v) { columns_.at(i) += v; }

  Element operator()(const Element& v) const {
    Element out;
    for (const auto& [i, c] : v) out.add_scaled(columns_.at(i), c);
    return out;
  }

  /** Degree check: each image component has degree = source degree + shift. */
  bool degrees_ok() const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      for (const auto& [j, c] : columns_[i])
        if (target_->degree(j) != source_->degree(i) + shift_) return false;
    return true;
  }

  /** Filtration check: the image of a weight-w generator lies in F_w. */
  bool is_filtered() const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      for (const auto& [j, c] : columns_[i])
        if (target_->weight(j) < source_->weight(i)) return false;
    return true;
  }

  bool is_zero() const {
    for (const auto& c : columns_)
      if (!c.is_zero()) return false;
    return true;
  }

  LinearMap& operator+=(const LinearMap& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < columns_.size(); ++i) columns_[i] += o.columns_[i];
    return *this;
  }
  LinearMap& operator-=(const LinearMap& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < columns_.size(); ++i) columns_[i] -= o.columns_[i];
    return *this;
  }
  LinearMap& operator*=(const Scalar& s) {
    for (auto& c : columns_) c *= s;
    return *this;
  }
  friend LinearMap operator+(LinearMap a, const LinearMap& b) { return a += b; }
  friend LinearMap operator-(LinearMap a, const LinearMap& b) { return a -= b; }
  friend LinearMap operator*(const Scalar& s, LinearMap a) { return a *= s; }

  friend bool operator==(const LinearMap& a, const LinearMap& b) {
    return same_space(a.source_, b.source_) && same_space(a.target_, b.target_) && a.shift_ == b.shift_ &&
           a.columns_ == b.columns_;
  }

 private:
  void check_compatible(const LinearMap& o) const {
    require_same_space(source_, o.source_, "linear map sources");
    require_same_space(target_, o.target_, "linear map targets");
    if (shift_ != o.shift_) throw ArgumentError("linear maps of different degree");
  }

  SpacePtr source_, target_;
  int shift_ = 0;
  std::vector<Element> columns_;
};

/** g after f. */
inline LinearMap compose(const LinearMap& g, const LinearMap& f) {
  require_same_space(f.target(), g.source(), "composition");
  LinearMap out(f.source(), g.target(), f.shift() + g.shift());
  for (std::size_t i = 0; i < f.source()->dim(); ++i) out.set_column(i, g(f.column(i)));
  return out;
}

/** Matrix of f restricted to the given source columns and target rows. */
inline Matrix restrict_matrix(const LinearMap& f, const std::vector<std::size_t>& cols,
                              const std::vector<std::size_t>& rows) {
  Matrix m(rows.size(), cols.size());
  std::unordered_map<std::size_t, std::size_t> row_of;
  for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = r;
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [j, v] : f.column(cols[c])) {
      auto it = row_of.find(j);
      if (it != row_of.end()) m.set(it->second, c, v);
    }
  return m;
}

/** Filtered two-sided inverse of f, if f is bijective with filtered inverse. */
inline std::optional<LinearMap> filtered_inverse(const LinearMap& f) {
  const auto& s = *f.source();
  const auto& t = *f.target();
  if (s.dim() != t.dim() || f.shift() != 0) return std::nullopt;
  std::vector<std::size_t> all(s.dim());
  std::iota(all.begin(), all.end(), 0);
  Matrix m = restrict_matrix(f, all, all);
  std::vector<std::vector<Scalar>> rhs;
  for (std::size_t j = 0; j < t.dim(); ++j) {
    std::vector<Scalar> e(t.dim());
    e[j] = 1;
    rhs.push_back(std::move(e));
  }
  auto sols = rref_solve_many(m, rhs);
  LinearMap inv(f.target(), f.source(), 0);
  for (std::size_t j = 0; j < t.dim(); ++j) {
    if (!sols[j].unique()) return std::nullopt;
    Element col;
    for (std::size_t i = 0; i < s.dim(); ++i) col.add(i, (*sols[j].solution)[i]);
    inv.set_column(j, std::move(col));
  }
  if (!inv.is_filtered()) return std::nullopt;
  return inv;
}

}  // namespace linf
