#pragma once

#include <array>
#include <bit>
#include <set>

#include "sym_coalgebra.hpp"

namespace linf {

// Coefficient cdgas: Q, polynomial forms on the 1- and 2-simplex, and Q x Q.

enum class CdgaKind { rationals, omega1, omega2, rational_pair };

/**
 * Basis monomial t1^a t2^b dt_S of a coefficient cdga. For omega1 the single
 * variable is z = t1 and mask bit 0 is dz; for rational_pair, slot picks the factor.
 */
struct FormMonomial {
  std::array<int, 2> exp{0, 0};
  unsigned mask = 0;
  int slot = 0;
  friend auto operator<=>(const FormMonomial&, const FormMonomial&) = default;
};

inline int form_degree(const FormMonomial& m) { return std::popcount(m.mask); }
inline int form_size(const FormMonomial& m) { return m.exp[0] + m.exp[1] + form_degree(m); }

struct Cdga {
  CdgaKind kind = CdgaKind::rationals;

  int variables() const {
    switch (kind) {
      case CdgaKind::omega1: return 1;
      case CdgaKind::omega2: return 2;
      default: return 0;
    }
  }
  bool is_forms() const { return kind == CdgaKind::omega1 || kind == CdgaKind::omega2; }

  FormMonomial one() const { return {}; }

  /** Monomials of size (polynomial degree + form degree) at most cap. */
  std::vector<FormMonomial> basis(int cap) const {
    std::vector<FormMonomial> out;
    switch (kind) {
      case CdgaKind::rationals: out.push_back({}); break;
      case CdgaKind::rational_pair:
        out.push_back({{0, 0}, 0, 0});
        out.push_back({{0, 0}, 0, 1});
        break;
      case CdgaKind::omega1:
        for (int k = 0; k <= cap; ++k) out.push_back({{k, 0}, 0, 0});
        for (int k = 0; k + 1 <= cap; ++k) out.push_back({{k, 0}, 1, 0});
        break;
      case CdgaKind::omega2:
        for (unsigned mask : {0u, 1u, 2u, 3u})
          for (int total = 0; total + std::popcount(mask) <= cap; ++total)
            for (int a = total; a >= 0; --a) out.push_back({{a, total - a}, mask, 0});
        break;
    }
    return out;
  }

  /** Product of two monomials: a monomial with a sign, or nullopt for zero. */
  std::optional<std::pair<FormMonomial, int>> multiply(const FormMonomial& a, const FormMonomial& b) const {
    if (kind == CdgaKind::rational_pair) {
      if (a.slot != b.slot) return std::nullopt;
      return std::pair{a, 1};
    }
    if (a.mask & b.mask) return std::nullopt;
    int sign = 1;
    // dt_i in a passing dt_j in b with j < i
    for (int i = 0; i < 2; ++i)
      if (a.mask & (1u << i))
        for (int j = 0; j < i; ++j)
          if (b.mask & (1u << j)) sign = -sign;
    FormMonomial m{{a.exp[0] + b.exp[0], a.exp[1] + b.exp[1]}, a.mask | b.mask, 0};
    return std::pair{m, sign};
  }

  /** de Rham differential of a monomial. */
  std::vector<std::pair<FormMonomial, Scalar>> differential(const FormMonomial& m) const {
    std::vector<std::pair<FormMonomial, Scalar>> out;
    if (!is_forms()) return out;
    for (int i = 0; i < variables(); ++i) {
      if (m.exp[i] == 0 || (m.mask & (1u << i))) continue;
      int sign = 1;
      for (int j = 0; j < i; ++j)
        if (m.mask & (1u << j)) sign = -sign;
      FormMonomial r = m;
      r.exp[i] -= 1;
      r.mask |= 1u << i;
      out.emplace_back(r, Scalar(sign * m.exp[i]));
    }
    return out;
  }

  std::string name() const {
    switch (kind) {
      case CdgaKind::rationals: return "Q";
      case CdgaKind::omega1: return "Omega1";
      case CdgaKind::omega2: return "Omega2";
      case CdgaKind::rational_pair: return "QxQ";
    }
    return "?";
  }
};

inline Cdga cdga_from_name(std::string_view name) {
  if (name == "Q" || name == "Omega0") return {CdgaKind::rationals};
  if (name == "Omega1") return {CdgaKind::omega1};
  if (name == "Omega2") return {CdgaKind::omega2};
  if (name == "QxQ") return {CdgaKind::rational_pair};
  throw ArgumentError("unsupported coefficient algebra '" + std::string(name) + "'");
}

inline std::string monomial_to_string(const Cdga& b, const FormMonomial& m) {
  if (b.kind == CdgaKind::rational_pair) return m.slot == 0 ? "(1,0)" : "(0,1)";
  std::vector<std::string> parts;
  const char* vars1[] = {"z"};
  const char* vars2[] = {"t1", "t2"};
  for (int i = 0; i < b.variables(); ++i) {
    const char* v = b.variables() == 1 ? vars1[i] : vars2[i];
    if (m.exp[i] == 1) parts.push_back(v);
    if (m.exp[i] > 1) parts.push_back(std::string(v) + "^" + std::to_string(m.exp[i]));
  }
  for (int i = 0; i < b.variables(); ++i)
    if (m.mask & (1u << i)) parts.push_back(b.variables() == 1 ? "dz" : (i == 0 ? "dt1" : "dt2"));
  if (parts.empty()) return "1";
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "*") + p;
  return s;
}

/** Parses "1", "z^2*dz", "t1*t2^3*dt1*dt2", "(1,0)". */
inline FormMonomial parse_monomial(const Cdga& b, std::string_view text) {
  std::string s(text);
  if (b.kind == CdgaKind::rational_pair) {
    if (s == "(1,0)") return {{0, 0}, 0, 0};
    if (s == "(0,1)") return {{0, 0}, 0, 1};
    throw ArgumentError("bad QxQ basis label '" + s + "'");
  }
  FormMonomial m;
  if (s == "1") return m;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find('*', pos);
    std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::string var = tok;
    int power = 1;
    if (auto c = tok.find('^'); c != std::string::npos) {
      var = tok.substr(0, c);
      power = static_cast<int>(parse_scalar(tok.substr(c + 1)).get_num().get_si());
      if (power < 0) throw ArgumentError("negative exponent in '" + s + "'");
    }
    int nv = b.variables();
    if (nv == 1 && var == "z")
      m.exp[0] += power;
    else if (nv == 2 && var == "t1")
      m.exp[0] += power;
    else if (nv == 2 && var == "t2")
      m.exp[1] += power;
    else if ((nv == 1 && var == "dz") || (nv == 2 && var == "dt1")) {
      if (m.mask & 1u) throw ArgumentError("repeated differential in '" + s + "'");
      if (m.mask & 2u) throw ArgumentError("write dt1 before dt2 in '" + s + "'");
      m.mask |= 1u;
    } else if (nv == 2 && var == "dt2") {
      if (m.mask & 2u) throw ArgumentError("repeated differential in '" + s + "'");
      m.mask |= 2u;
    } else {
      throw ArgumentError("unknown form factor '" + tok + "' for " + b.name());
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return m;
}

/** Element of a coefficient cdga. */
class PolyForm {
 public:
  PolyForm() = default;
  explicit PolyForm(Cdga b) : b_(b) {}
  PolyForm(Cdga b, Sparse<FormMonomial> terms) : b_(b), terms_(std::move(terms)) {}

  static PolyForm constant(Cdga b, const Scalar& c) { return PolyForm(b, Sparse<FormMonomial>::unit({}, c)); }
  /** The coordinate t_i (i = 1, 2) in reduced form; t_0 = 1 - t_1 - t_2. */
  static PolyForm coordinate(Cdga b, int i) {
    PolyForm p(b);
    if (i == 0) {
      p.terms_.add({}, 1);
      for (int k = 0; k < b.variables(); ++k) {
        FormMonomial m;
        m.exp[k] = 1;
        p.terms_.add(m, -1);
      }
    } else {
      FormMonomial m;
      m.exp[i - 1] = 1;
      p.terms_.add(m, 1);
    }
    return p;
  }

  const Cdga& cdga() const { return b_; }
  const Sparse<FormMonomial>& terms() const { return terms_; }
  Sparse<FormMonomial>& terms() { return terms_; }
  bool is_zero() const { return terms_.is_zero(); }

  PolyForm operator*(const PolyForm& o) const {
    PolyForm out(b_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_)
        if (auto p = b_.multiply(ma, mb)) out.terms_.add(p->first, ca * cb * p->second);
    return out;
  }
  PolyForm& operator+=(const PolyForm& o) {
    terms_ += o.terms_;
    return *this;
  }
  PolyForm& operator-=(const PolyForm& o) {
    terms_ -= o.terms_;
    return *this;
  }
  PolyForm operator+(const PolyForm& o) const { return PolyForm(*this) += o; }
  PolyForm operator-(const PolyForm& o) const { return PolyForm(*this) -= o; }
  PolyForm operator*(const Scalar& s) const { return PolyForm(b_, terms_ * s); }

  PolyForm d() const {
    PolyForm out(b_);
    for (const auto& [m, c] : terms_)
      for (const auto& [r, k] : b_.differential(m)) out.terms_.add(r, c * k);
    return out;
  }

  friend bool operator==(const PolyForm& a, const PolyForm& b) { return a.terms_ == b.terms_; }

 private:
  Cdga b_;
  Sparse<FormMonomial> terms_;
};

/**
 * Pullback of forms along an affine map of simplices: images[i] is the image
 * of t_{i+1} as a 0-form on the target cdga.
 */
inline PolyForm substitute(const PolyForm& f, const Cdga& target, const std::vector<PolyForm>& images) {
  PolyForm out(target);
  for (const auto& [m, c] : f.terms()) {
    PolyForm term = PolyForm::constant(target, c);
    for (int i = 0; i < f.cdga().variables(); ++i)
      for (int k = 0; k < m.exp[i]; ++k) term = term * images.at(i);
    for (int i = 0; i < f.cdga().variables(); ++i)
      if (m.mask & (1u << i)) term = term * images.at(i).d();
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Elements of L⊗B as finite sums of generator⊗monomial

using TensorKey = std::pair<std::size_t, FormMonomial>;
using FormElement = Sparse<TensorKey>;

inline FormElement tensor(const Element& x, const PolyForm& b) {
  FormElement out;
  for (const auto& [g, c] : x)
    for (const auto& [m, k] : b.terms()) out.add({g, m}, c * k);
  return out;
}

inline FormElement constant_forms(const Element& x) { return tensor(x, PolyForm::constant({CdgaKind::rationals}, 1)); }

inline int tensor_degree(const FilteredSpace& s, const TensorKey& k) { return s.degree(k.first) + form_degree(k.second); }

inline bool forms_of_degree(const FilteredSpace& s, const FormElement& x, int degree) {
  for (const auto& [k, c] : x)
    if (tensor_degree(s, k) != degree) return false;
  return true;
}

/** Coefficient form of generator g in x. */
inline PolyForm component(const Cdga& b, const FormElement& x, std::size_t g) {
  PolyForm p(b);
  for (const auto& [k, c] : x)
    if (k.first == g) p.terms().add(k.second, c);
  return p;
}

/** Applies a cdga map on coefficients: x⊗b ↦ x⊗f(b). */
template <class F>
FormElement map_coefficients(const Cdga& b, const FormElement& x, F&& f) {
  FormElement out;
  std::map<std::size_t, PolyForm> parts;
  for (const auto& [k, c] : x) parts.try_emplace(k.first, b).first->second.terms().add(k.second, c);
  for (const auto& [g, p] : parts) out += tensor(Element::unit(g), f(p));
  return out;
}

/** d_B(x⊗b) = dx⊗b + (-1)^{|x|} x⊗δb. */
inline FormElement tensor_differential(const MultiMap& q, const Cdga& b, const FormElement& x) {
  const auto& s = *q.source();
  FormElement out;
  for (const auto& [k, c] : x) {
    const auto& [g, m] = k;
    for (const auto& [h, v] : q.at({g})) out.add({h, m}, c * v);
    int sign = is_odd(s.degree(g)) ? -1 : 1;
    for (const auto& [r, v] : b.differential(m)) out.add({g, r}, c * v * sign);
  }
  return out;
}

/**
 * f_B(x_1⊗b_1, ..., x_k⊗b_k) = (-1)^ε f(x_1...x_k)⊗b_1...b_k with
 * ε = Σ_{i<j} |b_i||x_j|, for k >= 2 (and k = 1 without the δ term).
 */
inline FormElement tensor_evaluate(const MultiMap& f, const Cdga& b, std::span<const FormElement* const> args) {
  const auto& s = *f.source();
  const std::size_t k = args.size();
  FormElement out;
  std::vector<std::size_t> gens(k);
  std::vector<FormMonomial> mons(k);
  auto rec = [&](auto&& self, std::size_t i, const Scalar& coeff) -> void {
    if (i == k) {
      int eps = 1;
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t c = a + 1; c < k; ++c)
          if (is_odd(form_degree(mons[a])) && is_odd(s.degree(gens[c]))) eps = -eps;
      Element val = f.evaluate_ordered(gens);
      if (val.is_zero()) return;
      FormMonomial prod = mons[0];
      int sign = eps;
      for (std::size_t a = 1; a < k; ++a) {
        auto p = b.multiply(prod, mons[a]);
        if (!p) return;
        prod = p->first;
        sign *= p->second;
      }
      for (const auto& [h, v] : val) out.add({h, prod}, coeff * v * sign);
      return;
    }
    for (const auto& [key, c] : *args[i]) {
      gens[i] = key.first;
      mons[i] = key.second;
      self(self, i + 1, coeff * c);
    }
  };
  if (k > 0) rec(rec, 0, Scalar(1));
  return out;
}

inline FormElement tensor_evaluate(const MultiMap& f, const Cdga& b, std::initializer_list<const FormElement*> args) {
  return tensor_evaluate(f, b, std::span<const FormElement* const>(args.begin(), args.size()));
}

inline std::string forms_to_string(const FilteredSpace& s, const Cdga& b, const FormElement& x) {
  if (x.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : x) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(c) + ")" + s.id(k.first) + "⊗" + monomial_to_string(b, k.second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Materialized L⊗B with a weight-scaled size cap

/**
 * Finite basis of L⊗B: generator x paired with the monomials of size at most
 * cap·weight(x). This subspace is closed under d_B and under every filtered
 * multilinear map, so it carries the tensor structure exactly.
 */
struct TensorBasis {
  SpacePtr base;
  Cdga cdga;
  int cap = 1;
  SpacePtr space;
  std::vector<TensorKey> decode;
  std::map<TensorKey, std::size_t> encode;

  std::optional<std::size_t> index(const TensorKey& k) const {
    auto it = encode.find(k);
    if (it == encode.end()) return std::nullopt;
    return it->second;
  }

  Element to_element(const FormElement& x) const {
    Element out;
    for (const auto& [k, c] : x) {
      auto i = index(k);
      if (!i) throw ArgumentError("form term outside the materialized tensor basis (raise the cap)");
      out.add(*i, c);
    }
    return out;
  }

  FormElement to_forms(const Element& v) const {
    FormElement out;
    for (const auto& [i, c] : v) out.add(decode.at(i), c);
    return out;
  }
};

inline TensorBasis make_tensor_basis(const SpacePtr& base, Cdga b, int cap) {
  if (cap < 1 && b.is_forms()) throw ArgumentError("tensor cap must be >= 1");
  TensorBasis tb{base, b, cap, nullptr, {}, {}};
  std::vector<Generator> gens;
  for (std::size_t g = 0; g < base->dim(); ++g) {
    const auto& x = base->gen(g);
    for (const auto& m : b.basis(cap * x.weight)) {
      std::string id = x.id;
      if (b.kind == CdgaKind::rational_pair)
        id += m.slot == 0 ? "|0" : "|1";
      else if (!(m == FormMonomial{}))
        id += "*" + monomial_to_string(b, m);
      tb.encode[{g, m}] = gens.size();
      tb.decode.push_back({g, m});
      gens.push_back({id, x.degree + form_degree(m), x.weight});
    }
  }
  tb.space = make_space(std::move(gens), base->bound());
  return tb;
}

/** Tensor extension of a multilinear family to materialized bases. */
inline MultiMap tensor_table(const MultiMap& f, const TensorBasis& src, const TensorBasis& tgt, bool codifferential) {
  MultiMap out(src.space, tgt.space, f.degree());
  const auto& b = src.cdga;
  auto put = [&](const std::vector<std::size_t>& raw, const FormElement& val) {
    auto n = normalize_word(*src.space, raw);
    if (!n) return;
    out.set(n->word, tgt.to_element(val) * Scalar(n->sign));
  };
  std::set<Word> done;
  for (const auto& [w, v] : f.entries()) {
    if (w.size() == 1 && codifferential) continue;
    std::vector<std::vector<FormMonomial>> choices;
    for (auto g : w) choices.push_back(b.basis(src.cap * src.base->weight(g)));
    std::vector<std::size_t> raw(w.size());
    std::vector<FormElement> args(w.size());
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == w.size()) {
        auto n = normalize_word(*src.space, raw);
        if (!n || done.count(n->word)) return;
        done.insert(n->word);
        std::vector<const FormElement*> ptrs;
        for (auto& a : args) ptrs.push_back(&a);
        put(raw, tensor_evaluate(f, b, ptrs));
        return;
      }
      for (const auto& m : choices[i]) {
        raw[i] = *src.index({w[i], m});
        args[i] = FormElement::unit({w[i], m});
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  }
  if (codifferential) {
    for (std::size_t i = 0; i < src.decode.size(); ++i) {
      FormElement x = FormElement::unit(src.decode[i]);
      FormElement dx = tensor_differential(f, b, x);
      if (!dx.is_zero()) out.set({i}, tgt.to_element(dx));
    }
  }
  return out;
}

}  // namespace linf
