// Words and formal sums over an indexed non-commutative generator alphabet,
// the * involution, and abelianization.  The rewriting engine that brings
// these to canonical form lives in rewrite.hpp.
#pragma once

#include <braidq/coeff.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <vector>

namespace braidq {

// Alpha-type letters (x, a) carry weight 2 in the termination measure,
// gamma-type letters (y, c) weight 1.
enum class Component : std::uint8_t { alpha = 0, gamma = 1 };

struct Generator {
  int copy = 0;  // sequence position in the system's global copy order
  Component comp = Component::alpha;
  bool starred = false;

  // Canonical intra-copy letter order: y < y* < x < x*.
  int rank() const {
    return (comp == Component::gamma ? 0 : 2) + (starred ? 1 : 0);
  }
  int weight() const { return comp == Component::alpha ? 2 : 1; }
  Generator star() const { return {copy, comp, !starred}; }

  friend auto operator<=>(const Generator&, const Generator&) = default;
};

struct Word {
  std::vector<Generator> letters;

  Word() = default;
  explicit Word(std::vector<Generator> ls) : letters(std::move(ls)) {}
  explicit Word(Generator g) : letters{g} {}

  bool empty() const { return letters.empty(); }
  size_t size() const { return letters.size(); }

  Word star() const {
    Word r;
    r.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
      r.letters.push_back(it->star());
    return r;
  }

  friend Word operator*(const Word& a, const Word& b) {
    Word r = a;
    r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
    return r;
  }
  friend auto operator<=>(const Word&, const Word&) = default;
};

// Lexicographic termination measure of the rewriting engine:
//   (cross-copy inversions, weighted degree, intra-copy inversions),
// where an inversion is any (not necessarily adjacent) pair out of canonical
// order.  Every rule application must strictly decrease this.
struct Measure {
  long cross = 0, degree = 0, intra = 0;
  friend auto operator<=>(const Measure&, const Measure&) = default;
};

inline Measure measure(const Word& w) {
  Measure m;
  const auto& ls = w.letters;
  for (size_t p = 0; p < ls.size(); ++p) {
    m.degree += ls[p].weight();
    for (size_t r = p + 1; r < ls.size(); ++r) {
      if (ls[p].copy < ls[r].copy) ++m.cross;          // later copies belong left
      else if (ls[p].copy == ls[r].copy && ls[p].rank() > ls[r].rank()) ++m.intra;
    }
  }
  return m;
}

// Formal sum of words with LaurentPoly coefficients.  Not kept in canonical
// form; normalize() (rewrite.hpp) produces the canonical representative.
class NCPoly {
 public:
  NCPoly() = default;
  explicit NCPoly(Generator g) { terms_[Word(g)] = LaurentPoly(1); }
  explicit NCPoly(Word w, LaurentPoly c = LaurentPoly(1)) {
    if (!c.is_zero()) terms_[std::move(w)] = std::move(c);
  }

  static NCPoly identity() { return NCPoly(Word(), LaurentPoly(1)); }
  static NCPoly zero() { return {}; }

  const std::map<Word, LaurentPoly>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  NCPoly& add_term(const Word& w, const LaurentPoly& c) {
    if (c.is_zero()) return *this;
    auto [it, inserted] = terms_.emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
    return *this;
  }

  friend NCPoly operator+(const NCPoly& a, const NCPoly& b) {
    NCPoly r = a;
    for (const auto& [w, c] : b.terms_) r.add_term(w, c);
    return r;
  }
  friend NCPoly operator-(const NCPoly& a, const NCPoly& b) {
    NCPoly r = a;
    for (const auto& [w, c] : b.terms_) r.add_term(w, -c);
    return r;
  }
  friend NCPoly operator-(const NCPoly& a) {
    NCPoly r;
    for (const auto& [w, c] : a.terms_) r.terms_[w] = -c;
    return r;
  }
  friend NCPoly operator*(const NCPoly& a, const NCPoly& b) {
    NCPoly r;
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_) r.add_term(wa * wb, ca * cb);
    return r;
  }
  friend NCPoly operator*(const LaurentPoly& c, const NCPoly& a) {
    NCPoly r;
    for (const auto& [w, cw] : a.terms_) r.add_term(w, c * cw);
    return r;
  }
  NCPoly& operator+=(const NCPoly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  NCPoly& operator-=(const NCPoly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  NCPoly& operator*=(const NCPoly& o) { return *this = *this * o; }
  friend bool operator==(const NCPoly& a, const NCPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const NCPoly& a, const NCPoly& b) { return !(a == b); }

  // The * involution: reverses words, stars letters, conjugates coefficients.
  NCPoly star() const {
    NCPoly r;
    for (const auto& [w, c] : terms_) r.terms_[w.star()] = c.conj();
    return r;
  }

  LaurentPoly coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? LaurentPoly() : it->second;
  }

  // Evaluates every coefficient at a numeric q; words unchanged.
  NCPoly eval_coeffs(const Rational& q_value) const {
    NCPoly r;
    for (const auto& [w, c] : terms_) {
      GaussRational v = c.eval(q_value);
      if (!v.is_zero()) r.terms_[w] = LaurentPoly(v);
    }
    return r;
  }

 private:
  std::map<Word, LaurentPoly> terms_;
};

inline NCPoly nc_mul(const NCPoly& a, const NCPoly& b) { return a * b; }
inline NCPoly star(const NCPoly& a) { return a.star(); }

// Commutative image: each word maps to the multiset of its letters
// (represented by the sorted letter sequence), coefficients merged.
struct AbelianPoly {
  std::map<Word, LaurentPoly> terms;

  bool is_zero() const { return terms.empty(); }

  friend AbelianPoly operator-(const AbelianPoly& a, const AbelianPoly& b) {
    AbelianPoly r = a;
    for (const auto& [w, c] : b.terms) {
      auto [it, inserted] = r.terms.emplace(w, -c);
      if (!inserted) {
        it->second -= c;
        if (it->second.is_zero()) r.terms.erase(it);
      }
    }
    return r;
  }
};

inline AbelianPoly abelianize(const NCPoly& a) {
  AbelianPoly r;
  for (const auto& [w, c] : a.terms()) {
    Word s = w;
    std::sort(s.letters.begin(), s.letters.end());
    auto [it, inserted] = r.terms.emplace(std::move(s), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) r.terms.erase(it);
    }
  }
  return r;
}

inline std::map<Word, EpsSeries> expand_terms_eps(const NCPoly& a, int order) {
  std::map<Word, EpsSeries> r;
  for (const auto& [w, c] : a.terms()) r.emplace(w, lp_expand_eps(c, order));
  return r;
}

}  // namespace braidq
