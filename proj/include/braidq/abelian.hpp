// Commutative-image arithmetic and epsilon-order analysis.
//
// ncalg.hpp provides the AbelianPoly container and abelianize(); this header
// adds the ring operations, the q = 1 - eps valuation tools, the unitarity
// reduction that removes redundant alpha alpha* pairs, and the first-order
// (Poisson) bracket obtained from single-letter exchange defects.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "braidq/coeff.hpp"
#include "braidq/ncalg.hpp"
#include "braidq/rewrite.hpp"

namespace braidq {

namespace detail {

// Merge one sorted-word term into p, dropping cancelled entries.
inline void ab_add(AbelianPoly& p, Word w, const LaurentPoly& c) {
  if (c.is_zero()) return;
  std::sort(w.letters.begin(), w.letters.end());
  auto [it, inserted] = p.terms.emplace(std::move(w), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) p.terms.erase(it);
  }
}

}  // namespace detail

inline AbelianPoly& operator+=(AbelianPoly& a, const AbelianPoly& b) {
  for (const auto& [w, c] : b.terms) detail::ab_add(a, w, c);
  return a;
}

inline AbelianPoly operator+(const AbelianPoly& a, const AbelianPoly& b) {
  AbelianPoly r = a;
  r += b;
  return r;
}

inline AbelianPoly operator*(const AbelianPoly& a, const AbelianPoly& b) {
  AbelianPoly r;
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms) {
      Word w = wa;
      w.letters.insert(w.letters.end(), wb.letters.begin(), wb.letters.end());
      detail::ab_add(r, std::move(w), ca * cb);
    }
  return r;
}

inline AbelianPoly operator*(const LaurentPoly& s, const AbelianPoly& a) {
  AbelianPoly r;
  for (const auto& [w, c] : a.terms) detail::ab_add(r, w, s * c);
  return r;
}

inline bool operator==(const AbelianPoly& a, const AbelianPoly& b) {
  return (a - b).is_zero();
}

// Multiplicity of the root q = 1, i.e. the order in eps = 1 - q at which the
// coefficient first contributes.  Empty for the zero polynomial.  Negative
// q-powers are cleared first: q^k is a unit at q = 1 so it cannot change the
// valuation.
inline std::optional<int> eps_valuation(const LaurentPoly& c) {
  if (c.is_zero()) return std::nullopt;
  int lo = 0, hi = 0;
  for (const auto& [n, v] : c.terms()) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  // Dense coefficient list of q^{-lo} * c, constant term first.
  std::vector<GaussRational> poly(static_cast<size_t>(hi - lo) + 1);
  for (const auto& [n, v] : c.terms()) poly[static_cast<size_t>(n - lo)] = v;
  int order = 0;
  for (;;) {
    GaussRational at_one;
    for (const auto& v : poly) at_one += v;
    if (!at_one.is_zero()) return order;
    // Synthetic division by (q - 1); exact because q = 1 is a root.
    std::vector<GaussRational> quot(poly.size() - 1);
    GaussRational carry;
    for (size_t k = poly.size(); k-- > 1;) {
      carry += poly[k];
      quot[k - 1] = carry;
    }
    poly = std::move(quot);
    ++order;
    if (poly.empty()) return std::nullopt;
  }
}

// Smallest eps-order at which any term of p survives.
inline std::optional<int> first_eps_order(const AbelianPoly& p) {
  std::optional<int> best;
  for (const auto& [w, c] : p.terms) {
    auto v = eps_valuation(c);
    if (v && (!best || *v < *best)) best = *v;
  }
  return best;
}

// Coefficient of eps^k, each term's Laurent coefficient collapsed to a
// constant.
inline AbelianPoly eps_coefficient(const AbelianPoly& p, int k) {
  AbelianPoly out;
  for (const auto& [w, c] : p.terms) {
    GaussRational v = lp_expand_eps(c, k).coeff(k);
    if (!v.is_zero()) detail::ab_add(out, w, LaurentPoly(v));
  }
  return out;
}

// Rewrite alpha_i alpha_i^* -> 1 - gamma_i gamma_i^* until no commutative
// monomial carries both an alpha and its adjoint from the same copy.  The
// result is a canonical basis for commutative expressions on the unitary
// variety.
inline AbelianPoly reduce_unitarity(const AbelianPoly& p) {
  AbelianPoly cur = p;
  for (;;) {
    AbelianPoly next;
    bool changed = false;
    for (const auto& [m, c] : cur.terms) {
      size_t ia = m.letters.size(), ias = m.letters.size();
      for (size_t k = 0; k < m.letters.size() && ia == m.letters.size(); ++k) {
        const Generator& g = m.letters[k];
        if (g.comp != Component::alpha || g.starred) continue;
        for (size_t l = 0; l < m.letters.size(); ++l) {
          const Generator& h = m.letters[l];
          if (h.copy == g.copy && h.comp == Component::alpha && h.starred) {
            ia = k;
            ias = l;
            break;
          }
        }
      }
      if (ia == m.letters.size()) {
        detail::ab_add(next, m, c);
        continue;
      }
      changed = true;
      Word base;
      for (size_t k = 0; k < m.letters.size(); ++k)
        if (k != ia && k != ias) base.letters.push_back(m.letters[k]);
      detail::ab_add(next, base, c);
      Word with_gamma = base;
      int copy = m.letters[ia].copy;
      with_gamma.letters.push_back(Generator{copy, Component::gamma, false});
      with_gamma.letters.push_back(Generator{copy, Component::gamma, true});
      detail::ab_add(next, std::move(with_gamma), -c);
    }
    if (!changed) return cur;
    cur = std::move(next);
  }
}

namespace detail {

// eps^1 coefficient of the normal-form commutator of two single letters.
// A two-letter word admits at most one rewrite, so this is independent of
// the reduction strategy even when the relation system is not confluent.
inline AbelianPoly letter_exchange(const RelationSystem& sys, Generator g,
                                   Generator h) {
  NCPoly gh(Word{{g, h}});
  NCPoly hg(Word{{h, g}});
  NCPoly diff = normalize(gh, sys) - normalize(hg, sys);
  return eps_coefficient(abelianize(diff), 1);
}

}  // namespace detail

// First-order bracket {a, b}: the biderivation extension of the single-letter
// exchange defects, with all spectator letters frozen at their q = 1 values.
// Unlike eps-expanding a full normal form, this is insensitive to the
// reduction strategy, so it stays meaningful on non-confluent systems.
inline AbelianPoly poisson_bracket(const RelationSystem& sys, const NCPoly& a,
                                   const NCPoly& b) {
  AbelianPoly out;
  for (const auto& [wa, ca] : a.terms()) {
    GaussRational c0a = lp_expand_eps(ca, 0).coeff(0);
    if (c0a.is_zero()) continue;
    for (const auto& [wb, cb] : b.terms()) {
      GaussRational c0b = lp_expand_eps(cb, 0).coeff(0);
      if (c0b.is_zero()) continue;
      GaussRational c = c0a * c0b;
      for (size_t i = 0; i < wa.letters.size(); ++i)
        for (size_t j = 0; j < wb.letters.size(); ++j) {
          AbelianPoly pi =
              detail::letter_exchange(sys, wa.letters[i], wb.letters[j]);
          if (pi.is_zero()) continue;
          Word rest;
          for (size_t k = 0; k < wa.letters.size(); ++k)
            if (k != i) rest.letters.push_back(wa.letters[k]);
          for (size_t k = 0; k < wb.letters.size(); ++k)
            if (k != j) rest.letters.push_back(wb.letters[k]);
          AbelianPoly restp;
          detail::ab_add(restp, std::move(rest), LaurentPoly(c));
          out += restp * pi;
        }
    }
  }
  return out;
}

// Convenience: eps^1 coefficient of [g, h] for two bare letters.
inline AbelianPoly poisson_pair(const RelationSystem& sys, Generator g,
                                Generator h) {
  return detail::letter_exchange(sys, g, h);
}

inline std::string render(const AbelianPoly& p, const RelationSystem& sys) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms) {
    if (!first) out += " + ";
    first = false;
    out += "(" + c.render() + ")";
    for (const auto& g : m.letters) out += " " + sys.letter_name(g);
  }
  return out;
}

}  // namespace braidq
