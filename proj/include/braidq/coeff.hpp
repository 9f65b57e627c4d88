// Exact coefficient arithmetic: Gaussian rationals, Laurent polynomials in
// the deformation parameter q, and truncated power series in eps = 1 - q.
//
// Everything here is exact.  Symbolic identities downstream are decided by
// coefficient-map equality, so there is no floating-point mode.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace braidq {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// A Gaussian rational re + im*i.  Denominators are kept reduced by
// cpp_rational itself; equality is exact componentwise equality.
struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(int v) : re(v) {}  // NOLINT: implicit by design
  GaussRational(Rational r) : re(std::move(r)) {}
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussRational conj() const { return {re, -im}; }

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussRational& operator+=(const GaussRational& o) { return *this = *this + o; }
  GaussRational& operator-=(const GaussRational& o) { return *this = *this - o; }
  GaussRational& operator*=(const GaussRational& o) { return *this = *this * o; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) {
    return !(a == b);
  }

  // "a/b", "c/d*i" or "a/b+c/d*i"; integral values drop the denominator.
  std::string render() const {
    std::ostringstream os;
    if (im == 0) {
      os << re;
    } else if (re == 0) {
      if (im == 1) {
        os << "i";
      } else if (im == -1) {
        os << "-i";
      } else {
        os << im << "*i";
      }
    } else {
      os << re;
      Rational ai = im < 0 ? Rational(-im) : im;
      os << (im < 0 ? "-" : "+");
      if (ai != 1) os << ai << "*";
      os << "i";
    }
    return os.str();
  }

  // True when the canonical rendering starts with a minus sign.
  bool leading_negative() const { return re < 0 || (re == 0 && im < 0); }
};

enum class LpOp { add, sub, mul };

// Laurent polynomial in q with GaussRational coefficients.  The term map
// never stores zero coefficients; the zero polynomial has an empty map.
// Exponents are machine ints, checked on multiplication; nothing in this
// project leaves |exponent| <= 16 but the guard is kept unconditional.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(GaussRational c) {  // NOLINT: implicit by design
    if (!c.is_zero()) terms_[0] = std::move(c);
  }
  LaurentPoly(int c) : LaurentPoly(GaussRational(c)) {}

  static LaurentPoly q_power(int n, GaussRational c = GaussRational(1)) {
    LaurentPoly p;
    if (!c.is_zero()) p.terms_[n] = std::move(c);
    return p;
  }
  static LaurentPoly one() { return LaurentPoly(1); }

  const std::map<int, GaussRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == 0 &&
           terms_.begin()->second == GaussRational(1);
  }

  GaussRational coeff(int n) const {
    auto it = terms_.find(n);
    return it == terms_.end() ? GaussRational() : it->second;
  }

  LaurentPoly& add_term(int n, const GaussRational& c) {
    if (c.is_zero()) return *this;
    auto [it, inserted] = terms_.emplace(n, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
    return *this;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r = a;
    for (const auto& [n, c] : b.terms_) r.add_term(n, c);
    return r;
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r = a;
    for (const auto& [n, c] : b.terms_) r.add_term(n, -c);
    return r;
  }
  friend LaurentPoly operator-(const LaurentPoly& a) {
    LaurentPoly r;
    for (const auto& [n, c] : a.terms_) r.terms_[n] = -c;
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [na, ca] : a.terms_) {
      for (const auto& [nb, cb] : b.terms_) {
        int n = 0;
        if (__builtin_add_overflow(na, nb, &n))
          throw std::overflow_error("LaurentPoly: exponent overflow");
        r.add_term(n, ca * cb);
      }
    }
    return r;
  }
  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) {
    return !(a == b);
  }
  friend bool operator<(const LaurentPoly& a, const LaurentPoly& b);

  LaurentPoly conj() const {
    LaurentPoly r;
    for (const auto& [n, c] : terms_) r.terms_[n] = c.conj();
    return r;
  }

  GaussRational eval(const Rational& q_value) const;

  // Canonical rendering: terms by ascending exponent, exponent as q^n,
  // unit coefficients elided.  Examples: "-q^-1 + q", "1 - q^2",
  // "(1/2+1/2*i)*q^3".
  std::string render() const;

 private:
  std::map<int, GaussRational> terms_;
};

// Truncated power series in eps with exact coefficients for eps^0..eps^order.
// Arithmetic truncates at the common order; mixing orders is a logic error.
class EpsSeries {
 public:
  explicit EpsSeries(int order) : order_(order), c_(order + 1) {
    if (order < 0) throw std::invalid_argument("EpsSeries: negative order");
  }

  int order() const { return order_; }
  const GaussRational& coeff(int k) const { return c_.at(k); }
  GaussRational& coeff(int k) { return c_.at(k); }

  bool is_zero() const {
    for (const auto& c : c_)
      if (!c.is_zero()) return false;
    return true;
  }

  // Index of the first nonvanishing coefficient, or -1 if all vanish.
  int first_nonzero() const {
    for (int k = 0; k <= order_; ++k)
      if (!c_[k].is_zero()) return k;
    return -1;
  }

  friend EpsSeries operator+(const EpsSeries& a, const EpsSeries& b) {
    a.check_order(b);
    EpsSeries r(a.order_);
    for (int k = 0; k <= a.order_; ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
  }
  friend EpsSeries operator-(const EpsSeries& a, const EpsSeries& b) {
    a.check_order(b);
    EpsSeries r(a.order_);
    for (int k = 0; k <= a.order_; ++k) r.c_[k] = a.c_[k] - b.c_[k];
    return r;
  }
  friend EpsSeries operator*(const EpsSeries& a, const EpsSeries& b) {
    a.check_order(b);
    EpsSeries r(a.order_);
    for (int ka = 0; ka <= a.order_; ++ka) {
      if (a.c_[ka].is_zero()) continue;
      for (int kb = 0; ka + kb <= a.order_; ++kb)
        r.c_[ka + kb] += a.c_[ka] * b.c_[kb];
    }
    return r;
  }
  friend bool operator==(const EpsSeries& a, const EpsSeries& b) {
    return a.order_ == b.order_ && a.c_ == b.c_;
  }
  friend bool operator!=(const EpsSeries& a, const EpsSeries& b) {
    return !(a == b);
  }

  GaussRational eval(const Rational& eps_value) const {
    GaussRational acc;
    Rational p = 1;
    for (int k = 0; k <= order_; ++k) {
      acc += c_[k] * GaussRational(p);
      p *= eps_value;
    }
    return acc;
  }

  std::string render() const {
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k <= order_; ++k) {
      if (c_[k].is_zero()) continue;
      GaussRational c = c_[k];
      if (first) {
        if (c.leading_negative()) {
          os << "-";
          c = -c;
        }
      } else {
        os << (c.leading_negative() ? " - " : " + ");
        if (c.leading_negative()) c = -c;
      }
      first = false;
      bool unit = c == GaussRational(1);
      bool compound = !c.is_real() && c.re != 0;
      if (k == 0) {
        os << (compound ? "(" + c.render() + ")" : c.render());
      } else {
        if (!unit) os << (compound ? "(" + c.render() + ")" : c.render()) << "*";
        os << (k == 1 ? "eps" : "eps^" + std::to_string(k));
      }
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  void check_order(const EpsSeries& o) const {
    if (order_ != o.order_)
      throw std::logic_error("EpsSeries: mixed truncation orders");
  }

  int order_;
  std::vector<GaussRational> c_;
};

inline GaussRational LaurentPoly::eval(const Rational& q_value) const {
  if (q_value == 0)
    throw std::domain_error("LaurentPoly::eval: q = 0 is a pole");
  GaussRational acc;
  for (const auto& [n, c] : terms_) {
    Rational p = 1;
    if (n >= 0) {
      for (int k = 0; k < n; ++k) p *= q_value;
    } else {
      for (int k = 0; k < -n; ++k) p /= q_value;
    }
    acc += c * GaussRational(p);
  }
  return acc;
}

inline std::string LaurentPoly::render() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, c0] : terms_) {
    GaussRational c = c0;
    if (first) {
      if (c.leading_negative()) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c.leading_negative() ? " - " : " + ");
      if (c.leading_negative()) c = -c;
    }
    first = false;
    bool unit = c == GaussRational(1);
    bool compound = !c.is_real() && c.re != 0;
    if (n == 0) {
      os << (compound ? "(" + c.render() + ")" : c.render());
    } else {
      if (!unit) os << (compound ? "(" + c.render() + ")" : c.render()) << "*";
      os << (n == 1 ? "q" : "q^" + std::to_string(n));
    }
  }
  return os.str();
}

// Total order used only for deterministic tie-breaking in serialized output.
inline bool operator<(const LaurentPoly& a, const LaurentPoly& b) {
  auto ita = a.terms_.begin(), itb = b.terms_.begin();
  for (; ita != a.terms_.end() && itb != b.terms_.end(); ++ita, ++itb) {
    if (ita->first != itb->first) return ita->first < itb->first;
    if (ita->second.re != itb->second.re) return ita->second.re < itb->second.re;
    if (ita->second.im != itb->second.im) return ita->second.im < itb->second.im;
  }
  return itb != b.terms_.end();
}

namespace detail {

// Exact binomial coefficient; n small, k small.
inline Rational binomial(int n, int k) {
  BigInt num = 1, den = 1;
  for (int t = 0; t < k; ++t) {
    num *= n - t;
    den *= t + 1;
  }
  return Rational(num, den);
}

}  // namespace detail

// --- Module interface -------------------------------------------------------

inline LaurentPoly lp_arith(const LaurentPoly& a, const LaurentPoly& b, LpOp op) {
  switch (op) {
    case LpOp::add: return a + b;
    case LpOp::sub: return a - b;
    case LpOp::mul: return a * b;
  }
  throw std::logic_error("lp_arith: bad op");
}

inline LaurentPoly lp_conj(const LaurentPoly& a) { return a.conj(); }

// Substitutes q = 1 - eps.  q^n for n >= 0 is the exact binomial expansion;
// q^n for n < 0 uses (1-eps)^-m = sum_k C(m+k-1, k) eps^k, truncated.
inline EpsSeries lp_expand_eps(const LaurentPoly& a, int order) {
  if (order < 0) throw std::invalid_argument("lp_expand_eps: negative order");
  EpsSeries r(order);
  for (const auto& [n, c] : a.terms()) {
    if (n >= 0) {
      int top = n < order ? n : order;
      for (int k = 0; k <= top; ++k) {
        Rational b = detail::binomial(n, k);
        if (k % 2) b = -b;
        r.coeff(k) += c * GaussRational(b);
      }
    } else {
      int m = -n;
      for (int k = 0; k <= order; ++k)
        r.coeff(k) += c * GaussRational(detail::binomial(m + k - 1, k));
    }
  }
  return r;
}

inline GaussRational lp_eval(const LaurentPoly& a, const Rational& q_value) {
  return a.eval(q_value);
}

}  // namespace braidq
