// Probability operators and their algebra: projectors, the deformed Pauli
// matrix, probability commutators, the first-order residual report, and the
// commuting-scalar evaluator used for classical limits.
#pragma once

#include <braidq/abelian.hpp>
#include <braidq/suq2.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>

namespace braidq {

enum class Outcome { up, down };

struct OperatorMatrix {
  std::array<std::array<NCPoly, 2>, 2> entries;
};

// A scalar algebra element playing the role of an outcome probability.
// value holds the canonical form; the defining product is recoverable from
// (apparatus, outcome) via defining_expression, and hermiticity statements
// are made about that defining representative, since starring a canonical
// form re-enters the rewriter through its known cross-copy defect.
struct ProbabilityOperator {
  NCPoly value;
  int apparatus = 0;
  Outcome outcome = Outcome::up;
};

namespace detail {

inline void require_apparatus(const RelationSystem& sys, int i) {
  copy_of(sys, CopyKind::spin, i);          // throws if absent
  copy_of(sys, CopyKind::sterngerlach, i);  // throws if absent
}

}  // namespace detail

// The probability element for spinors (u, w): up is
// (u_0* w_0 + u_1* w_1)(w_0* u_0 + w_1* u_1), down is its complement.  The
// same construction serves native and rotated spinors.
inline NCPoly prob_defining(const QSpinor& u, const QSpinor& w, Outcome o) {
  NCPoly left = u.comp[0].star() * w.comp[0] + u.comp[1].star() * w.comp[1];
  NCPoly right = w.comp[0].star() * u.comp[0] + w.comp[1].star() * u.comp[1];
  NCPoly up = left * right;
  return o == Outcome::up ? up : NCPoly::identity() - up;
}

inline NCPoly defining_expression(const RelationSystem& sys, int i, Outcome o) {
  detail::require_apparatus(sys, i);
  QSpinor u = make_ket(copy_of(sys, CopyKind::spin, i));
  QSpinor w = make_ket(copy_of(sys, CopyKind::sterngerlach, i));
  return prob_defining(u, w, o);
}

inline ProbabilityOperator prob_op(int i, Outcome o, const RelationSystem& sys) {
  return {normalize(defining_expression(sys, i, o), sys), i, o};
}

// Hermiticity residual of the defining representative, normalized.
inline NCPoly hermiticity_residual(const ProbabilityOperator& p,
                                   const RelationSystem& sys) {
  NCPoly d = defining_expression(sys, p.apparatus, p.outcome);
  return normalize(star(d) - d, sys);
}

// Completeness residual P(up) + P(down) - 1, normalized.
inline NCPoly completeness_residual(int i, const RelationSystem& sys) {
  return normalize(defining_expression(sys, i, Outcome::up) +
                       defining_expression(sys, i, Outcome::down) -
                       NCPoly::identity(),
                   sys);
}

// Outer-product projector onto the outcome spinor: up uses the native SG
// ket w, down its orthogonal companion; entries are w^a (w_b)* normalized.
inline OperatorMatrix projector(int i, Outcome o, const RelationSystem& sys) {
  detail::require_apparatus(sys, i);
  EpsilonTensor eps;
  QSpinor w = make_ket(copy_of(sys, CopyKind::sterngerlach, i));
  QSpinor v = o == Outcome::up ? w : bar_spinor(make_bra(w), eps);
  OperatorMatrix m;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      m.entries[a][b] = normalize(v.comp[a] * v.comp[b].star(), sys);
  return m;
}

inline OperatorMatrix pauli(int i, const RelationSystem& sys) {
  OperatorMatrix up = projector(i, Outcome::up, sys);
  OperatorMatrix dn = projector(i, Outcome::down, sys);
  LaurentPoly q = LaurentPoly::q_power(1), qi = LaurentPoly::q_power(-1);
  OperatorMatrix m;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      m.entries[a][b] = normalize(q * up.entries[a][b] - qi * dn.entries[a][b], sys);
  return m;
}

inline NCPoly commutator(const ProbabilityOperator& a, const ProbabilityOperator& b,
                         const RelationSystem& sys) {
  return normalize(a.value * b.value - b.value * a.value, sys);
}

// Normal form of [P_i(up), P_j(up)] - reference, built from the defining
// representatives and reduced in a single pass.  On a non-confluent system
// the result depends on how many times the rewriter is re-entered, so the
// comparison is pinned to this one pipeline.
inline NCPoly allorders_residual(const RelationSystem& sys, int i, int j,
                                 const NCPoly& reference) {
  NCPoly pi = defining_expression(sys, i, Outcome::up);
  NCPoly pj = defining_expression(sys, j, Outcome::up);
  return normalize(pi * pj - pj * pi - reference, sys);
}

// The three direction-operator components of a copy:
//   ( alpha gamma* + gamma alpha*,  i(gamma alpha* - alpha gamma*),
//     1 - 2 gamma gamma* )
// with (alpha, gamma) = (x, y) on a spin copy and (a, c) on an SG copy.
inline std::array<NCPoly, 3> direction_components(int copy, CopyKind kind) {
  if (kind == CopyKind::rotation)
    throw std::invalid_argument("direction_components: not defined for the rotation copy");
  NCPoly al(gen(copy, Component::alpha)), ga(gen(copy, Component::gamma));
  NCPoly als(gen(copy, Component::alpha, true)), gas(gen(copy, Component::gamma, true));
  LaurentPoly two(GaussRational(Rational(2)));
  NCPoly nx = al * gas + ga * als;
  NCPoly ny = LaurentPoly(GaussRational::i()) * (ga * als - al * gas);
  NCPoly nz = NCPoly::identity() - two * (ga * gas);
  return {nx, ny, nz};
}

namespace detail {

inline std::array<NCPoly, 3> vec_add(const std::array<NCPoly, 3>& a,
                                     const std::array<NCPoly, 3>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

// Factor order is fixed left-to-right: first argument's components always
// multiply from the left.
inline std::array<NCPoly, 3> vec_cross(const std::array<NCPoly, 3>& a,
                                       const std::array<NCPoly, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline NCPoly vec_dot(const std::array<NCPoly, 3>& a, const std::array<NCPoly, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace detail

// The closed-form first-order right-hand side,
//   (i/2)(1-q) [ (m_i+m_j).(n_i x n_j) - (n_i+n_j).(m_i x m_j) ],
// written out with spin directions n and SG directions m in a fixed factor
// order.
inline NCPoly first_order_rhs(const RelationSystem& sys, int i, int j) {
  auto n_i = direction_components(copy_of(sys, CopyKind::spin, i), CopyKind::spin);
  auto n_j = direction_components(copy_of(sys, CopyKind::spin, j), CopyKind::spin);
  auto m_i = direction_components(copy_of(sys, CopyKind::sterngerlach, i),
                                  CopyKind::sterngerlach);
  auto m_j = direction_components(copy_of(sys, CopyKind::sterngerlach, j),
                                  CopyKind::sterngerlach);
  using detail::vec_add;
  using detail::vec_cross;
  using detail::vec_dot;
  NCPoly g = vec_dot(vec_add(m_i, m_j), vec_cross(n_i, n_j)) -
             vec_dot(vec_add(n_i, n_j), vec_cross(m_i, m_j));
  LaurentPoly half_i(GaussRational(Rational(0), Rational(1, 2)));
  LaurentPoly one_minus_q = LaurentPoly(1) - LaurentPoly::q_power(1);
  return (half_i * one_minus_q) * g;
}

struct FirstOrderReport {
  int i = 0, j = 0;
  bool eps0_zero = false;
  bool eps1_zero = false;
  // order at which the abelianized difference first fails to vanish;
  // nullopt when it is identically zero
  std::optional<int> first_nonzero_order;
  AbelianPoly eps1_defect;
  // strategy-independent diagnostics: the biderivation bracket compared to
  // the eps^1 content of the right-hand side with either overall sign
  size_t bracket_minus_rhs_terms = 0;
  size_t bracket_plus_rhs_terms = 0;
};

// Computes D = [P_i(up), P_j(up)] - first_order_rhs, normalizes, abelianizes,
// and reports where the eps-expansion first fails to vanish.  The
// biderivation diagnostics are computed on defining representatives and do
// not pass through the cross-copy rewriter, so they isolate the sign and
// shape of any eps^1 disagreement from normalization artifacts.
inline FirstOrderReport verify_first_order(int i, int j, const RelationSystem& sys) {
  if (i == j) throw std::invalid_argument("verify_first_order: need i != j");
  FirstOrderReport rep;
  rep.i = i;
  rep.j = j;

  NCPoly comm = commutator(prob_op(i, Outcome::up, sys), prob_op(j, Outcome::up, sys), sys);
  NCPoly rhs = first_order_rhs(sys, i, j);
  AbelianPoly diff = abelianize(normalize(comm - rhs, sys));

  rep.first_nonzero_order = first_eps_order(diff);
  rep.eps0_zero = !rep.first_nonzero_order || *rep.first_nonzero_order > 0;
  rep.eps1_defect = reduce_unitarity(eps_coefficient(diff, 1));
  rep.eps1_zero = rep.eps1_defect.is_zero();

  AbelianPoly bracket = reduce_unitarity(
      poisson_bracket(sys, defining_expression(sys, i, Outcome::up),
                      defining_expression(sys, j, Outcome::up)));
  AbelianPoly rhs_eps1 = reduce_unitarity(eps_coefficient(abelianize(rhs), 1));
  rep.bracket_minus_rhs_terms = (bracket - rhs_eps1).terms.size();
  rep.bracket_plus_rhs_terms = (bracket + rhs_eps1).terms.size();
  return rep;
}

// --- commuting-scalar evaluation --------------------------------------------

using ClassicalAssignment = std::map<Generator, std::complex<double>>;

// Unitary-spinor assignment for one copy: alpha = cos(theta/2),
// gamma = sin(theta/2) e^{-i omega}.  The phase sign makes the direction
// operators evaluate to (sin t cos w, sin t sin w, cos t).
inline void assign_angles(ClassicalAssignment& a, int copy, double theta, double omega) {
  a[gen(copy, Component::alpha)] = std::cos(theta / 2);
  a[gen(copy, Component::gamma)] =
      std::sin(theta / 2) * std::exp(std::complex<double>(0, -omega));
}

inline std::complex<double> classical_eval(const NCPoly& a,
                                           const ClassicalAssignment& assignment,
                                           const Rational& q_value) {
  if (q_value <= 0) throw std::invalid_argument("classical_eval: q must be positive");
  auto lookup = [&](const Generator& g) {
    Generator base = g.starred ? Generator{g.copy, g.comp, false} : g;
    auto it = assignment.find(base);
    if (it == assignment.end())
      throw std::invalid_argument("classical_eval: no value for a generator");
    return g.starred ? std::conj(it->second) : it->second;
  };
  auto q_pow = [&](int n) {
    Rational p = 1;
    for (int k = 0; k < std::abs(n); ++k) p *= q_value;
    return n >= 0 ? p : Rational(1) / p;
  };
  std::complex<double> total = 0;
  for (const auto& [w, lp] : a.terms()) {
    Rational re = 0, im = 0;
    for (const auto& [n, c] : lp.terms()) {
      Rational p = q_pow(n);
      re += c.re * p;
      im += c.im * p;
    }
    std::complex<double> v(re.convert_to<double>(), im.convert_to<double>());
    for (const Generator& g : w.letters) v *= lookup(g);
    total += v;
  }
  return total;
}

}  // namespace braidq
