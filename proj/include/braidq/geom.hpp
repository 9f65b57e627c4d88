// Numeric geometry layer: direction vectors, rotation sampling, the two
// uncertainty-bound evaluators, the rotation-protocol E tensor with its
// symbolic row-degeneracy argument, and the no-sharp-rotation sweep.
#pragma once

#include <braidq/spinops.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace braidq {

struct DirectionVector {
  double x = 0, y = 0, z = 0;
};

inline DirectionVector operator+(const DirectionVector& a, const DirectionVector& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}

inline double dot(const DirectionVector& a, const DirectionVector& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline DirectionVector cross(const DirectionVector& a, const DirectionVector& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const DirectionVector& a) { return std::sqrt(dot(a, a)); }

// Unit vector (sin t cos w, sin t sin w, cos t).  Inputs are radians with
// t in [0, pi] and w in [0, 2 pi]; the result is unit to 1e-12 by
// construction.
inline DirectionVector angles_to_direction(double theta, double omega) {
  constexpr double pi = 3.14159265358979323846;
  if (!(theta >= 0.0 && theta <= pi))
    throw std::invalid_argument("angles_to_direction: theta outside [0, pi]");
  if (!(omega >= 0.0 && omega <= 2 * pi))
    throw std::invalid_argument("angles_to_direction: omega outside [0, 2 pi]");
  double s = std::sin(theta);
  return {s * std::cos(omega), s * std::sin(omega), std::cos(theta)};
}

struct RotationMatrix {
  std::array<std::array<double, 3>, 3> m{};

  static RotationMatrix identity() {
    RotationMatrix r;
    for (int i = 0; i < 3; ++i) r.m[i][i] = 1.0;
    return r;
  }
};

inline double determinant(const RotationMatrix& r) {
  const auto& m = r.m;
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// max |(R^T R - 1)_{ab}|
inline double orthogonality_defect(const RotationMatrix& r) {
  double worst = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0;
      for (int c = 0; c < 3; ++c) s += r.m[c][a] * r.m[c][b];
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

inline void require_special_orthogonal(const RotationMatrix& r, double tol = 1e-10) {
  double defect = orthogonality_defect(r);
  double det = determinant(r);
  if (defect > tol || std::abs(det - 1.0) > tol) {
    std::ostringstream msg;
    msg << "matrix is not special orthogonal: max|R^T R - 1| = " << defect
        << ", det = " << det;
    throw std::invalid_argument(msg.str());
  }
}

// Levi-Civita symbol on axis indices (x, y, z) = (0, 1, 2), e_{012} = +1.
inline constexpr int levi(int i, int j, int k) {
  return (j - i) * (k - j) * (k - i) / 2;
}

// One evaluated uncertainty bound.  The exact rational prefactor and the
// floating-point vector magnitude are kept separate so the scaling in q can
// be checked without any rounding; bound = prefactor * magnitude.
struct BoundReport {
  std::array<int, 4> indices{-1, -1, -1, -1};
  Rational q = 1;
  Rational prefactor = 0;
  double magnitude = 0.0;
  double bound = 0.0;
  std::vector<DirectionVector> directions;  // echoed vector inputs, call order
  std::optional<RotationMatrix> rotation;   // echoed matrix input
};

namespace detail {

inline void require_unit(const DirectionVector& v, const char* role) {
  if (std::abs(norm(v) - 1.0) > 1e-10)
    throw std::invalid_argument(std::string("bound: ") + role + " is not a unit vector");
}

inline void require_q_range(const Rational& q) {
  if (!(q > 0 && q <= 1))
    throw std::invalid_argument("bound: q must satisfy 0 < q <= 1");
}

inline double finish_bound(BoundReport& rep, double signed_magnitude) {
  rep.magnitude = std::abs(signed_magnitude);
  rep.bound = rep.prefactor.convert_to<double>() * rep.magnitude;
  return rep.bound;
}

}  // namespace detail

// Lower bound for a pair of outcome-probability spreads:
//   (1-q)/4 |(m_i+m_j).(n_i x n_j) - (n_i+n_j).(m_i x m_j)|
// with n the spin directions and m the apparatus directions.
inline BoundReport bound_probabilities(const DirectionVector& n_i,
                                       const DirectionVector& m_i,
                                       const DirectionVector& n_j,
                                       const DirectionVector& m_j, const Rational& q) {
  detail::require_unit(n_i, "n_i");
  detail::require_unit(m_i, "m_i");
  detail::require_unit(n_j, "n_j");
  detail::require_unit(m_j, "m_j");
  detail::require_q_range(q);
  BoundReport rep;
  rep.q = q;
  rep.prefactor = (Rational(1) - q) / 4;
  rep.directions = {n_i, m_i, n_j, m_j};
  double g = dot(m_i + m_j, cross(n_i, n_j)) - dot(n_i + n_j, cross(m_i, m_j));
  detail::finish_bound(rep, g);
  return rep;
}

// Lower bound for a pair of rotation-element spreads:
//   (1-q) |(jhat+lhat).(n_i x n_k) - (n_i+n_k).(jhat x lhat)|
// where n_i is the i-th column of R (the rotated axis, n_i^a = R^{ai}) and
// jhat, lhat are fixed Cartesian axes.
inline BoundReport bound_rotation_elements(const RotationMatrix& r, int i, int j, int k,
                                           int l, const Rational& q) {
  require_special_orthogonal(r);
  for (int idx : {i, j, k, l})
    if (idx < 0 || idx > 2)
      throw std::invalid_argument("bound: axis index outside {0, 1, 2}");
  detail::require_q_range(q);
  BoundReport rep;
  rep.indices = {i, j, k, l};
  rep.q = q;
  rep.prefactor = Rational(1) - q;
  rep.rotation = r;
  DirectionVector n_i{r.m[0][i], r.m[1][i], r.m[2][i]};
  DirectionVector n_k{r.m[0][k], r.m[1][k], r.m[2][k]};
  DirectionVector jhat{j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0, j == 2 ? 1.0 : 0.0};
  DirectionVector lhat{l == 0 ? 1.0 : 0.0, l == 1 ? 1.0 : 0.0, l == 2 ? 1.0 : 0.0};
  double g = dot(jhat + lhat, cross(n_i, n_k)) - dot(n_i + n_k, cross(jhat, lhat));
  detail::finish_bound(rep, g);
  return rep;
}

struct ETensor {
  std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3> e{};

  double max_abs() const {
    double worst = 0;
    for (const auto& a : e)
      for (const auto& b : a)
        for (const auto& c : b)
          for (double v : c) worst = std::max(worst, std::abs(v));
    return worst;
  }
};

// Fully contracted form, linear in the entries of R:
//   E_{ijkl} = e_{ikm}(R_{jm} + R_{lm}) - e_{ajl}(R_{ak} + R_{ai})
inline ETensor e_tensor(const RotationMatrix& r) {
  require_special_orthogonal(r);
  ETensor t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double v = 0;
          for (int m = 0; m < 3; ++m) v += levi(i, k, m) * (r.m[j][m] + r.m[l][m]);
          for (int a = 0; a < 3; ++a) v -= levi(a, j, l) * (r.m[a][k] + r.m[a][i]);
          t.e[i][j][k][l] = v;
        }
  return t;
}

// Same tensor before the cross-product contraction is applied: the first
// piece keeps both factors of R, writing (jhat+lhat).(n_i x n_k) as
// e_{jbc} R_{bi} R_{ck} + e_{lbc} R_{bi} R_{ck}.  For special orthogonal R
// the identity e_{jbc} R_{bi} R_{ck} = e_{ikm} R_{jm} collapses this onto
// e_tensor; the gap between the two forms is the consistency check.
inline ETensor e_tensor_precontraction(const RotationMatrix& r) {
  require_special_orthogonal(r);
  ETensor t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double v = 0;
          for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
              v += (levi(j, b, c) + levi(l, b, c)) * r.m[b][i] * r.m[c][k];
          for (int a = 0; a < 3; ++a) v -= levi(a, j, l) * (r.m[a][k] + r.m[a][i]);
          t.e[i][j][k][l] = v;
        }
  return t;
}

inline double e_tensor_form_gap(const RotationMatrix& r) {
  ETensor a = e_tensor(r), b = e_tensor_precontraction(r);
  double worst = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          worst = std::max(worst, std::abs(a.e[i][j][k][l] - b.e[i][j][k][l]));
  return worst;
}

// --- symbolic linear forms over the nine entries of R ------------------------

// Exact linear form sum_{ab} c_{ab} R_{ab}; key is (row, column).
using LinearForm = std::map<std::pair<int, int>, Rational>;

namespace detail {

inline void lf_add(LinearForm& f, int a, int b, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = f.emplace(std::make_pair(a, b), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) f.erase(it);
  }
}

}  // namespace detail

// E_{ijkl} as an exact linear form in the entries of R.  Contracted form
// only: linearity is what makes the row-degeneracy argument purely rational.
inline LinearForm e_symbolic(int i, int j, int k, int l) {
  LinearForm f;
  for (int m = 0; m < 3; ++m) {
    detail::lf_add(f, j, m, levi(i, k, m));
    detail::lf_add(f, l, m, levi(i, k, m));
  }
  for (int a = 0; a < 3; ++a) {
    detail::lf_add(f, a, k, -levi(a, j, l));
    detail::lf_add(f, a, i, -levi(a, j, l));
  }
  return f;
}

inline LinearForm operator-(const LinearForm& a, const LinearForm& b) {
  LinearForm r = a;
  for (const auto& [key, c] : b) detail::lf_add(r, key.first, key.second, -c);
  return r;
}

// The three displayed E-differences, reduced as exact linear forms:
//   E_{yxzx} - E_{xyxx} =  2(R_xx - R_zx)
//   E_{xxzx} - E_{yxyy} = -2(R_xy - R_zy)
//   E_{xxyx} - E_{zyzx} =  2(R_xz - R_zz)
// Each vanishing combination therefore pins one column pair, and all three
// together force the first and third rows of R to coincide, making
// det R = 0: no rotation satisfies E = 0 across the board.
struct RowDegeneracyReport {
  std::array<bool, 3> identity_matches{};
  bool rows_forced_equal() const {
    return identity_matches[0] && identity_matches[1] && identity_matches[2];
  }
};

inline RowDegeneracyReport symbolic_row_degeneracy() {
  auto column_pair = [](int col, const Rational& scale) {
    LinearForm f;
    detail::lf_add(f, 0, col, scale);
    detail::lf_add(f, 2, col, -scale);
    return f;
  };
  RowDegeneracyReport rep;
  rep.identity_matches[0] =
      (e_symbolic(1, 0, 2, 0) - e_symbolic(0, 1, 0, 0) - column_pair(0, 2)).empty();
  rep.identity_matches[1] =
      (e_symbolic(0, 0, 2, 0) - e_symbolic(1, 0, 1, 1) - column_pair(1, -2)).empty();
  rep.identity_matches[2] =
      (e_symbolic(0, 0, 1, 0) - e_symbolic(2, 1, 2, 0) - column_pair(2, 2)).empty();
  return rep;
}

// --- rotation sampling --------------------------------------------------------

// splitmix64 step: the standard mixer for deriving independent per-sample
// seeds from (seed, index) so sample order never matters.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform random rotation: four independent standard normals, normalized to
// a unit quaternion, converted to a matrix.
inline RotationMatrix sample_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double w = normal(rng), x = normal(rng), y = normal(rng), z = normal(rng);
  double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  RotationMatrix r;
  r.m = {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
          {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
          {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
  return r;
}

// --- the no-sharp-rotation sweep ---------------------------------------------

struct NoSharpReport {
  int samples = 0;
  std::uint64_t seed = 0;
  // regression floor: measured over large sweeps, then frozen
  double floor = 0.1;
  double min_max_abs_e = 0.0;
  bool all_above_floor = false;
  bool rows_forced_equal = false;
};

// Samples random rotations, checks that max_{ijkl} |E_{ijkl}| stays above a
// strictly positive floor on every sample, and re-derives symbolically that
// E = 0 would force equal first and third rows.
inline NoSharpReport no_sharp_rotation_check(int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("no_sharp_rotation_check: samples >= 1");
  NoSharpReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.all_above_floor = true;
  for (int s = 0; s < samples; ++s) {
    RotationMatrix r = sample_rotation(derive_seed(seed, static_cast<std::uint64_t>(s)));
    double m = e_tensor(r).max_abs();
    if (s == 0 || m < rep.min_max_abs_e) rep.min_max_abs_e = m;
    if (!(m > rep.floor)) rep.all_above_floor = false;
  }
  rep.rows_forced_equal = symbolic_row_degeneracy().rows_forced_equal();
  return rep;
}

// --- the classical protocol ---------------------------------------------------

using ProbabilityTable = std::array<std::array<double, 3>, 3>;

// p_{ij} = (1 + R_{ij}) / 2: the probability table a classical protocol
// would tabulate for a known rotation.
inline ProbabilityTable classical_protocol(const RotationMatrix& r) {
  require_special_orthogonal(r);
  ProbabilityTable p{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[i][j] = (1.0 + r.m[i][j]) / 2.0;
  return p;
}

// Inverse reconstruction R_{ij} = 2 p_{ij} - 1.  A table that does not come
// from a rotation (for instance all entries 1/2, giving the zero matrix) is
// rejected with the orthogonality diagnostic.
inline RotationMatrix rotation_from_table(const ProbabilityTable& p) {
  RotationMatrix r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = 2.0 * p[i][j] - 1.0;
  require_special_orthogonal(r);
  return r;
}

// --- sweep driver --------------------------------------------------------------

struct SweepRow {
  int sample = 0;
  std::uint64_t seed = 0;
  Rational q = 1;
  int i = 0, j = 0, k = 0, l = 0;
  double bound = 0.0;
  double max_abs_e = 0.0;
};

// Per sample: derive a seed, draw a rotation and an index tuple from it,
// evaluate the rotation-element bound for that tuple and max|E| over all 81.
inline std::vector<SweepRow> sweep_rotation_bounds(int samples, std::uint64_t seed,
                                                   const Rational& q) {
  if (samples < 1) throw std::invalid_argument("sweep_rotation_bounds: samples >= 1");
  detail::require_q_range(q);
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    SweepRow row;
    row.sample = s;
    row.seed = derive_seed(seed, static_cast<std::uint64_t>(s));
    row.q = q;
    RotationMatrix r = sample_rotation(row.seed);
    std::mt19937_64 rng(derive_seed(row.seed, 0));
    std::uniform_int_distribution<int> axis(0, 2);
    row.i = axis(rng);
    row.j = axis(rng);
    row.k = axis(rng);
    row.l = axis(rng);
    row.bound = bound_rotation_elements(r, row.i, row.j, row.k, row.l, q).bound;
    row.max_abs_e = e_tensor(r).max_abs();
    rows.push_back(row);
  }
  return rows;
}

inline std::string render_rational(const Rational& q) {
  std::ostringstream out;
  out << numerator(q);
  if (denominator(q) != 1) out << "/" << denominator(q);
  return out.str();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "sample,seed,q,i,j,k,l,bound,maxE\n";
  for (const SweepRow& r : rows)
    out << r.sample << "," << r.seed << "," << render_rational(r.q) << "," << r.i << ","
        << r.j << "," << r.k << "," << r.l << "," << r.bound << "," << r.max_abs_e
        << "\n";
  return out.str();
}

}  // namespace braidq
