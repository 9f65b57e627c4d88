#include <braidq/geom.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>

using namespace braidq;
using Catch::Matchers::ContainsSubstring;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent oracle for the probability bound, written against raw arrays
// with explicit component arithmetic so it shares no code with the library
// path.
double oracle_probability_bound(const double n_i[3], const double m_i[3],
                                const double n_j[3], const double m_j[3], double q) {
  double cn[3] = {n_i[1] * n_j[2] - n_i[2] * n_j[1], n_i[2] * n_j[0] - n_i[0] * n_j[2],
                  n_i[0] * n_j[1] - n_i[1] * n_j[0]};
  double cm[3] = {m_i[1] * m_j[2] - m_i[2] * m_j[1], m_i[2] * m_j[0] - m_i[0] * m_j[2],
                  m_i[0] * m_j[1] - m_i[1] * m_j[0]};
  double first = 0, second = 0;
  for (int a = 0; a < 3; ++a) {
    first += (m_i[a] + m_j[a]) * cn[a];
    second += (n_i[a] + n_j[a]) * cm[a];
  }
  return (1.0 - q) / 4.0 * std::abs(first - second);
}

DirectionVector axis(int a) {
  return {a == 0 ? 1.0 : 0.0, a == 1 ? 1.0 : 0.0, a == 2 ? 1.0 : 0.0};
}

}  // namespace

TEST_CASE("angles_to_direction: pinned points, unit norm, range checks") {
  auto close = [](const DirectionVector& v, double x, double y, double z) {
    return std::abs(v.x - x) < 1e-15 && std::abs(v.y - y) < 1e-15 &&
           std::abs(v.z - z) < 1e-15;
  };
  REQUIRE(close(angles_to_direction(0.0, 0.0), 0, 0, 1));
  REQUIRE(close(angles_to_direction(0.0, 5.0), 0, 0, 1));
  REQUIRE(close(angles_to_direction(kPi / 2, 0.0), 1, 0, 0));
  REQUIRE(close(angles_to_direction(kPi / 2, kPi / 2), 0, 1, 0));

  for (int a = 0; a <= 20; ++a)
    for (int b = 0; b <= 20; ++b) {
      DirectionVector v = angles_to_direction(kPi * a / 20.0, 2 * kPi * b / 20.0);
      REQUIRE(std::abs(norm(v) - 1.0) < 1e-12);
    }

  REQUIRE_THROWS_AS(angles_to_direction(-0.1, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(angles_to_direction(kPi + 0.1, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(angles_to_direction(1.0, -0.1), std::invalid_argument);
  REQUIRE_THROWS_AS(angles_to_direction(1.0, 2 * kPi + 0.1), std::invalid_argument);
}

TEST_CASE("bound_probabilities: degenerate cases, oracle, exchange symmetry") {
  DirectionVector xh = axis(0), yh = axis(1), zh = axis(2);

  SECTION("identical apparatuses give zero") {
    BoundReport rep = bound_probabilities(xh, zh, xh, zh, Rational(9, 10));
    REQUIRE(rep.bound == 0.0);
    REQUIRE(rep.magnitude == 0.0);
  }

  SECTION("q = 1 gives zero for any directions") {
    DirectionVector n1 = angles_to_direction(0.3, 0.4);
    DirectionVector m1 = angles_to_direction(1.2, 2.8);
    DirectionVector n2 = angles_to_direction(2.2, 5.1);
    DirectionVector m2 = angles_to_direction(0.9, 1.6);
    BoundReport rep = bound_probabilities(n1, m1, n2, m2, Rational(1));
    REQUIRE(rep.prefactor == 0);
    REQUIRE(rep.bound == 0.0);
  }

  SECTION("matches the independently written oracle") {
    double xr[3] = {1, 0, 0}, yr[3] = {0, 1, 0}, zr[3] = {0, 0, 1};
    BoundReport rep = bound_probabilities(xh, xh, yh, zh, Rational(9, 10));
    REQUIRE(std::abs(rep.bound - oracle_probability_bound(xr, xr, yr, zr, 0.9)) < 1e-15);

    for (int t = 0; t < 25; ++t) {
      DirectionVector v[4];
      double raw[4][3];
      for (int s = 0; s < 4; ++s) {
        v[s] = angles_to_direction(kPi * ((t * 4 + s) % 11) / 10.0,
                                   2 * kPi * ((t * 7 + s) % 13) / 12.0);
        raw[s][0] = v[s].x;
        raw[s][1] = v[s].y;
        raw[s][2] = v[s].z;
      }
      BoundReport rep2 = bound_probabilities(v[0], v[1], v[2], v[3], Rational(3, 4));
      double want = oracle_probability_bound(raw[0], raw[1], raw[2], raw[3], 0.75);
      REQUIRE(std::abs(rep2.bound - want) < 1e-14);
      // apparatus exchange (i) <-> (j)
      BoundReport swapped = bound_probabilities(v[2], v[3], v[0], v[1], Rational(3, 4));
      REQUIRE(std::abs(rep2.bound - swapped.bound) < 1e-15);
    }
  }

  SECTION("input validation") {
    DirectionVector bad{0.5, 0.5, 0.5};
    REQUIRE_THROWS_AS(bound_probabilities(bad, xh, yh, zh, Rational(1, 2)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(bound_probabilities(xh, xh, yh, zh, Rational(0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(bound_probabilities(xh, xh, yh, zh, Rational(3, 2)),
                      std::invalid_argument);
    BoundReport rep = bound_probabilities(xh, xh, yh, zh, Rational(1, 2));
    REQUIRE(rep.directions.size() == 4);
    REQUIRE(rep.q == Rational(1, 2));
  }
}

TEST_CASE("bound_rotation_elements: pinned identity value and aligned formula") {
  RotationMatrix id = RotationMatrix::identity();

  SECTION("(x, x, y, z) at the identity equals 2(1-q) with exact prefactor") {
    for (Rational q : {Rational(1), Rational(99, 100), Rational(9, 10)}) {
      BoundReport rep = bound_rotation_elements(id, 0, 0, 1, 2, q);
      REQUIRE(rep.prefactor == Rational(1) - q);
      REQUIRE(std::abs(rep.magnitude - 2.0) < 1e-12);
      double want = 2.0 * (Rational(1) - q).convert_to<double>();
      REQUIRE(std::abs(rep.bound - want) < 1e-12);
    }
  }

  SECTION("all 81 aligned tuples reproduce the epsilon combination") {
    Rational q(9, 10);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            BoundReport rep = bound_rotation_elements(id, i, j, k, l, q);
            double combo =
                std::abs(levi(j, i, k) + levi(l, i, k) - levi(i, j, l) - levi(k, j, l));
            REQUIRE(std::abs(rep.magnitude - combo) < 1e-14);
            REQUIRE(rep.bound >= 0.0);
            REQUIRE(rep.indices == std::array<int, 4>{i, j, k, l});
          }
  }

  SECTION("validation") {
    RotationMatrix junk;
    junk.m[0][0] = 2.0;
    REQUIRE_THROWS_WITH(bound_rotation_elements(junk, 0, 0, 1, 2, Rational(1, 2)),
                        ContainsSubstring("not special orthogonal"));
    REQUIRE_THROWS_AS(bound_rotation_elements(id, 0, 0, 1, 3, Rational(1, 2)),
                      std::invalid_argument);
  }
}

TEST_CASE("e_tensor: identity maximum, difference identities, two forms agree") {
  SECTION("identity rotation peaks at 2") {
    ETensor t = e_tensor(RotationMatrix::identity());
    REQUIRE(std::abs(t.max_abs() - 2.0) < 1e-15);
  }

  SECTION("difference identities and form agreement on 100 random rotations") {
    for (int s = 0; s < 100; ++s) {
      RotationMatrix r = sample_rotation(derive_seed(2026, static_cast<std::uint64_t>(s)));
      ETensor t = e_tensor(r);
      double d1 = t.e[1][0][2][0] - t.e[0][1][0][0] - 2.0 * (r.m[0][0] - r.m[2][0]);
      double d2 = t.e[0][0][2][0] - t.e[1][0][1][1] + 2.0 * (r.m[0][1] - r.m[2][1]);
      double d3 = t.e[0][0][1][0] - t.e[2][1][2][0] - 2.0 * (r.m[0][2] - r.m[2][2]);
      REQUIRE(std::abs(d1) < 1e-10);
      REQUIRE(std::abs(d2) < 1e-10);
      REQUIRE(std::abs(d3) < 1e-10);
      REQUIRE(e_tensor_form_gap(r) < 1e-10);
    }
  }

  SECTION("numeric tensor equals the evaluated symbolic linear form") {
    RotationMatrix r = sample_rotation(derive_seed(11, 0));
    ETensor t = e_tensor(r);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            double v = 0;
            for (const auto& [key, c] : e_symbolic(i, j, k, l))
              v += c.convert_to<double>() * r.m[key.first][key.second];
            REQUIRE(std::abs(v - t.e[i][j][k][l]) < 1e-13);
          }
  }
}

TEST_CASE("symbolic row degeneracy: the three combinations force row1 = row3") {
  RowDegeneracyReport rep = symbolic_row_degeneracy();
  REQUIRE(rep.identity_matches[0]);
  REQUIRE(rep.identity_matches[1]);
  REQUIRE(rep.identity_matches[2]);
  REQUIRE(rep.rows_forced_equal());
}

TEST_CASE("rotation sampling: special orthogonal, deterministic, well mixed") {
  for (int s = 0; s < 200; ++s) {
    RotationMatrix r = sample_rotation(derive_seed(5, static_cast<std::uint64_t>(s)));
    REQUIRE(orthogonality_defect(r) < 1e-12);
    REQUIRE(std::abs(determinant(r) - 1.0) < 1e-12);
  }
  RotationMatrix a = sample_rotation(42), b = sample_rotation(42), c = sample_rotation(43);
  REQUIRE(a.m == b.m);
  REQUIRE(a.m != c.m);
  REQUIRE(derive_seed(1, 0) != derive_seed(1, 1));
  REQUIRE(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("no_sharp_rotation_check: positive floor over 1000 samples") {
  NoSharpReport rep = no_sharp_rotation_check(1000, 7);
  REQUIRE(rep.samples == 1000);
  REQUIRE(rep.all_above_floor);
  REQUIRE(rep.min_max_abs_e > 0.1);
  REQUIRE(rep.rows_forced_equal);

  NoSharpReport again = no_sharp_rotation_check(1000, 7);
  REQUIRE(rep.min_max_abs_e == again.min_max_abs_e);

  REQUIRE_THROWS_AS(no_sharp_rotation_check(0, 7), std::invalid_argument);
}

TEST_CASE("classical protocol: table shape, round trip, degenerate rejection") {
  SECTION("identity gives diagonal 1, off-diagonal 1/2") {
    ProbabilityTable p = classical_protocol(RotationMatrix::identity());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        REQUIRE(std::abs(p[i][j] - (i == j ? 1.0 : 0.5)) < 1e-15);
  }

  SECTION("random round trips are exact to 1e-14") {
    for (int s = 0; s < 100; ++s) {
      RotationMatrix r = sample_rotation(derive_seed(99, static_cast<std::uint64_t>(s)));
      RotationMatrix back = rotation_from_table(classical_protocol(r));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) REQUIRE(std::abs(back.m[i][j] - r.m[i][j]) < 1e-14);
    }
  }

  SECTION("the all-1/2 table is rejected with a diagnostic") {
    ProbabilityTable half;
    for (auto& row : half) row = {0.5, 0.5, 0.5};
    REQUIRE_THROWS_WITH(rotation_from_table(half),
                        ContainsSubstring("not special orthogonal"));
  }
}

TEST_CASE("sweep: deterministic CSV with the pinned header") {
  std::vector<SweepRow> rows = sweep_rotation_bounds(10, 123, Rational(99, 100));
  REQUIRE(rows.size() == 10);
  for (const SweepRow& r : rows) {
    REQUIRE(r.bound >= 0.0);
    REQUIRE(r.max_abs_e > 0.1);
    REQUIRE((r.i >= 0 && r.i <= 2));
    REQUIRE((r.l >= 0 && r.l <= 2));
  }
  std::string csv = sweep_csv(rows);
  REQUIRE(csv.rfind("sample,seed,q,i,j,k,l,bound,maxE\n", 0) == 0);
  REQUIRE_THAT(csv, ContainsSubstring(",99/100,"));
  REQUIRE(csv == sweep_csv(sweep_rotation_bounds(10, 123, Rational(99, 100))));
  REQUIRE(csv != sweep_csv(sweep_rotation_bounds(10, 124, Rational(99, 100))));
}

TEST_CASE("first-order right-hand side links to the probability bound classically") {
  RelationSystem sys = make_system(2, 2);
  NCPoly rhs = first_order_rhs(sys, 1, 2);
  Rational q(9, 10);
  double prefactor_gap = 0;

  for (int t = 0; t < 16; ++t) {
    double th1 = kPi * (t % 4) / 3.0, om1 = 2 * kPi * (t % 5) / 4.0;
    double th2 = kPi * ((t + 1) % 4) / 3.0, om2 = 2 * kPi * ((t + 2) % 5) / 4.0;
    double tm1 = kPi * ((t + 2) % 4) / 3.0, wm1 = 2 * kPi * ((t + 3) % 5) / 4.0;
    double tm2 = kPi * ((t + 3) % 4) / 3.0, wm2 = 2 * kPi * ((t + 1) % 5) / 4.0;

    ClassicalAssignment asg;
    assign_angles(asg, copy_of(sys, CopyKind::spin, 1), th1, om1);
    assign_angles(asg, copy_of(sys, CopyKind::spin, 2), th2, om2);
    assign_angles(asg, copy_of(sys, CopyKind::sterngerlach, 1), tm1, wm1);
    assign_angles(asg, copy_of(sys, CopyKind::sterngerlach, 2), tm2, wm2);
    std::complex<double> v = classical_eval(rhs, asg, q);
    REQUIRE(std::abs(v.real()) < 1e-12);  // purely imaginary at eigen-assignments

    BoundReport rep = bound_probabilities(
        angles_to_direction(th1, om1), angles_to_direction(tm1, wm1),
        angles_to_direction(th2, om2), angles_to_direction(tm2, wm2), q);
    prefactor_gap = std::max(prefactor_gap, std::abs(std::abs(v) - 2.0 * rep.bound));
  }
  REQUIRE(prefactor_gap < 1e-10);
}
