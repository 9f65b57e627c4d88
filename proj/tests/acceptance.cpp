// Integration acceptance runner.  Ten numbered criteria, each printing
// exactly one PASS or FAIL line; failures append indented diagnostics.
// Exit status is 0 only when every criterion passes.
//
// Usage: acceptance <cli-binary> <golden-rules-file>
#include <braidq/braidq.hpp>
#include <braidq/reference_embedded.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace braidq;

struct Criterion {
  bool ok = false;
  std::vector<std::string> details;
};

int g_failures = 0;

void run(int id, const char* title, double limit_seconds,
         const std::function<void(Criterion&)>& body) {
  Criterion c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.details.push_back(std::string("exception: ") + e.what());
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (seconds >= limit_seconds) {
    c.ok = false;
    std::ostringstream os;
    os << "time budget exceeded: " << seconds << " s >= " << limit_seconds << " s";
    c.details.push_back(os.str());
  }
  if (!c.ok) ++g_failures;
  std::ostringstream line;
  line.precision(2);
  line << "criterion " << (id < 10 ? " " : "") << id << ": "
       << (c.ok ? "PASS" : "FAIL") << "  " << title << "  [" << std::fixed
       << seconds << " s]";
  std::cout << line.str() << "\n";
  for (const std::string& d : c.details) std::cout << "    " << d << "\n";
  std::cout.flush();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string run_cli(const std::string& cli, const std::string& args, int& status) {
  std::string cmd = "'" + cli + "' " + args;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("cannot launch " + cmd);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int wait_status = pclose(p);
  status = WIFEXITED(wait_status) ? WEXITSTATUS(wait_status) : -1;
  return out;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

bool all_empty(const std::vector<NCPoly>& v) {
  for (const NCPoly& p : v)
    if (!p.empty()) return false;
  return true;
}

// --- criterion bodies -----------------------------------------------------

void golden_rules(Criterion& c, const std::string& cli, const std::string& golden_path) {
  int status = 0;
  std::string got = run_cli(cli, "dump-rules --n-spin 1 --n-sg 1", status);
  std::string want = read_file(golden_path);
  c.ok = status == 0 && got == want;
  if (c.ok) return;
  if (status != 0)
    c.details.push_back("dump-rules exited with status " + std::to_string(status));
  auto gl = lines_of(got), wl = lines_of(want);
  for (size_t i = 0; i < std::max(gl.size(), wl.size()); ++i) {
    std::string g = i < gl.size() ? gl[i] : "<missing>";
    std::string w = i < wl.size() ? wl[i] : "<missing>";
    if (g != w) {
      c.details.push_back("first difference at line " + std::to_string(i + 1));
      c.details.push_back("  produced: " + g);
      c.details.push_back("  expected: " + w);
      break;
    }
  }
}

void self_braiding(Criterion& c) {
  RelationSystem sys = make_system(1, 1);
  int s = copy_of(sys, CopyKind::spin, 1);
  int g = copy_of(sys, CopyKind::sterngerlach, 1);
  bool spin_ok = all_empty(braid_pair(make_ket(s), make_ket(s), sys));
  bool sg_ok = all_empty(braid_pair(make_ket(g), make_ket(g), sys));
  c.ok = spin_ok && sg_ok;
  if (!spin_ok) c.details.push_back("spin copy: self-braid residual nonzero");
  if (!sg_ok) c.details.push_back("apparatus copy: self-braid residual nonzero");
}

void probability_properties(Criterion& c) {
  c.ok = true;
  for (int n = 1; n <= 3; ++n) {
    RelationSystem sys = make_system(n, n);
    for (int i = 1; i <= n; ++i) {
      for (Outcome o : {Outcome::up, Outcome::down}) {
        NCPoly h = hermiticity_residual(prob_op(i, o, sys), sys);
        if (!h.empty()) {
          c.ok = false;
          c.details.push_back("n=" + std::to_string(n) + " apparatus " +
                              std::to_string(i) + ": hermiticity residual " +
                              sys.render(h));
        }
      }
      NCPoly comp = completeness_residual(i, sys);
      if (!comp.empty()) {
        c.ok = false;
        c.details.push_back("n=" + std::to_string(n) + " apparatus " +
                            std::to_string(i) + ": completeness residual " +
                            sys.render(comp));
      }
    }
  }
}

void covariance(Criterion& c) {
  VerifyOptions opt;
  opt.n_spin = 2;
  opt.n_sg = 2;
  SuiteReport rep = run_suite("covariance", opt);
  c.ok = rep.passed;
  for (const CheckRecord& r : rep.checks)
    if (!r.passed)
      c.details.push_back(r.name + ": " + std::to_string(r.residual_terms) +
                          " residual terms");
}

void allorders_commutator(Criterion& c) {
  RelationSystem sys = make_system(2, 2);
  NCPoly reference = to_ncpoly(*parse(strip_comments(data::kAllOrdersCommutator)), sys);
  NCPoly residual = allorders_residual(sys, 1, 2, reference);
  c.ok = residual.empty();
  if (c.ok) return;
  auto order = first_eps_order(abelianize(residual));
  c.details.push_back(
      "commutator minus transcribed reference is nonzero: " +
      std::to_string(residual.term_count()) + " terms, first nonzero eps order " +
      (order ? std::to_string(*order) : std::string("none")) +
      "; possible transcription discrepancy, reported as-is");
  c.details.push_back("residual: " + sys.render(residual));
}

void first_order_formula(Criterion& c) {
  RelationSystem sys = make_system(2, 2);
  FirstOrderReport rep = verify_first_order(1, 2, sys);
  c.ok = rep.eps0_zero && rep.eps1_zero;
  if (c.ok) return;
  if (!rep.eps0_zero) c.details.push_back("eps^0 of the difference is nonzero");
  if (!rep.eps1_zero) {
    c.details.push_back("eps^1 defect has " +
                        std::to_string(rep.eps1_defect.terms.size()) + " terms");
    c.details.push_back("eps^1 defect: " + render(rep.eps1_defect, sys));
  }
  if (rep.bracket_plus_rhs_terms == 0)
    c.details.push_back(
        "the strategy-free biderivation bracket equals the closed-form "
        "right-hand side with an overall minus sign, term for term; the "
        "defect above is an artifact of re-entering the non-confluent "
        "rewriter");
  else if (rep.bracket_minus_rhs_terms == 0)
    c.details.push_back(
        "the strategy-free biderivation bracket equals the closed-form "
        "right-hand side exactly");
}

void classical_limit(Criterion& c) {
  RelationSystem sys = make_system(2, 2);
  NCPoly comm =
      commutator(prob_op(1, Outcome::up, sys), prob_op(2, Outcome::up, sys), sys);
  c.ok = true;
  for (const auto& [w, coeff] : comm.terms()) {
    if (!lp_expand_eps(coeff, 0).coeff(0).is_zero()) {
      c.ok = false;
      c.details.push_back("coefficient of " + sys.render(w) +
                          " does not vanish at q = 1");
    }
  }

  ClassicalAssignment asg;
  assign_angles(asg, copy_of(sys, CopyKind::spin, 2), 0.4, 1.1);
  assign_angles(asg, copy_of(sys, CopyKind::sterngerlach, 1), 0.0, 0.0);
  assign_angles(asg, copy_of(sys, CopyKind::sterngerlach, 2), 0.9, 2.3);
  NCPoly p_up = prob_op(1, Outcome::up, sys).value;
  int spin1 = copy_of(sys, CopyKind::spin, 1);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    double theta = M_PI * k / 99.0;
    assign_angles(asg, spin1, theta, 0.3);
    std::complex<double> v = classical_eval(p_up, asg, Rational(1));
    double want = (1 + std::cos(theta)) / 2;
    worst = std::max({worst, std::abs(v.real() - want), std::abs(v.imag())});
  }
  if (worst > 1e-12) {
    c.ok = false;
    std::ostringstream os;
    os << "cosine-law deviation " << worst << " exceeds 1e-12";
    c.details.push_back(os.str());
  }
}

void aligned_bound(Criterion& c) {
  c.ok = true;
  for (Rational q : {Rational(1), Rational(99, 100), Rational(9, 10)}) {
    BoundReport rep =
        bound_rotation_elements(RotationMatrix::identity(), 0, 0, 1, 2, q);
    bool prefactor_ok = rep.prefactor == Rational(1) - q;
    bool magnitude_ok = std::abs(rep.magnitude - 2.0) <= 1e-12;
    if (!prefactor_ok || !magnitude_ok) {
      c.ok = false;
      std::ostringstream os;
      os << "q = " << render_rational(q) << ": prefactor "
         << render_rational(rep.prefactor) << " (want " << render_rational(Rational(1) - q)
         << "), magnitude " << rep.magnitude << " (want 2)";
      c.details.push_back(os.str());
    }
  }
}

void obstruction_identities(Criterion& c) {
  c.ok = true;
  double worst = 0;
  for (int s = 0; s < 100; ++s) {
    RotationMatrix r = sample_rotation(derive_seed(7, s));
    ETensor t = e_tensor(r);
    double d1 = (t.e[1][0][2][0] - t.e[0][1][0][0]) - 2 * (r.m[0][0] - r.m[2][0]);
    double d2 = (t.e[0][0][2][0] - t.e[1][0][1][1]) + 2 * (r.m[0][1] - r.m[2][1]);
    double d3 = (t.e[0][0][1][0] - t.e[2][1][2][0]) - 2 * (r.m[0][2] - r.m[2][2]);
    worst = std::max({worst, std::abs(d1), std::abs(d2), std::abs(d3)});
  }
  if (worst > 1e-10) {
    c.ok = false;
    std::ostringstream os;
    os << "difference identities deviate by " << worst << " over 100 rotations";
    c.details.push_back(os.str());
  }

  RowDegeneracyReport rows = symbolic_row_degeneracy();
  if (!rows.rows_forced_equal()) {
    c.ok = false;
    c.details.push_back("symbolic derivation does not force equal first and third rows");
  }

  NoSharpReport sharp = no_sharp_rotation_check(1000, 7);
  if (!(sharp.all_above_floor && sharp.min_max_abs_e > 0.1)) {
    c.ok = false;
    std::ostringstream os;
    os << "min over samples of max|E| is " << sharp.min_max_abs_e
       << ", floor 0.1 not cleared";
    c.details.push_back(os.str());
  }
}

void confluence_suite(Criterion& c) {
  const int kWords = 1000;
  std::mt19937_64 rng(20260814);
  std::uniform_int_distribution<int> len_dist(3, 6);
  std::uniform_int_distribution<int> copy_dist(0, 3);
  std::uniform_int_distribution<int> bit(0, 1);

  std::vector<Word> words;
  words.reserve(kWords);
  for (int k = 0; k < kWords; ++k) {
    Word w;
    int len = len_dist(rng);
    for (int p = 0; p < len; ++p)
      w.letters.push_back(gen(copy_dist(rng),
                              bit(rng) ? Component::alpha : Component::gamma,
                              bit(rng) != 0));
    words.push_back(std::move(w));
  }

  auto scan = [&](const RelationSystem& sys, long& steps,
                  const Word** first_mismatch) -> int {
    int mismatches = 0;
    for (const Word& w : words) {
      NormalizeStats sl, sr;
      NCPoly lm = normalize(NCPoly(w), sys, Strategy::leftmost, &sl);
      NCPoly rm = normalize(NCPoly(w), sys, Strategy::rightmost, &sr);
      steps += sl.rewrite_steps + sr.rewrite_steps;
      if (!(lm == rm)) {
        if (first_mismatch && !*first_mismatch) *first_mismatch = &w;
        ++mismatches;
      }
    }
    return mismatches;
  };

  // The rewriter instruments every step: a non-decreasing termination
  // measure throws, so completing the scan certifies strict decrease.
  RelationSystem sys = make_system(2, 2);
  long steps = 0;
  const Word* witness = nullptr;
  int mismatches = scan(sys, steps, &witness);

  RelationSystem uniform_sys = make_system(2, 2, false, BraidConvention::uniform);
  long uniform_steps = 0;
  int uniform_mismatches = scan(uniform_sys, uniform_steps, nullptr);

  c.ok = mismatches == 0;
  c.details.push_back("termination measure strictly decreased on every one of " +
                      std::to_string(steps) + " rewrite steps");
  if (!c.ok) {
    c.details.push_back(
        "strategy disagreement on " + std::to_string(mismatches) + " of " +
        std::to_string(kWords) +
        " random words: the cross-copy rule system is not confluent");
    if (witness) {
      c.details.push_back("witness: " + sys.render(*witness));
      c.details.push_back(
          "  leftmost:  " + sys.render(normalize(NCPoly(*witness), sys, Strategy::leftmost)));
      c.details.push_back(
          "  rightmost: " + sys.render(normalize(NCPoly(*witness), sys, Strategy::rightmost)));
    }
    Word pinned({gen(copy_of(sys, CopyKind::spin, 1), Component::alpha, true),
                 gen(copy_of(sys, CopyKind::spin, 1), Component::alpha, false),
                 gen(copy_of(sys, CopyKind::sterngerlach, 1), Component::alpha, false)});
    NCPoly pl = normalize(NCPoly(pinned), sys, Strategy::leftmost);
    NCPoly pr = normalize(NCPoly(pinned), sys, Strategy::rightmost);
    if (!(pl == pr)) {
      c.details.push_back("minimal pinned witness: " + sys.render(pinned));
      c.details.push_back("  leftmost:  " + sys.render(pl));
      c.details.push_back("  rightmost: " + sys.render(pr));
    }
    c.details.push_back("uniform-exchange variant of the same scan: " +
                        std::to_string(uniform_mismatches) +
                        " disagreements (confluent, but it does not close "
                        "under the adjoint)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <cli-binary> <golden-rules-file>\n";
    return 2;
  }
  std::string cli = argv[1], golden = argv[2];

  run(1, "rule dump for the 1+1 system matches the golden file", 1.0,
      [&](Criterion& c) { golden_rules(c, cli, golden); });
  run(2, "self-braiding degenerates to the single-copy relations", 1.0,
      self_braiding);
  run(3, "probability operators hermitian and complete up to n=3", 10.0,
      probability_properties);
  run(4, "rotated pairs stay braided; probabilities rotation covariant", 60.0,
      covariance);
  run(5, "all-orders commutator matches the transcribed reference", 300.0,
      allorders_commutator);
  run(6, "first-order expansion matches the closed-form right-hand side", 300.0,
      first_order_formula);
  run(7, "commutator vanishes classically; cosine law to 1e-12", 10.0,
      classical_limit);
  run(8, "aligned-frame bound equals 2(1-q) with exact prefactor", 1.0,
      aligned_bound);
  run(9, "obstruction identities, row degeneracy, positive floor", 10.0,
      obstruction_identities);
  run(10, "normalization strategy independent and terminating", 60.0,
      confluence_suite);

  std::cout << (10 - g_failures) << "/10 criteria passed\n";
  return g_failures == 0 ? 0 : 1;
}
