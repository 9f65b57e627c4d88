// Command-line front end: expression normalization, verification suites,
// bound evaluation, the E-tensor, sweeps, and rule dumps over a configurable
// system.  Exit codes: 0 all checks passed, 1 a verification assertion
// failed, 2 usage or input error.
#include <braidq/braidq.hpp>
#include <braidq/reference_embedded.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace braidq;

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct Config {
  int n_spin = 2;
  int n_sg = 2;
  bool rotation = false;
  int order = 1;
  std::string q_text;  // empty keeps q symbolic
  std::uint64_t seed = 7;
  int samples = 1000;
  std::string format = "text";
  std::string out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(text));
    boost::multiprecision::cpp_int num(text.substr(0, slash));
    boost::multiprecision::cpp_int den(text.substr(slash + 1));
    if (den == 0) throw UsageError("q: zero denominator");
    return Rational(num, den);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("q: expected a rational like 99/100, got '" + text + "'");
  }
}

Rational require_numeric_q(const Config& cfg) {
  if (cfg.q_text.empty())
    throw UsageError("this command evaluates numerically and needs --q");
  Rational q = parse_rational(cfg.q_text);
  if (!(q > 0 && q <= 1)) throw UsageError("q must satisfy 0 < q <= 1");
  return q;
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw UsageError("cannot open output file: " + cfg.out);
  f << text;
}

json config_json(const Config& cfg) {
  json j;
  j["n_spin"] = cfg.n_spin;
  j["n_sg"] = cfg.n_sg;
  j["rotation"] = cfg.rotation;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["q"] = cfg.q_text.empty() ? "symbolic" : cfg.q_text;
  return j;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void require_format(const Config& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (cfg.format == f) return;
  throw UsageError("format '" + cfg.format + "' is not available for this command");
}

RelationSystem make_configured_system(const Config& cfg) {
  if (cfg.n_spin < 0 || cfg.n_sg < 0) throw UsageError("counts must be >= 0");
  if (cfg.order < 0) throw UsageError("--order must be >= 0");
  return make_system(cfg.n_spin, cfg.n_sg, cfg.rotation);
}

// P_up(i), P_down(i), and sigma(i) = q P_up(i) - q^-1 P_down(i).
BuiltinResolver make_resolver(const RelationSystem& sys) {
  return [&sys](BuiltinKind kind, int index, SourcePos pos) -> NCPoly {
    try {
      switch (kind) {
        case BuiltinKind::p_up:
          return prob_op(index, Outcome::up, sys).value;
        case BuiltinKind::p_down:
          return prob_op(index, Outcome::down, sys).value;
        case BuiltinKind::sigma: {
          NCPoly up = prob_op(index, Outcome::up, sys).value;
          NCPoly dn = prob_op(index, Outcome::down, sys).value;
          return normalize(LaurentPoly::q_power(1) * up - LaurentPoly::q_power(-1) * dn,
                           sys);
        }
      }
      throw ParseError("unknown builtin", pos);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), pos);
    }
  };
}

NCPoly parse_expression(const std::string& text, const RelationSystem& sys) {
  BuiltinResolver resolver = make_resolver(sys);
  return to_ncpoly(*parse(text), sys, resolver);
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string format_complex(const std::complex<double>& v) {
  std::ostringstream out;
  out.precision(17);
  out << v.real() << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag()) << "i";
  return out.str();
}

// --- commands ------------------------------------------------------------

int cmd_normalize(const Config& cfg, const std::string& expr) {
  require_format(cfg, {"text", "json"});
  RelationSystem sys = make_configured_system(cfg);
  NCPoly nf = normalize(parse_expression(expr, sys), sys);
  if (cfg.format == "text") {
    emit(cfg, sys.render(nf) + "\n");
  } else {
    json j;
    j["schema"] = 1;
    j["command"] = "normalize";
    j["config"] = config_json(cfg);
    j["input"] = expr;
    j["normal_form"] = sys.render(nf);
    j["term_count"] = nf.term_count();
    emit(cfg, dump_json(j));
  }
  return kPass;
}

int cmd_commutator(const Config& cfg, const std::string& lhs, const std::string& rhs) {
  require_format(cfg, {"text", "json"});
  RelationSystem sys = make_configured_system(cfg);
  NCPoly a = parse_expression(lhs, sys);
  NCPoly b = parse_expression(rhs, sys);
  NCPoly nf = normalize(a * b - b * a, sys);
  if (cfg.format == "text") {
    emit(cfg, sys.render(nf) + "\n");
  } else {
    json j;
    j["schema"] = 1;
    j["command"] = "commutator";
    j["config"] = config_json(cfg);
    j["inputs"] = {lhs, rhs};
    j["normal_form"] = sys.render(nf);
    j["term_count"] = nf.term_count();
    emit(cfg, dump_json(j));
  }
  return kPass;
}

int cmd_expand(const Config& cfg, const std::string& expr) {
  require_format(cfg, {"text", "json"});
  RelationSystem sys = make_configured_system(cfg);
  AbelianPoly ab = abelianize(normalize(parse_expression(expr, sys), sys));
  auto first = first_eps_order(ab);

  if (cfg.format == "text") {
    std::ostringstream out;
    for (int k = 0; k <= cfg.order; ++k)
      out << "eps^" << k << ": " << render(eps_coefficient(ab, k), sys) << "\n";
    out << "first nonzero order: " << (first ? std::to_string(*first) : "none") << "\n";
    emit(cfg, out.str());
  } else {
    json j;
    j["schema"] = 1;
    j["command"] = "expand";
    j["config"] = config_json(cfg);
    j["input"] = expr;
    j["orders"] = json::array();
    for (int k = 0; k <= cfg.order; ++k) {
      AbelianPoly c = eps_coefficient(ab, k);
      j["orders"].push_back(
          {{"order", k}, {"rendering", render(c, sys)}, {"term_count", c.terms.size()}});
    }
    if (first)
      j["first_nonzero_order"] = *first;
    else
      j["first_nonzero_order"] = nullptr;
    emit(cfg, dump_json(j));
  }
  return kPass;
}

int cmd_verify(const Config& cfg, const std::string& suite) {
  require_format(cfg, {"text", "json"});
  VerifyOptions opt;
  opt.n_spin = cfg.n_spin;
  opt.n_sg = cfg.n_sg;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.reference_text = data::kAllOrdersCommutator;

  SuiteReport rep;
  try {
    rep = run_suite(suite, opt);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (cfg.format == "text") {
    std::ostringstream out;
    out << "suite " << rep.suite << ": " << (rep.passed ? "pass" : "FAIL") << "\n";
    for (const CheckRecord& c : rep.checks) {
      out << "  " << c.name << ": " << (c.passed ? "pass" : "FAIL");
      if (!c.passed) {
        out << "  residual terms: " << c.residual_terms;
        if (c.first_nonzero_order)
          out << "  first nonzero eps order: " << *c.first_nonzero_order;
      }
      out << "\n";
      if (!c.passed && !c.detail.empty()) out << "    " << c.detail << "\n";
      if (c.passed && !c.detail.empty()) out << "    " << c.detail << "\n";
    }
    emit(cfg, out.str());
  } else {
    json checks = json::array();
    for (const CheckRecord& c : rep.checks) {
      json cj;
      cj["check"] = c.name;
      cj["passed"] = c.passed;
      cj["inputs"] = config_json(cfg);
      cj["residual-terms"] = c.residual_terms;
      cj["residual-rendering"] = c.detail;
      if (c.first_nonzero_order)
        cj["first-nonzero-eps-order"] = *c.first_nonzero_order;
      else
        cj["first-nonzero-eps-order"] = nullptr;
      cj["elapsed_seconds"] = c.elapsed_seconds;
      checks.push_back(cj);
    }
    json j;
    j["schema"] = 1;
    j["command"] = "verify";
    j["suite"] = rep.suite;
    j["passed"] = rep.passed;
    j["config"] = config_json(cfg);
    j["checks"] = checks;
    emit(cfg, dump_json(j));
  }
  return rep.passed ? kPass : kCheckFailed;
}

json direction_json(const DirectionVector& v) {
  return {{"x", v.x}, {"y", v.y}, {"z", v.z}};
}

json rotation_json(const RotationMatrix& r) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({r.m[i][0], r.m[i][1], r.m[i][2]});
  return rows;
}

int emit_bound(const Config& cfg, const std::string& kind, const BoundReport& rep) {
  if (cfg.format == "text") {
    std::ostringstream out;
    out.precision(17);
    out << "bound = " << rep.bound << "  (prefactor " << render_rational(rep.prefactor)
        << ", magnitude " << rep.magnitude << ", q = " << render_rational(rep.q) << ")\n";
    emit(cfg, out.str());
  } else {
    json j;
    j["schema"] = 1;
    j["command"] = "bound";
    j["kind"] = kind;
    j["config"] = config_json(cfg);
    j["q"] = render_rational(rep.q);
    j["prefactor"] = render_rational(rep.prefactor);
    j["magnitude"] = rep.magnitude;
    j["bound"] = rep.bound;
    if (rep.indices[0] >= 0) j["indices"] = rep.indices;
    if (!rep.directions.empty()) {
      j["directions"] = json::array();
      for (const DirectionVector& v : rep.directions)
        j["directions"].push_back(direction_json(v));
    }
    if (rep.rotation) j["rotation"] = rotation_json(*rep.rotation);
    emit(cfg, dump_json(j));
  }
  return kPass;
}

int axis_from_token(const std::string& t) {
  if (t == "x" || t == "0") return 0;
  if (t == "y" || t == "1") return 1;
  if (t == "z" || t == "2") return 2;
  throw UsageError("axis must be one of x, y, z (or 0, 1, 2), got '" + t + "'");
}

double double_from_token(const std::string& t) {
  try {
    size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw UsageError("expected a number, got '" + t + "'");
  }
}

int cmd_bound(const Config& cfg, const std::string& kind,
              const std::vector<std::string>& args) {
  require_format(cfg, {"text", "json"});
  Rational q = require_numeric_q(cfg);
  if (kind == "probabilities") {
    if (args.size() != 8)
      throw UsageError(
          "bound probabilities needs 8 angles: theta omega for n_i, m_i, n_j, m_j");
    DirectionVector v[4];
    for (int s = 0; s < 4; ++s)
      v[s] = angles_to_direction(double_from_token(args[2 * s]),
                                 double_from_token(args[2 * s + 1]));
    return emit_bound(cfg, kind, bound_probabilities(v[0], v[1], v[2], v[3], q));
  }
  if (kind == "rotation") {
    if (args.size() != 4 && args.size() != 5)
      throw UsageError("bound rotation needs axes i j k l and optionally identity|random");
    RotationMatrix r = RotationMatrix::identity();
    if (args.size() == 5) {
      if (args[4] == "random")
        r = sample_rotation(derive_seed(cfg.seed, 0));
      else if (args[4] != "identity")
        throw UsageError("rotation source must be identity or random");
    }
    return emit_bound(cfg, kind,
                      bound_rotation_elements(r, axis_from_token(args[0]),
                                              axis_from_token(args[1]),
                                              axis_from_token(args[2]),
                                              axis_from_token(args[3]), q));
  }
  throw UsageError("bound kind must be probabilities or rotation");
}

int cmd_etensor(const Config& cfg, const std::string& source) {
  require_format(cfg, {"text", "json", "csv"});
  RotationMatrix r;
  if (source == "identity")
    r = RotationMatrix::identity();
  else if (source == "random")
    r = sample_rotation(derive_seed(cfg.seed, 0));
  else
    throw UsageError("etensor source must be identity or random");

  ETensor t = e_tensor(r);
  double gap = e_tensor_form_gap(r);

  if (cfg.format == "text") {
    std::ostringstream out;
    out.precision(17);
    out << "max|E| = " << t.max_abs() << "\n";
    out << "two-form gap = " << gap << "\n";
    emit(cfg, out.str());
  } else if (cfg.format == "csv") {
    std::ostringstream out;
    out.precision(17);
    out << "i,j,k,l,E\n";
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            out << i << "," << j << "," << k << "," << l << "," << t.e[i][j][k][l]
                << "\n";
    emit(cfg, out.str());
  } else {
    json values = json::array();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            values.push_back(
                {{"i", i}, {"j", j}, {"k", k}, {"l", l}, {"value", t.e[i][j][k][l]}});
    json j;
    j["schema"] = 1;
    j["command"] = "etensor";
    j["config"] = config_json(cfg);
    j["source"] = source;
    j["rotation"] = rotation_json(r);
    j["max_abs_e"] = t.max_abs();
    j["form_gap"] = gap;
    j["values"] = values;
    emit(cfg, dump_json(j));
  }
  return kPass;
}

int cmd_sweep(const Config& cfg) {
  require_format(cfg, {"text", "json", "csv"});
  Rational q = require_numeric_q(cfg);
  if (cfg.samples < 1) throw UsageError("--samples must be >= 1");
  std::vector<SweepRow> rows = sweep_rotation_bounds(cfg.samples, cfg.seed, q);

  if (cfg.format == "json") {
    json jr = json::array();
    for (const SweepRow& r : rows)
      jr.push_back({{"sample", r.sample},
                    {"seed", r.seed},
                    {"q", render_rational(r.q)},
                    {"i", r.i},
                    {"j", r.j},
                    {"k", r.k},
                    {"l", r.l},
                    {"bound", r.bound},
                    {"maxE", r.max_abs_e}});
    json j;
    j["schema"] = 1;
    j["command"] = "sweep";
    j["config"] = config_json(cfg);
    j["rows"] = jr;
    emit(cfg, dump_json(j));
  } else {
    emit(cfg, sweep_csv(rows));
  }
  return kPass;
}

int cmd_classical_eval(const Config& cfg, const std::string& expr,
                       const std::vector<std::string>& angle_args) {
  require_format(cfg, {"text", "json"});
  RelationSystem sys = make_configured_system(cfg);
  size_t wanted = 2 * static_cast<size_t>(cfg.n_spin + cfg.n_sg);
  if (angle_args.size() != wanted)
    throw UsageError("classical-eval needs " + std::to_string(wanted) +
                     " angles: theta omega per spin copy, then per SG copy");

  ClassicalAssignment asg;
  size_t at = 0;
  for (int i = 1; i <= cfg.n_spin; ++i, at += 2)
    assign_angles(asg, copy_of(sys, CopyKind::spin, i),
                  double_from_token(angle_args[at]),
                  double_from_token(angle_args[at + 1]));
  for (int i = 1; i <= cfg.n_sg; ++i, at += 2)
    assign_angles(asg, copy_of(sys, CopyKind::sterngerlach, i),
                  double_from_token(angle_args[at]),
                  double_from_token(angle_args[at + 1]));

  Rational q = cfg.q_text.empty() ? Rational(1) : parse_rational(cfg.q_text);
  std::complex<double> v;
  try {
    v = classical_eval(parse_expression(expr, sys), asg, q);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (cfg.format == "text") {
    emit(cfg, format_complex(v) + "\n");
  } else {
    json j;
    j["schema"] = 1;
    j["command"] = "classical-eval";
    j["config"] = config_json(cfg);
    j["input"] = expr;
    j["value"] = {{"re", v.real()}, {"im", v.imag()}};
    emit(cfg, dump_json(j));
  }
  return kPass;
}

int cmd_dump_rules(const Config& cfg) {
  require_format(cfg, {"text", "json"});
  RelationSystem sys = make_configured_system(cfg);
  if (cfg.format == "text") {
    emit(cfg, sys.dump_rules());
  } else {
    json rules = json::array();
    for (const RewriteRule* r : sys.rules())
      rules.push_back({{"lhs", sys.render(Word({r->g1, r->g2}))},
                       {"rhs", sys.render(r->rhs)}});
    json j;
    j["schema"] = 1;
    j["command"] = "dump-rules";
    j["config"] = config_json(cfg);
    j["rules"] = rules;
    emit(cfg, dump_json(j));
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"braided-copy algebra toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  Config cfg;
  app.add_option("--n-spin", cfg.n_spin, "number of spin copies")->capture_default_str();
  app.add_option("--n-sg", cfg.n_sg, "number of apparatus copies")
      ->capture_default_str();
  app.add_flag("--rotation", cfg.rotation, "include the rotation copy");
  app.add_option("--order", cfg.order, "highest eps order for expand")
      ->capture_default_str();
  app.add_option("--q", cfg.q_text,
                 "rational q (e.g. 99/100); only numeric commands use it");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "sample count")->capture_default_str();
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out, "write output to this file instead of stdout");

  std::string expr, expr_b, suite, bound_kind, etensor_source = "identity";
  std::vector<std::string> extra;

  CLI::App* c_normalize = app.add_subcommand("normalize", "normal form of an expression");
  c_normalize->add_option("expression", expr)->required();

  CLI::App* c_comm = app.add_subcommand("commutator", "normal form of [A, B]");
  c_comm->add_option("lhs", expr)->required();
  c_comm->add_option("rhs", expr_b)->required();

  CLI::App* c_expand = app.add_subcommand("expand", "eps-expansion of the normal form");
  c_expand->add_option("expression", expr)->required();

  CLI::App* c_verify = app.add_subcommand("verify", "run a verification suite");
  c_verify->add_option("suite", suite)->required();

  CLI::App* c_bound = app.add_subcommand("bound", "evaluate an uncertainty bound");
  c_bound->add_option("kind", bound_kind)->required();
  c_bound->add_option("args", extra, "kind-specific arguments");

  CLI::App* c_etensor = app.add_subcommand("etensor", "rotation-protocol E tensor");
  c_etensor->add_option("source", etensor_source, "identity or random");

  app.add_subcommand("sweep", "random-rotation bound sweep");

  CLI::App* c_ceval =
      app.add_subcommand("classical-eval", "evaluate at commuting spinor angles");
  c_ceval->add_option("expression", expr)->required();
  c_ceval->add_option("angles", extra, "theta omega per copy");

  app.add_subcommand("dump-rules", "print every rewrite rule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }

  try {
    if (c_normalize->parsed()) return cmd_normalize(cfg, expr);
    if (c_comm->parsed()) return cmd_commutator(cfg, expr, expr_b);
    if (c_expand->parsed()) return cmd_expand(cfg, expr);
    if (c_verify->parsed()) return cmd_verify(cfg, suite);
    if (c_bound->parsed()) return cmd_bound(cfg, bound_kind, extra);
    if (c_etensor->parsed()) return cmd_etensor(cfg, etensor_source);
    if (app.get_subcommand("sweep")->parsed()) return cmd_sweep(cfg);
    if (c_ceval->parsed()) return cmd_classical_eval(cfg, expr, extra);
    if (app.get_subcommand("dump-rules")->parsed()) return cmd_dump_rules(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::cerr << "error: no command\n";
  return kUsage;
}
