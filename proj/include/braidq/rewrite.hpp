// The normal-ordering rewriting engine.  A RelationSystem holds an ordered
// list of algebra copies and a finite table of directed two-letter rules;
// normalize() rewrites any NCPoly to its unique canonical form.
//
// Canonical form: within each word, copies appear in strictly descending
// sequence position left to right; within one copy, letters follow
// y < y* < x < x* with the alpha-pair reductions applied.  Termination is
// enforced, not assumed: every rule must strictly decrease the lexicographic
// measure at registration time, and every application is re-checked.
#pragma once

#include <braidq/ncalg.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace braidq {

enum class CopyKind { spin, sterngerlach, rotation };

struct RewriteRule {
  Generator g1, g2;  // adjacent pattern g1 g2
  NCPoly rhs;
};

enum class Strategy { leftmost, rightmost };

struct NormalizeStats {
  long rewrite_steps = 0;
  size_t distinct_words = 0;  // memoized subproblems
};

class RelationSystem {
 public:
  int add_copy(CopyKind kind) {
    copies_.push_back(kind);
    return static_cast<int>(copies_.size()) - 1;
  }

  int copy_count() const { return static_cast<int>(copies_.size()); }
  CopyKind kind(int copy) const { return copies_.at(copy); }

  bool has_rotation() const {
    for (CopyKind k : copies_)
      if (k == CopyKind::rotation) return true;
    return false;
  }

  // Registers lhs -> rhs after checking the termination measure: every rhs
  // word must be strictly smaller than the two-letter lhs.  A violation is
  // a construction bug, reported loudly.
  void register_rule(Generator g1, Generator g2, NCPoly rhs) {
    check_generator(g1);
    check_generator(g2);
    Word lhs({g1, g2});
    Measure ml = measure(lhs);
    for (const auto& [w, c] : rhs.terms()) {
      for (const Generator& g : w.letters) check_generator(g);
      if (!(measure(w) < ml))
        throw std::logic_error("rule-measure violation: " + render(lhs) +
                               " -> " + render(w));
    }
    auto key = std::make_pair(g1, g2);
    if (!rules_.emplace(key, RewriteRule{g1, g2, std::move(rhs)}).second)
      throw std::logic_error("duplicate rule for " + render(lhs));
  }

  const NCPoly* rule_for(const Generator& g1, const Generator& g2) const {
    auto it = rules_.find(std::make_pair(g1, g2));
    return it == rules_.end() ? nullptr : &it->second.rhs;
  }

  size_t rule_count() const { return rules_.size(); }

  // Rules in deterministic (structural lhs) order.
  std::vector<const RewriteRule*> rules() const {
    std::vector<const RewriteRule*> out;
    out.reserve(rules_.size());
    for (const auto& [key, rule] : rules_) out.push_back(&rule);
    return out;
  }

  void check_generator(const Generator& g) const {
    if (g.copy < 0 || g.copy >= copy_count())
      throw std::invalid_argument("unknown generator copy " +
                                  std::to_string(g.copy));
  }

  // --- canonical text rendering ---------------------------------------

  // Letter names: spin copies x/y, Stern-Gerlach copies a/c, the rotation
  // copy r1 (alpha) / r2 (gamma).  The digit is the 1-based index among
  // copies of the same kind, except for the rotation copy, where it selects
  // the component.
  std::string letter_name(const Generator& g) const {
    check_generator(g);
    CopyKind k = kind(g.copy);
    int index = 1;
    for (int c = 0; c < g.copy; ++c)
      if (copies_[c] == k) ++index;
    std::string s;
    switch (k) {
      case CopyKind::spin:
        s = (g.comp == Component::alpha ? "x" : "y") + std::to_string(index);
        break;
      case CopyKind::sterngerlach:
        s = (g.comp == Component::alpha ? "a" : "c") + std::to_string(index);
        break;
      case CopyKind::rotation:
        s = g.comp == Component::alpha ? "r1" : "r2";
        break;
    }
    if (g.starred) s += "*";
    return s;
  }

  std::string render(const Word& w) const {
    if (w.empty()) return "1";
    std::string s;
    for (size_t p = 0; p < w.size(); ++p) {
      if (p) s += " ";
      s += letter_name(w.letters[p]);
    }
    return s;
  }

  std::string render(const NCPoly& a) const {
    if (a.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c0] : a.terms()) {
      LaurentPoly c = c0;
      bool negative = false;
      if (c.terms().size() == 1 && c.terms().begin()->second.leading_negative()) {
        negative = true;
        c = -c;
      }
      if (first) {
        if (negative) os << "-";
      } else {
        os << (negative ? " - " : " + ");
      }
      first = false;
      if (w.empty()) {
        os << c.render();
      } else if (c.is_one()) {
        os << render(w);
      } else if (c.terms().size() > 1) {
        os << "(" << c.render() << ") * " << render(w);
      } else {
        os << c.render() << " * " << render(w);
      }
    }
    return os.str();
  }

  // One rule per line, "lhs -> rhs", in deterministic order.
  std::string dump_rules() const {
    std::ostringstream os;
    for (const RewriteRule* r : rules())
      os << render(Word({r->g1, r->g2})) << " -> " << render(r->rhs) << "\n";
    return os.str();
  }

 private:
  std::vector<CopyKind> copies_;
  std::map<std::pair<Generator, Generator>, RewriteRule> rules_;
};

namespace detail {

class Normalizer {
 public:
  Normalizer(const RelationSystem& sys, Strategy strategy, NormalizeStats* stats)
      : sys_(sys), strategy_(strategy), stats_(stats) {}

  const NCPoly& canonical(const Word& w) {
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;

    NCPoly result;
    int pos = find_reducible(w);
    if (pos < 0) {
      result = NCPoly(w);
    } else {
      const NCPoly* rhs = sys_.rule_for(w.letters[pos], w.letters[pos + 1]);
      Measure before = measure(w);
      for (const auto& [rw, rc] : rhs->terms()) {
        Word next;
        next.letters.reserve(w.size() - 2 + rw.size());
        next.letters.assign(w.letters.begin(), w.letters.begin() + pos);
        next.letters.insert(next.letters.end(), rw.letters.begin(),
                            rw.letters.end());
        next.letters.insert(next.letters.end(), w.letters.begin() + pos + 2,
                            w.letters.end());
        // Always-on termination instrumentation.
        if (!(measure(next) < before))
          throw std::logic_error("termination measure did not decrease");
        if (stats_) ++stats_->rewrite_steps;
        const NCPoly& sub = canonical(next);
        for (const auto& [sw, sc] : sub.terms()) result.add_term(sw, rc * sc);
      }
    }
    auto [ins, unused] = cache_.emplace(w, std::move(result));
    if (stats_) stats_->distinct_words = cache_.size();
    return ins->second;
  }

 private:
  int find_reducible(const Word& w) const {
    int n = static_cast<int>(w.size());
    if (strategy_ == Strategy::leftmost) {
      for (int p = 0; p + 1 < n; ++p)
        if (sys_.rule_for(w.letters[p], w.letters[p + 1])) return p;
    } else {
      for (int p = n - 2; p >= 0; --p)
        if (sys_.rule_for(w.letters[p], w.letters[p + 1])) return p;
    }
    return -1;
  }

  const RelationSystem& sys_;
  Strategy strategy_;
  NormalizeStats* stats_;
  std::map<Word, NCPoly> cache_;
};

}  // namespace detail

inline NCPoly normalize(const NCPoly& a, const RelationSystem& sys,
                        Strategy strategy = Strategy::leftmost,
                        NormalizeStats* stats = nullptr) {
  for (const auto& [w, c] : a.terms())
    for (const Generator& g : w.letters) sys.check_generator(g);
  detail::Normalizer nrm(sys, strategy, stats);
  NCPoly out;
  for (const auto& [w, c] : a.terms()) {
    const NCPoly& cw = nrm.canonical(w);
    for (const auto& [sw, sc] : cw.terms()) out.add_term(sw, c * sc);
  }
  return out;
}

inline bool is_zero(const NCPoly& a, const RelationSystem& sys) {
  return normalize(a, sys).empty();
}

}  // namespace braidq
