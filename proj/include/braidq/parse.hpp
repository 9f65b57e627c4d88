// Expression language over the generator alphabet.
//
// Grammar (whitespace-insensitive):
//   expr    := '-'? term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := literal | genref | builtin | '(' expr ')'
//            | '[' expr ',' expr ']' | 'star' '(' expr ')'
//   genref  := letter in {x,y,a,c,r}, digits, optional '*'
//   literal := rational | 'q' ('^' int)? | 'i'
//   builtin := ('P_up' | 'P_down' | 'sigma') '(' digits ')'
//
// The optional leading '-' is a strict superset of the base grammar, needed
// so expressions can open with a negative term.
#pragma once

#include <braidq/rewrite.hpp>
#include <braidq/suq2.hpp>

#include <cctype>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace braidq {

struct SourcePos {
  int line = 1, column = 1;
  std::string to_string() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, SourcePos pos)
      : std::runtime_error(pos.to_string() + ": " + message), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

enum class BuiltinKind { p_up, p_down, sigma };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { number, q_power, imaginary, genref, builtin,
                    product, sum, bracket, star_of };

  Kind kind;
  SourcePos pos;

  Rational number;                       // number
  int exponent = 1;                      // q_power
  char letter = 0;                       // genref
  int index = 0;                         // genref (digits), builtin (apparatus)
  bool starred = false;                  // genref
  BuiltinKind builtin = BuiltinKind::p_up;
  std::vector<ExprPtr> children;         // product factors, bracket/star args
  std::vector<int> signs;                // sum: +1/-1 per child
};

inline bool ast_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::number: return a.number == b.number;
    case Expr::Kind::q_power: return a.exponent == b.exponent;
    case Expr::Kind::imaginary: return true;
    case Expr::Kind::genref:
      return a.letter == b.letter && a.index == b.index && a.starred == b.starred;
    case Expr::Kind::builtin:
      return a.builtin == b.builtin && a.index == b.index;
    default: break;
  }
  if (a.children.size() != b.children.size() || a.signs != b.signs) return false;
  for (size_t k = 0; k < a.children.size(); ++k)
    if (!ast_equal(*a.children[k], *b.children[k])) return false;
  return true;
}

// Grammar-valid rendering; render(parse(t)) reparses to an equal AST.  A
// nested sum or product must keep its own parentheses, otherwise the reparse
// flattens it into the parent.
inline std::string render(const Expr& e) {
  auto child = [](const Expr& c, bool paren_products) {
    std::string s = render(c);
    bool paren = c.kind == Expr::Kind::sum ||
                 (paren_products && c.kind == Expr::Kind::product);
    return paren ? "(" + s + ")" : s;
  };
  switch (e.kind) {
    case Expr::Kind::number: {
      std::ostringstream os;
      os << e.number;
      return os.str();
    }
    case Expr::Kind::q_power:
      return e.exponent == 1 ? "q" : "q^" + std::to_string(e.exponent);
    case Expr::Kind::imaginary:
      return "i";
    case Expr::Kind::genref:
      return std::string(1, e.letter) + std::to_string(e.index) +
             (e.starred ? "*" : "");
    case Expr::Kind::builtin: {
      const char* name = e.builtin == BuiltinKind::p_up     ? "P_up"
                         : e.builtin == BuiltinKind::p_down ? "P_down"
                                                            : "sigma";
      return std::string(name) + "(" + std::to_string(e.index) + ")";
    }
    case Expr::Kind::product: {
      std::string s;
      for (size_t k = 0; k < e.children.size(); ++k) {
        if (k) s += "*";
        s += child(*e.children[k], true);
      }
      return s;
    }
    case Expr::Kind::sum: {
      std::string s;
      for (size_t k = 0; k < e.children.size(); ++k) {
        if (k == 0) {
          if (e.signs[k] < 0) s += "-";
        } else {
          s += e.signs[k] < 0 ? " - " : " + ";
        }
        s += child(*e.children[k], false);
      }
      return s;
    }
    case Expr::Kind::bracket:
      return "[" + render(*e.children[0]) + ", " + render(*e.children[1]) + "]";
    case Expr::Kind::star_of:
      return "star(" + render(*e.children[0]) + ")";
  }
  return "";
}

namespace detail {

struct Token {
  enum class Kind { number, q, imaginary, genref, builtin, star_kw,
                    plus, minus, times, caret, lparen, rparen,
                    lbracket, rbracket, comma, end };
  Kind kind;
  SourcePos pos;
  Rational number;
  char letter = 0;
  int index = 0;
  bool starred = false;
  BuiltinKind builtin = BuiltinKind::p_up;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws();
      Token t = next();
      out.push_back(t);
      if (t.kind == Token::Kind::end) break;
    }
    return out;
  }

 private:
  void skip_ws() {
    while (at_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[at_])))
      advance();
  }

  void advance() {
    if (text_[at_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++at_;
  }

  char peek() const { return at_ < text_.size() ? text_[at_] : '\0'; }

  bool match_word(const std::string& w) {
    if (text_.compare(at_, w.size(), w) != 0) return false;
    size_t after = at_ + w.size();
    if (after < text_.size() &&
        (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_'))
      return false;
    for (size_t k = 0; k < w.size(); ++k) advance();
    return true;
  }

  Token next() {
    Token t;
    t.pos = pos_;
    if (at_ >= text_.size()) {
      t.kind = Token::Kind::end;
      return t;
    }
    char ch = peek();
    switch (ch) {
      case '+': advance(); t.kind = Token::Kind::plus; return t;
      case '-': advance(); t.kind = Token::Kind::minus; return t;
      case '*': advance(); t.kind = Token::Kind::times; return t;
      case '^': advance(); t.kind = Token::Kind::caret; return t;
      case '(': advance(); t.kind = Token::Kind::lparen; return t;
      case ')': advance(); t.kind = Token::Kind::rparen; return t;
      case '[': advance(); t.kind = Token::Kind::lbracket; return t;
      case ']': advance(); t.kind = Token::Kind::rbracket; return t;
      case ',': advance(); t.kind = Token::Kind::comma; return t;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      t.kind = Token::Kind::number;
      t.number = lex_rational();
      return t;
    }
    if (match_word("star")) {
      t.kind = Token::Kind::star_kw;
      return t;
    }
    if (match_word("P_up") || match_word("P_down") || match_word("sigma")) {
      // match_word consumed the name; recover which from the original text
      t.kind = Token::Kind::builtin;
      char first = text_[at_ - 1];           // 'p' of up, 'n' of down, 'a' of sigma
      t.builtin = first == 'p'   ? BuiltinKind::p_up
                  : first == 'n' ? BuiltinKind::p_down
                                 : BuiltinKind::sigma;
      return t;
    }
    if (ch == 'q') {
      advance();
      t.kind = Token::Kind::q;
      return t;
    }
    if (ch == 'i') {
      advance();
      t.kind = Token::Kind::imaginary;
      return t;
    }
    if (ch == 'x' || ch == 'y' || ch == 'a' || ch == 'c' || ch == 'r') {
      t.kind = Token::Kind::genref;
      t.letter = ch;
      advance();
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw ParseError("generator letter must be followed by an index", pos_);
      t.index = lex_digits();
      // A '*' right after the index is the adjoint only when what follows
      // cannot begin a factor; otherwise it is the product operator, so
      // "x1*y1" means x1 times y1 while "x1* * y1" stars the x.
      if (peek() == '*') {
        char after = at_ + 1 < text_.size() ? text_[at_ + 1] : '\0';
        bool factor_start = std::isalnum(static_cast<unsigned char>(after)) ||
                            after == '(' || after == '[';
        if (!factor_start) {
          t.starred = true;
          advance();
        }
      }
      return t;
    }
    throw ParseError(std::string("unexpected character '") + ch + "'", pos_);
  }

  int lex_digits() {
    long v = 0;
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected digits", pos_);
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 1'000'000) throw ParseError("index too large", pos_);
      advance();
    }
    return static_cast<int>(v);
  }

  Rational lex_rational() {
    BigInt num = lex_bigint();
    if (peek() == '/') {
      advance();
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw ParseError("expected denominator digits", pos_);
      SourcePos den_pos = pos_;
      BigInt den = lex_bigint();
      if (den == 0) throw ParseError("zero denominator", den_pos);
      return Rational(num, den);
    }
    return Rational(num);
  }

  BigInt lex_bigint() {
    BigInt v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      advance();
    }
    return v;
  }

  const std::string& text_;
  size_t at_ = 0;
  SourcePos pos_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : ts_(std::move(tokens)) {}

  ExprPtr run() {
    ExprPtr e = expr();
    expect(Token::Kind::end, "trailing input after expression");
    return e;
  }

 private:
  const Token& cur() const { return ts_[at_]; }
  const Token& take() { return ts_[at_++]; }
  bool accept(Token::Kind k) {
    if (cur().kind != k) return false;
    ++at_;
    return true;
  }
  void expect(Token::Kind k, const std::string& message) {
    if (!accept(k)) throw ParseError(message, cur().pos);
  }

  ExprPtr expr() {
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::sum;
    node->pos = cur().pos;
    int sign = accept(Token::Kind::minus) ? -1 : 1;
    node->children.push_back(term());
    node->signs.push_back(sign);
    for (;;) {
      if (accept(Token::Kind::plus)) sign = 1;
      else if (accept(Token::Kind::minus)) sign = -1;
      else break;
      node->children.push_back(term());
      node->signs.push_back(sign);
    }
    if (node->children.size() == 1 && node->signs[0] == 1)
      return node->children[0];
    return node;
  }

  static bool starts_factor(Token::Kind k) {
    switch (k) {
      case Token::Kind::number:
      case Token::Kind::imaginary:
      case Token::Kind::q:
      case Token::Kind::genref:
      case Token::Kind::builtin:
      case Token::Kind::star_kw:
      case Token::Kind::lparen:
      case Token::Kind::lbracket:
        return true;
      default:
        return false;
    }
  }

  ExprPtr term() {
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::product;
    node->pos = cur().pos;
    node->children.push_back(factor());
    while (cur().kind == Token::Kind::times) {
      SourcePos star_pos = cur().pos;
      take();
      if (!starts_factor(cur().kind))
        throw ParseError("expected a factor after '*'", star_pos);
      node->children.push_back(factor());
    }
    if (node->children.size() == 1) return node->children[0];
    return node;
  }

  ExprPtr factor() {
    const Token& t = cur();
    switch (t.kind) {
      case Token::Kind::number: {
        take();
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::number;
        node->pos = t.pos;
        node->number = t.number;
        return node;
      }
      case Token::Kind::imaginary: {
        take();
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::imaginary;
        node->pos = t.pos;
        return node;
      }
      case Token::Kind::q: {
        take();
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::q_power;
        node->pos = t.pos;
        node->exponent = 1;
        if (accept(Token::Kind::caret)) node->exponent = parse_int();
        return node;
      }
      case Token::Kind::genref: {
        take();
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::genref;
        node->pos = t.pos;
        node->letter = t.letter;
        node->index = t.index;
        node->starred = t.starred;
        return node;
      }
      case Token::Kind::builtin: {
        take();
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::builtin;
        node->pos = t.pos;
        node->builtin = t.builtin;
        expect(Token::Kind::lparen, "expected '(' after builtin name");
        if (cur().kind != Token::Kind::number || denominator(cur().number) != 1)
          throw ParseError("expected apparatus index", cur().pos);
        node->index = static_cast<int>(numerator(cur().number).convert_to<long>());
        take();
        expect(Token::Kind::rparen, "expected ')' after apparatus index");
        return node;
      }
      case Token::Kind::star_kw: {
        take();
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::star_of;
        node->pos = t.pos;
        expect(Token::Kind::lparen, "expected '(' after star");
        node->children.push_back(expr());
        expect(Token::Kind::rparen, "expected ')' closing star");
        return node;
      }
      case Token::Kind::lparen: {
        take();
        ExprPtr inner = expr();
        expect(Token::Kind::rparen, "expected ')'");
        return inner;
      }
      case Token::Kind::lbracket: {
        take();
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::bracket;
        node->pos = t.pos;
        node->children.push_back(expr());
        expect(Token::Kind::comma, "expected ',' in commutator");
        node->children.push_back(expr());
        expect(Token::Kind::rbracket, "expected ']' closing commutator");
        return node;
      }
      default:
        throw ParseError("expected a factor", t.pos);
    }
  }

  int parse_int() {
    int sign = 1;
    if (accept(Token::Kind::minus)) sign = -1;
    if (cur().kind != Token::Kind::number || denominator(cur().number) != 1)
      throw ParseError("expected integer exponent", cur().pos);
    long v = numerator(cur().number).convert_to<long>();
    take();
    if (v > 1000) throw ParseError("exponent too large", cur().pos);
    return sign * static_cast<int>(v);
  }

  std::vector<Token> ts_;
  size_t at_ = 0;
};

}  // namespace detail

inline ExprPtr parse(const std::string& text) {
  return detail::Parser(detail::Lexer(text).run()).run();
}

// Resolves a genref against the system's copy layout; throws ParseError on
// out-of-range indices.
inline Generator resolve_genref(const Expr& e, const RelationSystem& sys) {
  auto fail = [&](const std::string& message) -> Generator {
    throw ParseError(message, e.pos);
  };
  Component comp;
  CopyKind kind;
  int index = e.index;
  switch (e.letter) {
    case 'x': kind = CopyKind::spin; comp = Component::alpha; break;
    case 'y': kind = CopyKind::spin; comp = Component::gamma; break;
    case 'a': kind = CopyKind::sterngerlach; comp = Component::alpha; break;
    case 'c': kind = CopyKind::sterngerlach; comp = Component::gamma; break;
    case 'r':
      kind = CopyKind::rotation;
      if (index != 1 && index != 2)
        return fail("rotation component must be r1 or r2");
      comp = index == 1 ? Component::alpha : Component::gamma;
      index = 1;
      break;
    default:
      return fail("unknown generator letter");
  }
  int copy = -1;
  try {
    copy = copy_of(sys, kind, index);
  } catch (const std::invalid_argument&) {
    return fail("generator index out of range: " + render(e));
  }
  return gen(copy, comp, e.starred);
}

using BuiltinResolver = std::function<NCPoly(BuiltinKind, int, SourcePos)>;

// Lowers an AST to an (un-normalized) NCPoly over the given system.  The
// builtin resolver supplies P_up/P_down/sigma; pass nullptr to reject them.
inline NCPoly to_ncpoly(const Expr& e, const RelationSystem& sys,
                        const BuiltinResolver& builtins = nullptr) {
  switch (e.kind) {
    case Expr::Kind::number:
      return NCPoly(Word(), LaurentPoly(GaussRational(e.number)));
    case Expr::Kind::imaginary:
      return NCPoly(Word(), LaurentPoly(GaussRational::i()));
    case Expr::Kind::q_power:
      return NCPoly(Word(), LaurentPoly::q_power(e.exponent));
    case Expr::Kind::genref:
      return NCPoly(resolve_genref(e, sys));
    case Expr::Kind::builtin:
      if (!builtins)
        throw ParseError("builtin not available in this context", e.pos);
      return builtins(e.builtin, e.index, e.pos);
    case Expr::Kind::product: {
      NCPoly acc = NCPoly::identity();
      for (const ExprPtr& c : e.children) acc = acc * to_ncpoly(*c, sys, builtins);
      return acc;
    }
    case Expr::Kind::sum: {
      NCPoly acc;
      for (size_t k = 0; k < e.children.size(); ++k) {
        NCPoly v = to_ncpoly(*e.children[k], sys, builtins);
        if (e.signs[k] < 0) acc -= v;
        else acc += v;
      }
      return acc;
    }
    case Expr::Kind::bracket: {
      NCPoly a = to_ncpoly(*e.children[0], sys, builtins);
      NCPoly b = to_ncpoly(*e.children[1], sys, builtins);
      return a * b - b * a;
    }
    case Expr::Kind::star_of:
      return to_ncpoly(*e.children[0], sys, builtins).star();
  }
  throw std::logic_error("to_ncpoly: unhandled node");
}

// Strips '#' comment lines and joins the rest; the shipped data files store
// one expression across many lines.
inline std::string strip_comments(const std::string& text) {
  std::istringstream is(text);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    os << line << "\n";
  }
  return os.str();
}

}  // namespace braidq
