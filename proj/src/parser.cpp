// Recursive-descent parser for the causal formula language.
//
//   formula  := implies
//   implies  := disj ("->" implies)?
//   disj     := conj ("|" conj)*
//   conj     := operand ("&" operand)*
//   operand  := unary ("=" prob)?
//   unary    := "!" unary | "[" targets "]" unary | "<" targets ">" unary | primary
//   primary  := "true" | "false" | "(" implies ")" | NAME ("=" | "!=") label
//   targets  := (NAME "<-" (label | "{" label ("," label)* "}")) separated by ","
//   label    := INT | STRING
//   prob     := INT | DECIMAL | INT "/" INT
//
// Text is first parsed into an untyped tree and then converted to basic,
// causal or probabilistic formulas, so errors about misplaced modalities can
// point at the offending subterm.

#include <cctype>
#include <memory>

#include "nsem/formula.hpp"

namespace nsem {

namespace {

std::string position_prefix(std::size_t line, std::size_t column) {
  return std::to_string(line) + ":" + std::to_string(column) + ": ";
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error(position_prefix(line, column) + message), line_(line), column_(column) {}

namespace {

enum class Tok {
  Name, Int, Decimal, String, Eq, NotEq, Bang, And, Or, Arrow, Assign,
  LBracket, RBracket, Less, Greater, LBrace, RBrace, LParen, RParen, Comma, Slash, End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '\'')) {
          advance();
        }
        t.kind = Tok::Name;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        std::size_t start = pos_;
        advance();
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        t.kind = Tok::Int;
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
          advance();
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
          t.kind = Tok::Decimal;
        }
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (c == '"') {
        advance();
        t.kind = Tok::String;
        while (true) {
          if (pos_ >= text_.size()) throw ParseError(t.line, t.column, "unterminated string");
          char d = text_[pos_];
          advance();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= text_.size()) throw ParseError(t.line, t.column, "unterminated string");
            d = text_[pos_];
            advance();
          }
          t.text += d;
        }
      } else {
        t.kind = symbol(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  Tok symbol(const Token& t) {
    auto two = text_.substr(pos_, 2);
    auto take = [&](std::size_t n, Tok kind) {
      for (std::size_t i = 0; i < n; ++i) advance();
      return kind;
    };
    if (two == "->") return take(2, Tok::Arrow);
    if (two == "<-") return take(2, Tok::Assign);
    if (two == "!=") return take(2, Tok::NotEq);
    if (two == "&&") return take(2, Tok::And);
    if (two == "||") return take(2, Tok::Or);
    switch (text_[pos_]) {
      case '=': return take(1, Tok::Eq);
      case '!': return take(1, Tok::Bang);
      case '&': return take(1, Tok::And);
      case '|': return take(1, Tok::Or);
      case '[': return take(1, Tok::LBracket);
      case ']': return take(1, Tok::RBracket);
      case '<': return take(1, Tok::Less);
      case '>': return take(1, Tok::Greater);
      case '{': return take(1, Tok::LBrace);
      case '}': return take(1, Tok::RBrace);
      case '(': return take(1, Tok::LParen);
      case ')': return take(1, Tok::RParen);
      case ',': return take(1, Tok::Comma);
      case '/': return take(1, Tok::Slash);
      default:
        throw ParseError(t.line, t.column, std::string("unexpected character '") + text_[pos_] + "'");
    }
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

enum class Kind { Atom, True, False, Not, And, Or, Implies, Modal, Prob };

struct Surface {
  Kind kind = Kind::True;
  VarValue atom;
  ModalKind modal = ModalKind::Box;
  std::vector<Target> targets;
  Rational p;
  std::vector<std::shared_ptr<Surface>> kids;
  std::size_t line = 1;
  std::size_t column = 1;
};

using SurfacePtr = std::shared_ptr<Surface>;

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : tokens_(Lexer(text).run()), sig_(sig) {}

  SurfacePtr formula() {
    auto f = implies();
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + describe(peek()) + "'");
    return f;
  }

  Intervention intervention_list() {
    bool bracketed = accept(Tok::LBracket);
    std::vector<VarValue> out;
    if (peek().kind == Tok::Name) {
      while (true) {
        const Token& name = expect(Tok::Name, "a variable name");
        VarId var = endogenous(name);
        if (!accept(Tok::Eq)) expect(Tok::Assign, "'=' or '<-'");
        ValueId value = label(var);
        for (const auto& e : out) {
          if (e.var == var) fail(name, "variable " + name.text + " is intervened on twice");
        }
        out.push_back({var, value});
        if (!accept(Tok::Comma)) break;
      }
    }
    if (bracketed) expect(Tok::RBracket, "']'");
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + describe(peek()) + "'");
    return Intervention(std::move(out));
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }
  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(peek(), "expected " + what + ", found '" + describe(peek()) + "'");
    return next();
  }

  [[noreturn]] static void fail(const Token& at, const std::string& message) {
    throw ParseError(at.line, at.column, message);
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::String: return "\"" + t.text + "\"";
      case Tok::Name: case Tok::Int: case Tok::Decimal: return t.text;
      case Tok::Eq: return "=";
      case Tok::NotEq: return "!=";
      case Tok::Bang: return "!";
      case Tok::And: return "&";
      case Tok::Or: return "|";
      case Tok::Arrow: return "->";
      case Tok::Assign: return "<-";
      case Tok::LBracket: return "[";
      case Tok::RBracket: return "]";
      case Tok::Less: return "<";
      case Tok::Greater: return ">";
      case Tok::LBrace: return "{";
      case Tok::RBrace: return "}";
      case Tok::LParen: return "(";
      case Tok::RParen: return ")";
      case Tok::Comma: return ",";
      case Tok::Slash: return "/";
    }
    return "?";
  }

  static SurfacePtr node(Kind kind, const Token& at) {
    auto s = std::make_shared<Surface>();
    s->kind = kind;
    s->line = at.line;
    s->column = at.column;
    return s;
  }

  SurfacePtr implies() {
    const Token& start = peek();
    auto left = disjunction();
    if (!accept(Tok::Arrow)) return left;
    auto s = node(Kind::Implies, start);
    s->kids = {left, implies()};
    return s;
  }

  SurfacePtr chain(Kind kind, Tok sep, SurfacePtr (Parser::*operand)()) {
    const Token& start = peek();
    auto first = (this->*operand)();
    if (peek().kind != sep) return first;
    auto s = node(kind, start);
    s->kids.push_back(first);
    while (accept(sep)) s->kids.push_back((this->*operand)());
    return s;
  }

  SurfacePtr disjunction() { return chain(Kind::Or, Tok::Or, &Parser::conjunction); }
  SurfacePtr conjunction() { return chain(Kind::And, Tok::And, &Parser::operand); }

  SurfacePtr operand() {
    const Token& start = peek();
    auto u = unary();
    if (peek().kind != Tok::Eq) return u;
    const Token& eq = next();
    auto s = node(Kind::Prob, start);
    s->kids = {u};
    s->p = probability();
    if (s->p < 0 || s->p > 1) fail(eq, "probability " + format_rational(s->p) + " is outside [0,1]");
    return s;
  }

  Rational probability() {
    const Token& t = peek();
    if (t.kind == Tok::Decimal) {
      next();
      return parse_rational(t.text);
    }
    const Token& num = expect(Tok::Int, "a probability");
    if (!accept(Tok::Slash)) return parse_rational(num.text);
    const Token& den = expect(Tok::Int, "a denominator");
    if (den.text.front() == '-' || num.text.front() == '-') fail(num, "probabilities cannot be negative");
    if (den.text.find_first_not_of('0') == std::string::npos) fail(den, "zero denominator");
    return parse_rational(num.text + "/" + den.text);
  }

  SurfacePtr unary() {
    const Token& t = peek();
    if (accept(Tok::Bang)) {
      auto s = node(Kind::Not, t);
      s->kids = {unary()};
      return s;
    }
    if (t.kind == Tok::LBracket || t.kind == Tok::Less) {
      next();
      bool is_box = t.kind == Tok::LBracket;
      auto s = node(Kind::Modal, t);
      s->modal = is_box ? ModalKind::Box : ModalKind::Diamond;
      s->targets = targets(is_box ? Tok::RBracket : Tok::Greater);
      s->kids = {unary()};
      return s;
    }
    return primary();
  }

  std::vector<Target> targets(Tok close) {
    std::vector<Target> out;
    if (accept(close)) return out;
    while (true) {
      const Token& name = expect(Tok::Name, "a variable name");
      Target target;
      target.var = endogenous(name);
      for (const auto& other : out) {
        if (other.var == target.var) fail(name, "variable " + name.text + " is intervened on twice");
      }
      expect(Tok::Assign, "'<-'");
      if (accept(Tok::LBrace)) {
        target.is_set = true;
        if (peek().kind == Tok::RBrace) fail(peek(), "empty value set for " + name.text);
        while (true) {
          target.values.push_back(label(target.var));
          if (!accept(Tok::Comma)) break;
        }
        expect(Tok::RBrace, "'}'");
      } else {
        target.values.push_back(label(target.var));
      }
      out.push_back(std::move(target));
      if (accept(close)) return out;
      expect(Tok::Comma, close == Tok::RBracket ? "',' or ']'" : "',' or '>'");
    }
  }

  SurfacePtr primary() {
    const Token& t = peek();
    if (accept(Tok::LParen)) {
      auto inner = implies();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Name && (t.text == "true" || t.text == "false")) {
      next();
      return node(t.text == "true" ? Kind::True : Kind::False, t);
    }
    if (t.kind != Tok::Name) fail(t, "expected a formula, found '" + describe(t) + "'");
    next();
    VarId var = endogenous(t);
    bool negated = peek().kind == Tok::NotEq;
    if (!negated) expect(Tok::Eq, "'=' after " + t.text);
    else next();
    auto a = node(Kind::Atom, t);
    a->atom = {var, label(var)};
    if (!negated) return a;
    auto s = node(Kind::Not, t);
    s->kids = {a};
    return s;
  }

  VarId endogenous(const Token& name) {
    auto var = sig_.find(name.text);
    if (!var) fail(name, "unknown variable " + name.text);
    if (sig_.is_exogenous(*var)) fail(name, "exogenous variable " + name.text + " cannot appear in formulas");
    return *var;
  }

  ValueId label(VarId var) {
    const Token& t = peek();
    if (t.kind != Tok::Int && t.kind != Tok::String) {
      fail(t, "expected a value for " + sig_.name(var) + ", found '" + describe(t) + "'");
    }
    next();
    auto value = sig_.find_value(var, t.text);
    if (!value) fail(t, "value " + format_label(t.text) + " is not in the range of " + sig_.name(var));
    return *value;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Signature& sig_;
};

bool contains(const Surface& s, Kind kind) {
  if (s.kind == kind) return true;
  for (const auto& k : s.kids) {
    if (contains(*k, kind)) return true;
  }
  return false;
}

[[noreturn]] void fail_at(const Surface& s, const std::string& message) {
  throw ParseError(s.line, s.column, message);
}

template <class L, class Leaf>
Formula<L> convert(const Surface& s, const Leaf& leaf) {
  auto kids = [&] {
    std::vector<Formula<L>> out;
    for (const auto& k : s.kids) out.push_back(convert<L>(*k, leaf));
    return out;
  };
  switch (s.kind) {
    case Kind::True:
      return make_true<L>();
    case Kind::False:
      return make_false<L>();
    case Kind::Not:
      return make_not(convert<L>(*s.kids[0], leaf));
    case Kind::And:
      return std::make_shared<const Node<L>>(Node<L>{Op::And, {}, kids()});
    case Kind::Or:
      return std::make_shared<const Node<L>>(Node<L>{Op::Or, {}, kids()});
    case Kind::Implies:
      return std::make_shared<const Node<L>>(Node<L>{Op::Implies, {}, kids()});
    default:
      return leaf(s);
  }
}

BasicFormula to_basic(const Surface& s) {
  return convert<VarValue>(s, [](const Surface& leaf) -> BasicFormula {
    if (leaf.kind == Kind::Modal) fail_at(leaf, "interventions cannot be nested inside a basic formula");
    if (leaf.kind == Kind::Prob) fail_at(leaf, "probability assertion inside a basic formula");
    return atom(leaf.atom.var, leaf.atom.value);
  });
}

CausalFormula to_causal(const Surface& s) {
  // A maximal modality-free subterm is one basic formula, read as [] of it.
  if (!contains(s, Kind::Modal) && !contains(s, Kind::Prob)) return plain(to_basic(s));
  std::vector<CausalFormula> kids;
  switch (s.kind) {
    case Kind::Prob:
      fail_at(s, "probability assertion in a causal formula");
    case Kind::Modal: {
      auto body = to_basic(*s.kids[0]);
      return s.modal == ModalKind::Box ? box_sets(s.targets, body) : diamond_sets(s.targets, body);
    }
    case Kind::Not:
      return make_not(to_causal(*s.kids[0]));
    default:
      for (const auto& k : s.kids) kids.push_back(to_causal(*k));
      Op op = s.kind == Kind::And ? Op::And : s.kind == Kind::Or ? Op::Or : Op::Implies;
      return std::make_shared<const Node<Modal>>(Node<Modal>{op, {}, std::move(kids)});
  }
}

ProbFormula to_prob(const Surface& s) {
  return convert<ProbAssertion>(s, [](const Surface& leaf) -> ProbFormula {
    if (leaf.kind != Kind::Prob) fail_at(leaf, "expected '= p' after this formula");
    const Surface& inner = *leaf.kids[0];
    ProbAssertion a;
    a.p = leaf.p;
    if (inner.kind == Kind::Modal) {
      if (inner.modal == ModalKind::Diamond) fail_at(inner, "diamonds are not allowed in probability assertions");
      std::vector<VarValue> iv;
      for (const auto& t : inner.targets) {
        if (t.is_set) fail_at(inner, "set interventions are not allowed in probability assertions");
        iv.push_back({t.var, t.values.front()});
      }
      a.counterfactual = true;
      a.iv = Intervention(std::move(iv));
      a.body = to_basic(*inner.kids[0]);
    } else {
      a.body = to_basic(inner);
    }
    return make_leaf(std::move(a));
  });
}

}  // namespace

std::variant<CausalFormula, ProbFormula> parse(std::string_view text, const Signature& sig) {
  auto s = Parser(text, sig).formula();
  if (contains(*s, Kind::Prob)) return to_prob(*s);
  return to_causal(*s);
}

CausalFormula parse_causal(std::string_view text, const Signature& sig) { return to_causal(*Parser(text, sig).formula()); }

ProbFormula parse_probabilistic(std::string_view text, const Signature& sig) {
  return to_prob(*Parser(text, sig).formula());
}

BasicFormula parse_basic(std::string_view text, const Signature& sig) { return to_basic(*Parser(text, sig).formula()); }

Intervention parse_intervention(std::string_view text, const Signature& sig) {
  return Parser(text, sig).intervention_list();
}

}  // namespace nsem
