#include "liesym/parser.hpp"

#include <algorithm>
#include <cctype>

namespace liesym {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

ParseError ParseError::unknown_identifier(const std::string& name, std::size_t offset) {
  ParseError e("unknown identifier '" + name + "'", offset);
  e.ident_ = name;
  return e;
}

std::string jet_symbol_name(const std::string& dependent, std::span<const int> counts,
                            std::span<const Symbol> independents) {
  std::string letters;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (int k = 0; k < counts[i]; ++k) letters += independents[i].name();
  return letters.empty() ? dependent : dependent + "_" + letters;
}

void ParseContext::declare(const std::string& name, SymbolKind kind) { kinds_[name] = kind; }

void ParseContext::declare_independent(const std::string& name) {
  if (name.size() != 1) throw std::invalid_argument("independent names must be single letters: " + name);
  declare(name, SymbolKind::independent);
  independents_.emplace_back(name);
}

void ParseContext::declare_dependent(const std::string& name) {
  declare(name, SymbolKind::dependent);
  dependents_.emplace_back(name);
}

std::optional<SymbolKind> ParseContext::kind_of(const std::string& name) const {
  auto it = kinds_.find(name);
  if (it != kinds_.end()) return it->second;
  if (resolve(name)) return SymbolKind::jet;
  return std::nullopt;
}

std::optional<Symbol> ParseContext::resolve(const std::string& raw) const {
  auto aliased = [&](const std::string& n) {
    if (kinds_.count(n)) return n;
    auto a = aliases_.find(n);
    return a == aliases_.end() ? n : a->second;
  };
  auto us = raw.find('_');
  if (us == std::string::npos) {
    std::string n = aliased(raw);
    if (kinds_.count(n)) return Symbol(n);
    return std::nullopt;
  }
  std::string dep = aliased(raw.substr(0, us));
  auto dit = std::find_if(dependents_.begin(), dependents_.end(), [&](Symbol s) { return s.name() == dep; });
  if (dit == dependents_.end()) return std::nullopt;
  std::string letters = raw.substr(us + 1);
  if (letters.empty()) return std::nullopt;
  std::vector<int> counts(independents_.size(), 0);
  for (char c : letters) {
    auto iit = std::find_if(independents_.begin(), independents_.end(),
                            [&](Symbol s) { return s.name()[0] == c; });
    if (iit == independents_.end()) return std::nullopt;
    ++counts[static_cast<std::size_t>(iit - independents_.begin())];
  }
  return Symbol(jet_symbol_name(dep, counts, independents_));
}

namespace {

enum class Tok { end, number, ident, plus, minus, star, slash, caret, lparen, rparen, quote };

struct Token {
  Tok kind = Tok::end;
  std::size_t offset = 0;
  std::string text;
  Rational value;
  bool fraction = false;  // literal written as p/q
};

class Lexer {
public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    Token t;
    t.offset = pos_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        t.fraction = true;
      }
      t.kind = Tok::number;
      t.text = std::string(s_.substr(b, pos_ - b));
      try {
        t.value = Rational::parse(t.text);
      } catch (const std::exception&) {
        throw ParseError("invalid number '" + t.text + "'", b);
      }
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ + 1 < s_.size() && s_[pos_] == '_' && std::isalpha(static_cast<unsigned char>(s_[pos_ + 1]))) {
        ++pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      t.kind = Tok::ident;
      t.text = std::string(s_.substr(b, pos_ - b));
      return t;
    }
    ++pos_;
    switch (c) {
      case '+': t.kind = Tok::plus; break;
      case '-': t.kind = Tok::minus; break;
      case '*': t.kind = Tok::star; break;
      case '/': t.kind = Tok::slash; break;
      case '^': t.kind = Tok::caret; break;
      case '(': t.kind = Tok::lparen; break;
      case ')': t.kind = Tok::rparen; break;
      case '\'': t.kind = Tok::quote; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", t.offset);
    }
    return t;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

class Parser {
public:
  Parser(std::string_view s, const ParseContext& ctx) : lex_(s), ctx_(ctx) { advance(); }

  Expr parse() {
    Expr e = expr();
    if (cur_.kind != Tok::end) throw ParseError("unexpected trailing input", cur_.offset);
    return e;
  }

private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) throw ParseError(std::string("expected ") + what, cur_.offset);
    advance();
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      bool neg = cur_.kind == Tok::minus;
      advance();
      Expr t = term();
      terms.push_back(neg ? -t : t);
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    Expr acc = unary();
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      bool div = cur_.kind == Tok::slash;
      std::size_t at = cur_.offset;
      advance();
      Expr rhs = unary();
      if (!div) {
        acc = acc * rhs;
        continue;
      }
      Rational c;
      if (rhs.is_constant()) {
        if (rhs.is_zero()) throw ParseError("division by zero", at);
        acc = acc / rhs;
      } else if (ctx_.extended) {
        acc = Expr::product({acc, Expr::power(rhs, Rational(-1))});
      } else {
        throw ParseError("division by a non-constant", at);
      }
    }
    return acc;
  }

  Expr unary() {
    if (cur_.kind == Tok::minus) {
      advance();
      return -unary();
    }
    if (cur_.kind == Tok::plus) {
      advance();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (cur_.kind != Tok::caret) return base;
    std::size_t at = cur_.offset;
    advance();
    Rational q;
    if (cur_.kind == Tok::number && !cur_.fraction) {
      q = cur_.value;
      advance();
    } else if (cur_.kind == Tok::lparen && ctx_.extended) {
      advance();
      bool neg = false;
      if (cur_.kind == Tok::minus) {
        neg = true;
        advance();
      }
      if (cur_.kind != Tok::number) throw ParseError("expected rational exponent", cur_.offset);
      q = neg ? -cur_.value : cur_.value;
      advance();
      expect(Tok::rparen, "')'");
    } else {
      throw ParseError("exponent must be an integer literal", cur_.offset);
    }
    if (cur_.kind == Tok::caret) throw ParseError("chained exponent", cur_.offset);
    if (!ctx_.extended && q.is_zero()) throw ParseError("zero exponent", at);
    return Expr::power(base, q);
  }

  Expr primary() {
    if (cur_.kind == Tok::number) {
      Expr e(cur_.value);
      advance();
      return e;
    }
    if (cur_.kind == Tok::lparen) {
      advance();
      Expr e = expr();
      expect(Tok::rparen, "')'");
      return e;
    }
    if (cur_.kind != Tok::ident) throw ParseError("expected an operand", cur_.offset);
    std::string name = cur_.text;
    std::size_t at = cur_.offset;
    advance();
    if (ctx_.extended) {
      int primes = 0;
      while (cur_.kind == Tok::quote) {
        ++primes;
        advance();
      }
      if (cur_.kind == Tok::lparen) {
        if (primes == 0 && (name == "exp" || name == "ln")) {
          advance();
          Expr a = expr();
          expect(Tok::rparen, "')'");
          return name == "exp" ? Expr::exp(a) : Expr::log(a);
        }
        if (!ctx_.is_function(name)) throw ParseError::unknown_identifier(name, at);
        advance();
        Expr a = expr();
        expect(Tok::rparen, "')'");
        return Expr::function(name, primes, a);
      }
      if (primes) throw ParseError("expected '(' after function name", cur_.offset);
    }
    auto s = ctx_.resolve(name);
    if (!s) throw ParseError::unknown_identifier(name, at);
    return Expr(*s);
  }

  Lexer lex_;
  const ParseContext& ctx_;
  Token cur_;
};

}  // namespace

Expr parse_expr(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).parse(); }

}  // namespace liesym
