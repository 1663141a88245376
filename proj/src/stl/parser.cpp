#include "stlplan/stl/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace stlplan::stl {

ParseError::ParseError(std::size_t line, std::size_t column, std::string detail)
    : Error("parse_error", "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + detail),
      line_(line),
      column_(column),
      detail_(std::move(detail)) {}

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Greater,
  Less,
  Bang,
  Amp,
  Bar,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident:
    case Tok::Number: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const auto start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          advance();
        }
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
        lex_number(t);
      } else {
        t.text = std::string(1, c);
        switch (c) {
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case '[': t.kind = Tok::LBracket; break;
          case ']': t.kind = Tok::RBracket; break;
          case ',': t.kind = Tok::Comma; break;
          case '>': t.kind = Tok::Greater; break;
          case '<': t.kind = Tok::Less; break;
          case '!': t.kind = Tok::Bang; break;
          case '&': t.kind = Tok::Amp; break;
          case '|': t.kind = Tok::Bar; break;
          default: throw ParseError(line_, column_, "unexpected character '" + t.text + "'");
        }
        advance();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  void lex_number(Token& t) {
    const auto start = pos_;
    const auto line = line_;
    const auto column = column_;
    if (text_[pos_] == '-' || text_[pos_] == '+') advance();
    bool digits = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance(), digits = true;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      advance();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance(), digits = true;
    }
    if (digits && pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) advance();
      bool exp_digits = false;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        advance();
        exp_digits = true;
      }
      if (!exp_digits) throw ParseError(line_, column_, "expected exponent digits");
    }
    t.text = std::string(text_.substr(start, pos_ - start));
    if (!digits) throw ParseError(line, column, "malformed number '" + t.text + "'");
    // from_chars rejects a leading '+'.
    const char* first = t.text.data() + (t.text[0] == '+' ? 1 : 0);
    const char* last = t.text.data() + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, t.number);
    if (ec != std::errc{} || ptr != last || !std::isfinite(t.number)) {
      throw ParseError(line, column, "malformed number '" + t.text + "'");
    }
    t.kind = Tok::Number;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

bool is_keyword(const std::string& s) { return s == "true" || s == "F" || s == "G" || s == "U"; }

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula parse() {
    Formula f = parse_or();
    if (peek().kind != Tok::End) fail(peek(), "expected end of input");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const auto i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& take() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& expected) const {
    throw ParseError(at.line, at.column, expected + ", found " + describe(at));
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    return take();
  }

  bool at_ident(const char* word) const { return peek().kind == Tok::Ident && peek().text == word; }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (peek().kind == Tok::Bar) {
      take();
      lhs = Formula::disjunction(std::move(lhs), parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_until();
    while (peek().kind == Tok::Amp) {
      take();
      lhs = Formula::conjunction(std::move(lhs), parse_until());
    }
    return lhs;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    if (at_ident("U")) {
      take();
      const TimeInterval iv = parse_optional_interval();
      return Formula::until(iv, std::move(lhs), parse_until());
    }
    return lhs;
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (t.kind == Tok::Bang) {
      take();
      return Formula::negation(parse_unary());
    }
    if (at_ident("F")) {
      take();
      const TimeInterval iv = parse_optional_interval();
      return Formula::eventually(iv, parse_unary());
    }
    if (at_ident("G")) {
      take();
      const TimeInterval iv = parse_optional_interval();
      return Formula::always(iv, parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      if (t.text == "true") {
        take();
        return Formula::truth();
      }
      if (t.text == "U") fail(t, "expected formula before 'U'");
      if (!is_keyword(t.text) && (peek(1).kind == Tok::Greater || peek(1).kind == Tok::Less)) {
        return parse_comparison();
      }
      if (t.text.size() == 1 && std::isupper(static_cast<unsigned char>(t.text[0]))) {
        fail(t, "unknown operator '" + t.text + "'; expected formula");
      }
      take();
      fail(peek(), "expected '>' or '<' after signal name");
    }
    if (t.kind != Tok::LParen) fail(t, "expected formula");
    take();
    Formula inner = parse_or();
    expect(Tok::RParen, "')'");
    return inner;
  }

  // ident (> | <) number
  Formula parse_comparison() {
    std::string name = take().text;
    const Comparison cmp = take().kind == Tok::Greater ? Comparison::Greater : Comparison::Less;
    const double threshold = expect(Tok::Number, "numeric threshold").number;
    return Formula::predicate(std::move(name), cmp, threshold);
  }

  TimeInterval parse_optional_interval() {
    if (peek().kind != Tok::LBracket) return TimeInterval{};
    take();
    const Token& lo_tok = expect(Tok::Number, "interval lower bound");
    const double lo = lo_tok.number;
    expect(Tok::Comma, "','");
    double hi = 0.0;
    const Token& hi_tok = peek();
    if (hi_tok.kind == Tok::Ident && hi_tok.text == "inf") {
      take();
      hi = std::numeric_limits<double>::infinity();
    } else {
      hi = expect(Tok::Number, "interval upper bound or 'inf'").number;
    }
    const Token& close = peek();
    expect(Tok::RBracket, "']'");
    if (lo < 0.0) throw ParseError(lo_tok.line, lo_tok.column, "interval lower bound must be non-negative");
    if (hi < lo) throw ParseError(close.line, close.column, "interval upper bound must not be below lower bound");
    return TimeInterval{lo, hi};
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.parse();
}

}  // namespace stlplan::stl
