#include "pastplan/ppltl/parser.h"

#include <cctype>

namespace pastplan::ppltl {

namespace {

std::string describe(const std::vector<std::string>& expected,
                     const std::string& found) {
  std::string msg = "expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
    msg += expected[i];
  }
  return msg + ", found " + found;
}

enum class Tok { kLParen, kRParen, kComma, kNot, kAnd, kOr, kImplies,
                 kIdent, kQuoted, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
  bool glued = false;  // no whitespace before this token
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      bool space = skip_space();
      Token t = next();
      t.glued = !space;
      out.push_back(t);
      if (t.kind == Tok::kEnd) return out;
    }
  }

 private:
  bool skip_space() {
    bool any = false;
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      advance();
      any = true;
    }
    return any;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Token next() {
    Token t{Tok::kEnd, "", line_, col_};
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance();
      return t;
    };
    switch (c) {
      case '(': return single(Tok::kLParen);
      case ')': return single(Tok::kRParen);
      case ',': return single(Tok::kComma);
      case '!':
      case '~': return single(Tok::kNot);
      case '&':
      case '|': {
        t.kind = c == '&' ? Tok::kAnd : Tok::kOr;
        t.text = std::string(1, c);
        advance();
        if (pos_ < src_.size() && src_[pos_] == c) {
          t.text += c;
          advance();
        }
        return t;
      }
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          advance();
          advance();
          t.kind = Tok::kImplies;
          t.text = "->";
          return t;
        }
        break;
      case '"': {
        advance();
        t.kind = Tok::kQuoted;
        while (pos_ < src_.size() && src_[pos_] != '"') {
          if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
          t.text += src_[pos_];
          advance();
        }
        if (pos_ >= src_.size()) {
          throw ParseError(t.line, t.column, {"closing '\"'"},
                           "end of input");
        }
        advance();
        return t;
      }
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::kIdent;
      while (pos_ < src_.size()) {
        const char d = src_[pos_];
        const bool arrow =
            d == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>';
        if (arrow || !(std::isalnum(static_cast<unsigned char>(d)) ||
                       d == '_' || d == '-')) {
          break;
        }
        t.text += d;
        advance();
      }
      return t;
    }
    throw ParseError(line_, col_, {"formula"},
                     "unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_unary_keyword(const Token& t) {
  return t.kind == Tok::kIdent &&
         (t.text == "Y" || t.text == "WY" || t.text == "O" || t.text == "H");
}

bool is_reserved(const std::string& s) {
  return s == "Y" || s == "WY" || s == "O" || s == "H" || s == "S" ||
         s == "true" || s == "false" || s == "start";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    Formula f = implication();
    if (peek().kind != Tok::kEnd) {
      fail({"'&'", "'|'", "'->'", "'S'", "end of input"});
    }
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found =
        t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, std::move(expected), found);
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::kImplies) {
      take();
      return implies(lhs, implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula acc = conjunction();
    while (peek().kind == Tok::kOr) {
      take();
      acc = disj(acc, conjunction());
    }
    return acc;
  }

  Formula conjunction() {
    Formula acc = since_chain();
    while (peek().kind == Tok::kAnd) {
      take();
      acc = conj(acc, since_chain());
    }
    return acc;
  }

  Formula since_chain() {
    Formula lhs = unary();
    if (peek().kind == Tok::kIdent && peek().text == "S") {
      take();
      return since(lhs, since_chain());
    }
    return lhs;
  }

  Formula unary() {
    if (peek().kind == Tok::kNot) {
      take();
      return neg(unary());
    }
    if (is_unary_keyword(peek())) {
      const std::string op = take().text;
      Formula arg = unary();
      if (op == "Y") return yesterday(arg);
      if (op == "WY") return weak_yesterday(arg);
      if (op == "O") return once(arg);
      return historically(arg);
    }
    return primary();
  }

  Formula primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kLParen: {
        take();
        Formula inner = implication();
        if (peek().kind != Tok::kRParen) {
          fail({"')'", "'&'", "'|'", "'->'", "'S'"});
        }
        take();
        return inner;
      }
      case Tok::kQuoted: {
        std::string name = take().text;
        if (name.empty()) {
          throw ParseError(t.line, t.column, {"atom name"}, "empty string");
        }
        return Formula::atom(std::move(name));
      }
      case Tok::kIdent: {
        if (t.text == "true") {
          take();
          return Formula::top();
        }
        if (t.text == "false") {
          take();
          return Formula::bottom();
        }
        if (t.text == "start") {
          take();
          return Formula::start();
        }
        if (is_reserved(t.text)) break;
        std::string name = take().text;
        if (peek().kind == Tok::kLParen && peek().glued) {
          return application(std::move(name));
        }
        return Formula::atom(std::move(name));
      }
      default:
        break;
    }
    fail({"atom", "'('", "'!'", "'Y'", "'WY'", "'O'", "'H'", "'true'",
          "'false'", "'start'"});
  }

  // pred(a,b) is the ground atom "pred a b".
  Formula application(std::string pred) {
    take();  // (
    std::string name = std::move(pred);
    if (peek().kind == Tok::kRParen) {
      take();
      return Formula::atom(std::move(name));
    }
    for (;;) {
      if (peek().kind != Tok::kIdent && peek().kind != Tok::kQuoted) {
        fail({"object name"});
      }
      name += " " + take().text;
      if (peek().kind == Tok::kComma) {
        take();
        continue;
      }
      if (peek().kind == Tok::kRParen) {
        take();
        return Formula::atom(std::move(name));
      }
      fail({"','", "')'"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(int line, int column, std::vector<std::string> expected,
                       const std::string& found)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + describe(expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Formula parse_formula(std::string_view text) {
  return Parser(Lexer(text).run()).parse();
}

}  // namespace pastplan::ppltl
