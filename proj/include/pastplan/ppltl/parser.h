#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pastplan/ppltl/formula.h"

namespace pastplan::ppltl {

/// Syntax error in formula text. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::vector<std::string> expected,
             const std::string& found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

/// Parses formula text.
///
/// Precedence, tightest first: unary (`!`/`~`, `Y`, `WY`, `O`, `H`), `S`,
/// `&`, `|`, `->`. `S` and `->` associate to the right, `&` and `|` to the
/// left. Atoms are bare identifiers, double-quoted ground atoms such as
/// `"on b1 b2"`, or the application form `on(b1,b2)`, which denotes the same
/// atom as `"on b1 b2"`.
Formula parse_formula(std::string_view text);

}  // namespace pastplan::ppltl
