#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "pastplan/pddl/model.h"

namespace pastplan::pddl {

/// Syntax, type or arity error in PDDL text. Line and column are 1-based;
/// 0 when the error has no single source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text, const Domain& domain);

/// Checks a problem against its domain: declared objects, well-typed init
/// atoms and goal. parse_problem calls this; it is exposed for problems
/// built in code.
void validate_problem(const Problem& problem, const Domain& domain);

}  // namespace pastplan::pddl
