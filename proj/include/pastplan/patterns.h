#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pastplan/ppltl/formula.h"
#include "pastplan/ppltl/semantics.h"

namespace pastplan::patterns {

enum class PatternName {
  // PDDL3 modal operators
  kAtEnd,
  kAlways,
  kSometime,
  kSometimeAfter,
  kSometimeBefore,
  kAtMostOnce,
  kHoldDuring,
  kHoldAfter,
  // DECLARE templates
  kInit,
  kExistence,
  kAbsence,
  kRespondedExistence,
  kResponse,
  kPrecedence,
  kSuccession,
  kChainPrecedence,
  kChainSuccession,
  kNotCoExistence,
  kNotSuccession,
  kNotChainSuccession,
  kChoice,
  kExclusiveChoice,
};

/// Largest Y/WY chain length a bounded pattern may expand to.
inline constexpr int kMaxBound = 32;

class PatternError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PatternSpec {
  PatternName name;
  std::vector<ppltl::Formula> args;
  std::vector<int> bounds;  // n for hold-after, n1 n2 for hold-during
};

/// All pattern names, in declaration order.
const std::vector<PatternName>& all_patterns();

std::string_view pattern_keyword(PatternName name);
std::optional<PatternName> pattern_from_keyword(std::string_view keyword);

/// Formula arguments and integer bounds the named pattern takes.
int formula_arity(PatternName name);
int bound_arity(PatternName name);

/// Throws PatternError on arity or bound violations, and when a PDDL3
/// argument is not propositional.
void validate(const PatternSpec& spec);

/// The PPLTL encoding of the pattern.
ppltl::Formula build_pattern(const PatternSpec& spec);

/// Truth of the pattern on `t`, computed by quantifying over trace positions
/// (never through formula evaluation of temporal operators; the arguments
/// themselves are propositional and are evaluated state by state).
bool oracle_check(const PatternSpec& spec, const ppltl::Trace& t);

/// Parses `name(arg,...)`, e.g. `response(a,b)` or `hold-during(1,3,p)`.
/// Bounds come first, then formula arguments.
PatternSpec parse_pattern(std::string_view text);

}  // namespace pastplan::patterns
