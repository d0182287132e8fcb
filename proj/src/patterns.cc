#include "pastplan/patterns.h"

#include <array>
#include <cctype>
#include <charconv>
#include <utility>

#include "pastplan/ppltl/parser.h"

namespace pastplan::patterns {

using ppltl::Formula;
using ppltl::Op;
using ppltl::State;
using ppltl::Trace;

namespace {

struct Row {
  PatternName name;
  std::string_view keyword;
  int formulas;
  int bounds;
};

constexpr std::array<Row, 22> kRows{{
    {PatternName::kAtEnd, "at-end", 1, 0},
    {PatternName::kAlways, "always", 1, 0},
    {PatternName::kSometime, "sometime", 1, 0},
    {PatternName::kSometimeAfter, "sometime-after", 2, 0},
    {PatternName::kSometimeBefore, "sometime-before", 2, 0},
    {PatternName::kAtMostOnce, "at-most-once", 1, 0},
    {PatternName::kHoldDuring, "hold-during", 1, 2},
    {PatternName::kHoldAfter, "hold-after", 1, 1},
    {PatternName::kInit, "init", 1, 0},
    {PatternName::kExistence, "existence", 1, 0},
    {PatternName::kAbsence, "absence", 1, 0},
    {PatternName::kRespondedExistence, "responded-existence", 2, 0},
    {PatternName::kResponse, "response", 2, 0},
    {PatternName::kPrecedence, "precedence", 2, 0},
    {PatternName::kSuccession, "succession", 2, 0},
    {PatternName::kChainPrecedence, "chain-precedence", 2, 0},
    {PatternName::kChainSuccession, "chain-succession", 2, 0},
    {PatternName::kNotCoExistence, "not-co-existence", 2, 0},
    {PatternName::kNotSuccession, "not-succession", 2, 0},
    {PatternName::kNotChainSuccession, "not-chain-succession", 2, 0},
    {PatternName::kChoice, "choice", 2, 0},
    {PatternName::kExclusiveChoice, "exclusive-choice", 2, 0},
}};

const Row& row(PatternName name) {
  for (const auto& r : kRows) {
    if (r.name == name) return r;
  }
  throw PatternError("unknown pattern");
}

bool propositional(const Formula& f) {
  if (f.is_temporal()) return false;
  for (const auto& c : f.children()) {
    if (!propositional(c)) return false;
  }
  return true;
}

// Propositional truth in one state.
bool holds(const Formula& f, const State& s) {
  switch (f.op()) {
    case Op::kAtom: return s.count(f.atom_name()) != 0;
    case Op::kTrue: return true;
    case Op::kFalse: return false;
    case Op::kNot: return !holds(f.lhs(), s);
    case Op::kAnd: return holds(f.lhs(), s) && holds(f.rhs(), s);
    case Op::kOr: return holds(f.lhs(), s) || holds(f.rhs(), s);
    case Op::kImplies: return !holds(f.lhs(), s) || holds(f.rhs(), s);
    default: throw PatternError("pattern argument is not propositional");
  }
}

Formula response_formula(const Formula& a, const Formula& b) {
  using namespace ppltl;
  return neg(since(neg(b), conj(a, neg(b))));
}

Formula precedence_formula(const Formula& a, const Formula& b) {
  using namespace ppltl;
  return disj(once(conj(a, historically(disj(a, neg(b))))),
              historically(neg(b)));
}

}  // namespace

const std::vector<PatternName>& all_patterns() {
  static const std::vector<PatternName> names = [] {
    std::vector<PatternName> v;
    for (const auto& r : kRows) v.push_back(r.name);
    return v;
  }();
  return names;
}

std::string_view pattern_keyword(PatternName name) { return row(name).keyword; }

std::optional<PatternName> pattern_from_keyword(std::string_view keyword) {
  for (const auto& r : kRows) {
    if (r.keyword == keyword) return r.name;
  }
  return std::nullopt;
}

int formula_arity(PatternName name) { return row(name).formulas; }
int bound_arity(PatternName name) { return row(name).bounds; }

void validate(const PatternSpec& spec) {
  const Row& r = row(spec.name);
  const std::string kw(r.keyword);
  if (static_cast<int>(spec.args.size()) != r.formulas) {
    throw PatternError(kw + " takes " + std::to_string(r.formulas) +
                       " formula argument(s), got " +
                       std::to_string(spec.args.size()));
  }
  if (static_cast<int>(spec.bounds.size()) != r.bounds) {
    throw PatternError(kw + " takes " + std::to_string(r.bounds) +
                       " bound(s), got " + std::to_string(spec.bounds.size()));
  }
  for (int b : spec.bounds) {
    if (b < 0) throw PatternError(kw + ": bounds must be nonnegative");
  }
  if (spec.name == PatternName::kHoldDuring) {
    if (spec.bounds[0] > spec.bounds[1]) {
      throw PatternError("hold-during: n1 must not exceed n2");
    }
    if (spec.bounds[1] > kMaxBound) {
      throw PatternError("hold-during: n2 exceeds " +
                         std::to_string(kMaxBound));
    }
  }
  if (spec.name == PatternName::kHoldAfter && spec.bounds[0] + 1 > kMaxBound) {
    throw PatternError("hold-after: n+1 exceeds " + std::to_string(kMaxBound));
  }
  for (const auto& a : spec.args) {
    if (!propositional(a)) {
      throw PatternError(kw + ": argument " + a.str() +
                         " is not a propositional formula");
    }
  }
}

Formula build_pattern(const PatternSpec& spec) {
  using namespace ppltl;
  validate(spec);
  const auto& x = spec.args;
  switch (spec.name) {
    case PatternName::kAtEnd:
      return x[0];
    case PatternName::kAlways:
      return historically(x[0]);
    case PatternName::kSometime:
      return once(x[0]);
    case PatternName::kSometimeAfter:
      return response_formula(x[0], x[1]);
    case PatternName::kSometimeBefore: {
      const Formula& a = x[0];
      const Formula& b = x[1];
      return historically(implies(once(conj(a, historically(disj(a, neg(b))))),
                                  yesterday(b)));
    }
    case PatternName::kAtMostOnce:
      return historically(
          implies(x[0], weak_yesterday(historically(neg(x[0])))));
    case PatternName::kHoldDuring: {
      const int n1 = spec.bounds[0];
      const int n2 = spec.bounds[1];
      std::vector<Formula> ends;
      for (int i = 0; i <= n1; ++i) {
        ends.push_back(conj(x[0], yesterday_n(Formula::start(), i)));
      }
      std::vector<Formula> spans;
      for (int i = n1 + 1; i <= n2; ++i) {
        spans.push_back(historically(
            disj(x[0], weak_yesterday_n(yesterday(Formula::top()), i))));
      }
      return disj(disj_all(ends), conj_all(spans));
    }
    case PatternName::kHoldAfter: {
      std::vector<Formula> ends;
      for (int i = 0; i <= spec.bounds[0] + 1; ++i) {
        ends.push_back(conj(x[0], yesterday_n(Formula::start(), i)));
      }
      return disj_all(ends);
    }
    case PatternName::kInit:
      return once(conj(x[0], neg(yesterday(Formula::top()))));
    case PatternName::kExistence:
      return once(x[0]);
    case PatternName::kAbsence:
      return neg(once(x[0]));
    case PatternName::kRespondedExistence:
      return implies(once(x[0]), once(x[1]));
    case PatternName::kResponse:
      return response_formula(x[0], x[1]);
    case PatternName::kPrecedence:
      return precedence_formula(x[0], x[1]);
    case PatternName::kSuccession:
      return conj(response_formula(x[0], x[1]),
                  precedence_formula(x[0], x[1]));
    case PatternName::kChainPrecedence:
      return historically(implies(x[1], yesterday(x[0])));
    case PatternName::kChainSuccession:
      return conj(conj(historically(implies(yesterday(x[0]), x[1])),
                       neg(x[0])),
                  historically(implies(yesterday(neg(x[0])), neg(x[1]))));
    case PatternName::kNotCoExistence:
      return implies(once(x[0]), neg(once(x[1])));
    case PatternName::kNotSuccession:
      return historically(implies(x[1], neg(once(x[0]))));
    case PatternName::kNotChainSuccession:
      return historically(implies(x[1], neg(yesterday(x[0]))));
    case PatternName::kChoice:
      return disj(once(x[0]), once(x[1]));
    case PatternName::kExclusiveChoice:
      return conj(disj(once(x[0]), once(x[1])),
                  neg(conj(once(x[0]), once(x[1]))));
  }
  throw PatternError("unknown pattern");
}

bool oracle_check(const PatternSpec& spec, const Trace& t) {
  validate(spec);
  const std::size_t n = t.size();
  const std::size_t last = n - 1;
  auto a = [&](std::size_t i) { return holds(spec.args[0], t[i]); };
  auto b = [&](std::size_t i) { return holds(spec.args[1], t[i]); };
  auto exists = [&](auto&& pred, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      if (pred(i)) return true;
    }
    return false;
  };
  auto ever_a = [&] { return exists(a, 0, n); };
  auto ever_b = [&] { return exists(b, 0, n); };
  // Every a is matched by a b at the same or a later position.
  auto response = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      if (a(i) && !exists(b, i, n)) return false;
    }
    return true;
  };
  // (¬b U a) ∨ G¬b
  auto precedence = [&] {
    for (std::size_t k = 0; k < n; ++k) {
      if (a(k)) return true;
      if (b(k)) return false;
    }
    return true;
  };

  switch (spec.name) {
    case PatternName::kAtEnd:
      return a(last);
    case PatternName::kAlways:
      for (std::size_t i = 0; i < n; ++i) {
        if (!a(i)) return false;
      }
      return true;
    case PatternName::kSometime:
    case PatternName::kExistence:
      return ever_a();
    case PatternName::kSometimeAfter:
    case PatternName::kResponse:
      return response();
    case PatternName::kSometimeBefore:
      // Each a needs a b strictly earlier.
      for (std::size_t k = 0; k < n; ++k) {
        if (a(k) && !exists(b, 0, k)) return false;
      }
      return true;
    case PatternName::kAtMostOnce: {
      int count = 0;
      for (std::size_t i = 0; i < n; ++i) count += a(i) ? 1 : 0;
      return count <= 1;
    }
    case PatternName::kHoldDuring: {
      const auto n1 = static_cast<std::size_t>(spec.bounds[0]);
      const auto n2 = static_cast<std::size_t>(spec.bounds[1]);
      // Trace ends within the first n1 steps with θ at the end, or θ holds
      // at every existing position in (n1, n2].
      if (last <= n1 && a(last)) return true;
      for (std::size_t i = n1 + 1; i <= n2 && i <= last; ++i) {
        if (!a(i)) return false;
      }
      return true;
    }
    case PatternName::kHoldAfter:
      return last <= static_cast<std::size_t>(spec.bounds[0]) + 1 && a(last);
    case PatternName::kInit:
      return a(0);
    case PatternName::kAbsence:
      return !ever_a();
    case PatternName::kRespondedExistence:
      return !ever_a() || ever_b();
    case PatternName::kPrecedence:
      return precedence();
    case PatternName::kSuccession:
      return response() && precedence();
    case PatternName::kChainPrecedence:
      for (std::size_t i = 0; i < n; ++i) {
        if (b(i) && (i == 0 || !a(i - 1))) return false;
      }
      return true;
    case PatternName::kChainSuccession:
      // a at i iff b at i+1
      for (std::size_t i = 0; i < n; ++i) {
        const bool next_b = i + 1 < n && b(i + 1);
        if (a(i) != next_b) return false;
      }
      return true;
    case PatternName::kNotCoExistence:
      return !(ever_a() && ever_b());
    case PatternName::kNotSuccession:
      for (std::size_t i = 0; i < n; ++i) {
        if (a(i) && exists(b, i, n)) return false;
      }
      return true;
    case PatternName::kNotChainSuccession:
      for (std::size_t i = 0; i + 1 < n; ++i) {
        if (a(i) && b(i + 1)) return false;
      }
      return true;
    case PatternName::kChoice:
      return ever_a() || ever_b();
    case PatternName::kExclusiveChoice:
      return ever_a() != ever_b();
  }
  throw PatternError("unknown pattern");
}

PatternSpec parse_pattern(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
      s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
      s.remove_suffix(1);
    }
    return s;
  };
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw PatternError("pattern must look like name(arg,...): " +
                       std::string(text));
  }
  const std::string_view keyword = trim(text.substr(0, open));
  const auto name = pattern_from_keyword(keyword);
  if (!name) throw PatternError("unknown pattern " + std::string(keyword));

  // Split at top-level commas; atoms like on(b1,b2) keep theirs.
  std::vector<std::string_view> parts;
  const std::string_view body = text.substr(open + 1, text.size() - open - 2);
  int depth = 0;
  bool quoted = false;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(trim(body.substr(begin, i - begin)));
      begin = i + 1;
    }
  }
  if (!trim(body).empty()) parts.push_back(trim(body.substr(begin)));

  PatternSpec spec{*name, {}, {}};
  const auto nb = static_cast<std::size_t>(bound_arity(*name));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i < nb) {
      int v = 0;
      const auto [ptr, ec] =
          std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), v);
      if (ec != std::errc() || ptr != parts[i].data() + parts[i].size()) {
        throw PatternError("expected an integer bound, got " +
                           std::string(parts[i]));
      }
      spec.bounds.push_back(v);
    } else {
      spec.args.push_back(ppltl::parse_formula(parts[i]));
    }
  }
  validate(spec);
  return spec;
}

}  // namespace pastplan::patterns
