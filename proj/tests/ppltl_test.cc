#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "pastplan/ppltl/formula.h"
#include "pastplan/ppltl/parser.h"
#include "pastplan/ppltl/progression.h"
#include "pastplan/ppltl/semantics.h"
#include "support/formula_gen.h"

namespace pastplan::ppltl {
namespace {

Formula A(const char* n) { return Formula::atom(n); }

Trace T(std::vector<State> s) { return Trace(std::move(s)); }

std::vector<std::string> texts(const std::vector<Formula>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(f.str());
  return out;
}

// --- parse / format -------------------------------------------------------

TEST(ParseFormula, ConjunctionWithYesterdayOfDisjunction) {
  EXPECT_EQ(parse_formula("a & Y(b | c)"),
            conj(A("a"), yesterday(disj(A("b"), A("c")))));
}

TEST(ParseFormula, TrueConstant) {
  EXPECT_EQ(parse_formula("true").op(), Op::kTrue);
}

TEST(ParseFormula, SinceIsRightAssociative) {
  const Formula f = parse_formula("a S b S c");
  EXPECT_EQ(f, since(A("a"), since(A("b"), A("c"))));
  EXPECT_EQ(parse_formula(format_formula(f)), f);
}

TEST(ParseFormula, Precedence) {
  EXPECT_EQ(parse_formula("a | b & c -> d"),
            implies(disj(A("a"), conj(A("b"), A("c"))), A("d")));
  EXPECT_EQ(parse_formula("!a S b & c"),
            conj(since(neg(A("a")), A("b")), A("c")));
  EXPECT_EQ(parse_formula("a -> b -> c"),
            implies(A("a"), implies(A("b"), A("c"))));
  EXPECT_EQ(parse_formula("a & b & c"), conj(conj(A("a"), A("b")), A("c")));
  EXPECT_EQ(parse_formula("Y O H WY ~a"),
            yesterday(once(historically(weak_yesterday(neg(A("a")))))));
}

TEST(ParseFormula, GroundAtomForms) {
  EXPECT_EQ(parse_formula("\"on b1 b2\"").atom_name(), "on b1 b2");
  EXPECT_EQ(parse_formula("on(b1,b2)").atom_name(), "on b1 b2");
  EXPECT_EQ(parse_formula("handempty()").atom_name(), "handempty");
  EXPECT_EQ(parse_formula("at-robby").atom_name(), "at-robby");
  EXPECT_EQ(parse_formula("at-robby->x"),
            implies(A("at-robby"), A("x")));
  EXPECT_EQ(parse_formula("start").op(), Op::kStart);
  EXPECT_EQ(parse_formula("a && b || c"),
            disj(conj(A("a"), A("b")), A("c")));
}

TEST(ParseFormula, ErrorsCarryLocationAndExpectedTokens) {
  try {
    parse_formula("a &\n  (b | )");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 8);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parse_formula(""), ParseError);
  EXPECT_THROW(parse_formula("(a"), ParseError);
  EXPECT_THROW(parse_formula("a b"), ParseError);
  EXPECT_THROW(parse_formula("\"unterminated"), ParseError);
  EXPECT_THROW(parse_formula("S"), ParseError);
  EXPECT_THROW(parse_formula("a # b"), ParseError);
}

TEST(FormatFormula, CanonicalText) {
  EXPECT_EQ(format_formula(conj(A("a"), yesterday(A("b")))), "(a & (Y b))");
  EXPECT_EQ(format_formula(Formula::top()), "true");
  EXPECT_EQ(format_formula(since(A("a"), A("b"))), "(a S b)");
  EXPECT_EQ(format_formula(A("on b1 b2")), "\"on b1 b2\"");
  EXPECT_EQ(format_formula(A("Y")), "\"Y\"");
}

TEST(FormatFormula, RoundTripOnRandomFormulas) {
  testing::RandomFormulas gen(7, 3);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = gen.formula(5);
    EXPECT_EQ(parse_formula(format_formula(f)), f) << f.str();
  }
}

TEST(Abbreviations, ExpandThenResugarIsIdentityOnCanonicalForms) {
  testing::RandomFormulas gen(11, 2);
  for (int i = 0; i < 2000; ++i) {
    const Formula canonical = resugar(expand(gen.formula(5)));
    EXPECT_EQ(resugar(expand(canonical)), canonical) << canonical.str();
  }
  EXPECT_EQ(resugar(expand(historically(A("a")))), historically(A("a")));
  EXPECT_EQ(resugar(expand(once(A("a")))), once(A("a")));
}

// --- subformulas / sigma --------------------------------------------------

TEST(Subformulas, PostOrderExample) {
  const Formula f = parse_formula("a & Y(b | c)");
  EXPECT_EQ(texts(subformulas(f)),
            (std::vector<std::string>{"a", "b", "c", "(b | c)", "(Y (b | c))",
                                      "(a & (Y (b | c)))"}));
}

TEST(Subformulas, AtomAndOnce) {
  EXPECT_EQ(texts(subformulas(A("a"))), std::vector<std::string>{"a"});
  EXPECT_EQ(texts(subformulas(once(A("a")))),
            (std::vector<std::string>{"true", "a", "(true S a)"}));
}

TEST(Subformulas, ClosedUnderSubformula) {
  testing::RandomFormulas gen(3, 3);
  for (int i = 0; i < 500; ++i) {
    const Formula f = gen.formula(5);
    const auto sub = subformulas(f);
    std::set<std::string> members;
    for (const auto& g : sub) members.insert(g.str());
    EXPECT_EQ(members.size(), sub.size());
    for (const auto& g : sub) {
      for (const auto& c : g.children()) EXPECT_TRUE(members.count(c.str()));
    }
    EXPECT_EQ(sub.back(), expand(f));
    EXPECT_LE(sigma_propositions(f).size(), sub.size());
  }
}

// Independent scan: collect Y arguments and S nodes from the expanded tree.
std::set<std::string> brute_sigma(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.op() == Op::kYesterday) out.insert(g.lhs().str());
    if (g.op() == Op::kSince) out.insert(g.str());
    for (const auto& c : g.children()) walk(c);
  };
  walk(expand(f));
  return out;
}

TEST(SigmaPropositions, Examples) {
  EXPECT_EQ(sigma_propositions(parse_formula("a & Y(b | c)")),
            std::vector<std::string>{"(b | c)"});
  EXPECT_TRUE(sigma_propositions(A("a")).empty());

  const Formula seq = parse_formula("O(on12 & Y O on23)");
  const auto keys = sigma_propositions(seq);
  EXPECT_EQ(keys, (std::vector<std::string>{
                      "(true S on23)",
                      "(true S (on12 & (Y (true S on23))))"}));
  EXPECT_EQ(std::set<std::string>(keys.begin(), keys.end()), brute_sigma(seq));
}

TEST(SigmaPropositions, MatchesBruteForceScan) {
  testing::RandomFormulas gen(5, 3);
  for (int i = 0; i < 500; ++i) {
    const Formula f = gen.formula(5);
    const auto keys = sigma_propositions(f);
    EXPECT_EQ(std::set<std::string>(keys.begin(), keys.end()), brute_sigma(f));
  }
}

// --- pnf ------------------------------------------------------------------

TEST(ToPnf, Examples) {
  const Formula s = since(A("a"), A("b"));
  EXPECT_EQ(to_pnf(s), disj(A("b"), conj(A("a"), yesterday(s))));
  EXPECT_EQ(to_pnf(yesterday(A("a"))), yesterday(A("a")));
  const Formula o = once(A("a"));
  EXPECT_EQ(to_pnf(o), disj(A("a"), yesterday(o)));
}

TEST(ToPnf, HistoricallyHoldsAtFirstInstant) {
  const Formula h = historically(A("a"));
  EXPECT_TRUE(eval_trace(to_pnf(h), T({{"a"}})));
}

bool temporal_only_under_yesterday(const Formula& f) {
  if (f.op() == Op::kYesterday || f.op() == Op::kWeakYesterday ||
      f.op() == Op::kStart) {
    return true;
  }
  if (f.is_temporal()) return false;
  for (const auto& c : f.children()) {
    if (!temporal_only_under_yesterday(c)) return false;
  }
  return true;
}

TEST(ToPnf, ShapeEquivalenceAndSize) {
  testing::RandomFormulas gen(9, 3);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = gen.formula(5);
    const Formula p = to_pnf(f);
    EXPECT_TRUE(temporal_only_under_yesterday(p)) << p.str();
    EXPECT_LE(formula_size(p), 4 * formula_size(f));
    const Trace t = gen.trace(6);
    EXPECT_EQ(eval_trace(p, t), eval_trace(f, t)) << f.str();
  }
}

// --- eval_trace -----------------------------------------------------------

TEST(EvalTrace, Examples) {
  EXPECT_TRUE(eval_trace(A("a"), T({{"a"}})));
  EXPECT_TRUE(eval_trace(yesterday(A("a")), T({{"a"}, {}})));
  EXPECT_FALSE(eval_trace(yesterday(A("a")), T({{"a"}})));
  const Formula s = since(A("a"), A("b"));
  EXPECT_TRUE(eval_trace(s, T({{"b"}, {"a"}, {"a"}})));
  EXPECT_FALSE(eval_trace(s, T({{"b"}, {}, {"a"}})));
}

TEST(EvalTrace, RejectsEmptyTrace) {
  EXPECT_THROW(Trace(std::vector<State>{}), std::invalid_argument);
}

TEST(EvalTrace, AbbreviationLaws) {
  const Formula a = A("a");
  for (const auto& t : testing::all_traces(2, 4)) {
    EXPECT_EQ(eval_trace(once(a), t), eval_trace(since(Formula::top(), a), t));
    EXPECT_EQ(eval_trace(historically(a), t),
              eval_trace(neg(once(neg(a))), t));
    EXPECT_EQ(eval_trace(Formula::start(), t),
              eval_trace(neg(yesterday(Formula::top())), t));
    EXPECT_EQ(eval_trace(weak_yesterday(a), t),
              eval_trace(neg(yesterday(neg(a))), t));
  }
}

// --- sigma calculus -------------------------------------------------------

TEST(InitialSigma, Examples) {
  const SigmaAssignment o = initial_sigma(once(A("a")));
  EXPECT_EQ(o.values(), (std::map<std::string, bool>{{"(true S a)", false}}));
  EXPECT_EQ(initial_sigma(A("a")).size(), 0u);
  EXPECT_EQ(initial_sigma(conj(A("a"), yesterday(A("b")))).values(),
            (std::map<std::string, bool>{{"b", false}}));
}

TEST(Val, Examples) {
  const Formula yb = yesterday(A("b"));
  EXPECT_FALSE(val(yb, initial_sigma(yb), {"b"}));
  SigmaAssignment any;
  any.set("x", true);
  EXPECT_TRUE(val(A("a"), any, {"a"}));
  const Formula o = once(A("a"));
  EXPECT_TRUE(val(o, initial_sigma(o), {"a"}));
}

TEST(Val, MissingKeyIsAnError) {
  EXPECT_THROW(val(yesterday(A("b")), SigmaAssignment{}, {}), MissingSigmaKey);
}

TEST(StepSigma, Examples) {
  const Formula o = once(A("a"));
  // Expected values come from eval_trace on [{a}] and [{a},{}].
  const SigmaAssignment s0 = step_sigma(o, initial_sigma(o), {"a"});
  EXPECT_EQ(s0.at("(true S a)"), eval_trace(o, T({{"a"}})));
  EXPECT_TRUE(s0.at("(true S a)"));
  const SigmaAssignment s1 = step_sigma(o, s0, {});
  EXPECT_EQ(s1.at("(true S a)"), eval_trace(o, T({{"a"}, {}})));
  EXPECT_TRUE(s1.at("(true S a)"));

  const Formula ya = yesterday(A("a"));
  EXPECT_FALSE(step_sigma(ya, initial_sigma(ya), {}).at("a"));
}

TEST(ProgressTrace, Examples) {
  const Formula o = once(A("a"));
  const Trace t = T({{}, {"a"}, {}});
  const auto r = progress_trace(o, t);
  EXPECT_EQ(r.sigma_history.size(), t.size());
  EXPECT_EQ(r.sigma_history.front(), initial_sigma(o));
  EXPECT_EQ(r.verdict, eval_trace(o, t));
  EXPECT_TRUE(r.verdict);
  EXPECT_FALSE(progress_trace(historically(A("a")), T({{"a"}, {}})).verdict);
}

TEST(ProgressTrace, AgreesWithDirectSemanticsOnRandomCases) {
  testing::RandomFormulas gen(2024, 4);
  for (int i = 0; i < 3000; ++i) {
    const Formula f = gen.formula(5);
    const Trace t = gen.trace(8);
    ASSERT_EQ(progress_trace(f, t).verdict, eval_trace(f, t)) << f.str();
  }
}

TEST(ProgressTrace, LengthOneTraceMatchesInitialSigma) {
  testing::RandomFormulas gen(99, 3);
  for (int i = 0; i < 500; ++i) {
    const Formula f = gen.formula(5);
    const State s = gen.state();
    EXPECT_EQ(eval_trace(f, Trace({s})), val(f, initial_sigma(f), s));
  }
}

TEST(ProgressTrace, SigmaHistoryTracksPrefixVerdicts) {
  // σᵢ(⌜ψ⌝) equals τ[0..i] ⊨ ψ for every tracked ψ.
  testing::RandomFormulas gen(17, 3);
  for (int i = 0; i < 300; ++i) {
    const Formula f = gen.formula(4);
    const Trace t = gen.trace(6);
    const auto r = progress_trace(f, t);
    const auto tracked = sigma_formulas(f);
    for (std::size_t k = 1; k < r.sigma_history.size(); ++k) {
      for (const auto& g : tracked) {
        EXPECT_EQ(r.sigma_history[k].at(g.str()), eval_trace(g, t.prefix(k)));
      }
    }
  }
}

}  // namespace
}  // namespace pastplan::ppltl
