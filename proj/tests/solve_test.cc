#include <gtest/gtest.h>

#include <random>

#include "pastplan/bench/bench.h"
#include "pastplan/compile/compile.h"
#include "pastplan/ppltl/parser.h"
#include "pastplan/solve/solve.h"
#include "support/oracles.h"

namespace pastplan::solve {
namespace {

using ppltl::parse_formula;
using testing::parse;

pddl::GroundedProblem compiled(const pddl::Domain& d, const pddl::Problem& p,
                               const ppltl::Formula& phi) {
  const auto c = compile::compile(d, p, phi);
  return pddl::ground(c.domain, c.problem);
}

pddl::GroundedProblem compiled(const bench::Instance& inst) {
  return compiled(inst.domain, inst.problem, inst.goal);
}

std::vector<std::string> names(const pddl::GroundedProblem& gp, const Plan& p) {
  std::vector<std::string> out;
  for (int a : p) out.push_back(action_text(gp, a));
  return out;
}

TEST(Classical, OneStepGoal) {
  const auto [d, p] = parse(testing::kRetryDomain, testing::kRetryProblem);
  const auto det = pddl::parse_domain(R"((define (domain reach) (:predicates (g))
    (:action achieve :parameters () :effect (g))))");
  const auto prob = pddl::parse_problem(
      "(define (problem r) (:domain reach) (:init) (:goal (g)))", det);
  const auto r = solve_classical(compiled(det, prob, parse_formula("O g")));
  ASSERT_TRUE(r.solved);
  EXPECT_EQ(r.plan.size(), 1U);
  // Nondeterministic actions are rejected.
  EXPECT_THROW(solve_classical(pddl::ground(d, p)), std::invalid_argument);
}

TEST(Classical, ContradictoryGoalIsUnsolvable) {
  const auto inst = bench::gen_blocksworld(2, 2, false);
  const auto phi = parse_formula("O(holding(b1)) & H(!holding(b1))");
  const auto gp = compiled(inst.domain, inst.problem, phi);
  EXPECT_FALSE(solve_classical(gp).solved);
  EXPECT_FALSE(solve_classical(gp, Heuristic::kHadd).solved);
  // No reachable compiled state satisfies the goal.
  for (const auto& s : testing::reachable_states(gp)) {
    ASSERT_FALSE(gp.goal->holds(s));
  }
  EXPECT_FALSE(testing::shortest_satisfying_plan(
                   pddl::ground(inst.domain, inst.problem), phi)
                   .has_value());
}

TEST(Classical, BlocksworldSequenceGoal) {
  const auto inst = bench::gen_blocksworld(4, 3, false);
  const auto gp = compiled(inst);
  const auto r = solve_classical(gp);
  ASSERT_TRUE(r.solved);
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(names(gp, r.plan),
            (std::vector<std::string>{"(pick-up b2)", "(stack b2 b3)",
                                      "(pick-up b1)", "(stack b1 b2)"}));
  const auto oracle = testing::shortest_satisfying_plan(
      pddl::ground(inst.domain, inst.problem), inst.goal);
  ASSERT_TRUE(oracle.has_value());
  EXPECT_EQ(r.plan.size(), *oracle);
}

TEST(Classical, HaddFindsValidPlans) {
  for (int n = 2; n <= 4; ++n) {
    const auto inst = bench::gen_blocksworld(n, n, false);
    const auto gp = compiled(inst);
    const auto blind = solve_classical(gp);
    const auto hadd = solve_classical(gp, Heuristic::kHadd);
    ASSERT_TRUE(hadd.solved);
    EXPECT_FALSE(hadd.optimal);
    EXPECT_GE(hadd.plan.size(), blind.plan.size());
    pddl::State s = gp.init;
    for (int a : hadd.plan) s = pddl::apply(gp, s, a).at(0);
    EXPECT_TRUE(gp.goal->holds(s));
  }
}

TEST(Classical, ResultsAreReproducible) {
  const auto gp = compiled(bench::gen_blocksworld(4, 3, false));
  const auto a = solve_classical(gp);
  const auto b = solve_classical(gp);
  EXPECT_EQ(a.plan, b.plan);
  EXPECT_EQ(a.stats.expanded, b.stats.expanded);
  EXPECT_EQ(a.stats.generated, b.stats.generated);
}

TEST(Classical, NodeCap) {
  const auto gp = compiled(bench::gen_blocksworld(4, 4, false));
  Limits tight;
  tight.node_cap = 5;
  EXPECT_THROW(solve_classical(gp, Heuristic::kBlind, tight), ResourceLimit);
  Limits no_time;
  no_time.timeout_s = 0.0;
  EXPECT_THROW(solve_classical(gp, Heuristic::kBlind, no_time), ResourceLimit);
}

TEST(Classical, PlanTextRoundTrip) {
  const auto gp = compiled(bench::gen_blocksworld(4, 3, false));
  const auto r = solve_classical(gp);
  const std::string text = format_plan(gp, r.plan);
  EXPECT_EQ(text, "(pick-up b2)\n(stack b2 b3)\n(pick-up b1)\n(stack b1 b2)\n");
  EXPECT_EQ(parse_plan(gp, text), r.plan);
  EXPECT_EQ(parse_plan(gp, "; comment\n( PICK-UP  b2 )\n\n"), Plan{r.plan[0]});
  EXPECT_THROW(parse_plan(gp, "(fly b1)"), std::invalid_argument);
}

TEST(Fond, DeterministicStrongPolicyFollowsAPlan) {
  const auto gp = compiled(bench::gen_blocksworld(3, 3, false));
  const auto plan = solve_classical(gp);
  const auto strong = solve_fond_strong(gp);
  ASSERT_TRUE(strong.solved);
  EXPECT_EQ(strong.policy.size(), plan.plan.size());
  pddl::State s = gp.init;
  std::size_t steps = 0;
  while (!gp.goal->holds(s)) {
    const int a = strong.policy.at(s);
    ASSERT_GE(a, 0);
    s = pddl::apply(gp, s, a).at(0);
    ASSERT_LE(++steps, strong.policy.size());
  }
  EXPECT_EQ(steps, plan.plan.size());
}

TEST(Fond, RetryUntilSuccess) {
  const auto [d, p] = parse(testing::kRetryDomain, testing::kRetryProblem);
  const auto gp = compiled(d, p, parse_formula("O g"));
  EXPECT_FALSE(solve_fond_strong(gp).solved);
  const auto r = solve_fond_strong_cyclic(gp);
  ASSERT_TRUE(r.solved);
  ASSERT_EQ(r.policy.size(), 1U);
  EXPECT_EQ(r.policy.at(gp.init), gp.action("retry"));
}

TEST(Fond, RecoveryIsCyclicOnly) {
  const auto [d, p] = parse(testing::kRecoverDomain, testing::kRecoverProblem);
  const auto gp = pddl::ground(d, p);
  EXPECT_FALSE(solve_fond_strong(gp).solved);
  const auto r = solve_fond_strong_cyclic(gp);
  ASSERT_TRUE(r.solved);
  EXPECT_EQ(r.policy.size(), 2U);
  const auto oracle = testing::brute_force_fond(gp);
  EXPECT_FALSE(oracle.strong);
  EXPECT_TRUE(oracle.strong_cyclic);
}

TEST(Fond, DeadEndIsUnsolvable) {
  const auto [d, p] = parse(testing::kDeadEndDomain, testing::kDeadEndProblem);
  const auto gp = pddl::ground(d, p);
  EXPECT_FALSE(solve_fond_strong(gp).solved);
  EXPECT_FALSE(solve_fond_strong_cyclic(gp).solved);
}

TEST(Fond, NondeterministicBlocksworld) {
  const auto gp = compiled(bench::gen_blocksworld(3, 3, true));
  EXPECT_FALSE(solve_fond_strong(gp).solved);  // every stack may fail
  const auto r = solve_fond_strong_cyclic(gp);
  ASSERT_TRUE(r.solved);
  // Closed: every outcome of every chosen action is a goal or has an entry.
  for (const auto& [s, a] : r.policy.actions) {
    ASSERT_TRUE(gp.actions[a].precondition.holds(s));
    for (const auto& t : pddl::apply(gp, s, a)) {
      EXPECT_TRUE(gp.goal->holds(t) || r.policy.at(t) >= 0);
    }
  }
}

TEST(Fond, PolicyJsonRoundTrip) {
  const auto gp = compiled(bench::gen_blocksworld(3, 3, true));
  const auto r = solve_fond_strong_cyclic(gp);
  const std::string json = policy_json(gp, r.policy);
  const Policy back = parse_policy_json(gp, json);
  EXPECT_EQ(back.actions, r.policy.actions);
  EXPECT_EQ(policy_json(gp, back), json);
}

// Random tiny FOND problems: strong solutions are strong-cyclic ones, and
// both solvers agree with a brute-force search over all policies.
TEST(Fond, AgreesWithBruteForceOnRandomProblems) {
  std::mt19937 rng(2024);
  const std::vector<std::string> props{"p", "q", "r"};
  auto literal = [&](const std::string& x) {
    return rng() % 2 ? "(" + x + ")" : "(not (" + x + "))";
  };
  int strong = 0, cyclic = 0;
  for (int trial = 0; trial < 150; ++trial) {
    std::string d = "(define (domain rnd) (:requirements :strips :non-deterministic "
                    ":negative-preconditions) (:predicates (p) (q) (r))";
    for (int a = 0; a < 3; ++a) {
      d += " (:action a" + std::to_string(a) + " :parameters () :precondition " +
           literal(props[rng() % 3]) + " :effect (oneof";
      const int outcomes = 1 + static_cast<int>(rng() % 2);
      for (int o = 0; o < outcomes; ++o) {
        d += " (and " + literal(props[rng() % 3]) + ")";
      }
      d += "))";
    }
    d += ")";
    const std::string p = "(define (problem x) (:domain rnd) (:init) (:goal (and " +
                          literal("p") + " " + literal("q") + " " + literal("r") +
                          ")))";
    const auto parsed = parse(d.c_str(), p.c_str());
    const auto gp = pddl::ground(parsed.domain, parsed.problem);
    const auto oracle = testing::brute_force_fond(gp);
    const bool s = solve_fond_strong(gp).solved;
    const bool c = solve_fond_strong_cyclic(gp).solved;
    ASSERT_EQ(s, oracle.strong) << d << "\n" << p;
    ASSERT_EQ(c, oracle.strong_cyclic) << d << "\n" << p;
    ASSERT_TRUE(!s || c);
    strong += s;
    cyclic += c;
  }
  // The sample exercises all three outcomes.
  EXPECT_GT(strong, 0);
  EXPECT_GT(cyclic, strong);
  EXPECT_LT(cyclic, 150);
}

TEST(Fond, RequiresGoal) {
  const auto d = pddl::parse_domain(testing::kRetryDomain);
  const auto p = pddl::parse_problem("(define (problem x) (:domain retry) (:init))", d);
  EXPECT_THROW(solve_fond_strong(pddl::ground(d, p)), std::invalid_argument);
}

}  // namespace
}  // namespace pastplan::solve
