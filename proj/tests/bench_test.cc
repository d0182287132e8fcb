#include <gtest/gtest.h>

#include <filesystem>

#include "pastplan/bench/bench.h"
#include "pastplan/compile/compile.h"
#include "pastplan/pddl/grounding.h"
#include "pastplan/pddl/parser.h"
#include "pastplan/ppltl/parser.h"
#include "pastplan/ppltl/progression.h"
#include "pastplan/solve/solve.h"
#include "support/oracles.h"

namespace pastplan::bench {
namespace {

using ppltl::format_formula;
using ppltl::parse_formula;

void expect_goal(const Instance& inst, const std::string& expected) {
  EXPECT_EQ(format_formula(inst.goal), format_formula(parse_formula(expected)))
      << inst.id;
}

TEST(Blocksworld, ThreeBlocks) {
  const auto inst = gen_blocksworld(3, 3, false);
  EXPECT_EQ(inst.id, "blocksworld-det-3-3");
  expect_goal(inst, "O(on(b1,b2) & Y O(on(b2,b3)))");
  EXPECT_EQ(ppltl::sigma_propositions(inst.goal).size(), 2U);
  // The texts are the parsed model.
  const auto d = pddl::parse_domain(inst.domain_text);
  EXPECT_EQ(d, inst.domain);
  EXPECT_EQ(pddl::parse_problem(inst.problem_text, d), inst.problem);
}

TEST(Blocksworld, TwoBlocksNeedsTwoSteps) {
  const auto inst = gen_blocksworld(2, 2, false);
  expect_goal(inst, "O(on(b1,b2))");
  const auto oracle = testing::shortest_satisfying_plan(
      pddl::ground(inst.domain, inst.problem), inst.goal);
  ASSERT_TRUE(oracle.has_value());
  EXPECT_EQ(*oracle, 2U);
}

TEST(Blocksworld, SequenceShorterThanTower) {
  const auto inst = gen_blocksworld(5, 3, false);
  EXPECT_EQ(inst.id, "blocksworld-det-5-3");
  expect_goal(inst, "O(on(b1,b2) & Y O(on(b2,b3)))");
  EXPECT_EQ(inst.problem.objects.size(), 5U);
}

TEST(Blocksworld, NondeterministicStack) {
  const auto inst = gen_blocksworld(3, 3, true);
  EXPECT_EQ(inst.id, "blocksworld-nondet-3-3");
  const auto* stack = inst.domain.find_action("stack");
  ASSERT_NE(stack, nullptr);
  EXPECT_EQ(stack->outcomes.size(), 2U);
  for (const auto& a : inst.domain.actions) {
    if (a.name != "stack") EXPECT_EQ(a.outcomes.size(), 1U) << a.name;
  }
}

TEST(Elevator, Goals) {
  expect_goal(gen_elevator(1), "O(served(p1))");
  const auto two = gen_elevator(2);
  expect_goal(two, "O(served(p1)) & O(served(p2))");
  std::vector<pddl::Atom> dests;
  for (const auto& a : two.problem.init) {
    if (a.predicate == "destin") dests.push_back(a);
  }
  EXPECT_EQ(dests, (std::vector<pddl::Atom>{{"destin", {"p1", "f2"}},
                                            {"destin", {"p2", "f4"}}}));
  EXPECT_EQ(ppltl::sigma_propositions(gen_elevator(3).goal).size(), 3U);
}

TEST(Triangle, Goals) {
  expect_goal(gen_triangle_tireworld(1, 1), "O(vehicle-at(l11))");
  expect_goal(gen_triangle_tireworld(2, 2),
              "O(vehicle-at(l21) & Y O(vehicle-at(l11)))");
  expect_goal(gen_triangle_tireworld(3, 3),
              "O(vehicle-at(l22) & Y O(vehicle-at(l21) & Y O(vehicle-at(l11))))");
  expect_goal(gen_triangle_tireworld(3, 2, {"l33", "l11"}),
              "O(vehicle-at(l11) & Y O(vehicle-at(l33)))");
  EXPECT_EQ(default_visit_order(3),
            (std::vector<std::string>{"l11", "l21", "l22", "l32", "l33"}));
}

TEST(Triangle, RoadsAreBidirectional) {
  const auto inst = gen_triangle_tireworld(3, 2);
  std::set<std::pair<std::string, std::string>> roads;
  for (const auto& a : inst.problem.init) {
    if (a.predicate == "road") roads.insert({a.args[0], a.args[1]});
  }
  EXPECT_FALSE(roads.empty());
  for (const auto& [x, y] : roads) EXPECT_TRUE(roads.count({y, x})) << x << y;
}

TEST(Generate, ParameterErrors) {
  EXPECT_THROW(gen_blocksworld(1, 1, false), BenchError);
  EXPECT_THROW(gen_blocksworld(3, 4, false), BenchError);
  EXPECT_THROW(gen_blocksworld(3, 1, false), BenchError);
  EXPECT_THROW(gen_elevator(0), BenchError);
  EXPECT_THROW(gen_triangle_tireworld(0, 1), BenchError);
  EXPECT_THROW(gen_triangle_tireworld(10, 1), BenchError);
  EXPECT_THROW(gen_triangle_tireworld(2, 2, {"l11", "l99"}), BenchError);
  EXPECT_THROW(generate({Family::kElevator, {1, 2}, {}}), BenchError);
  EXPECT_EQ(generate({Family::kBlocksworldNondet, {3, 2}, {}}).id,
            "blocksworld-nondet-3-2");
  for (auto f : {Family::kBlocksworldDet, Family::kBlocksworldNondet,
                 Family::kElevator, Family::kTriangleTireworld}) {
    EXPECT_EQ(family_from_name(family_name(f)), f);
  }
  EXPECT_FALSE(family_from_name("logistics").has_value());
}

TEST(Generate, GoalSizeIsLinear) {
  for (int n = 2; n <= 12; ++n) {
    EXPECT_EQ(ppltl::subformulas(gen_blocksworld(n, n, false).goal).size(),
              static_cast<std::size_t>(4 * n - 5));
    EXPECT_EQ(ppltl::sigma_propositions(gen_elevator(n).goal).size(),
              static_cast<std::size_t>(n));
  }
}

// The smallest instance of every family is solvable end to end, and the
// classical plan is as short as the oracle says.
TEST(Generate, SmallestInstancesSolve) {
  for (const auto& inst : {gen_blocksworld(2, 2, false), gen_elevator(1),
                           gen_elevator(2)}) {
    const auto c = compile::compile(inst.domain, inst.problem, inst.goal);
    const auto r = solve::solve_classical(pddl::ground(c.domain, c.problem));
    ASSERT_TRUE(r.solved) << inst.id;
    const auto oracle = testing::shortest_satisfying_plan(
        pddl::ground(inst.domain, inst.problem), inst.goal);
    ASSERT_TRUE(oracle.has_value());
    EXPECT_EQ(r.plan.size(), *oracle) << inst.id;
  }
  for (const auto& inst : {gen_blocksworld(2, 2, true),
                           gen_triangle_tireworld(2, 2)}) {
    const auto c = compile::compile(inst.domain, inst.problem, inst.goal);
    EXPECT_TRUE(solve::solve_fond_strong_cyclic(pddl::ground(c.domain, c.problem))
                    .solved)
        << inst.id;
  }
}

TEST(Generate, WritesInstanceFiles) {
  const auto inst = gen_elevator(2);
  const auto dir = std::filesystem::temp_directory_path() / "pastplan_bench_test";
  std::filesystem::remove_all(dir);
  const auto files = write_instance(inst, dir);
  ASSERT_EQ(files.size(), 3U);
  EXPECT_EQ(files[0].filename(), "elevator-2-domain.pddl");
  EXPECT_EQ(files[1].filename(), "elevator-2-problem.pddl");
  EXPECT_EQ(files[2].filename(), "elevator-2.ppltl");
  for (const auto& f : files) EXPECT_TRUE(std::filesystem::exists(f));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace pastplan::bench
