#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pastplan/bench/bench.h"
#include "pastplan/compile/compile.h"
#include "pastplan/pddl/grounding.h"
#include "pastplan/pddl/parser.h"
#include "pastplan/pddl/printer.h"
#include "pastplan/ppltl/parser.h"
#include "pastplan/solve/solve.h"
#include "support/formula_gen.h"

namespace pastplan::compile {
namespace {

using pddl::Condition;
using ppltl::Formula;
using ppltl::parse_formula;

constexpr const char* kReach = R"(
(define (domain reach) (:requirements :strips)
  (:predicates (g))
  (:action achieve :parameters () :precondition (and) :effect (g)))
)";
constexpr const char* kReachProblem =
    "(define (problem r) (:domain reach) (:init) (:goal (g)))";

struct Fixture {
  pddl::Domain d;
  pddl::Problem p;
};

Fixture reach() {
  Fixture f{pddl::parse_domain(kReach), {}};
  f.p = pddl::parse_problem(kReachProblem, f.d);
  return f;
}

Condition atom(const std::string& name) {
  return Condition::of(pddl::Atom{name, {}});
}

TEST(Compile, OnceGoalOnOneActionDomain) {
  const auto [d, p] = reach();
  const CompiledProblem c = compile(d, p, parse_formula("O g"));
  EXPECT_EQ(c.domain.predicates.size(), d.predicates.size() + 1);
  EXPECT_EQ(c.domain.predicates.back().name, "sig-2");
  ASSERT_EQ(c.domain.derived.size(), 3U);
  EXPECT_EQ(c.domain.derived[0].head.name, "val-0");
  EXPECT_TRUE(c.domain.derived[0].body.is_truth());
  EXPECT_EQ(c.domain.derived[1].body, atom("g"));
  EXPECT_EQ(c.domain.derived[2].body,
            Condition::any({atom("val-1"), atom("sig-2")}));
  EXPECT_EQ(c.problem.goal, atom("val-2"));
  EXPECT_EQ(c.problem.init, p.init);

  const auto& items = c.domain.actions[0].outcomes[0].items;
  ASSERT_EQ(items.size(), 3U);
  EXPECT_EQ(items[1].condition, atom("val-2"));
  EXPECT_EQ(items[1].literals, (std::vector<pddl::Literal>{{{"sig-2", {}}, true}}));
  EXPECT_EQ(items[2].condition, Condition::negation(atom("val-2")));
  EXPECT_EQ(items[2].literals, (std::vector<pddl::Literal>{{{"sig-2", {}}, false}}));

  // The printed output is valid input again.
  const auto d2 = pddl::parse_domain(pddl::print_domain(c.domain));
  EXPECT_EQ(d2, c.domain);
  EXPECT_EQ(pddl::parse_problem(pddl::print_problem(c.problem), d2), c.problem);

  const auto gp = pddl::ground(c.domain, c.problem);
  const auto r = solve::solve_classical(gp);
  ASSERT_TRUE(r.solved);
  EXPECT_EQ(r.plan.size(), 1U);
}

TEST(Compile, BareAtomGoal) {
  const auto [d, p] = reach();
  const CompiledProblem c = compile(d, p, parse_formula("g"));
  EXPECT_EQ(c.domain.predicates.size(), d.predicates.size());
  ASSERT_EQ(c.domain.derived.size(), 1U);
  EXPECT_EQ(c.domain.derived[0].body, atom("g"));
  EXPECT_EQ(c.problem.goal, atom("val-0"));
  EXPECT_EQ(c.domain.actions[0].outcomes, d.actions[0].outcomes);

  const auto original = solve::solve_classical(pddl::ground(d, p));
  const auto compiled = solve::solve_classical(pddl::ground(c.domain, c.problem));
  EXPECT_EQ(original.plan, compiled.plan);
}

TEST(Compile, BlocksworldThreeCounts) {
  const auto inst = bench::gen_blocksworld(3, 3, false);
  const CompiledProblem c = compile(inst.domain, inst.problem, inst.goal);
  EXPECT_EQ(c.domain.derived.size(), inst.domain.derived.size() + 7);
  EXPECT_EQ(c.domain.predicates.size(), inst.domain.predicates.size() + 2);
  EXPECT_EQ(c.domain.actions.size(), inst.domain.actions.size());
  // Objects named by the goal moved to the domain.
  EXPECT_EQ(c.domain.constants.size(), 3U);
  EXPECT_TRUE(c.problem.objects.empty());
}

TEST(Compile, MissingAtomIsReported) {
  const auto [d, p] = reach();
  try {
    compile(d, p, parse_formula("O(h)"));
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_NE(std::string(e.what()).find("'h'"), std::string::npos);
  }
  const auto inst = bench::gen_blocksworld(2, 2, false);
  EXPECT_THROW(compile(inst.domain, inst.problem, parse_formula("on(b1,b7)")),
               CompileError);
  EXPECT_THROW(compile(inst.domain, inst.problem, parse_formula("on(b1)")),
               CompileError);
}

TEST(Compile, NameCollisionIsReported) {
  auto d = pddl::parse_domain(R"((define (domain x) (:predicates (g) (val-0))
    (:action a :parameters () :effect (g))))");
  auto p = pddl::parse_problem("(define (problem y) (:domain x) (:init))", d);
  EXPECT_THROW(compile(d, p, parse_formula("g")), CompileError);
}

TEST(Compile, ManglingMapIsABijection) {
  const auto inst = bench::gen_blocksworld(4, 4, false);
  const CompiledProblem c = compile(inst.domain, inst.problem, inst.goal);
  const auto json = nlohmann::json::parse(c.mangling.to_json());
  std::set<std::string> ids, vals, sigmas;
  for (const auto& e : json) {
    EXPECT_TRUE(ids.insert(e["id"].get<std::string>()).second);
    auto& bucket = e["kind"] == "val" ? vals : sigmas;
    EXPECT_TRUE(bucket.insert(e["formula"].get<std::string>()).second);
    const auto& back = c.mangling.entry(e["id"].get<std::string>());
    EXPECT_EQ(back.formula, e["formula"].get<std::string>());
  }
  EXPECT_EQ(vals.size(), ppltl::subformulas(inst.goal).size());
  EXPECT_EQ(sigmas.size(), ppltl::sigma_propositions(inst.goal).size());
}

TEST(FoldConstants, Examples) {
  auto ax = [](std::string head, Condition body) {
    return pddl::DerivedPredicate{{std::move(head), {}}, std::move(body)};
  };
  const Condition x = atom("x");
  auto folded = fold_constants({ax("t", Condition::truth()),
                                ax("f", Condition::negation(atom("t"))),
                                ax("a", Condition::all({atom("t"), x})),
                                ax("b", Condition::negation(Condition::negation(x))),
                                ax("c", Condition::any({atom("f"), x}))});
  ASSERT_EQ(folded.size(), 5U);
  EXPECT_TRUE(folded[1].body.is_falsity());
  EXPECT_EQ(folded[2].body, x);
  EXPECT_EQ(folded[3].body, x);
  EXPECT_EQ(folded[4].body, x);
}

TEST(Compile, SizesAreLinearInSequenceLength) {
  for (int n = 2; n <= 20; ++n) {
    const auto inst = bench::gen_blocksworld(n, n, false);
    const auto start = std::chrono::steady_clock::now();
    const CompiledProblem c = compile(inst.domain, inst.problem, inst.goal);
    const std::chrono::duration<double> spent =
        std::chrono::steady_clock::now() - start;
    const auto sigma = ppltl::sigma_propositions(inst.goal).size();
    const auto subs = ppltl::subformulas(inst.goal).size();
    EXPECT_EQ(c.domain.predicates.size() - inst.domain.predicates.size(), sigma);
    EXPECT_EQ(c.domain.derived.size() - inst.domain.derived.size(), subs);
    // Each further block adds one Y argument and a conjunction, Y, Once
    // and atom to the set of subformulas.
    EXPECT_EQ(sigma, static_cast<std::size_t>(n - 1));
    EXPECT_EQ(subs, static_cast<std::size_t>(4 * n - 5));
    EXPECT_LT(spent.count(), 1.0);
  }
}

TEST(Compile, WritesThreeFiles) {
  const auto [d, p] = reach();
  const CompiledProblem c = compile(d, p, parse_formula("O g"));
  const auto dir = std::filesystem::temp_directory_path() / "pastplan_compile_test";
  std::filesystem::remove_all(dir);
  const auto files = write_outputs(c, dir, "r");
  ASSERT_EQ(files.size(), 3U);
  for (const auto& f : files) EXPECT_TRUE(std::filesystem::exists(f));
  EXPECT_EQ(files[2].filename(), "r-mangling.json");
  std::filesystem::remove_all(dir);
}

TEST(Compile, ConditionFormula) {
  const auto inst = bench::gen_blocksworld(3, 3, false);
  EXPECT_EQ(ppltl::format_formula(condition_formula(*inst.problem.goal)),
            ppltl::format_formula(parse_formula("on(b1,b2) & on(b2,b3)")));
}

// Replays random walks side by side in the original and compiled problems.
TEST(Compile, LockstepSimulation) {
  const auto inst = bench::gen_blocksworld(3, 3, false);
  const auto original = pddl::ground(inst.domain, inst.problem);
  std::vector<std::string> names;
  for (int f = 0; f < original.num_base; ++f) names.push_back(original.fluents[f]);
  testing::RandomFormulas gen(11, names);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const Formula phi = gen.formula(4);
    const CompiledProblem c = compile(inst.domain, inst.problem, phi);
    const auto gp = pddl::ground(c.domain, c.problem);
    const auto sig_keys = c.sigma_keys;

    pddl::State s = original.init;
    pddl::State s2 = gp.init;
    const auto init_atoms = original.true_atoms(s);
    std::vector<ppltl::State> history{
        ppltl::State(init_atoms.begin(), init_atoms.end())};
    for (int step = 0; step < 8; ++step) {
      const ppltl::Trace t(history);
      const auto progress = ppltl::progress_trace(phi, t);
      for (const auto& key : sig_keys) {
        ASSERT_EQ(s2.get(gp.fluent(c.mangling.sigma_id(key))),
                  progress.sigma_history.back().at(key))
            << ppltl::format_formula(phi) << " step " << step;
      }
      ASSERT_EQ(gp.goal->holds(s2), progress.verdict)
          << ppltl::format_formula(phi) << " step " << step;
      ASSERT_EQ(progress.verdict, ppltl::eval_trace(phi, t));

      // Non-interference: the compiled state agrees on every original atom.
      std::vector<std::string> projected;
      for (const auto& a : gp.true_atoms(s2)) {
        if (original.fluent(a) >= 0) projected.push_back(a);
      }
      ASSERT_EQ(projected, original.true_atoms(s));

      const auto acts = pddl::applicable(original, s);
      ASSERT_FALSE(acts.empty());
      const int a = acts[rng() % acts.size()];
      const int a2 = gp.action(original.actions[a].name);
      ASSERT_GE(a2, 0);
      s = pddl::apply(original, s, a)[0];
      s2 = pddl::apply(gp, s2, a2)[0];
      const auto atoms = original.true_atoms(s);
      history.emplace_back(atoms.begin(), atoms.end());
    }
  }
}

}  // namespace
}  // namespace pastplan::compile
