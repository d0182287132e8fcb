#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pastplan/compile/compile.h"
#include "pastplan/pddl/grounding.h"
#include "pastplan/ppltl/progression.h"
#include "pastplan/ppltl/semantics.h"
#include "pastplan/solve/solve.h"

namespace pastplan::verify {

/// A plan step that cannot be executed.
class PlanError : public std::runtime_error {
 public:
  PlanError(std::size_t index, const std::string& what)
      : std::runtime_error("step " + std::to_string(index) + ": " + what),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// The projected executor met a state its policy says nothing about.
class UndefinedState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Atoms of `s` as a formula state, derived atoms included. Atoms named in
/// `hidden` (sigma fluents and val predicates) are left out.
ppltl::State observe(const pddl::GroundedProblem& gp, const pddl::State& s,
                     const std::set<std::string>& hidden = {});

/// The sigma fluents and val predicates introduced by compilation.
std::set<std::string> compiled_names(const compile::CompiledProblem& c);

/// s0 ... sn induced by `plan`; throws PlanError at the first step whose
/// action is not applicable.
ppltl::Trace execute_plan(const pddl::GroundedProblem& gp,
                          const solve::Plan& plan);

struct GoalCheck {
  bool eval = false;      // direct semantics
  bool progress = false;  // sigma progression
  bool agree() const { return eval == progress; }
  bool verdict() const { return eval && progress; }
};

GoalCheck check_goal(const ppltl::Formula& phi, const ppltl::Trace& t);

/// Plays a compiled-problem policy on histories of the original problem,
/// keeping sigma up to date from the history alone.
class ProjectedExecutor {
 public:
  ProjectedExecutor(const compile::CompiledProblem& c,
                    const pddl::GroundedProblem& compiled,
                    const solve::Policy& policy);

  /// Sigma for the last state of `history`: built from all earlier states.
  ppltl::SigmaAssignment sigma(const ppltl::Trace& history) const;
  /// Compiled state matching the history's last state.
  pddl::State lift(const ppltl::Trace& history) const;
  /// Name `(a x y)` of the action to take; throws UndefinedState.
  std::string next_action(const ppltl::Trace& history) const;

 private:
  const compile::CompiledProblem& c_;
  const pddl::GroundedProblem& gp_;
  const solve::Policy& policy_;
};

ProjectedExecutor project_policy(const compile::CompiledProblem& c,
                                 const pddl::GroundedProblem& compiled,
                                 const solve::Policy& policy);

enum class Mode { kStrong, kStrongCyclic };

struct ExecutionReport {
  std::string mode;
  std::size_t executions = 0;  // root-to-leaf paths enumerated
  std::size_t leaves = 0;      // paths ending in a goal state
  std::size_t cycles = 0;      // distinct (state, state) back edges
  std::size_t dead_ends = 0;
  std::size_t states_visited = 0;
  std::size_t max_depth = 0;
  bool proper = false;     // goal reachable from every visited state
  bool agreement = true;   // both evaluators agreed on every leaf
  bool verdict = false;
  std::vector<std::string> failures;

  std::string to_json() const;
};

/// Enumerates every execution of `policy` on the compiled problem and checks
/// the projected trace of each goal leaf against `phi`.
ExecutionReport verify_policy(const solve::Policy& policy,
                              const pddl::GroundedProblem& compiled,
                              const compile::CompiledProblem& c, Mode mode,
                              std::size_t state_cap = 100'000);

}  // namespace pastplan::verify
