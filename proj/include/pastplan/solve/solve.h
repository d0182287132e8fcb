#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pastplan/pddl/grounding.h"

namespace pastplan::solve {

/// Node cap or timeout hit before the search finished.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Limits {
  std::size_t node_cap = 1'000'000;
  double timeout_s = 60.0;
};

enum class Heuristic { kBlind, kHadd };

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  std::size_t states = 0;  // distinct states stored
};

using Plan = std::vector<int>;  // ground action indices

struct PlanResult {
  bool solved = false;
  Plan plan;
  SearchStats stats;
  bool optimal = true;  // false with an inadmissible heuristic
};

/// Uniform-cost search (unit costs), or A* with h_add. Requires a goal and
/// deterministic actions; ties go to the smaller action name.
PlanResult solve_classical(const pddl::GroundedProblem& gp,
                           Heuristic h = Heuristic::kBlind, Limits limits = {});

/// h_add from `s`: costs are summed over conjunctions, negations are free.
/// Returns SIZE_MAX when the goal is relaxed-unreachable.
std::size_t h_add(const pddl::GroundedProblem& gp, const pddl::State& s);

/// Memoryless policy over closed states.
struct Policy {
  std::unordered_map<pddl::State, int, pddl::StateHash> actions;

  /// Action for `s`, or -1.
  int at(const pddl::State& s) const;
  std::size_t size() const { return actions.size(); }
};

struct PolicyResult {
  bool solved = false;
  Policy policy;
  SearchStats stats;
};

/// Every execution reaches the goal in a bounded number of steps.
PolicyResult solve_fond_strong(const pddl::GroundedProblem& gp,
                               Limits limits = {});
/// Every fair execution reaches the goal: the policy is closed and from each
/// state it reaches, the goal stays reachable.
PolicyResult solve_fond_strong_cyclic(const pddl::GroundedProblem& gp,
                                      Limits limits = {});

/// A plan as a policy (deterministic problems only).
Policy plan_to_policy(const pddl::GroundedProblem& gp, const Plan& plan);

/// `(name arg ...)`.
std::string action_text(const pddl::GroundedProblem& gp, int action);
/// One action per line.
std::string format_plan(const pddl::GroundedProblem& gp, const Plan& plan);
/// Reads the line format; blank lines and `;` comments are skipped. Throws
/// std::invalid_argument naming the position of an unknown action.
Plan parse_plan(const pddl::GroundedProblem& gp, const std::string& text);

/// JSON array of {state: sorted base atoms, action}, sorted by state.
std::string policy_json(const pddl::GroundedProblem& gp, const Policy& p);
Policy parse_policy_json(const pddl::GroundedProblem& gp,
                         const std::string& text);

}  // namespace pastplan::solve
