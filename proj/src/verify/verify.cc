#include "pastplan/verify/verify.h"

#include <algorithm>
#include <deque>
#include <map>

#include <nlohmann/json.hpp>

namespace pastplan::verify {

using pddl::GroundedProblem;
using pddl::State;

ppltl::State observe(const GroundedProblem& gp, const State& s,
                     const std::set<std::string>& hidden) {
  ppltl::State out;
  for (const auto& a : gp.true_atoms(s, true)) {
    if (!hidden.count(a)) out.insert(a);
  }
  return out;
}

std::set<std::string> compiled_names(const compile::CompiledProblem& c) {
  std::set<std::string> out;
  for (const auto& e : c.mangling.entries()) out.insert(e.id);
  return out;
}

ppltl::Trace execute_plan(const GroundedProblem& gp, const solve::Plan& plan) {
  std::vector<ppltl::State> states{observe(gp, gp.init)};
  State s = gp.init;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const int a = plan[i];
    if (a < 0 || a >= static_cast<int>(gp.actions.size())) {
      throw PlanError(i, "no such action");
    }
    if (!gp.actions[a].precondition.holds(s)) {
      throw PlanError(i, "(" + gp.actions[a].name + ") is not applicable");
    }
    const auto next = pddl::apply(gp, s, a);
    if (next.size() != 1) {
      throw PlanError(i, "(" + gp.actions[a].name + ") is nondeterministic");
    }
    s = next[0];
    states.push_back(observe(gp, s));
  }
  return ppltl::Trace(std::move(states));
}

GoalCheck check_goal(const ppltl::Formula& phi, const ppltl::Trace& t) {
  return {ppltl::eval_trace(phi, t), ppltl::progress_trace(phi, t).verdict};
}

ProjectedExecutor::ProjectedExecutor(const compile::CompiledProblem& c,
                                     const GroundedProblem& compiled,
                                     const solve::Policy& policy)
    : c_(c), gp_(compiled), policy_(policy) {}

ppltl::SigmaAssignment ProjectedExecutor::sigma(
    const ppltl::Trace& history) const {
  return ppltl::progress_trace(c_.goal, history).sigma_history.back();
}

State ProjectedExecutor::lift(const ppltl::Trace& history) const {
  // Only base atoms are set; derived ones follow from them.
  ppltl::State base;
  for (const auto& a : history.last()) {
    const int f = gp_.fluent(a);
    if (f >= 0 && !gp_.is_derived(f)) base.insert(a);
  }
  return gp_.make_state(compile::lift_state(c_, base, sigma(history)));
}

std::string ProjectedExecutor::next_action(const ppltl::Trace& history) const {
  const State s = lift(history);
  const int a = policy_.at(s);
  if (a < 0) {
    std::string atoms;
    for (const auto& x : gp_.true_atoms(s)) atoms += " (" + x + ")";
    throw UndefinedState("policy is undefined on the state reached after " +
                         std::to_string(history.size() - 1) + " step(s):" +
                         atoms);
  }
  return "(" + gp_.actions[a].name + ")";
}

ProjectedExecutor project_policy(const compile::CompiledProblem& c,
                                 const GroundedProblem& compiled,
                                 const solve::Policy& policy) {
  return ProjectedExecutor(c, compiled, policy);
}

std::string ExecutionReport::to_json() const {
  nlohmann::ordered_json j{{"mode", mode},
                           {"executions", executions},
                           {"leaves", leaves},
                           {"cycles", cycles},
                           {"dead_ends", dead_ends},
                           {"states_visited", states_visited},
                           {"max_depth", max_depth},
                           {"proper", proper},
                           {"verdict", verdict},
                           {"agreement", agreement},
                           {"failures", failures}};
  return j.dump(2) + "\n";
}

namespace {

constexpr std::size_t kMaxExecutions = 1'000'000;
constexpr std::size_t kMaxFailures = 20;

class Enumerator {
 public:
  Enumerator(const solve::Policy& policy, const GroundedProblem& gp,
             const compile::CompiledProblem& c, ExecutionReport& r,
             std::size_t depth_cap)
      : policy_(policy), gp_(gp), c_(c), hidden_(compiled_names(c)), r_(r),
        depth_cap_(depth_cap) {}

  void run() {
    path_.push_back(gp_.init);
    visit();
    r_.states_visited = visited_.size();
    r_.cycles = back_edges_.size();
  }

  bool leaf_failed() const { return leaf_failed_; }

 private:
  void fail(const std::string& what) {
    if (r_.failures.size() < kMaxFailures) r_.failures.push_back(what);
  }

  void end_execution() {
    if (++r_.executions > kMaxExecutions) {
      throw solve::ResourceLimit("more than " + std::to_string(kMaxExecutions) +
                                 " executions");
    }
  }

  void visit() {
    const State s = path_.back();  // path_ grows below
    visited_.insert(gp_.true_atoms(s));
    const std::size_t depth = path_.size() - 1;
    r_.max_depth = std::max(r_.max_depth, depth);
    if (depth > depth_cap_) {
      throw solve::ResourceLimit("execution deeper than " +
                                 std::to_string(depth_cap_));
    }
    if (gp_.goal->holds(s)) {
      end_execution();
      ++r_.leaves;
      std::vector<ppltl::State> states;
      for (const auto& p : path_) states.push_back(observe(gp_, p, hidden_));
      const GoalCheck g = check_goal(c_.goal, ppltl::Trace(std::move(states)));
      if (!g.agree()) {
        r_.agreement = false;
        fail("evaluators disagree on an execution of length " +
             std::to_string(depth));
      }
      if (!g.verdict()) {
        fail("execution of length " + std::to_string(depth) +
             " reaches the goal but its trace violates the formula");
        leaf_failed_ = true;
      }
      return;
    }
    const int a = policy_.at(s);
    if (a < 0 || !gp_.actions[a].precondition.holds(s)) {
      end_execution();
      ++r_.dead_ends;
      fail(a < 0 ? "no action for a reachable non-goal state at depth " +
                       std::to_string(depth)
                 : "(" + gp_.actions[a].name + ") not applicable at depth " +
                       std::to_string(depth));
      return;
    }
    const std::vector<State> next = pddl::apply(gp_, s, a);
    for (const State& n : next) {
      bool on_path = false;
      for (const auto& p : path_) on_path = on_path || p == n;
      if (on_path) {
        end_execution();
        back_edges_.insert({gp_.true_atoms(s), gp_.true_atoms(n)});
        continue;
      }
      path_.push_back(n);
      visit();
      path_.pop_back();
    }
  }

  const solve::Policy& policy_;
  const GroundedProblem& gp_;
  const compile::CompiledProblem& c_;
  std::set<std::string> hidden_;
  ExecutionReport& r_;
  std::size_t depth_cap_;
  std::vector<State> path_;
  std::set<std::vector<std::string>> visited_;
  std::set<std::pair<std::vector<std::string>, std::vector<std::string>>>
      back_edges_;
  bool leaf_failed_ = false;
};

// States reachable under the policy, and whether each can still reach the
// goal by following it.
std::pair<std::size_t, bool> policy_graph(const solve::Policy& policy,
                                          const GroundedProblem& gp,
                                          std::size_t cap) {
  std::unordered_map<State, int, pddl::StateHash> id;
  std::vector<State> states{gp.init};
  std::vector<std::vector<int>> preds(1);
  std::vector<bool> goal{gp.goal->holds(gp.init)};
  id.emplace(gp.init, 0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (goal[i]) continue;
    const int a = policy.at(states[i]);
    if (a < 0 || !gp.actions[a].precondition.holds(states[i])) continue;
    for (const State& n : pddl::apply(gp, states[i], a)) {
      auto [it, fresh] = id.emplace(n, static_cast<int>(states.size()));
      if (fresh) {
        if (states.size() >= cap) {
          throw solve::ResourceLimit("policy reaches more than " +
                                     std::to_string(cap) + " states");
        }
        states.push_back(n);
        preds.emplace_back();
        goal.push_back(gp.goal->holds(n));
      }
      preds[it->second].push_back(static_cast<int>(i));
    }
  }
  std::vector<bool> reach(goal);
  std::deque<int> queue;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (goal[i]) queue.push_back(static_cast<int>(i));
  }
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    for (int s : preds[t]) {
      if (!reach[s]) {
        reach[s] = true;
        queue.push_back(s);
      }
    }
  }
  const bool proper =
      std::all_of(reach.begin(), reach.end(), [](bool b) { return b; });
  return {states.size(), proper};
}

}  // namespace

ExecutionReport verify_policy(const solve::Policy& policy,
                              const GroundedProblem& compiled,
                              const compile::CompiledProblem& c, Mode mode,
                              std::size_t state_cap) {
  if (!compiled.goal) throw std::invalid_argument("compiled problem has no goal");
  ExecutionReport r;
  r.mode = mode == Mode::kStrong ? "strong" : "strong-cyclic";
  const auto [reachable, proper] = policy_graph(policy, compiled, state_cap);
  r.proper = proper;
  Enumerator e(policy, compiled, c, r, 4 * reachable);
  e.run();
  const bool sound_leaves =
      !e.leaf_failed() && r.agreement && r.dead_ends == 0 && r.leaves > 0;
  if (mode == Mode::kStrong) {
    r.verdict = sound_leaves && r.cycles == 0;
    if (r.cycles > 0) r.failures.push_back("policy has cycles");
  } else {
    r.verdict = sound_leaves && proper;
    if (!proper) r.failures.push_back("goal unreachable from some state");
  }
  return r;
}

}  // namespace pastplan::verify
