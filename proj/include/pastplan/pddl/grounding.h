#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pastplan/pddl/model.h"

namespace pastplan::pddl {

/// Stratification failure, add/delete conflict, or bad grounding input.
class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truth assignment to every fluent of a grounded problem, base and derived.
class State {
 public:
  State() = default;
  explicit State(std::size_t n) : words_((n + 63) / 64, 0) {}

  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (i % 64);
    if (v) {
      words_[i / 64] |= bit;
    } else {
      words_[i / 64] &= ~bit;
    }
  }
  std::size_t hash() const;

  friend bool operator==(const State&, const State&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

struct StateHash {
  std::size_t operator()(const State& s) const { return s.hash(); }
};

/// Ground condition over fluent indices, with statics already folded.
struct GroundCondition {
  enum class Kind { kTrue, kFalse, kFluent, kNot, kAnd, kOr };

  Kind kind = Kind::kTrue;
  int fluent = -1;
  std::vector<GroundCondition> parts;

  bool holds(const State& s) const;
  /// Fluents mentioned anywhere in the condition.
  void collect_fluents(std::vector<int>& out) const;
};

struct GroundEffect {
  GroundCondition condition;
  std::vector<int> adds;
  std::vector<int> deletes;
};

struct GroundOutcome {
  std::vector<GroundEffect> effects;
};

struct GroundAction {
  std::string name;  // "stack b1 b2"
  std::string schema;
  std::vector<std::string> args;
  GroundCondition precondition;
  std::vector<GroundOutcome> outcomes;
};

struct GroundAxiom {
  int head;
  GroundCondition body;
};

struct GroundedProblem {
  std::vector<std::string> fluents;  // ground atom keys, base first
  std::unordered_map<std::string, int> index;
  int num_base = 0;
  std::vector<GroundAction> actions;  // sorted by name
  std::vector<std::vector<GroundAxiom>> strata;
  State init;  // closed: derived atoms already evaluated
  std::optional<GroundCondition> goal;

  /// Index of the ground atom `key`, or -1.
  int fluent(const std::string& key) const;
  bool is_derived(int f) const { return f >= num_base; }
  std::size_t num_axioms() const;
  /// Index of the action named `name` (either "a x" or "(a x)"), or -1.
  int action(const std::string& name) const;

  /// Keys of the true atoms, sorted; derived atoms only when asked.
  std::vector<std::string> true_atoms(const State& s,
                                      bool with_derived = false) const;
  /// Closed state whose base part is exactly `atoms`.
  State make_state(const std::vector<std::string>& atoms) const;
};

GroundedProblem ground(const Domain& domain, const Problem& problem);

/// Recomputes every derived atom of `base` stratum by stratum.
State eval_state(const GroundedProblem& gp, State base);

std::vector<int> applicable(const GroundedProblem& gp, const State& s);

/// One closed successor per outcome. Throws GroundingError when the action
/// is not applicable or two fired effects add and delete the same atom.
/// With `close` false the derived atoms of the successors are left unset.
std::vector<State> apply(const GroundedProblem& gp, const State& s, int action,
                         bool close = true);

/// `s` with every derived atom cleared.
State base_part(const GroundedProblem& gp, State s);

}  // namespace pastplan::pddl
