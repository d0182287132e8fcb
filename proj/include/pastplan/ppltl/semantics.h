#pragma once

#include <set>
#include <string>
#include <vector>

#include "pastplan/ppltl/formula.h"

namespace pastplan::ppltl {

/// Propositional interpretation: the ground atoms that hold.
using State = std::set<std::string>;

/// Finite non-empty sequence of states.
class Trace {
 public:
  explicit Trace(std::vector<State> states);

  const std::vector<State>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  const State& operator[](std::size_t i) const { return states_[i]; }
  const State& last() const { return states_.back(); }

  /// States 0..end-1.
  Trace prefix(std::size_t end) const;

 private:
  std::vector<State> states_;
};

/// Satisfaction at the last instant by direct recursion on the semantic
/// clauses (no progression). Used as the reference evaluator.
bool eval_trace(const Formula& f, const Trace& t);

/// Satisfaction at instant `i`.
bool eval_at(const Formula& f, const Trace& t, std::size_t i);

}  // namespace pastplan::ppltl
