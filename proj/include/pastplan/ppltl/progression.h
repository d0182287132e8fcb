#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pastplan/ppltl/formula.h"
#include "pastplan/ppltl/semantics.h"

namespace pastplan::ppltl {

/// sub(f) over the expanded formula, post-order left-to-right, deduplicated.
using SubformulaSet = std::vector<Formula>;

SubformulaSet subformulas(const Formula& f);

/// Formulas quoted by the sigma propositions: the argument of every `Y`
/// subformula and every `S` subformula, in post-order of first appearance.
std::vector<Formula> sigma_formulas(const Formula& f);

/// Keys (canonical text) of sigma_formulas(f).
std::vector<std::string> sigma_propositions(const Formula& f);

class MissingSigmaKey : public std::out_of_range {
 public:
  explicit MissingSigmaKey(const std::string& key)
      : std::out_of_range("sigma assignment has no proposition " + key),
        key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Truth assignment over the sigma propositions of a formula.
class SigmaAssignment {
 public:
  SigmaAssignment() = default;

  bool at(const std::string& key) const;
  bool contains(const std::string& key) const {
    return values_.count(key) != 0;
  }
  void set(const std::string& key, bool value) { values_[key] = value; }
  std::size_t size() const { return values_.size(); }
  const std::map<std::string, bool>& values() const { return values_; }

  friend bool operator==(const SigmaAssignment&,
                         const SigmaAssignment&) = default;

 private:
  std::map<std::string, bool> values_;
};

/// σ₋₁: every proposition false.
SigmaAssignment initial_sigma(const Formula& f);

/// Value of `f` given the previous-instant assignment and the current state.
/// Throws MissingSigmaKey when `sigma` lacks a proposition `f` reads.
bool val(const Formula& f, const SigmaAssignment& sigma, const State& s);

/// σᵢ from σᵢ₋₁ and sᵢ.
SigmaAssignment step_sigma(const Formula& f, const SigmaAssignment& sigma_prev,
                           const State& s);

struct ProgressionResult {
  std::vector<SigmaAssignment> sigma_history;  // σ₋₁ … σₙ₋₁
  bool verdict = false;
};

ProgressionResult progress_trace(const Formula& f, const Trace& t);

/// Previous normal form: temporal operators only under `Y`/`WY`.
Formula to_pnf(const Formula& f);

}  // namespace pastplan::ppltl
