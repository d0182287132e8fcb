#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pastplan/pddl/model.h"
#include "pastplan/ppltl/formula.h"
#include "pastplan/ppltl/progression.h"

namespace pastplan::compile {

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ManglingEntry {
  enum class Kind { kSigma, kVal };

  std::string id;       // sig-<k> or val-<k>
  Kind kind;
  std::string formula;  // canonical text of the (expanded) subformula
};

/// Names given to the fresh fluents and derived predicates. The number k in
/// `sig-k` / `val-k` is the subformula's position in ppltl::subformulas.
class ManglingMap {
 public:
  void add(ManglingEntry e);

  const std::vector<ManglingEntry>& entries() const { return entries_; }
  /// Throws CompileError for unknown formulas or ids.
  const std::string& val_id(const std::string& formula) const;
  const std::string& sigma_id(const std::string& formula) const;
  const ManglingEntry& entry(const std::string& id) const;

  std::string to_json() const;

 private:
  std::vector<ManglingEntry> entries_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::size_t> val_by_formula_;
  std::map<std::string, std::size_t> sigma_by_formula_;
};

struct CompiledProblem {
  pddl::Domain domain;
  pddl::Problem problem;
  ManglingMap mangling;
  ppltl::Formula goal;  // expanded
  std::vector<std::string> sigma_keys;
  std::string goal_predicate;
};

/// Replaces the goal of `problem` by `phi`: one 0-ary fluent per sigma
/// proposition, one derived predicate per subformula, and a pair of
/// conditional effects per fluent on every action outcome.
CompiledProblem compile(const pddl::Domain& domain,
                        const pddl::Problem& problem,
                        const ppltl::Formula& phi);

/// Propagates 0-ary constant axioms into the other bodies and simplifies
/// and/or/not. Every axiom is kept.
std::vector<pddl::DerivedPredicate> fold_constants(
    std::vector<pddl::DerivedPredicate> axioms);

/// Writes `<name>-compiled-domain.pddl`, `<name>-compiled-problem.pddl`
/// and `<name>-mangling.json` into `dir`; returns the three paths.
std::vector<std::filesystem::path> write_outputs(
    const CompiledProblem& c, const std::filesystem::path& dir,
    const std::string& name);

/// A ground PDDL condition as a propositional formula.
ppltl::Formula condition_formula(const pddl::Condition& c);

/// Base atoms of the compiled problem for original atoms plus sigma.
std::vector<std::string> lift_state(const CompiledProblem& c,
                                    const ppltl::State& original,
                                    const ppltl::SigmaAssignment& sigma);

}  // namespace pastplan::compile
