#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pastplan::ppltl {

enum class Op {
  kAtom,
  kTrue,
  kFalse,
  kNot,
  kAnd,
  kOr,
  kImplies,
  kYesterday,
  kWeakYesterday,
  kSince,
  kOnce,
  kHistorically,
  kStart,
};

class Formula;

namespace detail {
struct Node {
  Op op;
  std::string atom;
  std::vector<Formula> children;
  std::string text;  // canonical serialization, computed once
};
}  // namespace detail

/// Immutable PPLTL formula. Copies share structure; equality is structural
/// (by canonical serialization).
class Formula {
 public:
  Formula();  // true

  static Formula atom(std::string name);
  static Formula top();
  static Formula bottom();
  static Formula start();

  Op op() const { return node_->op; }
  const std::string& atom_name() const { return node_->atom; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i) const { return node_->children.at(i); }
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }

  /// Fully parenthesized canonical text, e.g. `(a & (Y b))`.
  const std::string& str() const { return node_->text; }

  bool is_atom() const { return op() == Op::kAtom; }
  bool is_temporal() const;

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.node_ == b.node_ || a.str() == b.str();
  }
  friend bool operator<(const Formula& a, const Formula& b) {
    return a.str() < b.str();
  }

  /// Identity of the shared node, for memo tables.
  const void* id() const { return node_.get(); }

 private:
  friend Formula make(Op, std::vector<Formula>);
  explicit Formula(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

Formula make(Op op, std::vector<Formula> children);

Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula yesterday(Formula f);
Formula weak_yesterday(Formula f);
Formula since(Formula a, Formula b);
Formula once(Formula f);
Formula historically(Formula f);

/// Conjunction/disjunction of a list, left-nested; empty list gives
/// true/false respectively.
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

/// Applies `Y` (or `WY`) `times` times.
Formula yesterday_n(Formula f, int times);
Formula weak_yesterday_n(Formula f, int times);

std::string format_formula(const Formula& f);

/// Atom text as it appears in formula source: bare when it is a plain
/// identifier, otherwise double-quoted.
std::string format_atom(std::string_view name);

/// Number of distinct subformulas (DAG size).
std::size_t formula_size(const Formula& f);

/// Number of nodes of the syntax tree (shared subtrees counted repeatedly).
std::size_t tree_size(const Formula& f);

/// Ground atoms mentioned by the formula, sorted and deduplicated.
std::vector<std::string> atoms_of(const Formula& f);

/// Rewrites O, H, WY, start, ->, false into {atom, true, !, &, |, Y, S}.
Formula expand(const Formula& f);

/// Inverse of expand for printing: `(true S x)` becomes `O x` and
/// `!(true S !x)` becomes `H x`.
Formula resugar(const Formula& f);

}  // namespace pastplan::ppltl
