#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pastplan::pddl {

inline constexpr const char* kRootType = "object";

struct TypedName {
  std::string name;
  std::string type = kRootType;

  friend bool operator==(const TypedName&, const TypedName&) = default;
};

/// Predicate applied to terms; a term is a variable (`?x`) or an object name.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  /// `pred a b`: the ground-atom spelling shared with formulas.
  std::string key() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

inline bool is_variable(const std::string& term) {
  return !term.empty() && term[0] == '?';
}

struct Condition {
  enum class Kind { kAtom, kEquals, kNot, kAnd, kOr, kImply };

  Kind kind = Kind::kAnd;  // empty conjunction: true
  Atom atom;               // kAtom; kEquals uses atom.args[0..1]
  std::vector<Condition> parts;

  static Condition truth() { return {}; }
  static Condition falsity() { return {Kind::kOr, {}, {}}; }
  static Condition of(Atom a) { return {Kind::kAtom, std::move(a), {}}; }
  static Condition negation(Condition c) {
    return {Kind::kNot, {}, {std::move(c)}};
  }
  static Condition all(std::vector<Condition> cs) {
    return {Kind::kAnd, {}, std::move(cs)};
  }
  static Condition any(std::vector<Condition> cs) {
    return {Kind::kOr, {}, std::move(cs)};
  }

  bool is_truth() const { return kind == Kind::kAnd && parts.empty(); }
  bool is_falsity() const { return kind == Kind::kOr && parts.empty(); }

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct Literal {
  Atom atom;
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// `(when condition literals)`; an unconditional item has a true condition.
struct EffectItem {
  Condition condition;
  std::vector<Literal> literals;

  friend bool operator==(const EffectItem&, const EffectItem&) = default;
};

struct Outcome {
  std::vector<EffectItem> items;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;

  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

struct DerivedPredicate {
  PredicateDecl head;
  Condition body;

  friend bool operator==(const DerivedPredicate&,
                         const DerivedPredicate&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  Condition precondition;
  std::vector<Outcome> outcomes;  // size 1: deterministic

  bool deterministic() const { return outcomes.size() == 1; }

  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypedName> types;  // name and parent type
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<DerivedPredicate> derived;
  std::vector<ActionSchema> actions;

  const PredicateDecl* find_predicate(const std::string& name) const;
  const DerivedPredicate* find_derived(const std::string& name) const;
  const ActionSchema* find_action(const std::string& name) const;

  /// True when `type` equals `ancestor` or descends from it.
  bool is_subtype(const std::string& type, const std::string& ancestor) const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::optional<Condition> goal;

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Requirement flags accepted by the parser.
const std::vector<std::string>& supported_requirements();

}  // namespace pastplan::pddl
