#include "pastplan/pddl/printer.h"

#include <sstream>

namespace pastplan::pddl {

namespace {

std::string typed(const std::vector<TypedName>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += " ";
    out += n.name;
    if (n.type != kRootType) out += " - " + n.type;
  }
  return out;
}

std::string atom_text(const Atom& a) { return "(" + a.key() + ")"; }

std::string literal_text(const Literal& l) {
  return l.positive ? atom_text(l.atom) : "(not " + atom_text(l.atom) + ")";
}

std::string outcome_text(const Outcome& o) {
  std::string out = "(and";
  for (const auto& item : o.items) {
    if (item.condition.is_truth()) {
      for (const auto& l : item.literals) out += " " + literal_text(l);
    } else {
      out += " (when " + print_condition(item.condition) + " (and";
      for (const auto& l : item.literals) out += " " + literal_text(l);
      out += "))";
    }
  }
  return out + ")";
}

}  // namespace

std::string print_condition(const Condition& c) {
  switch (c.kind) {
    case Condition::Kind::kAtom:
      return atom_text(c.atom);
    case Condition::Kind::kEquals:
      return "(= " + c.atom.args.at(0) + " " + c.atom.args.at(1) + ")";
    case Condition::Kind::kNot:
      return "(not " + print_condition(c.parts.at(0)) + ")";
    case Condition::Kind::kImply:
      return "(imply " + print_condition(c.parts.at(0)) + " " +
             print_condition(c.parts.at(1)) + ")";
    case Condition::Kind::kAnd:
    case Condition::Kind::kOr: {
      std::string out = c.kind == Condition::Kind::kAnd ? "(and" : "(or";
      for (const auto& p : c.parts) out += " " + print_condition(p);
      return out + ")";
    }
  }
  return "";
}

std::string print_domain(const Domain& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << " " << r;
    os << ")\n";
  }
  if (!d.types.empty()) os << "  (:types " << typed(d.types) << ")\n";
  if (!d.constants.empty()) os << "  (:constants " << typed(d.constants) << ")\n";
  os << "  (:predicates";
  for (const auto& p : d.predicates) {
    os << "\n    (" << p.name << (p.params.empty() ? "" : " ") << typed(p.params)
       << ")";
  }
  os << ")\n";
  for (const auto& dp : d.derived) {
    os << "  (:derived (" << dp.head.name
       << (dp.head.params.empty() ? "" : " ") << typed(dp.head.params) << ")\n"
       << "    " << print_condition(dp.body) << ")\n";
  }
  for (const auto& a : d.actions) {
    os << "  (:action " << a.name << "\n"
       << "    :parameters (" << typed(a.params) << ")\n"
       << "    :precondition " << print_condition(a.precondition) << "\n"
       << "    :effect ";
    if (a.outcomes.size() == 1) {
      os << outcome_text(a.outcomes[0]);
    } else {
      os << "(oneof";
      for (const auto& o : a.outcomes) os << "\n      " << outcome_text(o);
      os << ")";
    }
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string print_problem(const Problem& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n"
     << "  (:domain " << p.domain_name << ")\n";
  if (!p.objects.empty()) os << "  (:objects " << typed(p.objects) << ")\n";
  os << "  (:init";
  for (const auto& a : p.init) os << "\n    " << atom_text(a);
  os << ")\n";
  if (p.goal) os << "  (:goal " << print_condition(*p.goal) << ")\n";
  os << ")\n";
  return os.str();
}

}  // namespace pastplan::pddl
