#include "pastplan/compile/compile.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pastplan/pddl/printer.h"

namespace pastplan::compile {

using pddl::Atom;
using pddl::Condition;
using pddl::DerivedPredicate;
using ppltl::Formula;
using ppltl::Op;

void ManglingMap::add(ManglingEntry e) {
  if (by_id_.count(e.id)) throw CompileError("duplicate identifier " + e.id);
  auto& by_formula = e.kind == ManglingEntry::Kind::kVal ? val_by_formula_
                                                         : sigma_by_formula_;
  if (by_formula.count(e.formula)) {
    throw CompileError("formula mangled twice: " + e.formula);
  }
  by_id_[e.id] = entries_.size();
  by_formula[e.formula] = entries_.size();
  entries_.push_back(std::move(e));
}

const std::string& ManglingMap::val_id(const std::string& formula) const {
  auto it = val_by_formula_.find(formula);
  if (it == val_by_formula_.end()) {
    throw CompileError("no val predicate for " + formula);
  }
  return entries_[it->second].id;
}

const std::string& ManglingMap::sigma_id(const std::string& formula) const {
  auto it = sigma_by_formula_.find(formula);
  if (it == sigma_by_formula_.end()) {
    throw CompileError("no sigma fluent for " + formula);
  }
  return entries_[it->second].id;
}

const ManglingEntry& ManglingMap::entry(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw CompileError("unknown identifier " + id);
  return entries_[it->second];
}

std::string ManglingMap::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    out.push_back({{"id", e.id},
                   {"kind", e.kind == ManglingEntry::Kind::kVal ? "val" : "sigma"},
                   {"formula", e.formula}});
  }
  return out.dump(2) + "\n";
}

namespace {

Condition nullary(const std::string& name) {
  return Condition::of(Atom{name, {}});
}

Atom split_atom(const std::string& name) {
  Atom a;
  std::istringstream in(name);
  in >> a.predicate;
  for (std::string arg; in >> arg;) a.args.push_back(arg);
  return a;
}

// Every formula atom must be a well-typed ground atom of the problem.
// Returns the objects the atoms mention.
std::set<std::string> check_atoms(const pddl::Domain& d, const pddl::Problem& p,
                                  const Formula& phi) {
  std::map<std::string, std::string> objects;
  for (const auto& c : d.constants) objects[c.name] = c.type;
  for (const auto& o : p.objects) objects[o.name] = o.type;
  std::set<std::string> used;
  for (const auto& name : ppltl::atoms_of(phi)) {
    const Atom a = split_atom(name);
    const std::vector<pddl::TypedName>* params = nullptr;
    if (const auto* pd = d.find_predicate(a.predicate)) {
      params = &pd->params;
    } else if (const auto* dp = d.find_derived(a.predicate)) {
      params = &dp->head.params;
    } else {
      throw CompileError("goal atom '" + name + "': undeclared predicate " +
                         a.predicate);
    }
    if (params->size() != a.args.size()) {
      throw CompileError("goal atom '" + name + "': " + a.predicate +
                         " expects " + std::to_string(params->size()) +
                         " argument(s)");
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      auto it = objects.find(a.args[i]);
      if (it == objects.end()) {
        throw CompileError("goal atom '" + name + "': undeclared object " +
                           a.args[i]);
      }
      if (!d.is_subtype(it->second, (*params)[i].type)) {
        throw CompileError("goal atom '" + name + "': object " + a.args[i] +
                           " is not a " + (*params)[i].type);
      }
      used.insert(a.args[i]);
    }
  }
  return used;
}

struct Folder {
  std::map<std::string, bool> constants;

  static bool is_constant(const Condition& c) {
    return c.is_truth() || c.is_falsity();
  }

  Condition simplify(const Condition& c) const {
    using K = Condition::Kind;
    switch (c.kind) {
      case K::kAtom: {
        if (!c.atom.args.empty()) return c;
        auto it = constants.find(c.atom.predicate);
        if (it != constants.end()) {
          return it->second ? Condition::truth() : Condition::falsity();
        }
        return c;
      }
      case K::kEquals:
        return c;
      case K::kNot: {
        Condition inner = simplify(c.parts[0]);
        if (inner.is_truth()) return Condition::falsity();
        if (inner.is_falsity()) return Condition::truth();
        if (inner.kind == K::kNot) return inner.parts[0];
        return Condition::negation(std::move(inner));
      }
      case K::kImply: {
        Condition lhs = simplify(c.parts[0]);
        Condition rhs = simplify(c.parts[1]);
        if (lhs.is_falsity() || rhs.is_truth()) return Condition::truth();
        if (lhs.is_truth()) return rhs;
        if (rhs.is_falsity()) return simplify(Condition::negation(lhs));
        return {K::kImply, {}, {std::move(lhs), std::move(rhs)}};
      }
      case K::kAnd:
      case K::kOr: {
        const bool is_and = c.kind == K::kAnd;
        std::vector<Condition> kept;
        for (const auto& p : c.parts) {
          Condition s = simplify(p);
          if (is_and ? s.is_falsity() : s.is_truth()) return s;
          if (is_and ? s.is_truth() : s.is_falsity()) continue;
          kept.push_back(std::move(s));
        }
        if (kept.size() == 1) return kept[0];
        if (kept.empty()) return is_and ? Condition::truth() : Condition::falsity();
        return {c.kind, {}, std::move(kept)};
      }
    }
    return c;
  }
};

}  // namespace

std::vector<DerivedPredicate> fold_constants(std::vector<DerivedPredicate> axioms) {
  Folder folder;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& ax : axioms) {
      Condition next = folder.simplify(ax.body);
      if (!(next == ax.body)) {
        ax.body = std::move(next);
        changed = true;
      }
      if (ax.head.params.empty() && Folder::is_constant(ax.body) &&
          !folder.constants.count(ax.head.name)) {
        folder.constants[ax.head.name] = ax.body.is_truth();
        changed = true;
      }
    }
  }
  return axioms;
}

CompiledProblem compile(const pddl::Domain& domain,
                        const pddl::Problem& problem, const Formula& phi) {
  const std::set<std::string> used = check_atoms(domain, problem, phi);

  CompiledProblem out{domain, problem, {}, ppltl::expand(phi), {}, {}};
  const auto subs = ppltl::subformulas(out.goal);
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < subs.size(); ++k) index[subs[k].str()] = k;

  std::set<std::string> taken;
  for (const auto& p : domain.predicates) taken.insert(p.name);
  for (const auto& p : domain.derived) taken.insert(p.head.name);
  auto fresh = [&](const std::string& id) {
    if (!taken.insert(id).second) {
      throw CompileError("identifier " + id + " already used by the domain");
    }
    return id;
  };

  for (std::size_t k = 0; k < subs.size(); ++k) {
    out.mangling.add({fresh("val-" + std::to_string(k)),
                      ManglingEntry::Kind::kVal, subs[k].str()});
  }
  std::vector<std::pair<std::string, std::string>> sig_val;  // (sig, val)
  for (const auto& s : ppltl::sigma_formulas(out.goal)) {
    const std::size_t k = index.at(s.str());
    const std::string id = fresh("sig-" + std::to_string(k));
    out.mangling.add({id, ManglingEntry::Kind::kSigma, s.str()});
    out.sigma_keys.push_back(s.str());
    out.domain.predicates.push_back({id, {}});
    sig_val.emplace_back(id, "val-" + std::to_string(k));
  }

  // Objects named by the goal are now referenced from the domain.
  auto& objs = out.problem.objects;
  for (auto it = objs.begin(); it != objs.end();) {
    if (used.count(it->name)) {
      out.domain.constants.push_back(*it);
      it = objs.erase(it);
    } else {
      ++it;
    }
  }

  std::vector<DerivedPredicate> axioms;
  auto val_of = [&](const Formula& f) {
    return nullary(out.mangling.val_id(f.str()));
  };
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const Formula& f = subs[k];
    Condition body;
    switch (f.op()) {
      case Op::kAtom:
        body = Condition::of(split_atom(f.atom_name()));
        break;
      case Op::kTrue:
        body = Condition::truth();
        break;
      case Op::kNot:
        body = Condition::negation(val_of(f.lhs()));
        break;
      case Op::kAnd:
        body = Condition::all({val_of(f.lhs()), val_of(f.rhs())});
        break;
      case Op::kOr:
        body = Condition::any({val_of(f.lhs()), val_of(f.rhs())});
        break;
      case Op::kYesterday:
        body = nullary(out.mangling.sigma_id(f.lhs().str()));
        break;
      case Op::kSince:
        body = Condition::any(
            {val_of(f.rhs()),
             Condition::all({val_of(f.lhs()),
                             nullary(out.mangling.sigma_id(f.str()))})});
        break;
      default:
        throw CompileError("unexpected operator in expanded formula " + f.str());
    }
    axioms.push_back({{"val-" + std::to_string(k), {}}, std::move(body)});
  }
  for (auto& ax : fold_constants(std::move(axioms))) {
    out.domain.derived.push_back(std::move(ax));
  }

  for (auto& a : out.domain.actions) {
    for (auto& o : a.outcomes) {
      for (const auto& [sig, val] : sig_val) {
        o.items.push_back({nullary(val), {{Atom{sig, {}}, true}}});
        o.items.push_back(
            {Condition::negation(nullary(val)), {{Atom{sig, {}}, false}}});
      }
    }
  }

  for (const char* r : {":derived-predicates", ":conditional-effects",
                        ":negative-preconditions"}) {
    auto& reqs = out.domain.requirements;
    if (std::find(reqs.begin(), reqs.end(), r) == reqs.end()) reqs.push_back(r);
  }

  out.goal_predicate = "val-" + std::to_string(subs.size() - 1);
  out.problem.goal = nullary(out.goal_predicate);
  return out;
}

std::vector<std::filesystem::path> write_outputs(
    const CompiledProblem& c, const std::filesystem::path& dir,
    const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::filesystem::path, std::string>> files{
      {dir / (name + "-compiled-domain.pddl"), pddl::print_domain(c.domain)},
      {dir / (name + "-compiled-problem.pddl"), pddl::print_problem(c.problem)},
      {dir / (name + "-mangling.json"), c.mangling.to_json()},
  };
  std::vector<std::filesystem::path> out;
  for (const auto& [path, text] : files) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw CompileError("cannot write " + path.string());
    out.push_back(path);
  }
  return out;
}

Formula condition_formula(const Condition& c) {
  std::vector<Formula> parts;
  for (const auto& p : c.parts) parts.push_back(condition_formula(p));
  switch (c.kind) {
    case Condition::Kind::kAtom:
      if (!std::all_of(c.atom.args.begin(), c.atom.args.end(),
                       [](const std::string& a) { return !pddl::is_variable(a); })) {
        throw CompileError("condition is not ground: " + c.atom.key());
      }
      return Formula::atom(c.atom.key());
    case Condition::Kind::kEquals:
      return c.atom.args.at(0) == c.atom.args.at(1) ? Formula::top()
                                                    : Formula::bottom();
    case Condition::Kind::kNot:
      return ppltl::neg(parts.at(0));
    case Condition::Kind::kImply:
      return ppltl::implies(parts.at(0), parts.at(1));
    case Condition::Kind::kAnd:
      return ppltl::conj_all(parts);
    case Condition::Kind::kOr:
      return ppltl::disj_all(parts);
  }
  return Formula::bottom();
}

std::vector<std::string> lift_state(const CompiledProblem& c,
                                    const ppltl::State& original,
                                    const ppltl::SigmaAssignment& sigma) {
  std::vector<std::string> out(original.begin(), original.end());
  for (const auto& key : c.sigma_keys) {
    if (sigma.at(key)) out.push_back(c.mangling.sigma_id(key));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pastplan::compile
