#include "pastplan/pddl/grounding.h"

#include <algorithm>
#include <map>
#include <set>

namespace pastplan::pddl {

std::size_t State::hash() const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool GroundCondition::holds(const State& s) const {
  switch (kind) {
    case Kind::kTrue:
      return true;
    case Kind::kFalse:
      return false;
    case Kind::kFluent:
      return s.get(fluent);
    case Kind::kNot:
      return !parts[0].holds(s);
    case Kind::kAnd:
      for (const auto& p : parts) {
        if (!p.holds(s)) return false;
      }
      return true;
    case Kind::kOr:
      for (const auto& p : parts) {
        if (p.holds(s)) return true;
      }
      return false;
  }
  return false;
}

void GroundCondition::collect_fluents(std::vector<int>& out) const {
  if (kind == Kind::kFluent) out.push_back(fluent);
  for (const auto& p : parts) p.collect_fluents(out);
}

int GroundedProblem::fluent(const std::string& key) const {
  auto it = index.find(key);
  return it == index.end() ? -1 : it->second;
}

std::size_t GroundedProblem::num_axioms() const {
  std::size_t n = 0;
  for (const auto& s : strata) n += s.size();
  return n;
}

int GroundedProblem::action(const std::string& name) const {
  std::string n = name;
  if (n.size() >= 2 && n.front() == '(' && n.back() == ')') {
    n = n.substr(1, n.size() - 2);
  }
  auto it = std::lower_bound(
      actions.begin(), actions.end(), n,
      [](const GroundAction& a, const std::string& k) { return a.name < k; });
  return it != actions.end() && it->name == n
             ? static_cast<int>(it - actions.begin())
             : -1;
}

std::vector<std::string> GroundedProblem::true_atoms(const State& s,
                                                     bool with_derived) const {
  std::vector<std::string> out;
  const int limit = with_derived ? static_cast<int>(fluents.size()) : num_base;
  for (int i = 0; i < limit; ++i) {
    if (s.get(i)) out.push_back(fluents[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

State GroundedProblem::make_state(const std::vector<std::string>& atoms) const {
  State s(fluents.size());
  for (const auto& a : atoms) {
    const int f = fluent(a);
    if (f < 0) throw GroundingError("unknown ground atom " + a);
    if (is_derived(f)) throw GroundingError("derived atom in base state: " + a);
    s.set(f, true);
  }
  return eval_state(*this, std::move(s));
}

namespace {

using GC = GroundCondition;
using Binding = std::map<std::string, std::string>;

GC constant(bool v) { return {v ? GC::Kind::kTrue : GC::Kind::kFalse, -1, {}}; }

GC negate(GC c) {
  if (c.kind == GC::Kind::kTrue) return constant(false);
  if (c.kind == GC::Kind::kFalse) return constant(true);
  if (c.kind == GC::Kind::kNot) return std::move(c.parts[0]);
  return {GC::Kind::kNot, -1, {std::move(c)}};
}

GC junction(bool is_and, std::vector<GC> parts) {
  const GC::Kind absorbing = is_and ? GC::Kind::kFalse : GC::Kind::kTrue;
  const GC::Kind neutral = is_and ? GC::Kind::kTrue : GC::Kind::kFalse;
  std::vector<GC> kept;
  for (auto& p : parts) {
    if (p.kind == absorbing) return constant(!is_and);
    if (p.kind == neutral) continue;
    kept.push_back(std::move(p));
  }
  if (kept.empty()) return constant(is_and);
  if (kept.size() == 1) return std::move(kept[0]);
  return {is_and ? GC::Kind::kAnd : GC::Kind::kOr, -1, std::move(kept)};
}

class Grounder {
 public:
  Grounder(const Domain& d, const Problem& p) : d_(d), p_(p) {}

  GroundedProblem run() {
    for (const auto& c : d_.constants) objects_.push_back(c);
    for (const auto& o : p_.objects) objects_.push_back(o);
    find_statics();
    build_fluent_table();
    for (const auto& a : p_.init) init_.insert(a.key());
    gp_.init = State(gp_.fluents.size());
    for (const auto& key : init_) {
      const int f = gp_.fluent(key);
      if (f < 0) throw GroundingError("init atom is not a fluent: " + key);
      gp_.init.set(f, true);
    }
    ground_axioms();
    ground_actions();
    if (p_.goal) gp_.goal = condition(*p_.goal, {});
    gp_.init = eval_state(gp_, gp_.init);
    return std::move(gp_);
  }

 private:
  void find_statics() {
    std::set<std::string> changed;
    for (const auto& a : d_.actions) {
      for (const auto& o : a.outcomes) {
        for (const auto& item : o.items) {
          for (const auto& l : item.literals) changed.insert(l.atom.predicate);
        }
      }
    }
    for (const auto& p : d_.predicates) {
      if (!changed.count(p.name)) statics_.insert(p.name);
    }
  }

  // Every type-consistent tuple of objects for `params`.
  std::vector<std::vector<std::string>> tuples(
      const std::vector<TypedName>& params) const {
    std::vector<std::vector<std::string>> out{{}};
    for (const auto& prm : params) {
      std::vector<std::vector<std::string>> next;
      for (const auto& t : out) {
        for (const auto& o : objects_) {
          if (!d_.is_subtype(o.type, prm.type)) continue;
          auto ext = t;
          ext.push_back(o.name);
          next.push_back(std::move(ext));
        }
      }
      out = std::move(next);
    }
    return out;
  }

  void add_fluent(const std::string& key) {
    if (gp_.index.emplace(key, static_cast<int>(gp_.fluents.size())).second) {
      gp_.fluents.push_back(key);
    }
  }

  void build_fluent_table() {
    for (const auto& p : d_.predicates) {
      for (const auto& t : tuples(p.params)) add_fluent(Atom{p.name, t}.key());
    }
    gp_.num_base = static_cast<int>(gp_.fluents.size());
    for (const auto& dp : d_.derived) {
      for (const auto& t : tuples(dp.head.params)) {
        add_fluent(Atom{dp.head.name, t}.key());
      }
    }
  }

  static std::string resolve(const std::string& term, const Binding& b) {
    if (!is_variable(term)) return term;
    auto it = b.find(term);
    if (it == b.end()) throw GroundingError("unbound variable " + term);
    return it->second;
  }

  Atom instantiate(const Atom& a, const Binding& b) const {
    Atom out{a.predicate, {}};
    for (const auto& t : a.args) out.args.push_back(resolve(t, b));
    return out;
  }

  GC condition(const Condition& c, const Binding& b) const {
    switch (c.kind) {
      case Condition::Kind::kAtom: {
        const Atom a = instantiate(c.atom, b);
        const std::string key = a.key();
        if (statics_.count(a.predicate)) return constant(init_.count(key) > 0);
        const int f = gp_.fluent(key);
        // Not type-consistent with the declaration: can never hold.
        if (f < 0) return constant(false);
        return {GC::Kind::kFluent, f, {}};
      }
      case Condition::Kind::kEquals:
        return constant(resolve(c.atom.args.at(0), b) ==
                        resolve(c.atom.args.at(1), b));
      case Condition::Kind::kNot:
        return negate(condition(c.parts.at(0), b));
      case Condition::Kind::kImply: {
        std::vector<GC> parts;
        parts.push_back(negate(condition(c.parts.at(0), b)));
        parts.push_back(condition(c.parts.at(1), b));
        return junction(false, std::move(parts));
      }
      case Condition::Kind::kAnd:
      case Condition::Kind::kOr: {
        std::vector<GC> parts;
        for (const auto& p : c.parts) parts.push_back(condition(p, b));
        return junction(c.kind == Condition::Kind::kAnd, std::move(parts));
      }
    }
    return constant(false);
  }

  static void dependencies(const Condition& c, bool positive,
                           std::vector<std::pair<std::string, bool>>& out) {
    switch (c.kind) {
      case Condition::Kind::kAtom:
        out.emplace_back(c.atom.predicate, positive);
        return;
      case Condition::Kind::kEquals:
        return;
      case Condition::Kind::kNot:
        dependencies(c.parts.at(0), !positive, out);
        return;
      case Condition::Kind::kImply:
        dependencies(c.parts.at(0), !positive, out);
        dependencies(c.parts.at(1), positive, out);
        return;
      case Condition::Kind::kAnd:
      case Condition::Kind::kOr:
        for (const auto& p : c.parts) dependencies(p, positive, out);
        return;
    }
  }

  // Lifted stratification: a head sits at or above every derived predicate
  // it uses, strictly above those it uses negatively.
  std::map<std::string, int> stratify() const {
    std::map<std::string, int> level;
    for (const auto& dp : d_.derived) level[dp.head.name] = 0;
    const int limit = static_cast<int>(d_.derived.size());
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& dp : d_.derived) {
        std::vector<std::pair<std::string, bool>> deps;
        dependencies(dp.body, true, deps);
        int& h = level[dp.head.name];
        for (const auto& [pred, pos] : deps) {
          auto it = level.find(pred);
          if (it == level.end()) continue;
          const int need = it->second + (pos ? 0 : 1);
          if (h < need) {
            h = need;
            changed = true;
            if (h > limit) {
              throw GroundingError("derived predicates are not stratifiable (" +
                                   dp.head.name + " depends negatively on "
                                   "itself)");
            }
          }
        }
      }
    }
    return level;
  }

  void ground_axioms() {
    const auto level = stratify();
    int top = -1;
    for (const auto& [name, l] : level) top = std::max(top, l);
    gp_.strata.assign(top + 1, {});
    for (const auto& dp : d_.derived) {
      for (const auto& t : tuples(dp.head.params)) {
        Binding b;
        for (std::size_t i = 0; i < t.size(); ++i) {
          b[dp.head.params[i].name] = t[i];
        }
        gp_.strata[level.at(dp.head.name)].push_back(
            {gp_.fluent(Atom{dp.head.name, t}.key()), condition(dp.body, b)});
      }
    }
    std::erase_if(gp_.strata, [](const auto& s) { return s.empty(); });
  }

  void ground_actions() {
    for (const auto& a : d_.actions) {
      for (const auto& t : tuples(a.params)) {
        Binding b;
        for (std::size_t i = 0; i < t.size(); ++i) b[a.params[i].name] = t[i];
        GC pre = condition(a.precondition, b);
        if (pre.kind == GC::Kind::kFalse) continue;
        GroundAction ga{Atom{a.name, t}.key(), a.name, t, std::move(pre), {}};
        for (const auto& o : a.outcomes) {
          ga.outcomes.push_back(outcome(o, b, ga.name));
        }
        gp_.actions.push_back(std::move(ga));
      }
    }
    std::sort(gp_.actions.begin(), gp_.actions.end(),
              [](const GroundAction& x, const GroundAction& y) {
                return x.name < y.name;
              });
  }

  GroundOutcome outcome(const Outcome& o, const Binding& b,
                        const std::string& action) const {
    GroundOutcome out;
    std::set<int> plain_adds, plain_dels;
    for (const auto& item : o.items) {
      GroundEffect e{condition(item.condition, b), {}, {}};
      if (e.condition.kind == GC::Kind::kFalse) continue;
      for (const auto& l : item.literals) {
        const int f = gp_.fluent(instantiate(l.atom, b).key());
        if (f < 0) {
          throw GroundingError("effect of " + action + " on ill-typed atom " +
                               instantiate(l.atom, b).key());
        }
        (l.positive ? e.adds : e.deletes).push_back(f);
      }
      if (e.condition.kind == GC::Kind::kTrue) {
        plain_adds.insert(e.adds.begin(), e.adds.end());
        plain_dels.insert(e.deletes.begin(), e.deletes.end());
      }
      out.effects.push_back(std::move(e));
    }
    for (int f : plain_adds) {
      if (plain_dels.count(f)) {
        throw GroundingError("action " + action + " both adds and deletes " +
                             gp_.fluents[f]);
      }
    }
    return out;
  }

  const Domain& d_;
  const Problem& p_;
  std::vector<TypedName> objects_;
  std::set<std::string> statics_;
  std::set<std::string> init_;
  GroundedProblem gp_;
};

}  // namespace

GroundedProblem ground(const Domain& domain, const Problem& problem) {
  return Grounder(domain, problem).run();
}

State eval_state(const GroundedProblem& gp, State s) {
  s = base_part(gp, std::move(s));
  for (const auto& stratum : gp.strata) {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& ax : stratum) {
        if (!s.get(ax.head) && ax.body.holds(s)) {
          s.set(ax.head, true);
          changed = true;
        }
      }
    }
  }
  return s;
}

std::vector<int> applicable(const GroundedProblem& gp, const State& s) {
  std::vector<int> out;
  for (std::size_t i = 0; i < gp.actions.size(); ++i) {
    if (gp.actions[i].precondition.holds(s)) out.push_back(static_cast<int>(i));
  }
  return out;
}

State base_part(const GroundedProblem& gp, State s) {
  for (std::size_t f = gp.num_base; f < gp.fluents.size(); ++f) s.set(f, false);
  return s;
}

std::vector<State> apply(const GroundedProblem& gp, const State& s, int action,
                         bool close) {
  const GroundAction& a = gp.actions.at(action);
  if (!a.precondition.holds(s)) {
    throw GroundingError("action (" + a.name + ") is not applicable");
  }
  std::vector<State> out;
  out.reserve(a.outcomes.size());
  std::vector<int> adds, dels;
  for (const auto& o : a.outcomes) {
    adds.clear();
    dels.clear();
    for (const auto& e : o.effects) {
      if (!e.condition.holds(s)) continue;
      adds.insert(adds.end(), e.adds.begin(), e.adds.end());
      dels.insert(dels.end(), e.deletes.begin(), e.deletes.end());
    }
    State next = s;
    for (int f : dels) next.set(f, false);
    for (int f : adds) {
      if (std::find(dels.begin(), dels.end(), f) != dels.end()) {
        throw GroundingError("action (" + a.name + ") both adds and deletes " +
                             gp.fluents[f]);
      }
      next.set(f, true);
    }
    out.push_back(close ? eval_state(gp, std::move(next))
                        : base_part(gp, std::move(next)));
  }
  return out;
}

}  // namespace pastplan::pddl
