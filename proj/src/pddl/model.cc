#include "pastplan/pddl/model.h"

#include <algorithm>

namespace pastplan::pddl {

std::string Atom::key() const {
  std::string out = predicate;
  for (const auto& a : args) out += " " + a;
  return out;
}

namespace {

template <typename T, typename Name>
const T* find_named(const std::vector<T>& items, const std::string& name,
                    Name name_of) {
  auto it = std::find_if(items.begin(), items.end(),
                         [&](const T& x) { return name_of(x) == name; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

const PredicateDecl* Domain::find_predicate(const std::string& n) const {
  return find_named(predicates, n, [](const PredicateDecl& p) { return p.name; });
}

const DerivedPredicate* Domain::find_derived(const std::string& n) const {
  return find_named(derived, n,
                    [](const DerivedPredicate& d) { return d.head.name; });
}

const ActionSchema* Domain::find_action(const std::string& n) const {
  return find_named(actions, n, [](const ActionSchema& a) { return a.name; });
}

bool Domain::is_subtype(const std::string& type,
                        const std::string& ancestor) const {
  std::string cur = type;
  for (std::size_t steps = 0; steps <= types.size() + 1; ++steps) {
    if (cur == ancestor) return true;
    if (cur == kRootType) return false;
    const TypedName* t =
        find_named(types, cur, [](const TypedName& x) { return x.name; });
    if (!t) return false;
    cur = t->type;
  }
  return false;
}

const std::vector<std::string>& supported_requirements() {
  static const std::vector<std::string> flags{
      ":strips",           ":typing",           ":negative-preconditions",
      ":conditional-effects", ":derived-predicates", ":non-deterministic",
      ":equality"};
  return flags;
}

}  // namespace pastplan::pddl
