#include "pastplan/ppltl/progression.h"

#include <functional>
#include <unordered_set>

namespace pastplan::ppltl {

SubformulaSet subformulas(const Formula& f) {
  SubformulaSet out;
  std::unordered_set<std::string> seen;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (seen.count(g.str())) return;
    for (const auto& c : g.children()) walk(c);
    if (seen.insert(g.str()).second) out.push_back(g);
  };
  walk(expand(f));
  return out;
}

std::vector<Formula> sigma_formulas(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<std::string> seen;
  auto add = [&](const Formula& g) {
    if (seen.insert(g.str()).second) out.push_back(g);
  };
  for (const auto& g : subformulas(f)) {
    if (g.op() == Op::kYesterday) add(g.lhs());
    if (g.op() == Op::kSince) add(g);
  }
  return out;
}

std::vector<std::string> sigma_propositions(const Formula& f) {
  std::vector<std::string> keys;
  for (const auto& g : sigma_formulas(f)) keys.push_back(g.str());
  return keys;
}

bool SigmaAssignment::at(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw MissingSigmaKey(key);
  return it->second;
}

SigmaAssignment initial_sigma(const Formula& f) {
  SigmaAssignment s;
  for (const auto& key : sigma_propositions(f)) s.set(key, false);
  return s;
}

namespace {

// val over the core connectives; `g` is already expanded.
bool val_core(const Formula& g, const SigmaAssignment& sigma, const State& s) {
  switch (g.op()) {
    case Op::kAtom:
      return s.count(g.atom_name()) != 0;
    case Op::kTrue:
      return true;
    case Op::kNot:
      return !val_core(g.lhs(), sigma, s);
    case Op::kAnd:
      return val_core(g.lhs(), sigma, s) && val_core(g.rhs(), sigma, s);
    case Op::kOr:
      return val_core(g.lhs(), sigma, s) || val_core(g.rhs(), sigma, s);
    case Op::kYesterday:
      return sigma.at(g.lhs().str());
    case Op::kSince:
      return val_core(g.rhs(), sigma, s) ||
             (val_core(g.lhs(), sigma, s) && sigma.at(g.str()));
    default:
      throw std::logic_error("val: formula not expanded: " + g.str());
  }
}

}  // namespace

bool val(const Formula& f, const SigmaAssignment& sigma, const State& s) {
  return val_core(expand(f), sigma, s);
}

SigmaAssignment step_sigma(const Formula& f, const SigmaAssignment& sigma_prev,
                           const State& s) {
  SigmaAssignment next;
  for (const auto& g : sigma_formulas(f)) {
    next.set(g.str(), val_core(g, sigma_prev, s));
  }
  return next;
}

ProgressionResult progress_trace(const Formula& f, const Trace& t) {
  const Formula core = expand(f);
  const std::vector<Formula> tracked = sigma_formulas(core);
  ProgressionResult r;
  r.sigma_history.reserve(t.size());
  r.sigma_history.push_back(initial_sigma(core));
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    SigmaAssignment next;
    for (const auto& g : tracked) {
      next.set(g.str(), val_core(g, r.sigma_history.back(), t[i]));
    }
    r.sigma_history.push_back(std::move(next));
  }
  r.verdict = val_core(core, r.sigma_history.back(), t.last());
  return r;
}

Formula to_pnf(const Formula& f) {
  switch (f.op()) {
    case Op::kAtom:
    case Op::kTrue:
    case Op::kFalse:
    case Op::kStart:
    case Op::kYesterday:
    case Op::kWeakYesterday:
      return f;
    case Op::kNot:
      return neg(to_pnf(f.lhs()));
    case Op::kAnd:
      return conj(to_pnf(f.lhs()), to_pnf(f.rhs()));
    case Op::kOr:
      return disj(to_pnf(f.lhs()), to_pnf(f.rhs()));
    case Op::kImplies:
      return implies(to_pnf(f.lhs()), to_pnf(f.rhs()));
    case Op::kSince:
      return disj(to_pnf(f.rhs()), conj(to_pnf(f.lhs()), yesterday(f)));
    case Op::kOnce:
      return disj(to_pnf(f.lhs()), yesterday(f));
    case Op::kHistorically:
      // WY, not Y: H f holds at instant 0 whenever f does.
      return conj(to_pnf(f.lhs()), weak_yesterday(f));
  }
  return f;
}

}  // namespace pastplan::ppltl
