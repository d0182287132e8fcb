#include "pastplan/ppltl/semantics.h"

#include <map>
#include <stdexcept>
#include <utility>

namespace pastplan::ppltl {

Trace::Trace(std::vector<State> states) : states_(std::move(states)) {
  if (states_.empty()) throw std::invalid_argument("trace must be non-empty");
}

Trace Trace::prefix(std::size_t end) const {
  return Trace(std::vector<State>(states_.begin(), states_.begin() + end));
}

namespace {

// τ,i ⊨ f, clause by clause. Results are memoized per (node, instant) so
// nested Since stays polynomial; the memo does not change what is computed.
class Evaluator {
 public:
  explicit Evaluator(const Trace& t) : t_(t) {}

  bool holds(const Formula& f, std::size_t i) {
    const auto key = std::make_pair(f.id(), i);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool v = compute(f, i);
    memo_.emplace(key, v);
    return v;
  }

 private:
  bool compute(const Formula& f, std::size_t i) {
    switch (f.op()) {
      case Op::kAtom:
        return t_[i].count(f.atom_name()) != 0;
      case Op::kTrue:
        return true;
      case Op::kFalse:
        return false;
      case Op::kNot:
        return !holds(f.lhs(), i);
      case Op::kAnd:
        return holds(f.lhs(), i) && holds(f.rhs(), i);
      case Op::kOr:
        return holds(f.lhs(), i) || holds(f.rhs(), i);
      case Op::kImplies:
        return !holds(f.lhs(), i) || holds(f.rhs(), i);
      case Op::kYesterday:
        return i >= 1 && holds(f.lhs(), i - 1);
      case Op::kWeakYesterday:
        return i == 0 || holds(f.lhs(), i - 1);
      case Op::kStart:
        return i == 0;
      case Op::kSince:
        // exists k <= i: rhs at k and lhs at every j in (k, i]
        for (std::size_t k = 0; k <= i; ++k) {
          if (!holds(f.rhs(), k)) continue;
          bool all = true;
          for (std::size_t j = k + 1; j <= i && all; ++j) {
            all = holds(f.lhs(), j);
          }
          if (all) return true;
        }
        return false;
      case Op::kOnce:
        for (std::size_t k = 0; k <= i; ++k) {
          if (holds(f.lhs(), k)) return true;
        }
        return false;
      case Op::kHistorically:
        for (std::size_t k = 0; k <= i; ++k) {
          if (!holds(f.lhs(), k)) return false;
        }
        return true;
    }
    return false;
  }

  const Trace& t_;
  std::map<std::pair<const void*, std::size_t>, bool> memo_;
};

}  // namespace

bool eval_at(const Formula& f, const Trace& t, std::size_t i) {
  if (i >= t.size()) throw std::out_of_range("instant beyond trace end");
  return Evaluator(t).holds(f, i);
}

bool eval_trace(const Formula& f, const Trace& t) {
  return eval_at(f, t, t.size() - 1);
}

}  // namespace pastplan::ppltl
