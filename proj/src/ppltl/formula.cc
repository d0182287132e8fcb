#include "pastplan/ppltl/formula.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace pastplan::ppltl {

namespace {

bool is_keyword(std::string_view s) {
  return s == "true" || s == "false" || s == "start" || s == "Y" ||
         s == "WY" || s == "S" || s == "O" || s == "H";
}

std::size_t arity(Op op) {
  switch (op) {
    case Op::kAtom:
    case Op::kTrue:
    case Op::kFalse:
    case Op::kStart:
      return 0;
    case Op::kNot:
    case Op::kYesterday:
    case Op::kWeakYesterday:
    case Op::kOnce:
    case Op::kHistorically:
      return 1;
    case Op::kAnd:
    case Op::kOr:
    case Op::kImplies:
    case Op::kSince:
      return 2;
  }
  return 0;
}

std::string render(Op op, const std::string& atom,
                   const std::vector<Formula>& kids) {
  auto unary = [&](const char* sym) {
    return std::string("(") + sym + " " + kids[0].str() + ")";
  };
  auto binary = [&](const char* sym) {
    return "(" + kids[0].str() + " " + sym + " " + kids[1].str() + ")";
  };
  switch (op) {
    case Op::kAtom: return format_atom(atom);
    case Op::kTrue: return "true";
    case Op::kFalse: return "false";
    case Op::kStart: return "start";
    case Op::kNot: return unary("!");
    case Op::kYesterday: return unary("Y");
    case Op::kWeakYesterday: return unary("WY");
    case Op::kOnce: return unary("O");
    case Op::kHistorically: return unary("H");
    case Op::kAnd: return binary("&");
    case Op::kOr: return binary("|");
    case Op::kImplies: return binary("->");
    case Op::kSince: return binary("S");
  }
  return {};
}

}  // namespace

std::string format_atom(std::string_view name) {
  bool bare = !name.empty() && !is_keyword(name) &&
              (std::isalpha(static_cast<unsigned char>(name[0])) ||
               name[0] == '_');
  for (std::size_t i = 0; bare && i < name.size(); ++i) {
    const char c = name[i];
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
          c == '-')) {
      bare = false;
    } else if (c == '-' && i + 1 < name.size() && name[i + 1] == '>') {
      bare = false;
    }
  }
  if (bare) return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

Formula make(Op op, std::vector<Formula> children) {
  if (children.size() != arity(op)) {
    throw std::invalid_argument("formula: wrong number of operands");
  }
  auto node = std::make_shared<detail::Node>();
  node->op = op;
  node->children = std::move(children);
  node->text = render(op, node->atom, node->children);
  return Formula(std::move(node));
}

Formula Formula::atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("formula: empty atom name");
  auto node = std::make_shared<detail::Node>();
  node->op = Op::kAtom;
  node->atom = std::move(name);
  node->text = format_atom(node->atom);
  return Formula(std::move(node));
}

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
  static const Formula t = make(Op::kTrue, {});
  return t;
}
Formula Formula::bottom() {
  static const Formula f = make(Op::kFalse, {});
  return f;
}
Formula Formula::start() {
  static const Formula s = make(Op::kStart, {});
  return s;
}

bool Formula::is_temporal() const {
  switch (op()) {
    case Op::kYesterday:
    case Op::kWeakYesterday:
    case Op::kSince:
    case Op::kOnce:
    case Op::kHistorically:
    case Op::kStart:
      return true;
    default:
      return false;
  }
}

Formula neg(Formula f) { return make(Op::kNot, {std::move(f)}); }
Formula conj(Formula a, Formula b) {
  return make(Op::kAnd, {std::move(a), std::move(b)});
}
Formula disj(Formula a, Formula b) {
  return make(Op::kOr, {std::move(a), std::move(b)});
}
Formula implies(Formula a, Formula b) {
  return make(Op::kImplies, {std::move(a), std::move(b)});
}
Formula yesterday(Formula f) { return make(Op::kYesterday, {std::move(f)}); }
Formula weak_yesterday(Formula f) {
  return make(Op::kWeakYesterday, {std::move(f)});
}
Formula since(Formula a, Formula b) {
  return make(Op::kSince, {std::move(a), std::move(b)});
}
Formula once(Formula f) { return make(Op::kOnce, {std::move(f)}); }
Formula historically(Formula f) {
  return make(Op::kHistorically, {std::move(f)});
}

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::bottom();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

Formula yesterday_n(Formula f, int times) {
  for (int i = 0; i < times; ++i) f = yesterday(std::move(f));
  return f;
}

Formula weak_yesterday_n(Formula f, int times) {
  for (int i = 0; i < times; ++i) f = weak_yesterday(std::move(f));
  return f;
}

std::string format_formula(const Formula& f) { return f.str(); }

std::size_t formula_size(const Formula& f) {
  std::unordered_set<std::string> seen;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (!seen.insert(g.str()).second) return;
    for (const auto& c : g.children()) walk(c);
  };
  walk(f);
  return seen.size();
}

std::size_t tree_size(const Formula& f) {
  std::size_t n = 1;
  for (const auto& c : f.children()) n += tree_size(c);
  return n;
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.is_atom()) out.insert(g.atom_name());
    for (const auto& c : g.children()) walk(c);
  };
  walk(f);
  return {out.begin(), out.end()};
}

Formula expand(const Formula& f) {
  switch (f.op()) {
    case Op::kAtom:
    case Op::kTrue:
      return f;
    case Op::kFalse:
      return neg(Formula::top());
    case Op::kStart:
      return neg(yesterday(Formula::top()));
    case Op::kNot:
      return neg(expand(f.lhs()));
    case Op::kAnd:
      return conj(expand(f.lhs()), expand(f.rhs()));
    case Op::kOr:
      return disj(expand(f.lhs()), expand(f.rhs()));
    case Op::kImplies:
      return disj(neg(expand(f.lhs())), expand(f.rhs()));
    case Op::kYesterday:
      return yesterday(expand(f.lhs()));
    case Op::kWeakYesterday:
      return neg(yesterday(neg(expand(f.lhs()))));
    case Op::kSince:
      return since(expand(f.lhs()), expand(f.rhs()));
    case Op::kOnce:
      return since(Formula::top(), expand(f.lhs()));
    case Op::kHistorically:
      return neg(since(Formula::top(), neg(expand(f.lhs()))));
  }
  return f;
}

Formula resugar(const Formula& f) {
  auto is_once_core = [](const Formula& g) {
    return g.op() == Op::kSince && g.lhs().op() == Op::kTrue;
  };
  switch (f.op()) {
    case Op::kNot: {
      const Formula& inner = f.lhs();
      if (is_once_core(inner) && inner.rhs().op() == Op::kNot) {
        return historically(resugar(inner.rhs().lhs()));
      }
      return neg(resugar(inner));
    }
    case Op::kSince:
      if (is_once_core(f)) return once(resugar(f.rhs()));
      return since(resugar(f.lhs()), resugar(f.rhs()));
    default: {
      if (f.children().empty()) return f;
      std::vector<Formula> kids;
      kids.reserve(f.children().size());
      for (const auto& c : f.children()) kids.push_back(resugar(c));
      return make(f.op(), std::move(kids));
    }
  }
}

}  // namespace pastplan::ppltl
