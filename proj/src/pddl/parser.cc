#include "pastplan/pddl/parser.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

namespace pastplan::pddl {

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" +
                                        std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  bool is(std::string_view word) const { return !is_list && atom == word; }
  std::string head() const {
    return is_list && !items.empty() && !items[0].is_list ? items[0].atom : "";
  }
};

[[noreturn]] void fail(const SExpr& at, const std::string& what) {
  throw ParseError(at.line, at.column, what);
}

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  SExpr read_document() {
    skip();
    if (pos_ >= src_.size()) throw ParseError(line_, col_, "empty input");
    SExpr e = read();
    skip();
    if (pos_ < src_.size()) {
      throw ParseError(line_, col_, "trailing text after top-level form");
    }
    return e;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.column = col_;
    if (src_[pos_] == '(') {
      advance();
      e.is_list = true;
      for (;;) {
        skip();
        if (pos_ >= src_.size()) {
          throw ParseError(e.line, e.column, "unbalanced '('");
        }
        if (src_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (src_[pos_] == ')') throw ParseError(line_, col_, "unexpected ')'");
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
          c == ')' || c == ';') {
        break;
      }
      e.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      advance();
    }
    return e;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const SExpr& expect_list(const SExpr& e, const std::string& what) {
  if (!e.is_list) fail(e, "expected " + what);
  return e;
}

const std::string& expect_name(const SExpr& e, const std::string& what) {
  if (e.is_list || e.atom.empty()) fail(e, "expected " + what);
  return e.atom;
}

// `a b - t c - u d` → typed names; untyped trailing names get `object`.
std::vector<TypedName> typed_list(const SExpr& list, std::size_t from,
                                  bool variables) {
  std::vector<TypedName> out;
  std::size_t group_start = 0;
  for (std::size_t i = from; i < list.items.size(); ++i) {
    const SExpr& it = list.items[i];
    if (it.is("-")) {
      if (i + 1 >= list.items.size()) fail(it, "expected type after '-'");
      const std::string& type = expect_name(list.items[i + 1], "type name");
      if (out.size() == group_start) fail(it, "'-' without preceding names");
      for (std::size_t k = group_start; k < out.size(); ++k) out[k].type = type;
      group_start = out.size();
      ++i;
      continue;
    }
    const std::string& name = expect_name(it, "name");
    if (variables != is_variable(name)) {
      fail(it, variables ? "expected a variable, got " + name
                         : "expected an object name, got " + name);
    }
    out.push_back({name, kRootType});
  }
  return out;
}

using Scope = std::map<std::string, std::string>;  // variable → type

class DomainBuilder {
 public:
  Domain build(const SExpr& doc) {
    expect_list(doc, "(define ...)");
    if (doc.head() != "define" || doc.items.size() < 2) {
      fail(doc, "expected (define (domain NAME) ...)");
    }
    const SExpr& name = expect_list(doc.items[1], "(domain NAME)");
    if (name.head() != "domain" || name.items.size() != 2) {
      fail(name, "expected (domain NAME)");
    }
    d_.name = expect_name(name.items[1], "domain name");

    // Declarations first so actions and axioms can refer to anything.
    std::vector<const SExpr*> derived, actions;
    for (std::size_t i = 2; i < doc.items.size(); ++i) {
      const SExpr& sec = expect_list(doc.items[i], "domain section");
      const std::string h = sec.head();
      if (h == ":requirements") {
        requirements(sec);
      } else if (h == ":types") {
        types(sec);
      } else if (h == ":constants") {
        d_.constants = typed_list(sec, 1, false);
      } else if (h == ":predicates") {
        predicates(sec);
      } else if (h == ":derived") {
        derived.push_back(&sec);
      } else if (h == ":action") {
        actions.push_back(&sec);
      } else {
        fail(sec, "unsupported domain section " + h);
      }
    }
    for (const auto& c : d_.constants) check_type(c.type, doc);
    for (const SExpr* s : derived) derived_predicate(*s);
    for (const SExpr* s : actions) action(*s);
    return std::move(d_);
  }

 private:
  void requirements(const SExpr& sec) {
    const auto& ok = supported_requirements();
    for (std::size_t i = 1; i < sec.items.size(); ++i) {
      const std::string& r = expect_name(sec.items[i], "requirement flag");
      if (std::find(ok.begin(), ok.end(), r) == ok.end()) {
        fail(sec.items[i], "unsupported requirement " + r);
      }
      d_.requirements.push_back(r);
    }
  }

  void types(const SExpr& sec) {
    d_.types = typed_list(sec, 1, false);
    std::set<std::string> known{kRootType};
    for (const auto& t : d_.types) known.insert(t.name);
    for (const auto& t : d_.types) {
      if (!known.count(t.type)) fail(sec, "undeclared parent type " + t.type);
    }
    // Reject cycles in the hierarchy.
    for (const auto& t : d_.types) {
      std::string cur = t.name;
      for (std::size_t steps = 0; cur != kRootType; ++steps) {
        if (steps > d_.types.size()) fail(sec, "cyclic type " + t.name);
        auto it = std::find_if(d_.types.begin(), d_.types.end(),
                               [&](const TypedName& x) { return x.name == cur; });
        cur = it == d_.types.end() ? kRootType : it->type;
      }
    }
  }

  void check_type(const std::string& type, const SExpr& at) {
    if (type == kRootType) return;
    for (const auto& t : d_.types) {
      if (t.name == type) return;
    }
    fail(at, "undeclared type " + type);
  }

  void predicates(const SExpr& sec) {
    for (std::size_t i = 1; i < sec.items.size(); ++i) {
      const SExpr& p = expect_list(sec.items[i], "predicate declaration");
      PredicateDecl decl{expect_name(p.items.at(0), "predicate name"),
                         typed_list(p, 1, true)};
      for (const auto& prm : decl.params) check_type(prm.type, p);
      if (d_.find_predicate(decl.name)) {
        fail(p, "duplicate predicate " + decl.name);
      }
      d_.predicates.push_back(std::move(decl));
    }
  }

  Scope scope_of(const std::vector<TypedName>& params, const SExpr& at) {
    Scope s;
    for (const auto& p : params) {
      check_type(p.type, at);
      if (!s.emplace(p.name, p.type).second) {
        fail(at, "duplicate parameter " + p.name);
      }
    }
    return s;
  }

  void derived_predicate(const SExpr& sec) {
    if (sec.items.size() != 3) fail(sec, "expected (:derived (HEAD) BODY)");
    const SExpr& h = expect_list(sec.items[1], "derived predicate head");
    PredicateDecl head{expect_name(h.items.at(0), "predicate name"),
                       typed_list(h, 1, true)};
    if (d_.find_predicate(head.name)) {
      fail(h, head.name + " is both a basic and a derived predicate");
    }
    // Several rules for one head are merged into a disjunction.
    Scope scope = scope_of(head.params, h);
    pending_derived_.push_back(head.name);
    Condition body = condition(sec.items[2], scope);
    for (auto& existing : d_.derived) {
      if (existing.head.name == head.name) {
        if (existing.head.params.size() != head.params.size()) {
          fail(h, "derived predicate " + head.name + " redeclared");
        }
        existing.body = Condition::any({existing.body, body});
        return;
      }
    }
    d_.derived.push_back({std::move(head), std::move(body)});
  }

  void action(const SExpr& sec) {
    ActionSchema a;
    a.name = expect_name(sec.items.at(1), "action name");
    if (d_.find_action(a.name)) fail(sec, "duplicate action " + a.name);
    const SExpr* pre = nullptr;
    const SExpr* eff = nullptr;
    for (std::size_t i = 2; i < sec.items.size(); i += 2) {
      const std::string& key = expect_name(sec.items[i], "action keyword");
      if (i + 1 >= sec.items.size()) fail(sec.items[i], "missing value");
      const SExpr& v = sec.items[i + 1];
      if (key == ":parameters") {
        a.params = typed_list(expect_list(v, "parameter list"), 0, true);
      } else if (key == ":precondition") {
        pre = &v;
      } else if (key == ":effect") {
        eff = &v;
      } else {
        fail(sec.items[i], "unsupported action keyword " + key);
      }
    }
    Scope scope = scope_of(a.params, sec);
    a.precondition = pre ? condition(*pre, scope) : Condition::truth();
    a.outcomes = eff ? effect(*eff, scope) : std::vector<Outcome>{Outcome{}};
    d_.actions.push_back(std::move(a));
  }

  bool is_derived_name(const std::string& p) const {
    return d_.find_derived(p) ||
           std::find(pending_derived_.begin(), pending_derived_.end(), p) !=
               pending_derived_.end();
  }

  std::string term_type(const std::string& term, const Scope& scope,
                        const SExpr& at) {
    if (is_variable(term)) {
      auto it = scope.find(term);
      if (it == scope.end()) fail(at, "unbound variable " + term);
      return it->second;
    }
    for (const auto& c : d_.constants) {
      if (c.name == term) return c.type;
    }
    fail(at, "undeclared constant " + term);
  }

  Atom atom(const SExpr& e, const Scope& scope, bool allow_derived) {
    expect_list(e, "atom");
    Atom a{expect_name(e.items.at(0), "predicate name"), {}};
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      a.args.push_back(expect_name(e.items[i], "term"));
    }
    std::vector<TypedName> params;
    if (const auto* p = d_.find_predicate(a.predicate)) {
      params = p->params;
    } else if (const auto* dp = d_.find_derived(a.predicate)) {
      if (!allow_derived) fail(e, "effects may not change derived " + a.predicate);
      params = dp->head.params;
    } else if (is_derived_name(a.predicate)) {
      if (!allow_derived) fail(e, "effects may not change derived " + a.predicate);
      // Declared later in the file; arity checked once all heads exist.
      return a;
    } else {
      fail(e, "undeclared predicate " + a.predicate);
    }
    if (params.size() != a.args.size()) {
      fail(e, a.predicate + " expects " + std::to_string(params.size()) +
                  " argument(s), got " + std::to_string(a.args.size()));
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      const std::string t = term_type(a.args[i], scope, e);
      if (!d_.is_subtype(t, params[i].type) &&
          !d_.is_subtype(params[i].type, t)) {
        fail(e, "argument " + a.args[i] + " of " + a.predicate +
                    " has type " + t + ", expected " + params[i].type);
      }
    }
    return a;
  }

  Condition condition(const SExpr& e, const Scope& scope) {
    expect_list(e, "condition");
    const std::string h = e.head();
    if (h == "and" || h == "or") {
      Condition c{h == "and" ? Condition::Kind::kAnd : Condition::Kind::kOr,
                  {}, {}};
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        c.parts.push_back(condition(e.items[i], scope));
      }
      return c;
    }
    if (h == "not") {
      if (e.items.size() != 2) fail(e, "not takes one argument");
      return Condition::negation(condition(e.items[1], scope));
    }
    if (h == "imply") {
      if (e.items.size() != 3) fail(e, "imply takes two arguments");
      return {Condition::Kind::kImply, {},
              {condition(e.items[1], scope), condition(e.items[2], scope)}};
    }
    if (h == "=") {
      if (e.items.size() != 3) fail(e, "= takes two arguments");
      Atom eq{"=", {expect_name(e.items[1], "term"),
                    expect_name(e.items[2], "term")}};
      for (const auto& t : eq.args) term_type(t, scope, e);
      return {Condition::Kind::kEquals, std::move(eq), {}};
    }
    if (h == "exists" || h == "forall") {
      fail(e, "quantified conditions are not supported");
    }
    return Condition::of(atom(e, scope, true));
  }

  std::vector<Outcome> effect(const SExpr& e, const Scope& scope) {
    expect_list(e, "effect");
    if (e.head() == "oneof") return oneof(e, scope, {});
    if (e.head() == "and") {
      const SExpr* branch = nullptr;
      std::vector<const SExpr*> common;
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        if (e.items[i].head() == "oneof") {
          if (branch) fail(e.items[i], "at most one oneof per effect");
          branch = &e.items[i];
        } else {
          common.push_back(&e.items[i]);
        }
      }
      if (branch) return oneof(*branch, scope, common);
    }
    Outcome o;
    collect(e, scope, o);
    return {normalize(std::move(o))};
  }

  std::vector<Outcome> oneof(const SExpr& e, const Scope& scope,
                             const std::vector<const SExpr*>& common) {
    if (e.items.size() < 2) fail(e, "oneof needs at least one outcome");
    std::vector<Outcome> out;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      Outcome o;
      for (const SExpr* c : common) collect(*c, scope, o);
      collect(e.items[i], scope, o);
      out.push_back(normalize(std::move(o)));
    }
    return out;
  }

  void collect(const SExpr& e, const Scope& scope, Outcome& o) {
    expect_list(e, "effect");
    const std::string h = e.head();
    if (h == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        collect(e.items[i], scope, o);
      }
    } else if (h == "when") {
      if (e.items.size() != 3) fail(e, "when takes a condition and an effect");
      EffectItem item{condition(e.items[1], scope), {}};
      literals(e.items[2], scope, item.literals);
      o.items.push_back(std::move(item));
    } else if (h == "oneof") {
      fail(e, "oneof is only allowed at the top level of an effect");
    } else if (h == "forall") {
      fail(e, "quantified effects are not supported");
    } else {
      EffectItem item{Condition::truth(), {}};
      literals(e, scope, item.literals);
      o.items.push_back(std::move(item));
    }
  }

  void literals(const SExpr& e, const Scope& scope, std::vector<Literal>& out) {
    expect_list(e, "effect literal");
    const std::string h = e.head();
    if (h == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        literals(e.items[i], scope, out);
      }
    } else if (h == "not") {
      if (e.items.size() != 2) fail(e, "not takes one argument");
      out.push_back({atom(e.items[1], scope, false), false});
    } else if (h == "when" || h == "oneof" || h == "forall") {
      fail(e, h + " is not allowed here");
    } else {
      out.push_back({atom(e, scope, false), true});
    }
  }

  // Unconditional literals first, merged into one item; then the `when`s.
  static Outcome normalize(Outcome o) {
    Outcome out;
    EffectItem plain{Condition::truth(), {}};
    for (auto& item : o.items) {
      if (item.condition.is_truth()) {
        for (auto& l : item.literals) plain.literals.push_back(std::move(l));
      } else {
        out.items.push_back(std::move(item));
      }
    }
    if (!plain.literals.empty()) out.items.insert(out.items.begin(), plain);
    return out;
  }

  Domain d_;
  std::vector<std::string> pending_derived_;
};

}  // namespace

Domain parse_domain(std::string_view text) {
  const SExpr doc = Reader(text).read_document();
  Domain d = DomainBuilder().build(doc);
  // Arity of forward references to derived predicates.
  std::function<void(const Condition&)> check = [&](const Condition& c) {
    if (c.kind == Condition::Kind::kAtom) {
      const auto* dp = d.find_derived(c.atom.predicate);
      if (dp && dp->head.params.size() != c.atom.args.size()) {
        throw ParseError(0, 0, c.atom.predicate + " expects " +
                                   std::to_string(dp->head.params.size()) +
                                   " argument(s)");
      }
    }
    for (const auto& p : c.parts) check(p);
  };
  for (const auto& dp : d.derived) check(dp.body);
  for (const auto& a : d.actions) {
    check(a.precondition);
    for (const auto& o : a.outcomes) {
      for (const auto& it : o.items) check(it.condition);
    }
  }
  return d;
}

namespace {

class ProblemBuilder {
 public:
  explicit ProblemBuilder(const Domain& d) : d_(d) {}

  Problem build(const SExpr& doc) {
    expect_list(doc, "(define ...)");
    if (doc.head() != "define" || doc.items.size() < 2) {
      fail(doc, "expected (define (problem NAME) ...)");
    }
    const SExpr& name = expect_list(doc.items[1], "(problem NAME)");
    if (name.head() != "problem" || name.items.size() != 2) {
      fail(name, "expected (problem NAME)");
    }
    p_.name = expect_name(name.items[1], "problem name");
    for (std::size_t i = 2; i < doc.items.size(); ++i) {
      const SExpr& sec = expect_list(doc.items[i], "problem section");
      const std::string h = sec.head();
      if (h == ":domain") {
        p_.domain_name = expect_name(sec.items.at(1), "domain name");
        if (p_.domain_name != d_.name) {
          fail(sec, "problem is for domain " + p_.domain_name + ", not " +
                        d_.name);
        }
      } else if (h == ":objects") {
        p_.objects = typed_list(sec, 1, false);
      } else if (h == ":init") {
        for (std::size_t k = 1; k < sec.items.size(); ++k) {
          p_.init.push_back(ground_atom(sec.items[k]));
        }
      } else if (h == ":goal") {
        if (sec.items.size() != 2) fail(sec, "expected (:goal CONDITION)");
        p_.goal = goal(sec.items[1]);
      } else if (h == ":requirements") {
        // accepted and ignored; the domain's flags govern
      } else {
        fail(sec, "unsupported problem section " + h);
      }
    }
    try {
      validate_problem(p_, d_);
    } catch (const ParseError& e) {
      throw ParseError(doc.line, doc.column, e.what());
    }
    return std::move(p_);
  }

 private:
  Atom ground_atom(const SExpr& e) {
    expect_list(e, "ground atom");
    Atom a{expect_name(e.items.at(0), "predicate name"), {}};
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const std::string& t = expect_name(e.items[i], "object name");
      if (is_variable(t)) fail(e.items[i], "variables are not allowed here");
      a.args.push_back(t);
    }
    return a;
  }

  Condition goal(const SExpr& e) {
    expect_list(e, "condition");
    const std::string h = e.head();
    if (h == "and" || h == "or") {
      Condition c{h == "and" ? Condition::Kind::kAnd : Condition::Kind::kOr,
                  {}, {}};
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        c.parts.push_back(goal(e.items[i]));
      }
      return c;
    }
    if (h == "not") {
      if (e.items.size() != 2) fail(e, "not takes one argument");
      return Condition::negation(goal(e.items[1]));
    }
    if (h == "imply") {
      if (e.items.size() != 3) fail(e, "imply takes two arguments");
      return {Condition::Kind::kImply, {}, {goal(e.items[1]), goal(e.items[2])}};
    }
    if (h == "=") {
      if (e.items.size() != 3) fail(e, "= takes two arguments");
      return {Condition::Kind::kEquals,
              Atom{"=", {expect_name(e.items[1], "object"),
                         expect_name(e.items[2], "object")}},
              {}};
    }
    return Condition::of(ground_atom(e));
  }

  const Domain& d_;
  Problem p_;
};

}  // namespace

void validate_problem(const Problem& p, const Domain& d) {
  std::map<std::string, std::string> objects;
  for (const auto& c : d.constants) objects[c.name] = c.type;
  for (const auto& o : p.objects) {
    if (o.type != kRootType &&
        std::none_of(d.types.begin(), d.types.end(),
                     [&](const TypedName& t) { return t.name == o.type; })) {
      throw ParseError(0, 0, "object " + o.name + " has undeclared type " +
                                 o.type);
    }
    if (!objects.emplace(o.name, o.type).second) {
      throw ParseError(0, 0, "duplicate object " + o.name);
    }
  }
  auto check_atom = [&](const Atom& a, bool allow_derived) {
    const std::vector<TypedName>* params = nullptr;
    if (const auto* pd = d.find_predicate(a.predicate)) {
      params = &pd->params;
    } else if (const auto* dp = d.find_derived(a.predicate)) {
      if (!allow_derived) {
        throw ParseError(0, 0, "derived predicate " + a.predicate +
                                   " in initial state");
      }
      params = &dp->head.params;
    } else {
      throw ParseError(0, 0, "undeclared predicate " + a.predicate);
    }
    if (params->size() != a.args.size()) {
      throw ParseError(0, 0, a.predicate + " expects " +
                                 std::to_string(params->size()) +
                                 " argument(s) in (" + a.key() + ")");
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      auto it = objects.find(a.args[i]);
      if (it == objects.end()) {
        throw ParseError(0, 0, "undeclared object " + a.args[i]);
      }
      if (!d.is_subtype(it->second, (*params)[i].type)) {
        throw ParseError(0, 0, "object " + a.args[i] + " of type " +
                                   it->second + " does not fit " +
                                   (*params)[i].type + " in (" + a.key() + ")");
      }
    }
  };
  for (const auto& a : p.init) check_atom(a, false);
  std::function<void(const Condition&)> check_cond = [&](const Condition& c) {
    if (c.kind == Condition::Kind::kAtom) check_atom(c.atom, true);
    if (c.kind == Condition::Kind::kEquals) {
      for (const auto& t : c.atom.args) {
        if (!objects.count(t)) throw ParseError(0, 0, "undeclared object " + t);
      }
    }
    for (const auto& part : c.parts) check_cond(part);
  };
  if (p.goal) check_cond(*p.goal);
}

Problem parse_problem(std::string_view text, const Domain& domain) {
  return ProblemBuilder(domain).build(Reader(text).read_document());
}

}  // namespace pastplan::pddl
