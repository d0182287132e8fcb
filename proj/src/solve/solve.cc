#include "pastplan/solve/solve.h"

#include <algorithm>
#include <chrono>
#include <climits>
#include <deque>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pastplan::solve {

using pddl::GroundCondition;
using pddl::GroundedProblem;
using pddl::State;
using pddl::StateHash;

namespace {

class Clock {
 public:
  explicit Clock(const Limits& l)
      : limits_(l), start_(std::chrono::steady_clock::now()) {}

  void check(std::size_t nodes) {
    if (nodes > limits_.node_cap) {
      throw ResourceLimit("node cap of " + std::to_string(limits_.node_cap) +
                          " exceeded");
    }
    if ((ticks_++ & 255) == 0) {
      const std::chrono::duration<double> spent =
          std::chrono::steady_clock::now() - start_;
      if (spent.count() > limits_.timeout_s) {
        throw ResourceLimit("timeout after " + std::to_string(spent.count()) +
                            " s");
      }
    }
  }

 private:
  Limits limits_;
  std::chrono::steady_clock::time_point start_;
  std::size_t ticks_ = 0;
};

// Successors with derived atoms memoized by base state.
class Expander {
 public:
  explicit Expander(const GroundedProblem& gp) : gp_(gp) {}

  std::vector<State> successors(const State& s, int action) {
    std::vector<State> out = pddl::apply(gp_, s, action, false);
    for (auto& base : out) {
      auto it = closed_.find(base);
      if (it == closed_.end()) {
        it = closed_.emplace(base, pddl::eval_state(gp_, base)).first;
      }
      base = it->second;
    }
    return out;
  }

 private:
  const GroundedProblem& gp_;
  std::unordered_map<State, State, StateHash> closed_;
};

bool is_goal(const GroundedProblem& gp, const State& s) {
  return gp.goal->holds(s);
}

void require_goal(const GroundedProblem& gp) {
  if (!gp.goal) throw std::invalid_argument("problem has no goal");
}

constexpr std::size_t kInf = SIZE_MAX;

std::size_t add_costs(std::size_t a, std::size_t b) {
  return a == kInf || b == kInf ? kInf : a + b;
}

std::size_t relaxed_cost(const GroundCondition& c,
                         const std::vector<std::size_t>& cost) {
  using K = GroundCondition::Kind;
  switch (c.kind) {
    case K::kTrue:
    case K::kNot:
      return 0;
    case K::kFalse:
      return kInf;
    case K::kFluent:
      return cost[c.fluent];
    case K::kAnd: {
      std::size_t sum = 0;
      for (const auto& p : c.parts) sum = add_costs(sum, relaxed_cost(p, cost));
      return sum;
    }
    case K::kOr: {
      std::size_t best = kInf;
      for (const auto& p : c.parts) best = std::min(best, relaxed_cost(p, cost));
      return best;
    }
  }
  return kInf;
}

}  // namespace

std::size_t h_add(const GroundedProblem& gp, const State& s) {
  require_goal(gp);
  std::vector<std::size_t> cost(gp.fluents.size(), kInf);
  for (std::size_t f = 0; f < gp.fluents.size(); ++f) {
    if (s.get(f)) cost[f] = 0;
  }
  auto lower = [&](int f, std::size_t c) {
    if (c < cost[f]) {
      cost[f] = c;
      return true;
    }
    return false;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& stratum : gp.strata) {
      for (const auto& ax : stratum) {
        changed |= lower(ax.head, relaxed_cost(ax.body, cost));
      }
    }
    for (const auto& a : gp.actions) {
      const std::size_t pre = relaxed_cost(a.precondition, cost);
      if (pre == kInf) continue;
      for (const auto& o : a.outcomes) {
        for (const auto& e : o.effects) {
          const std::size_t c =
              add_costs(add_costs(pre, relaxed_cost(e.condition, cost)), 1);
          if (c == kInf) continue;
          for (int f : e.adds) changed |= lower(f, c);
        }
      }
    }
  }
  return relaxed_cost(*gp.goal, cost);
}

PlanResult solve_classical(const GroundedProblem& gp, Heuristic h,
                           Limits limits) {
  require_goal(gp);
  for (const auto& a : gp.actions) {
    if (a.outcomes.size() != 1) {
      throw std::invalid_argument("classical search needs deterministic "
                                  "actions; (" + a.name + ") has " +
                                  std::to_string(a.outcomes.size()) +
                                  " outcomes");
    }
  }
  struct Node {
    State state;
    int parent;
    int action;
    std::size_t g;
  };
  struct Entry {
    std::size_t f, h, order;
    int node;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      return order > o.order;
    }
  };

  PlanResult out;
  out.optimal = h == Heuristic::kBlind;
  Clock clock(limits);
  Expander expander(gp);
  std::vector<Node> nodes;
  std::unordered_map<State, std::size_t, StateHash> best_g;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::size_t order = 0;

  auto heuristic = [&](const State& s) -> std::size_t {
    return h == Heuristic::kHadd ? h_add(gp, s) : 0;
  };
  auto push = [&](State s, int parent, int action, std::size_t g) {
    const std::size_t hv = heuristic(s);
    if (hv == kInf) return;  // relaxed-unreachable: safe to drop
    best_g[s] = g;
    nodes.push_back({std::move(s), parent, action, g});
    open.push({g + hv, hv, order++, static_cast<int>(nodes.size() - 1)});
  };

  push(gp.init, -1, -1, 0);
  while (!open.empty()) {
    const Entry e = open.top();
    open.pop();
    const Node node = nodes[e.node];
    if (best_g.at(node.state) < node.g) continue;  // stale entry
    if (is_goal(gp, node.state)) {
      out.solved = true;
      for (int n = e.node; nodes[n].parent >= 0; n = nodes[n].parent) {
        out.plan.push_back(nodes[n].action);
      }
      std::reverse(out.plan.begin(), out.plan.end());
      break;
    }
    ++out.stats.expanded;
    for (int a : pddl::applicable(gp, node.state)) {
      State next = std::move(expander.successors(node.state, a)[0]);
      ++out.stats.generated;
      auto it = best_g.find(next);
      if (it != best_g.end() && it->second <= node.g + 1) continue;
      push(std::move(next), e.node, a, node.g + 1);
      clock.check(nodes.size());
    }
  }
  out.stats.states = best_g.size();
  return out;
}

int Policy::at(const State& s) const {
  auto it = actions.find(s);
  return it == actions.end() ? -1 : it->second;
}

namespace {

// Explicit AND-OR graph of everything reachable from init; goal states are
// not expanded.
struct Graph {
  struct Edge {
    int action;
    std::vector<int> succ;
  };
  std::vector<State> states;
  std::vector<bool> goal;
  std::vector<std::vector<Edge>> edges;
  std::vector<std::vector<int>> preds;  // state → states with an edge into it

  Graph(const GroundedProblem& gp, const Limits& limits, SearchStats& stats) {
    Clock clock(limits);
    Expander expander(gp);
    std::unordered_map<State, int, StateHash> id;
    auto intern = [&](const State& s) {
      auto [it, fresh] = id.emplace(s, static_cast<int>(states.size()));
      if (fresh) {
        states.push_back(s);
        goal.push_back(is_goal(gp, s));
        edges.emplace_back();
        clock.check(states.size());
      }
      return it->second;
    };
    intern(gp.init);
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (goal[i]) continue;
      ++stats.expanded;
      for (int a : pddl::applicable(gp, states[i])) {
        Edge e{a, {}};
        for (const State& n : expander.successors(states[i], a)) {
          ++stats.generated;
          e.succ.push_back(intern(n));
        }
        std::sort(e.succ.begin(), e.succ.end());
        e.succ.erase(std::unique(e.succ.begin(), e.succ.end()), e.succ.end());
        edges[i].push_back(std::move(e));
      }
    }
    preds.assign(states.size(), {});
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (const auto& e : edges[i]) {
        for (int n : e.succ) preds[n].push_back(static_cast<int>(i));
      }
    }
    for (auto& p : preds) {
      std::sort(p.begin(), p.end());
      p.erase(std::unique(p.begin(), p.end()), p.end());
    }
    stats.states = states.size();
  }
};

// Keeps only the entries reachable from init under the policy.
Policy restrict_to_reachable(const Graph& g, const std::vector<int>& choice) {
  Policy p;
  std::vector<bool> seen(g.states.size(), false);
  std::deque<int> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    if (g.goal[s]) continue;
    const auto& e = g.edges[s][choice[s]];
    p.actions.emplace(g.states[s], e.action);
    for (int n : e.succ) {
      if (!seen[n]) {
        seen[n] = true;
        queue.push_back(n);
      }
    }
  }
  return p;
}

}  // namespace

PolicyResult solve_fond_strong(const GroundedProblem& gp, Limits limits) {
  require_goal(gp);
  PolicyResult out;
  const Graph g(gp, limits, out.stats);
  const std::size_t n = g.states.size();
  std::vector<bool> solved(g.goal);
  std::vector<int> choice(n, -1);
  // Layer by layer: a state joins once some action leads only into states
  // solved in earlier layers, which keeps the policy acyclic.
  for (bool grew = true; grew && !solved[0];) {
    grew = false;
    std::vector<int> layer;
    for (std::size_t s = 0; s < n; ++s) {
      if (solved[s]) continue;
      for (std::size_t k = 0; k < g.edges[s].size(); ++k) {
        const auto& succ = g.edges[s][k].succ;
        if (std::all_of(succ.begin(), succ.end(),
                        [&](int t) { return solved[t]; })) {
          choice[s] = static_cast<int>(k);
          layer.push_back(static_cast<int>(s));
          break;
        }
      }
    }
    for (int s : layer) solved[s] = true;
    grew = !layer.empty();
  }
  if (!solved[0]) return out;
  out.solved = true;
  out.policy = restrict_to_reachable(g, choice);
  return out;
}

PolicyResult solve_fond_strong_cyclic(const GroundedProblem& gp,
                                      Limits limits) {
  require_goal(gp);
  PolicyResult out;
  const Graph g(gp, limits, out.stats);
  const std::size_t n = g.states.size();
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> dist(n);
  std::vector<int> choice(n, -1);

  for (;;) {
    // Actions whose every outcome stays among the live states.
    auto safe = [&](int s, const Graph::Edge& e) {
      (void)s;
      return std::all_of(e.succ.begin(), e.succ.end(),
                         [&](int t) { return alive[t]; });
    };
    // Backward reachability of the goal through safe actions.
    std::vector<bool> reach(n, false);
    std::vector<int> frontier;
    for (std::size_t s = 0; s < n; ++s) {
      if (alive[s] && g.goal[s]) {
        reach[s] = true;
        dist[s] = 0;
        frontier.push_back(static_cast<int>(s));
      }
    }
    for (std::size_t d = 1; !frontier.empty(); ++d) {
      std::vector<int> next;
      for (int t : frontier) {
        for (int s : g.preds[t]) {
          if (!alive[s] || reach[s]) continue;
          for (std::size_t k = 0; k < g.edges[s].size(); ++k) {
            const auto& e = g.edges[s][k];
            if (!safe(s, e)) continue;
            const bool hits = std::any_of(e.succ.begin(), e.succ.end(), [&](int u) {
              return reach[u] && dist[u] == d - 1;
            });
            if (hits) {
              reach[s] = true;
              dist[s] = d;
              choice[s] = static_cast<int>(k);
              next.push_back(s);
              break;
            }
          }
        }
      }
      frontier = std::move(next);
    }
    if (reach == alive) break;
    alive = std::move(reach);
  }
  if (!alive[0]) return out;
  out.solved = true;
  out.policy = restrict_to_reachable(g, choice);
  return out;
}

Policy plan_to_policy(const GroundedProblem& gp, const Plan& plan) {
  Policy p;
  State s = gp.init;
  for (int a : plan) {
    p.actions.emplace(s, a);
    s = pddl::apply(gp, s, a).at(0);
  }
  return p;
}

std::string action_text(const GroundedProblem& gp, int action) {
  return "(" + gp.actions.at(action).name + ")";
}

std::string format_plan(const GroundedProblem& gp, const Plan& plan) {
  std::string out;
  for (int a : plan) out += action_text(gp, a) + "\n";
  return out;
}

Plan parse_plan(const GroundedProblem& gp, const std::string& text) {
  Plan plan;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto c = line.find(';'); c != std::string::npos) line.erase(c);
    // Normalize whitespace and case.
    std::istringstream words(line);
    std::string word, name;
    while (words >> word) {
      for (auto& ch : word) ch = static_cast<char>(std::tolower(ch));
      if (!name.empty()) name += " ";
      name += word;
    }
    if (name.empty()) continue;
    if (name.front() == '(' && name.back() == ')') {
      name = name.substr(1, name.size() - 2);
      while (!name.empty() && name.front() == ' ') name.erase(0, 1);
      while (!name.empty() && name.back() == ' ') name.pop_back();
    }
    const int a = gp.action(name);
    if (a < 0) {
      throw std::invalid_argument("plan step " + std::to_string(plan.size()) +
                                  ": unknown action (" + name + ")");
    }
    plan.push_back(a);
  }
  return plan;
}

std::string policy_json(const GroundedProblem& gp, const Policy& p) {
  std::vector<std::pair<std::vector<std::string>, std::string>> rows;
  for (const auto& [s, a] : p.actions) {
    rows.emplace_back(gp.true_atoms(s), action_text(gp, a));
  }
  std::sort(rows.begin(), rows.end());
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [atoms, action] : rows) {
    out.push_back({{"state", atoms}, {"action", action}});
  }
  return out.dump(2) + "\n";
}

Policy parse_policy_json(const GroundedProblem& gp, const std::string& text) {
  Policy p;
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("policy must be a JSON array");
  for (const auto& row : doc) {
    const auto atoms = row.at("state").get<std::vector<std::string>>();
    const auto name = row.at("action").get<std::string>();
    const int a = gp.action(name);
    if (a < 0) throw std::invalid_argument("policy names unknown action " + name);
    p.actions[gp.make_state(atoms)] = a;
  }
  return p;
}

}  // namespace pastplan::solve
