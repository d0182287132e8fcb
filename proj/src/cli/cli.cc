#include "pastplan/cli/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pastplan/bench/bench.h"
#include "pastplan/compile/compile.h"
#include "pastplan/patterns.h"
#include "pastplan/pddl/grounding.h"
#include "pastplan/pddl/parser.h"
#include "pastplan/ppltl/parser.h"
#include "pastplan/ppltl/semantics.h"
#include "pastplan/solve/solve.h"
#include "pastplan/verify/verify.h"

namespace pastplan::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Carries an exit code out of a command.
struct Failure {
  int code;
  std::string message;
};

struct Options {
  std::string domain, problem;
  std::vector<std::string> goals, goal_files, patterns, traces;
  std::string mode, heuristic = "blind";
  std::string out_dir = ".";
  std::size_t node_cap = solve::Limits{}.node_cap;
  double timeout_s = solve::Limits{}.timeout_s;
  bool project = false;
  std::string plan, policy;
  std::string family, params, visits;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kInputError, "cannot read '" + path + "'"};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{kInputError, "cannot write '" + path.string() + "'"};
}

// Non-blank lines not starting with '#'.
std::vector<std::string> formula_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(line);
  }
  return out;
}

std::vector<ppltl::Formula> goal_formulas(const Options& o) {
  std::vector<ppltl::Formula> out;
  for (const auto& g : o.goals) out.push_back(ppltl::parse_formula(g));
  for (const auto& path : o.goal_files) {
    for (const auto& line : formula_lines(read_file(path))) {
      out.push_back(ppltl::parse_formula(line));
    }
  }
  for (const auto& p : o.patterns) {
    out.push_back(patterns::build_pattern(patterns::parse_pattern(p)));
  }
  return out;
}

struct Inputs {
  pddl::Domain domain;
  pddl::Problem problem;
  ppltl::Formula goal;
};

Inputs load(const Options& o) {
  if (o.domain.empty() || o.problem.empty()) {
    throw Failure{kInputError, "--domain and --problem are required"};
  }
  Inputs in{pddl::parse_domain(read_file(o.domain)), {}, {}};
  in.problem = pddl::parse_problem(read_file(o.problem), in.domain);
  const auto goals = goal_formulas(o);
  if (goals.size() > 1) {
    throw Failure{kInputError, "give exactly one goal (--goal, --goal-file or --pattern)"};
  }
  if (goals.size() == 1) {
    in.goal = goals[0];
  } else if (in.problem.goal) {
    in.goal = compile::condition_formula(*in.problem.goal);
  } else {
    throw Failure{kInputError, "no goal: the problem has none and no formula was given"};
  }
  return in;
}

solve::Limits limits(const Options& o) {
  return solve::Limits{o.node_cap, o.timeout_s};
}

std::string stats_line(const solve::SearchStats& s) {
  return "expanded " + std::to_string(s.expanded) + ", generated " +
         std::to_string(s.generated) + ", states " + std::to_string(s.states);
}

// Policy over original observations plus sigma values, keyed like the
// compiled policy.
std::string projected_policy_json(const compile::CompiledProblem& c,
                                  const pddl::GroundedProblem& gp,
                                  const solve::Policy& policy) {
  std::map<std::string, std::string> sigma_of;
  for (const auto& e : c.mangling.entries()) {
    if (e.kind == compile::ManglingEntry::Kind::kSigma) sigma_of[e.id] = e.formula;
  }
  std::vector<json> rows;
  for (const auto& [s, a] : policy.actions) {
    json state = json::array();
    json sigma = json::object();
    for (const auto& atom : gp.true_atoms(s)) {
      if (auto it = sigma_of.find(atom); it != sigma_of.end()) continue;
      state.push_back(atom);
    }
    for (const auto& [id, formula] : sigma_of) {
      sigma[formula] = s.get(gp.fluent(id));
    }
    rows.push_back({{"state", state}, {"sigma", sigma},
                    {"action", solve::action_text(gp, a)}});
  }
  std::sort(rows.begin(), rows.end(), [](const json& x, const json& y) {
    return std::tie(x["state"], x["sigma"]) < std::tie(y["state"], y["sigma"]);
  });
  return json(rows).dump(2) + "\n";
}

int cmd_compile(const Options& o, std::ostream& out) {
  const Inputs in = load(o);
  const auto c = compile::compile(in.domain, in.problem, in.goal);
  for (const auto& f : compile::write_outputs(c, o.out_dir, in.problem.name)) {
    out << f.string() << "\n";
  }
  return kOk;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const Inputs in = load(o);
  const auto c = compile::compile(in.domain, in.problem, in.goal);
  const auto gp = pddl::ground(c.domain, c.problem);
  const std::string mode = o.mode.empty() ? "classical" : o.mode;
  const std::string& name = in.problem.name;
  fs::create_directories(o.out_dir);

  if (mode == "classical") {
    for (const auto& a : gp.actions) {
      if (a.outcomes.size() != 1) {
        throw Failure{kInputError, "classical mode needs a deterministic domain; '" +
                                       a.name + "' has several outcomes"};
      }
    }
    const auto h = o.heuristic == "hadd" ? solve::Heuristic::kHadd
                                         : solve::Heuristic::kBlind;
    const auto r = solve::solve_classical(gp, h, limits(o));
    if (!r.solved) {
      err << "unsolvable (" << stats_line(r.stats) << ")\n";
      return kUnsolvable;
    }
    const std::string text = solve::format_plan(gp, r.plan);
    write_file(fs::path(o.out_dir) / (name + ".plan"), text);
    if (o.project) {
      // Compilation keeps action names, so the plan is its own projection.
      write_file(fs::path(o.out_dir) / (name + "-projected.plan"), text);
    }
    out << text << "; " << r.plan.size() << " steps, " << stats_line(r.stats)
        << "\n";
    return kOk;
  }

  solve::PolicyResult r;
  if (mode == "strong") {
    r = solve::solve_fond_strong(gp, limits(o));
  } else {
    r = solve::solve_fond_strong_cyclic(gp, limits(o));
  }
  if (!r.solved) {
    err << "no " << mode << " policy (" << stats_line(r.stats) << ")\n";
    return kUnsolvable;
  }
  write_file(fs::path(o.out_dir) / (name + "-policy.json"),
             solve::policy_json(gp, r.policy) + "\n");
  if (o.project) {
    write_file(fs::path(o.out_dir) / (name + "-projected-policy.json"),
               projected_policy_json(c, gp, r.policy));
  }
  out << "; " << mode << " policy with " << r.policy.size() << " states, "
      << stats_line(r.stats) << "\n";
  return kOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.plan.empty() == o.policy.empty()) {
    throw Failure{kInputError, "give exactly one of --plan and --policy"};
  }
  const Inputs in = load(o);
  const auto c = compile::compile(in.domain, in.problem, in.goal);
  const auto gp = pddl::ground(c.domain, c.problem);
  json report;
  bool pass = false;

  if (!o.plan.empty()) {
    report["kind"] = "plan";
    const auto original = pddl::ground(in.domain, in.problem);
    try {
      const auto plan = solve::parse_plan(original, read_file(o.plan));
      const auto trace = verify::execute_plan(original, plan);
      const auto check = verify::check_goal(c.goal, trace);
      // The same actions on the compiled problem must reach its goal too.
      pddl::State s = gp.init;
      for (int a : plan) s = pddl::apply(gp, s, gp.action(original.actions[a].name)).at(0);
      const bool compiled_goal = gp.goal->holds(s);
      report["length"] = plan.size();
      report["eval"] = check.eval;
      report["progress"] = check.progress;
      report["agreement"] = check.agree();
      report["compiled_goal"] = compiled_goal;
      pass = check.verdict() && compiled_goal;
    } catch (const verify::PlanError& e) {
      report["error"] = e.what();
    } catch (const std::invalid_argument& e) {
      report["error"] = e.what();
    }
  } else {
    const std::string mode = o.mode.empty() ? "strong-cyclic" : o.mode;
    if (mode == "classical") {
      throw Failure{kInputError, "a policy is validated in strong or strong-cyclic mode"};
    }
    const auto policy = solve::parse_policy_json(gp, read_file(o.policy));
    const auto r = verify::verify_policy(
        policy, gp, c,
        mode == "strong" ? verify::Mode::kStrong : verify::Mode::kStrongCyclic);
    report = json::parse(r.to_json());
    report["kind"] = "policy";
    pass = r.verdict;
  }
  report["verdict"] = pass;
  fs::create_directories(o.out_dir);
  write_file(fs::path(o.out_dir) / "report.json", report.dump(2) + "\n");
  out << (pass ? "pass" : "fail") << "\n";
  if (!pass) {
    if (report.contains("error")) err << report["error"].get<std::string>() << "\n";
    return kValidationFailure;
  }
  return kOk;
}

ppltl::Trace read_trace(const std::string& path) {
  const json j = json::parse(read_file(path));
  if (!j.is_array() || j.empty()) {
    throw Failure{kInputError, path + ": a trace is a non-empty array of states"};
  }
  std::vector<ppltl::State> states;
  for (const auto& s : j) states.push_back(s.get<ppltl::State>());
  return ppltl::Trace(std::move(states));
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto formulas = goal_formulas(o);
  if (formulas.empty() || o.traces.empty()) {
    throw Failure{kInputError, "eval needs a formula and --trace"};
  }
  std::vector<ppltl::Trace> traces;
  for (const auto& t : o.traces) traces.push_back(read_trace(t));
  for (const auto& f : formulas) {
    for (const auto& t : traces) {
      out << (ppltl::eval_trace(f, t) ? "true" : "false") << "\n";
    }
  }
  return kOk;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_bench(const Options& o, std::ostream& out) {
  const auto family = bench::family_from_name(o.family);
  if (!family) throw Failure{kInputError, "unknown family '" + o.family + "'"};
  bench::BenchSpec spec{*family, {}, split_commas(o.visits)};
  for (const auto& p : split_commas(o.params)) {
    try {
      std::size_t used = 0;
      spec.params.push_back(std::stoi(p, &used));
      if (used != p.size()) throw std::invalid_argument(p);
    } catch (const std::logic_error&) {
      throw Failure{kInputError, "--params: '" + p + "' is not an integer"};
    }
  }
  for (const auto& f : bench::write_instance(bench::generate(spec), o.out_dir)) {
    out << f.string() << "\n";
  }
  return kOk;
}

void add_problem_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--domain", o.domain, "PDDL domain file");
  cmd->add_option("--problem", o.problem, "PDDL problem file");
}

void add_goal_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--goal", o.goals, "goal formula");
  cmd->add_option("--goal-file", o.goal_files, "file with one formula per line");
  cmd->add_option("--pattern", o.patterns, "pattern such as response(a,b)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Planning for pure-past temporal goals"};
  app.require_subcommand(1);
  const std::vector<std::string> modes{"classical", "strong", "strong-cyclic"};

  auto* compile_cmd = app.add_subcommand("compile", "compile a temporal goal into PDDL");
  add_problem_flags(compile_cmd, o);
  add_goal_flags(compile_cmd, o);
  compile_cmd->add_option("--out-dir", o.out_dir);

  auto* solve_cmd = app.add_subcommand("solve", "compile and solve");
  add_problem_flags(solve_cmd, o);
  add_goal_flags(solve_cmd, o);
  solve_cmd->add_option("--mode", o.mode)->check(CLI::IsMember(modes));
  solve_cmd->add_option("--heuristic", o.heuristic)
      ->check(CLI::IsMember({"blind", "hadd"}));
  solve_cmd->add_option("--node-cap", o.node_cap);
  solve_cmd->add_option("--timeout-s", o.timeout_s);
  solve_cmd->add_flag("--project", o.project,
                      "also write the solution for the original problem");
  solve_cmd->add_option("--out-dir", o.out_dir);

  auto* validate_cmd = app.add_subcommand("validate", "check a plan or policy");
  add_problem_flags(validate_cmd, o);
  add_goal_flags(validate_cmd, o);
  validate_cmd->add_option("--plan", o.plan);
  validate_cmd->add_option("--policy", o.policy);
  validate_cmd->add_option("--mode", o.mode)->check(CLI::IsMember(modes));
  validate_cmd->add_option("--out-dir", o.out_dir);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate formulas on trace files");
  add_goal_flags(eval_cmd, o);
  eval_cmd->add_option("--trace", o.traces, "JSON array of states");

  auto* bench_cmd = app.add_subcommand("bench", "generate a benchmark instance");
  bench_cmd->add_option("--family", o.family)->required();
  bench_cmd->add_option("--params", o.params, "comma-separated integers")->required();
  bench_cmd->add_option("--visits", o.visits, "comma-separated locations");
  bench_cmd->add_option("--out-dir", o.out_dir);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*compile_cmd) return cmd_compile(o, out);
    if (*solve_cmd) return cmd_solve(o, out, err);
    if (*validate_cmd) return cmd_validate(o, out, err);
    if (*eval_cmd) return cmd_eval(o, out);
    return cmd_bench(o, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const compile::CompileError& e) {
    err << "compile error: " << e.what() << "\n";
    return kCompileError;
  } catch (const pddl::GroundingError& e) {
    err << "compile error: " << e.what() << "\n";
    return kCompileError;
  } catch (const solve::ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int run_cli(int argc, char** argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

}  // namespace pastplan::cli
