#include "pastplan/bench/bench.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pastplan/pddl/parser.h"

namespace pastplan::bench {

using ppltl::Formula;

namespace {

constexpr std::string_view kNames[] = {"blocksworld-det", "blocksworld-nondet",
                                       "elevator", "triangle-tireworld"};

void require(bool ok, const std::string& what) {
  if (!ok) throw BenchError(what);
}

Instance finish(std::string id, std::string domain_text,
                std::string problem_text, Formula goal) {
  Instance inst{std::move(id), std::move(domain_text), std::move(problem_text),
                {}, {}, std::move(goal)};
  inst.domain = pddl::parse_domain(inst.domain_text);
  inst.problem = pddl::parse_problem(inst.problem_text, inst.domain);
  return inst;
}

std::string block(int i) { return "b" + std::to_string(i); }

std::string floor_name(int i) { return "f" + std::to_string(i); }

std::string location(int i, int j) {
  return "l" + std::to_string(i) + std::to_string(j);
}

// O(a1 & Y O(a2 & Y O(...))) with the first atom outermost.
Formula once_chain(const std::vector<Formula>& atoms) {
  Formula f = ppltl::once(atoms.back());
  for (std::size_t i = atoms.size() - 1; i-- > 0;) {
    f = ppltl::once(ppltl::conj(atoms[i], ppltl::yesterday(f)));
  }
  return f;
}

}  // namespace

std::string_view family_name(Family f) { return kNames[static_cast<int>(f)]; }

std::optional<Family> family_from_name(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (kNames[i] == name) return static_cast<Family>(i);
  }
  return std::nullopt;
}

Instance gen_blocksworld(int n_blocks, int n_seq, bool nondet) {
  require(n_blocks >= 2, "blocksworld needs at least 2 blocks");
  require(n_seq >= 2 && n_seq <= n_blocks,
          "blocksworld sequence length must be in [2, blocks]");
  const std::string stack_effect =
      "(and (not (holding ?x)) (not (clear ?y)) (clear ?x) (handempty)\n"
      "                 (on ?x ?y))";
  std::ostringstream d;
  d << "; Four-operator blocks world.\n";
  if (nondet) {
    d << "; stack may instead drop the held block on the table.\n";
  }
  d << "(define (domain blocksworld)\n"
    << "  (:requirements :strips :typing :equality"
    << (nondet ? " :non-deterministic" : "") << ")\n"
    << "  (:types block)\n"
    << "  (:predicates (on ?x - block ?y - block) (ontable ?x - block)\n"
    << "               (clear ?x - block) (handempty) (holding ?x - block))\n"
    << "  (:action pick-up\n"
    << "    :parameters (?x - block)\n"
    << "    :precondition (and (clear ?x) (ontable ?x) (handempty))\n"
    << "    :effect (and (not (ontable ?x)) (not (clear ?x)) (not (handempty))\n"
    << "                 (holding ?x)))\n"
    << "  (:action put-down\n"
    << "    :parameters (?x - block)\n"
    << "    :precondition (holding ?x)\n"
    << "    :effect (and (not (holding ?x)) (clear ?x) (handempty) (ontable ?x)))\n"
    << "  (:action stack\n"
    << "    :parameters (?x - block ?y - block)\n"
    << "    :precondition (and (holding ?x) (clear ?y) (not (= ?x ?y)))\n";
  if (nondet) {
    d << "    :effect (oneof\n"
      << "      " << stack_effect << "\n"
      << "      (and (not (holding ?x)) (clear ?x) (handempty) (ontable ?x))))\n";
  } else {
    d << "    :effect " << stack_effect << ")\n";
  }
  d << "  (:action unstack\n"
    << "    :parameters (?x - block ?y - block)\n"
    << "    :precondition (and (on ?x ?y) (clear ?x) (handempty) (not (= ?x ?y)))\n"
    << "    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty))\n"
    << "                 (not (on ?x ?y)))))\n";

  const std::string id = std::string(family_name(
                             nondet ? Family::kBlocksworldNondet
                                    : Family::kBlocksworldDet)) +
                         "-" + std::to_string(n_blocks) + "-" +
                         std::to_string(n_seq);
  std::ostringstream p;
  p << "(define (problem " << id << ")\n"
    << "  (:domain blocksworld)\n"
    << "  (:objects";
  for (int i = 1; i <= n_blocks; ++i) p << " " << block(i);
  p << " - block)\n  (:init (handempty)";
  for (int i = 1; i <= n_blocks; ++i) {
    p << "\n    (ontable " << block(i) << ") (clear " << block(i) << ")";
  }
  p << ")\n  (:goal (and";
  std::vector<Formula> atoms;
  for (int i = 1; i < n_seq; ++i) {
    p << " (on " << block(i) << " " << block(i + 1) << ")";
    atoms.push_back(Formula::atom("on " + block(i) + " " + block(i + 1)));
  }
  p << ")))\n";
  return finish(id, d.str(), p.str(), once_chain(atoms));
}

Instance gen_elevator(int n) {
  require(n >= 1, "elevator needs at least 1 passenger");
  const int floors = 2 * n + 1;
  const std::string d =
      "; Miconic elevator.\n"
      "(define (domain elevator)\n"
      "  (:requirements :strips :typing)\n"
      "  (:types passenger floor)\n"
      "  (:predicates (origin ?p - passenger ?f - floor)\n"
      "               (destin ?p - passenger ?f - floor)\n"
      "               (above ?f1 - floor ?f2 - floor)\n"
      "               (boarded ?p - passenger) (served ?p - passenger)\n"
      "               (lift-at ?f - floor))\n"
      "  (:action board\n"
      "    :parameters (?f - floor ?p - passenger)\n"
      "    :precondition (and (lift-at ?f) (origin ?p ?f))\n"
      "    :effect (boarded ?p))\n"
      "  (:action depart\n"
      "    :parameters (?f - floor ?p - passenger)\n"
      "    :precondition (and (lift-at ?f) (destin ?p ?f) (boarded ?p))\n"
      "    :effect (and (not (boarded ?p)) (served ?p)))\n"
      "  (:action up\n"
      "    :parameters (?f1 - floor ?f2 - floor)\n"
      "    :precondition (and (lift-at ?f1) (above ?f1 ?f2))\n"
      "    :effect (and (lift-at ?f2) (not (lift-at ?f1))))\n"
      "  (:action down\n"
      "    :parameters (?f1 - floor ?f2 - floor)\n"
      "    :precondition (and (lift-at ?f1) (above ?f2 ?f1))\n"
      "    :effect (and (lift-at ?f2) (not (lift-at ?f1)))))\n";

  const std::string id = "elevator-" + std::to_string(n);
  std::ostringstream p;
  p << "(define (problem " << id << ")\n"
    << "  (:domain elevator)\n"
    << "  (:objects";
  for (int i = 1; i <= n; ++i) p << " p" << i;
  p << " - passenger";
  for (int f = 0; f < floors; ++f) p << " " << floor_name(f);
  p << " - floor)\n  (:init (lift-at f0)";
  for (int a = 0; a < floors; ++a) {
    p << "\n   ";
    for (int b = a + 1; b < floors; ++b) {
      p << " (above " << floor_name(a) << " " << floor_name(b) << ")";
    }
  }
  std::vector<Formula> conjuncts;
  for (int i = 1; i <= n; ++i) {
    p << "\n    (origin p" << i << " f0) (destin p" << i << " "
      << floor_name(2 * i) << ")";
    conjuncts.push_back(
        ppltl::once(Formula::atom("served p" + std::to_string(i))));
  }
  p << ")\n  (:goal (and";
  for (int i = 1; i <= n; ++i) p << " (served p" << i << ")";
  p << ")))\n";
  return finish(id, d, p.str(), ppltl::conj_all(conjuncts));
}

std::vector<std::string> default_visit_order(int side) {
  std::vector<std::string> out{location(1, 1)};
  for (int i = 2; i <= side; ++i) {
    out.push_back(location(i, i - 1));
    out.push_back(location(i, i));
  }
  return out;
}

Instance gen_triangle_tireworld(int side, int m,
                                std::vector<std::string> visits) {
  require(side >= 1 && side <= 9, "triangle side must be in [1, 9]");
  if (visits.empty()) visits = default_visit_order(side);
  require(m >= 1 && m <= static_cast<int>(visits.size()),
          "visit count must be in [1, " + std::to_string(visits.size()) + "]");
  visits.resize(m);

  std::vector<std::string> locations;
  std::vector<std::pair<std::string, std::string>> roads;
  for (int i = 1; i <= side; ++i) {
    for (int j = 1; j <= i; ++j) {
      locations.push_back(location(i, j));
      auto link = [&](int i2, int j2) {
        roads.emplace_back(location(i, j), location(i2, j2));
        roads.emplace_back(location(i2, j2), location(i, j));
      };
      if (i < side) link(i + 1, j);
      if (j < i) link(i, j + 1);
      if (i < side) link(i + 1, j + 1);
    }
  }
  for (const auto& v : visits) {
    require(std::find(locations.begin(), locations.end(), v) != locations.end(),
            "unknown location " + v);
  }

  const std::string d =
      "; Triangle tireworld. Moving may leave the car with a flat tire.\n"
      "(define (domain triangle-tireworld)\n"
      "  (:requirements :strips :typing :non-deterministic)\n"
      "  (:types location)\n"
      "  (:predicates (vehicle-at ?loc - location) (spare-in ?loc - location)\n"
      "               (road ?from - location ?to - location)\n"
      "               (not-flattire) (hasspare))\n"
      "  (:action move-car\n"
      "    :parameters (?from - location ?to - location)\n"
      "    :precondition (and (vehicle-at ?from) (road ?from ?to) (not-flattire))\n"
      "    :effect (and (vehicle-at ?to) (not (vehicle-at ?from))\n"
      "                 (oneof (and) (not (not-flattire)))))\n"
      "  (:action loadtire\n"
      "    :parameters (?loc - location)\n"
      "    :precondition (and (vehicle-at ?loc) (spare-in ?loc))\n"
      "    :effect (and (hasspare) (not (spare-in ?loc))))\n"
      "  (:action changetire\n"
      "    :parameters ()\n"
      "    :precondition (hasspare)\n"
      "    :effect (and (not (hasspare)) (not-flattire))))\n";

  std::string id = "triangle-tireworld-" + std::to_string(side) + "-" +
                   std::to_string(m);
  auto standard = default_visit_order(side);
  standard.resize(std::min<std::size_t>(standard.size(), m));
  if (visits != standard) {
    for (const auto& v : visits) id += "-" + v;
  }
  std::ostringstream p;
  p << "(define (problem " << id << ")\n"
    << "  (:domain triangle-tireworld)\n"
    << "  (:objects";
  for (const auto& l : locations) p << " " << l;
  p << " - location)\n  (:init (vehicle-at l11) (not-flattire)\n   ";
  for (const auto& l : locations) p << " (spare-in " << l << ")";
  for (const auto& [a, b] : roads) p << "\n    (road " << a << " " << b << ")";
  p << ")\n  (:goal (vehicle-at " << visits.back() << ")))\n";

  std::vector<Formula> atoms;
  for (auto it = visits.rbegin(); it != visits.rend(); ++it) {
    atoms.push_back(Formula::atom("vehicle-at " + *it));
  }
  return finish(id, d, p.str(), once_chain(atoms));
}

Instance generate(const BenchSpec& spec) {
  auto need = [&](std::size_t n) {
    require(spec.params.size() == n,
            std::string(family_name(spec.family)) + " takes " +
                std::to_string(n) + " parameter(s)");
  };
  switch (spec.family) {
    case Family::kBlocksworldDet:
    case Family::kBlocksworldNondet:
      need(2);
      return gen_blocksworld(spec.params[0], spec.params[1],
                             spec.family == Family::kBlocksworldNondet);
    case Family::kElevator:
      need(1);
      return gen_elevator(spec.params[0]);
    case Family::kTriangleTireworld:
      need(2);
      return gen_triangle_tireworld(spec.params[0], spec.params[1],
                                    spec.visits);
  }
  throw BenchError("unknown family");
}

std::vector<std::filesystem::path> write_instance(
    const Instance& inst, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::filesystem::path, std::string>> files{
      {dir / (inst.id + "-domain.pddl"), inst.domain_text},
      {dir / (inst.id + "-problem.pddl"), inst.problem_text},
      {dir / (inst.id + ".ppltl"), ppltl::format_formula(inst.goal) + "\n"},
  };
  std::vector<std::filesystem::path> out;
  for (const auto& [path, text] : files) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw BenchError("cannot write " + path.string());
    out.push_back(path);
  }
  return out;
}

}  // namespace pastplan::bench
