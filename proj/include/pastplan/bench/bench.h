#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pastplan/pddl/model.h"
#include "pastplan/ppltl/formula.h"

namespace pastplan::bench {

class BenchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Family {
  kBlocksworldDet,
  kBlocksworldNondet,
  kElevator,
  kTriangleTireworld,
};

std::string_view family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

struct BenchSpec {
  Family family;
  // blocksworld: {blocks, sequence length}; elevator: {passengers};
  // triangle-tireworld: {side, visits}
  std::vector<int> params;
  std::vector<std::string> visits;  // triangle only; empty for the default
};

struct Instance {
  std::string id;  // `<family>-<params>`
  std::string domain_text;
  std::string problem_text;
  pddl::Domain domain;
  pddl::Problem problem;  // its goal is the final-state counterpart of `goal`
  ppltl::Formula goal;
};

/// φ_n = O(on(b1,b2) & Y O(on(b2,b3) & ... )) over n_seq blocks; every block
/// starts on the table and clear. The nondeterministic variant lets `stack`
/// drop the held block on the table instead.
Instance gen_blocksworld(int n_blocks, int n_seq, bool nondet);

/// Miconic: floors f0..f(2n); passenger i boards at f0 and leaves at f(2i).
/// Goal: O(served p1) & ... & O(served pn).
Instance gen_elevator(int n_passengers);

/// Triangle of side `side` with a spare in every location and a car at l11.
/// Goal: the first m locations of `visits` are visited in that order.
Instance gen_triangle_tireworld(int side, int m_visits,
                                std::vector<std::string> visits = {});

/// l11, l21, l22, l32, l33, ...: a staircase path from the corner.
std::vector<std::string> default_visit_order(int side);

Instance generate(const BenchSpec& spec);

/// Writes `<id>-domain.pddl`, `<id>-problem.pddl` and `<id>.ppltl`.
std::vector<std::filesystem::path> write_instance(
    const Instance& inst, const std::filesystem::path& dir);

}  // namespace pastplan::bench
