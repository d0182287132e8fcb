#pragma once

#include <string>

#include "pastplan/pddl/model.h"

namespace pastplan::pddl {

std::string print_domain(const Domain& domain);
std::string print_problem(const Problem& problem);

std::string print_condition(const Condition& c);

}  // namespace pastplan::pddl
