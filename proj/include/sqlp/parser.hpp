#pragma once

#include <string_view>

#include "sqlp/syntax.hpp"

namespace sqlp {

// Parses a .sqlp program: a #domain directive followed by clauses and
// sim(a, b) = v. declarations. Throws parse_error with position info.
Program parse_program(std::string_view text);

// Parses a goal such as  pet(A)#W | W >= 0.50  against a loaded program
// (needed for the signature and the domain of threshold literals).
Goal parse_goal(std::string_view text, const Program& program);

} // namespace sqlp
