#pragma once

#include "ctms/ast.hpp"
#include "ctms/errors.hpp"

#include <string>
#include <string_view>

namespace ctms {

Program parse_program(std::string_view text);
AssertionPtr parse_assertion(std::string_view text);
ExprPtr parse_expr(std::string_view text);
CmdPtr parse_cmd(std::string_view text);

std::string pretty_print(const Program& p);
std::string to_string(const ExprPtr& e);
std::string to_string(const AssertionPtr& a);
std::string to_string(const CmdPtr& c);
std::string to_string(const Domain& d);

// Splits `pre -> c1 * c2 * ...` over lines, one conjunct per line.
std::string print_layout(const AssertionPtr& a);

}  // namespace ctms
