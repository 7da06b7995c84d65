#pragma once

#include <map>
#include <string>
#include <string_view>

#include "pathfix/lang/ast.hpp"

namespace pathfix::lang {

/// Parses and type-checks a whole `.mc` source. The first function in the
/// file is the entry point.
Program parse_program(std::string_view source);

/// Parses a standalone expression over the given typed variables. Calls may
/// refer to functions of `prog` when it is non-null; `len(a)` is always
/// available.
ExprPtr parse_expression(std::string_view text,
                         const std::map<std::string, Type>& scope,
                         const Program* prog = nullptr);

/// Variables visible immediately before the statement at `loc` (parameters and
/// enclosing declarations), in declaration order.
std::vector<Param> scope_at(const Function& fn, const Location& loc);

/// Re-runs the static checks on an already-built program (used after
/// patching).
void check_program(const Program& prog);

}  // namespace pathfix::lang
