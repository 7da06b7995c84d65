#pragma once

#include "pathfix/lang/ast.hpp"

namespace pathfix::lang {

/// Type expected at the expression hole of the statement at `at`: the
/// condition of an If/While, the right-hand side of an assignment or
/// declaration, or a return value.
Type hole_type(const Program& prog, const Location& at);

/// The expression currently in the hole at `at`.
ExprPtr hole_expr(const Program& prog, const Location& at);

/// Replaces the hole expression of the statement at `at`.
Program apply_patch(const Program& prog, const Location& at, const ExprPtr& replacement);

/// Inserts `if (guard) return value;` immediately before the statement at
/// `before`. The new statement's path is `before.path` followed by -1, so no
/// existing Location changes. `value` is null for void functions.
Program insert_guard(const Program& prog, const Location& before, const ExprPtr& guard,
                     const ExprPtr& value);

/// Location given to a guard inserted before `before`.
Location guard_location(const Location& before);

}  // namespace pathfix::lang
