#pragma once

#include <string>

#include "pathfix/lang/ast.hpp"

namespace pathfix::lang {

/// Renders with the minimal parentheses needed to re-parse to the same tree.
std::string to_source(const ExprPtr& e);
std::string to_source(const Stmt& s, int indent = 0);
std::string to_source(const Function& fn);
std::string to_source(const Program& prog);

}  // namespace pathfix::lang
