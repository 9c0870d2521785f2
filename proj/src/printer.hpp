#pragma once

#include <string>

#include "ast.hpp"

namespace gt::lang {

// Emits canonical MiniLang text. The output reparses to an AST structurally
// equal to the input (locations aside); instrumentation tags and the
// `#instrumented` marker survive the round trip.
std::string pretty_print(const Program& p);

std::string print_expr(const Expr& e);

}  // namespace gt::lang
