#pragma once

#include <stdexcept>
#include <string>

#include "ast.hpp"

namespace gt::lang {

struct ResolveError : std::runtime_error {
    Location loc;
    ResolveError(Location l, const std::string& msg)
        : std::runtime_error(l.str() + ": " + msg), loc(std::move(l)) {}
};

// Binds every name, checks types nominally along the declared superclass
// chain, annotates coercions (boxing/unboxing) and helper type hints, and
// records the entry method. Throws ResolveError at the first offending
// location; the traversal order is fixed, so the reported error is
// deterministic for a given program.
void resolve(Program& p);

}  // namespace gt::lang
