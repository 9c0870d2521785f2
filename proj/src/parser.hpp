#pragma once

#include <stdexcept>
#include <string>

#include "ast.hpp"

namespace gt::lang {

struct ParseError : std::runtime_error {
    Location loc;
    int column;
    ParseError(Location l, int col, const std::string& msg)
        : std::runtime_error(l.str() + ":" + std::to_string(col) + ": " + msg),
          loc(std::move(l)),
          column(col) {}
};

// Parses UTF-8 MiniLang source into an AST with locations. Throws ParseError
// on malformed input.
Program parse(const std::string& source, const std::string& filename);

}  // namespace gt::lang
