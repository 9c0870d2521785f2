#pragma once

#include <string>

namespace gt::lang {

// Source position. Instrumented nodes inherit the location of the
// construct they wrap, so every node in a transformed program maps back
// to a position in the original file.
struct Location {
    std::string file;
    int line = 0;

    std::string str() const { return file + ":" + std::to_string(line); }
};

inline bool same_location(const Location& a, const Location& b) {
    return a.line == b.line && a.file == b.file;
}

}  // namespace gt::lang
