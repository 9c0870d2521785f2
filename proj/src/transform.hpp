#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ast.hpp"

namespace gt::transform {

struct AlreadyInstrumented : std::runtime_error {
    AlreadyInstrumented() : std::runtime_error("program is already instrumented") {}
};

struct Application {
    std::string rule;
    lang::Location loc;
};

struct Report {
    std::map<std::string, int> counts;
    std::vector<Application> applications;

    int count(const std::string& rule) const {
        auto it = counts.find(rule);
        return it == counts.end() ? 0 : it->second;
    }
    int total() const {
        int n = 0;
        for (const auto& [k, v] : counts) n += v;
        return n;
    }
};

struct Result {
    lang::Program program;
    Report report;
};

// Rule names used in reports (and mirrored by the test census).
namespace rules {
inline constexpr const char* kEqNull = "eq_null";
inline constexpr const char* kNeNull = "ne_null";
inline constexpr const char* kRefEq = "ref_eq";
inline constexpr const char* kInstanceOf = "instanceof";
inline constexpr const char* kExternCall = "extern_call";      // exorcise per argument
inline constexpr const char* kExternReturn = "extern_return";  // value-producing extern calls
inline constexpr const char* kUnbox = "unbox";
inline constexpr const char* kFieldAccess = "field_access";
inline constexpr const char* kAssign = "assign";
inline constexpr const char* kDeclDefault = "decl_default";
inline constexpr const char* kCallArgs = "call_args";
inline constexpr const char* kMethodEntry = "method_entry";
inline constexpr const char* kReturn = "return";
}  // namespace rules

// Applies every rewrite rule in a single bottom-up pass over a resolved
// program, producing an instrumented program that resolves again. Throws
// AlreadyInstrumented when the input carries the marker; instrumenting twice
// is never meaningful.
Result instrument(const lang::Program& p);

// Side-effect-free expressions may be duplicated by the equality rewrites.
bool is_pure(const lang::Expr& e);

std::string report_summary(const Report& r);

}  // namespace gt::transform
