#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gt::harness {

// Prefix used for the injected instrumentation hooks in event logs.
inline constexpr const char* kHookClass = "NullDetector";

struct ExecutionEvent {
    enum class Kind { Call, Return };
    std::int64_t seq = 0;
    Kind kind = Kind::Call;
    std::string method;   // "Class#method" style
    std::string payload;  // rendered arguments or rendered return value
};

struct EventLog {
    std::vector<ExecutionEvent> events;
    std::string program_id;
    std::string mode;  // "original" | "instrumented"
};

// Drops every call/return of the seven injected hooks (exorcise included) and
// renumbers seq densely. Idempotent.
EventLog filter_instrumentation(const EventLog& log);

struct Divergence {
    std::size_t index = 0;
    std::string a;  // rendered event, or "<absent>"
    std::string b;
};

struct EquivalenceVerdict {
    bool equal = true;
    std::optional<Divergence> first_divergence;
};

// Strict positional comparison of kind, method and payload.
EquivalenceVerdict compare(const EventLog& a, const EventLog& b);

// One event per line: seq<TAB>kind<TAB>method<TAB>payload
std::string serialize(const EventLog& log);
std::string render_event(const ExecutionEvent& e);

// True when call/return events follow stack discipline. Unwound or truncated
// calls may lack a return only at the tail of the log.
bool properly_nested(const EventLog& log);

}  // namespace gt::harness
