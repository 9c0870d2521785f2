#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ast.hpp"
#include "events.hpp"
#include "trace.hpp"

namespace gt::runtime {

struct ObjectData;
struct GhostData;

// Runtime value universe. Object and ghost values have identity; everything
// else is a plain value.
struct Value {
    enum class Kind { Void, Null, Int, Bool, Box, Object, Ghost };
    Kind kind = Kind::Void;
    long long i = 0;
    bool b = false;
    std::optional<long long> box;  // empty: a boxed null that never crossed a hook
    std::shared_ptr<ObjectData> obj;
    std::shared_ptr<GhostData> ghost;

    static Value void_() { return {}; }
    static Value null() {
        Value v;
        v.kind = Kind::Null;
        return v;
    }
    static Value int_(long long x) {
        Value v;
        v.kind = Kind::Int;
        v.i = x;
        return v;
    }
    static Value bool_(bool x) {
        Value v;
        v.kind = Kind::Bool;
        v.b = x;
        return v;
    }
    static Value boxed(std::optional<long long> x) {
        Value v;
        v.kind = Kind::Box;
        v.box = x;
        return v;
    }
    static Value object(std::shared_ptr<ObjectData> o) {
        Value v;
        v.kind = Kind::Object;
        v.obj = std::move(o);
        return v;
    }
    static Value of_ghost(std::shared_ptr<GhostData> g) {
        Value v;
        v.kind = Kind::Ghost;
        v.ghost = std::move(g);
        return v;
    }
    bool is_ghost() const { return kind == Kind::Ghost; }
    bool is_null() const { return kind == Kind::Null; }
};

struct ObjectData {
    std::string klass;
    long long creation_index = 0;
    std::unordered_map<std::string, Value> fields;
};

// An invocation link observed at a call site, committed to the trace right
// after the matching entry link so parameter bindings read entry-then-
// invocation, the order reports document.
struct PendingInvoke {
    std::string variable;
    std::string signature;
    lang::Location location;
    std::vector<std::string> stack;
};

// Behaves observably as null; carries the propagation history of the null it
// replaces and the class it haunts. Hooks never copy a ghost: they append to
// the one trace.
struct GhostData {
    std::string haunted;
    trace::CausalityTrace trace;
    std::vector<PendingInvoke> pending;
};

// Ghost values render as "null"; objects render as <Class@index> with a
// per-run creation index, so logs are byte-stable across runs.
std::string render_value(const Value& v);

enum class Mode { Original, Instrumented };

struct ExternObservation {
    std::string extern_name;
    std::vector<std::string> args;
    bool saw_ghost = false;  // must stay false: ghosts are exorcised at the boundary
};

struct RunResult {
    enum class Outcome { Normal, Npe, Error };
    Outcome outcome = Outcome::Normal;
    Value value;               // Normal: entry method result
    trace::NpeReport report;   // Npe
    std::string error;         // Error
    harness::EventLog events;
    double wall_ms = 0;
    std::vector<ExternObservation> extern_observations;
};

struct Options {
    long long step_limit = 200'000'000;
    int stack_limit = 512;
};

// Deterministic tree-walking evaluation. Instrumented mode requires the
// transform marker, original mode its absence; extern stubs behave per their
// declared kind in both. A bare-null failure yields a plain stack-trace-only
// report in original mode and a symptom-only trace in instrumented mode.
RunResult interpret(const lang::Program& p, Mode mode, const Options& opts = {});

}  // namespace gt::runtime
