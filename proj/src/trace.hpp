#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "location.hpp"

namespace gt::trace {

// One row per null-propagating construct. The set is closed.
enum class LinkKind { Literal, Entry, Invoke, Return, Unbox, Assign, Deref, Extern };

const char* kind_name(LinkKind k);  // "literal", "entry", ...

struct CausalLink {
    LinkKind kind;
    std::string variable;         // target variable name where one exists
    std::string expr_signature;   // signature of the expression involved
    std::string variable_kind;    // "parameter" | "local" | "field" | "expression" | ""
    lang::Location location;
    std::string thread = "main";
    std::vector<std::string> stack;  // frame descriptors, innermost first

    // Bookkeeping beyond the serialized format.
    bool extern_boundary = false;   // the construct sits at an opaque-library edge
    std::int64_t timestamp = 0;     // append index; strictly increasing per trace
    std::int64_t call_id = -1;      // correlates an entry link with its invocation link
};

// Temporally ordered and append-only: links are never reordered or dropped
// while the haunted value is alive.
struct CausalityTrace {
    std::vector<CausalLink> links;

    void append(CausalLink l) { links.push_back(std::move(l)); }
    bool empty() const { return links.empty(); }
};

struct DisplayElement {
    std::string message;
    lang::Location location;
    LinkKind lead_kind;                     // kind shown for this element
    std::vector<std::size_t> link_indices;  // raw links backing this element
    std::vector<std::string> stack;
};

struct DisplayTrace {
    std::vector<DisplayElement> elements;
};

struct Symptom {
    lang::Location location;
    std::string name;  // dereferenced variable, when syntactically available
    std::string kind;  // "parameter" | "local" | "field" | "expression"
    std::vector<std::string> stack;
};

struct NpeReport {
    Symptom symptom;
    CausalityTrace trace;    // raw, temporal order
    DisplayTrace display;
    bool traced = false;     // false for plain (uninstrumented) failures
};

struct Verdict {
    bool ok = true;
    std::string property;  // violated property label when !ok
    std::size_t index = 0;
    std::string message;
};

// Trace-shape check: a trace must start with a literal, or with a
// return/entry sitting at an opaque-library boundary; external-call links
// must carry an extern call site. A lone deref/unbox link is the documented
// degenerate shape for nulls that never crossed an instrumented site and is
// accepted.
Verdict validate(const CausalityTrace& t);

// Collapses the two documented redundancies: a literal immediately followed
// by an assignment at the same location, and an entry/invocation pair for the
// same call. Everything else maps one-to-one; raw links stay reachable
// through link_indices.
DisplayTrace postprocess(const CausalityTrace& t);

// Conventional stack trace first, then one block per display element in
// reverse-temporal order: symptom first, root cause last.
std::string render_text(const NpeReport& r, bool color = false, bool raw = false);

// Deterministic JSON: `symptom`, `links` (temporal order), `display`.
// Byte-identical across runs of the same program.
std::string render_json(const NpeReport& r);

}  // namespace gt::trace
