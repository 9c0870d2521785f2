#include "trace.hpp"

#include <sstream>

#include "json.hpp"

namespace gt::trace {

const char* kind_name(LinkKind k) {
    switch (k) {
        case LinkKind::Literal: return "literal";
        case LinkKind::Entry: return "entry";
        case LinkKind::Invoke: return "invoke";
        case LinkKind::Return: return "return";
        case LinkKind::Unbox: return "unbox";
        case LinkKind::Assign: return "assign";
        case LinkKind::Deref: return "deref";
        case LinkKind::Extern: return "extern";
    }
    return "?";
}

Verdict validate(const CausalityTrace& t) {
    if (t.links.empty()) return {};
    // Degenerate symptom-only shape: the null never crossed an instrumented
    // site before failing.
    if (t.links.size() == 1 &&
        (t.links[0].kind == LinkKind::Deref || t.links[0].kind == LinkKind::Unbox))
        return {};
    const CausalLink& first = t.links[0];
    switch (first.kind) {
        case LinkKind::Literal:
            break;
        case LinkKind::Return:
            if (!first.extern_boundary)
                return {false, "c", 0,
                        "trace begins with a return that is not at an extern boundary"};
            break;
        case LinkKind::Entry:
            if (!first.extern_boundary)
                return {false, "a", 0,
                        "trace begins with an entry that is not at an extern boundary"};
            break;
        default:
            return {false, "a", 0,
                    std::string("trace begins with ") + kind_name(first.kind)};
    }
    for (std::size_t i = 0; i < t.links.size(); i++) {
        if (t.links[i].kind == LinkKind::Extern && !t.links[i].extern_boundary)
            return {false, "extern-site", i,
                    "external-call link does not sit at an extern call site"};
    }
    return {};
}

namespace {

std::string kind_title(const std::string& variable_kind) {
    if (variable_kind == "field") return "Field";
    if (variable_kind == "parameter") return "Parameter";
    return "Variable";
}

DisplayElement element_for(const CausalityTrace& t, std::size_t i) {
    const CausalLink& l = t.links[i];
    DisplayElement el;
    el.location = l.location;
    el.lead_kind = l.kind;
    el.link_indices = {i};
    el.stack = l.stack;
    switch (l.kind) {
        case LinkKind::Literal:
            el.message = "Null literal";
            break;
        case LinkKind::Entry:
            el.message = "Parameter " + l.variable + " received null at entry";
            break;
        case LinkKind::Invoke:
            el.message = "Null passed for parameter " + l.variable;
            if (!l.expr_signature.empty()) el.message += " (" + l.expr_signature + ")";
            break;
        case LinkKind::Return:
            el.message = "Null returned from " + l.expr_signature;
            break;
        case LinkKind::Unbox:
            el.message = "For " + (l.variable_kind.empty() ? "expression" : l.variable_kind) +
                         " : " + (l.variable.empty() ? l.expr_signature : l.variable);
            break;
        case LinkKind::Assign:
            el.message = kind_title(l.variable_kind) + " " + l.variable + " set to null (" +
                         l.expr_signature + ")";
            break;
        case LinkKind::Deref:
            el.message = "For " + (l.variable_kind.empty() ? "expression" : l.variable_kind) +
                         " : " + (l.variable.empty() ? l.expr_signature : l.variable);
            break;
        case LinkKind::Extern:
            el.message = "Passed to external call " + l.expr_signature;
            break;
    }
    return el;
}

}  // namespace

DisplayTrace postprocess(const CausalityTrace& t) {
    DisplayTrace d;
    const auto& ls = t.links;
    for (std::size_t i = 0; i < ls.size(); i++) {
        // Literal + assignment at one location: a single statement set the
        // value to null.
        if (i + 1 < ls.size() && ls[i].kind == LinkKind::Literal &&
            ls[i + 1].kind == LinkKind::Assign &&
            lang::same_location(ls[i].location, ls[i + 1].location)) {
            const CausalLink& a = ls[i + 1];
            DisplayElement el;
            el.message = kind_title(a.variable_kind) + " " + a.variable + " set to null";
            el.location = a.location;
            el.lead_kind = LinkKind::Assign;
            el.link_indices = {i, i + 1};
            el.stack = a.stack;
            d.elements.push_back(std::move(el));
            i++;
            continue;
        }
        // Entry/invocation pair for the same call: one parameter binding.
        // Committed adjacently by the runtime; accept either order.
        if (i + 1 < ls.size() && ls[i].call_id >= 0 && ls[i].call_id == ls[i + 1].call_id &&
            ((ls[i].kind == LinkKind::Entry && ls[i + 1].kind == LinkKind::Invoke) ||
             (ls[i].kind == LinkKind::Invoke && ls[i + 1].kind == LinkKind::Entry))) {
            const CausalLink& inv =
                ls[i].kind == LinkKind::Invoke ? ls[i] : ls[i + 1];
            DisplayElement el;
            el.message = "Parameter " + inv.variable + " bound to " + inv.expr_signature;
            el.location = inv.location;  // the call site
            el.lead_kind = LinkKind::Invoke;
            el.link_indices = {i, i + 1};
            el.stack = inv.stack;
            d.elements.push_back(std::move(el));
            i++;
            continue;
        }
        d.elements.push_back(element_for(t, i));
    }
    return d;
}

namespace {

constexpr const char* kBold = "\x1b[1;31m";
constexpr const char* kReset = "\x1b[0m";

void emit_frames(std::ostream& os, const std::vector<std::string>& stack) {
    for (const auto& f : stack) os << "\tat " << f << "\n";
}

}  // namespace

std::string render_text(const NpeReport& r, bool color, bool raw) {
    std::ostringstream os;
    auto mark = [&](const std::string& s) {
        return color ? std::string(kBold) + s + kReset : s;
    };
    os << "Exception in thread \"main\" NullPointerException\n";
    const auto& els = r.display.elements;
    if (els.empty()) {
        // Plain failure: the conventional stack trace is all there is.
        emit_frames(os, r.symptom.stack);
    } else {
        // Symptom element fused with the conventional stack trace, then the
        // causal chain back to the root cause, one location line per element.
        for (std::size_t k = els.size(); k-- > 0;) {
            const DisplayElement& el = els[k];
            os << mark(el.message) << "\n";
            if (k + 1 == els.size()) {
                emit_frames(os, r.symptom.stack);
            } else {
                std::vector<std::string> top;
                if (!el.stack.empty()) top.push_back(el.stack.front());
                emit_frames(os, top);
            }
        }
    }
    if (raw) {
        os << "-- raw trace --\n";
        for (std::size_t i = 0; i < r.trace.links.size(); i++) {
            const CausalLink& l = r.trace.links[i];
            os << i << "\t" << kind_name(l.kind) << "\t"
               << (l.variable.empty() ? "-" : l.variable) << "\t"
               << (l.expr_signature.empty() ? "-" : l.expr_signature) << "\t"
               << l.location.str() << "\n";
        }
    }
    return os.str();
}

std::string render_json(const NpeReport& r) {
    nlohmann::ordered_json j;
    j["symptom"] = {
        {"file", r.symptom.location.file},
        {"line", r.symptom.location.line},
        {"name", r.symptom.name},
        {"kind", r.symptom.kind},
    };
    auto links = nlohmann::ordered_json::array();
    for (const auto& l : r.trace.links) {
        links.push_back({
            {"kind", kind_name(l.kind)},
            {"variable", l.variable},
            {"exprSignature", l.expr_signature},
            {"file", l.location.file},
            {"line", l.location.line},
            {"thread", l.thread},
            {"stack", l.stack},
        });
    }
    j["links"] = std::move(links);
    auto display = nlohmann::ordered_json::array();
    for (const auto& el : r.display.elements) {
        display.push_back({
            {"message", el.message},
            {"file", el.location.file},
            {"line", el.location.line},
            {"links", el.link_indices},
        });
    }
    j["display"] = std::move(display);
    return j.dump(2) + "\n";
}

}  // namespace gt::trace
