#include "events.hpp"

#include <sstream>

namespace gt::harness {

namespace {

bool is_hook_event(const ExecutionEvent& e) {
    const std::string prefix = std::string(kHookClass) + "#";
    return e.method.rfind(prefix, 0) == 0;
}

}  // namespace

EventLog filter_instrumentation(const EventLog& log) {
    EventLog out;
    out.program_id = log.program_id;
    out.mode = log.mode;
    std::int64_t seq = 0;
    for (const auto& e : log.events) {
        if (is_hook_event(e)) continue;
        ExecutionEvent copy = e;
        copy.seq = seq++;
        out.events.push_back(std::move(copy));
    }
    return out;
}

std::string render_event(const ExecutionEvent& e) {
    std::ostringstream os;
    os << e.seq << "\t" << (e.kind == ExecutionEvent::Kind::Call ? "call" : "return") << "\t"
       << e.method << "\t" << e.payload;
    return os.str();
}

EquivalenceVerdict compare(const EventLog& a, const EventLog& b) {
    std::size_t n = std::max(a.events.size(), b.events.size());
    for (std::size_t i = 0; i < n; i++) {
        bool ha = i < a.events.size();
        bool hb = i < b.events.size();
        bool same = ha && hb && a.events[i].kind == b.events[i].kind &&
                    a.events[i].method == b.events[i].method &&
                    a.events[i].payload == b.events[i].payload;
        if (!same) {
            EquivalenceVerdict v;
            v.equal = false;
            v.first_divergence = Divergence{
                i,
                ha ? render_event(a.events[i]) : std::string("<absent>"),
                hb ? render_event(b.events[i]) : std::string("<absent>"),
            };
            return v;
        }
    }
    return {};
}

std::string serialize(const EventLog& log) {
    std::ostringstream os;
    for (const auto& e : log.events) os << render_event(e) << "\n";
    return os.str();
}

bool properly_nested(const EventLog& log) {
    std::vector<const std::string*> stack;
    for (const auto& e : log.events) {
        if (e.kind == ExecutionEvent::Kind::Call) {
            stack.push_back(&e.method);
        } else {
            if (stack.empty() || *stack.back() != e.method) return false;
            stack.pop_back();
        }
    }
    return true;  // unreturned tail calls are fine: the run was cut short
}

}  // namespace gt::harness
