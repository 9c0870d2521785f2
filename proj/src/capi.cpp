#include "ghosttrace.h"

#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "harness.hpp"
#include "interp.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "resolver.hpp"
#include "transform.hpp"

using namespace gt;

struct gt_program {
    lang::Program program;
};

struct gt_result {
    runtime::RunResult result;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_error(char** slot, const std::string& msg) {
    if (slot) *slot = dup_string(msg);
}

}  // namespace

extern "C" {

const char* gt_status_name(gt_status status) {
    switch (status) {
        case GT_OK: return "ok";
        case GT_ERR_PARSE: return "parse error";
        case GT_ERR_RESOLVE: return "resolve error";
        case GT_ERR_ALREADY_INSTRUMENTED: return "already instrumented";
        case GT_ERR_INVALID: return "invalid argument";
        case GT_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

void gt_string_free(char* s) { delete[] s; }

gt_status gt_program_load(const char* source, const char* filename, gt_program** out,
                          char** error) {
    if (!source || !out) {
        set_error(error, "null argument");
        return GT_ERR_INVALID;
    }
    *out = nullptr;
    try {
        lang::Program p = lang::parse(source, filename ? filename : "<memory>");
        lang::resolve(p);
        *out = new gt_program{std::move(p)};
        return GT_OK;
    } catch (const lang::ParseError& e) {
        set_error(error, e.what());
        return GT_ERR_PARSE;
    } catch (const lang::ResolveError& e) {
        set_error(error, e.what());
        return GT_ERR_RESOLVE;
    } catch (const std::exception& e) {
        set_error(error, e.what());
        return GT_ERR_INTERNAL;
    }
}

int gt_program_is_instrumented(const gt_program* p) {
    return p && p->program.instrumented ? 1 : 0;
}

gt_status gt_program_instrument(const gt_program* p, gt_program** out, char** report) {
    if (!p || !out) return GT_ERR_INVALID;
    *out = nullptr;
    try {
        transform::Result r = transform::instrument(p->program);
        if (report) *report = dup_string(transform::report_summary(r.report));
        *out = new gt_program{std::move(r.program)};
        return GT_OK;
    } catch (const transform::AlreadyInstrumented&) {
        return GT_ERR_ALREADY_INSTRUMENTED;
    } catch (const std::exception& e) {
        if (report) *report = dup_string(e.what());
        return GT_ERR_INTERNAL;
    }
}

char* gt_program_print(const gt_program* p) {
    if (!p) return nullptr;
    return dup_string(lang::pretty_print(p->program));
}

void gt_program_free(gt_program* p) { delete p; }

gt_status gt_run(const gt_program* p, gt_mode mode, gt_result** out, char** error) {
    if (!p || !out) {
        set_error(error, "null argument");
        return GT_ERR_INVALID;
    }
    *out = nullptr;
    try {
        runtime::RunResult r = runtime::interpret(
            p->program,
            mode == GT_MODE_INSTRUMENTED ? runtime::Mode::Instrumented
                                         : runtime::Mode::Original);
        *out = new gt_result{std::move(r)};
        return GT_OK;
    } catch (const std::invalid_argument& e) {
        set_error(error, e.what());
        return GT_ERR_INVALID;
    } catch (const std::exception& e) {
        set_error(error, e.what());
        return GT_ERR_INTERNAL;
    }
}

gt_outcome gt_result_outcome(const gt_result* r) {
    switch (r->result.outcome) {
        case runtime::RunResult::Outcome::Normal: return GT_OUTCOME_NORMAL;
        case runtime::RunResult::Outcome::Npe: return GT_OUTCOME_NPE;
        case runtime::RunResult::Outcome::Error: return GT_OUTCOME_ERROR;
    }
    return GT_OUTCOME_ERROR;
}

char* gt_result_value(const gt_result* r) {
    return dup_string(runtime::render_value(r->result.value));
}

char* gt_result_error(const gt_result* r) { return dup_string(r->result.error); }

char* gt_result_report_text(const gt_result* r, int color, int raw) {
    return dup_string(trace::render_text(r->result.report, color != 0, raw != 0));
}

char* gt_result_report_json(const gt_result* r) {
    return dup_string(trace::render_json(r->result.report));
}

char* gt_result_events(const gt_result* r) {
    return dup_string(harness::serialize(r->result.events));
}

double gt_result_wall_ms(const gt_result* r) { return r->result.wall_ms; }

void gt_result_free(gt_result* r) { delete r; }

gt_status gt_check(const gt_program* original, int* equal, char** detail, char** error) {
    if (!original || !equal) {
        set_error(error, "null argument");
        return GT_ERR_INVALID;
    }
    try {
        transform::Result t = transform::instrument(original->program);
        harness::EquivalenceVerdict v =
            harness::check_equivalence(original->program, t.program);
        *equal = v.equal ? 1 : 0;
        if (!v.equal && detail && v.first_divergence) {
            std::ostringstream os;
            os << "first divergence at event " << v.first_divergence->index << "\n"
               << "  original:     " << v.first_divergence->a << "\n"
               << "  instrumented: " << v.first_divergence->b << "\n";
            *detail = dup_string(os.str());
        }
        return GT_OK;
    } catch (const transform::AlreadyInstrumented&) {
        set_error(error, "program is already instrumented");
        return GT_ERR_ALREADY_INSTRUMENTED;
    } catch (const std::exception& e) {
        set_error(error, e.what());
        return GT_ERR_INTERNAL;
    }
}

gt_status gt_measure_overhead(const gt_program* original, int repetitions, double* orig_ms,
                              double* instr_ms, double* ratio, char** error) {
    if (!original) {
        set_error(error, "null argument");
        return GT_ERR_INVALID;
    }
    try {
        transform::Result t = transform::instrument(original->program);
        harness::OverheadResult o =
            harness::measure_overhead(original->program, t.program, repetitions);
        if (orig_ms) *orig_ms = o.orig_ms;
        if (instr_ms) *instr_ms = o.instr_ms;
        if (ratio) *ratio = o.ratio;
        return GT_OK;
    } catch (const std::exception& e) {
        set_error(error, e.what());
        return GT_ERR_INTERNAL;
    }
}

}  // extern "C"
