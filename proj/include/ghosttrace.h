/*
 * ghosttrace — null-propagation debugger for MiniLang programs.
 *
 * C API over the core library. Handles are opaque; every function that can
 * fail returns a gt_status and, where a char** slot is given, an explanatory
 * message. All returned strings are heap-allocated and must be released with
 * gt_string_free.
 */
#ifndef GHOSTTRACE_H
#define GHOSTTRACE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gt_status {
    GT_OK = 0,
    GT_ERR_PARSE = 1,
    GT_ERR_RESOLVE = 2,
    GT_ERR_ALREADY_INSTRUMENTED = 3,
    GT_ERR_INVALID = 4,
    GT_ERR_INTERNAL = 5
} gt_status;

typedef enum gt_mode { GT_MODE_ORIGINAL = 0, GT_MODE_INSTRUMENTED = 1 } gt_mode;

typedef enum gt_outcome {
    GT_OUTCOME_NORMAL = 0, /* entry method finished */
    GT_OUTCOME_NPE = 1,    /* a null dereference escaped; a report is available */
    GT_OUTCOME_ERROR = 2   /* any other runtime failure */
} gt_outcome;

typedef struct gt_program gt_program;
typedef struct gt_result gt_result;

const char* gt_status_name(gt_status status);
void gt_string_free(char* s);

/* Parse and resolve a .mini source. On failure returns GT_ERR_PARSE or
 * GT_ERR_RESOLVE with a file:line message in *error. */
gt_status gt_program_load(const char* source, const char* filename, gt_program** out,
                          char** error);

int gt_program_is_instrumented(const gt_program* p);

/* Apply the instrumentation pass. Refuses a program that already carries the
 * marker. *report (optional) receives a per-rule application summary. */
gt_status gt_program_instrument(const gt_program* p, gt_program** out, char** report);

/* Canonical MiniLang text; instrumented programs reparse losslessly. */
char* gt_program_print(const gt_program* p);

void gt_program_free(gt_program* p);

/* Execute. GT_MODE_INSTRUMENTED requires an instrumented program,
 * GT_MODE_ORIGINAL an uninstrumented one. */
gt_status gt_run(const gt_program* p, gt_mode mode, gt_result** out, char** error);

gt_outcome gt_result_outcome(const gt_result* r);
/* Rendered value of the entry method ("void" for void entries). */
char* gt_result_value(const gt_result* r);
char* gt_result_error(const gt_result* r);
/* Report of the escaped null dereference. Text layout: exception line and
 * stack first, then one causal block per display element, symptom first and
 * root cause last. `raw` appends the unprocessed link list. */
char* gt_result_report_text(const gt_result* r, int color, int raw);
char* gt_result_report_json(const gt_result* r);
/* Event log, one `seq<TAB>kind<TAB>method<TAB>payload` line per event. */
char* gt_result_events(const gt_result* r);
double gt_result_wall_ms(const gt_result* r);
void gt_result_free(gt_result* r);

/* Behavioral equivalence: runs the program original and instrumented,
 * filters the hook calls out of both logs and compares positionally.
 * *equal is 1 when the logs match; otherwise *detail (optional) describes
 * the first divergence. */
gt_status gt_check(const gt_program* original, int* equal, char** detail, char** error);

/* Median per-run wall-time of both modes over `repetitions`, batched against
 * clock resolution; instrumentation time itself is excluded. */
gt_status gt_measure_overhead(const gt_program* original, int repetitions, double* orig_ms,
                              double* instr_ms, double* ratio, char** error);

#ifdef __cplusplus
}
#endif

#endif /* GHOSTTRACE_H */
