#pragma once

#include "ast.hpp"
#include "events.hpp"
#include "interp.hpp"

namespace gt::harness {

// Runs the program and returns its outcome together with the event log; the
// log simply accompanies the run outcome.
runtime::RunResult record_execution(const lang::Program& p, runtime::Mode mode);

// Paired original/instrumented runs compared after filtering out the
// instrumentation hooks. Both runs must be of the same source program.
EquivalenceVerdict check_equivalence(const lang::Program& original,
                                     const lang::Program& instrumented);

struct OverheadResult {
    double orig_ms = 0;   // median per-run wall time
    double instr_ms = 0;  // median per-run wall time, transform excluded
    double ratio = 0;
    bool low_confidence = false;  // single repetition
};

// Median instrumented/original wall-time ratio over `repetitions`. Runs are
// batched until each sample is long enough for the clock to be meaningful.
OverheadResult measure_overhead(const lang::Program& original,
                                const lang::Program& instrumented, int repetitions);

}  // namespace gt::harness
