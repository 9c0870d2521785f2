#include "harness.hpp"

#include <algorithm>
#include <chrono>

namespace gt::harness {

runtime::RunResult record_execution(const lang::Program& p, runtime::Mode mode) {
    return runtime::interpret(p, mode);
}

EquivalenceVerdict check_equivalence(const lang::Program& original,
                                     const lang::Program& instrumented) {
    runtime::RunResult a = runtime::interpret(original, runtime::Mode::Original);
    runtime::RunResult b = runtime::interpret(instrumented, runtime::Mode::Instrumented);
    return compare(filter_instrumentation(a.events), filter_instrumentation(b.events));
}

namespace {

using Clock = std::chrono::steady_clock;

double time_batch(const lang::Program& p, runtime::Mode mode, int iters) {
    auto start = Clock::now();
    for (int i = 0; i < iters; i++) runtime::interpret(p, mode);
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    size_t n = xs.size();
    if (n == 0) return 0;
    return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

}  // namespace

OverheadResult measure_overhead(const lang::Program& original,
                                const lang::Program& instrumented, int repetitions) {
    if (repetitions < 1) repetitions = 1;
    // Calibrate batch size on the original program so micro-runs are not
    // timed against clock resolution.
    int iters = 1;
    while (iters < 4096 && time_batch(original, runtime::Mode::Original, iters) < 10.0)
        iters *= 2;
    std::vector<double> orig, instr;
    for (int r = 0; r < repetitions; r++) {
        orig.push_back(time_batch(original, runtime::Mode::Original, iters) / iters);
        instr.push_back(time_batch(instrumented, runtime::Mode::Instrumented, iters) / iters);
    }
    OverheadResult out;
    out.orig_ms = median(orig);
    out.instr_ms = median(instr);
    out.ratio = out.orig_ms > 0 ? out.instr_ms / out.orig_ms : 0;
    out.low_confidence = repetitions == 1;
    return out;
}

}  // namespace gt::harness
