// Command-line front end: run, transform, check and bench over .mini files.
// Uses only the public C API.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ghosttrace.h"

namespace {

constexpr int kExitNormal = 0;
constexpr int kExitNpe = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct StringOut {
    char* s = nullptr;
    ~StringOut() { gt_string_free(s); }
    std::string str() const { return s ? s : ""; }
};

struct ProgramHandle {
    gt_program* p = nullptr;
    ~ProgramHandle() { gt_program_free(p); }
};

struct ResultHandle {
    gt_result* r = nullptr;
    ~ResultHandle() { gt_result_free(r); }
};

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

bool color_enabled() {
    const char* env = std::getenv("GHOSTTRACE_COLOR");
    return env && std::string(env) == "1";
}

int load_program(const std::string& path, ProgramHandle& ph) {
    std::string source;
    if (!read_file(path, source)) {
        std::cerr << "error: cannot read " << path << "\n";
        return kExitInput;
    }
    StringOut err;
    std::string name = std::filesystem::path(path).filename().string();
    gt_status st = gt_program_load(source.c_str(), name.c_str(), &ph.p, &err.s);
    if (st != GT_OK) {
        std::cerr << "error: " << err.str() << "\n";
        return st == GT_ERR_PARSE || st == GT_ERR_RESOLVE ? kExitInput : kExitInternal;
    }
    return kExitNormal;
}

int cmd_run(const std::string& file, const std::string& format, bool raw) {
    ProgramHandle original;
    if (int rc = load_program(file, original)) return rc;
    if (gt_program_is_instrumented(original.p)) {
        std::cerr << "error: input is already instrumented\n";
        return kExitInput;
    }
    ProgramHandle instrumented;
    gt_status st = gt_program_instrument(original.p, &instrumented.p, nullptr);
    if (st != GT_OK) {
        std::cerr << "error: " << gt_status_name(st) << "\n";
        return kExitInternal;
    }
    ResultHandle res;
    StringOut err;
    st = gt_run(instrumented.p, GT_MODE_INSTRUMENTED, &res.r, &err.s);
    if (st != GT_OK) {
        std::cerr << "error: " << err.str() << "\n";
        return kExitInternal;
    }
    switch (gt_result_outcome(res.r)) {
        case GT_OUTCOME_NORMAL: {
            StringOut value;
            value.s = gt_result_value(res.r);
            if (value.str() != "void") std::cout << value.str() << "\n";
            return kExitNormal;
        }
        case GT_OUTCOME_NPE: {
            StringOut report;
            report.s = format == "json" ? gt_result_report_json(res.r)
                                        : gt_result_report_text(res.r, color_enabled(), raw);
            std::cerr << report.str();
            return kExitNpe;
        }
        case GT_OUTCOME_ERROR: {
            StringOut msg;
            msg.s = gt_result_error(res.r);
            std::cerr << "runtime error: " << msg.str() << "\n";
            return kExitInternal;
        }
    }
    return kExitInternal;
}

int cmd_transform(const std::string& file, const std::string& out_path, bool report) {
    ProgramHandle original;
    if (int rc = load_program(file, original)) return rc;
    ProgramHandle instrumented;
    StringOut summary;
    gt_status st = gt_program_instrument(original.p, &instrumented.p, &summary.s);
    if (st == GT_ERR_ALREADY_INSTRUMENTED) {
        std::cerr << "error: input is already instrumented\n";
        return kExitInput;
    }
    if (st != GT_OK) {
        std::cerr << "error: " << gt_status_name(st) << "\n";
        return kExitInternal;
    }
    StringOut text;
    text.s = gt_program_print(instrumented.p);
    if (out_path.empty()) {
        std::cout << text.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kExitInternal;
        }
        out << text.str();
    }
    if (report) std::cerr << summary.str();
    return kExitNormal;
}

int cmd_check(const std::string& file) {
    ProgramHandle original;
    if (int rc = load_program(file, original)) return rc;
    if (gt_program_is_instrumented(original.p)) {
        std::cerr << "error: input is already instrumented\n";
        return kExitInput;
    }
    int equal = 0;
    StringOut detail, err;
    gt_status st = gt_check(original.p, &equal, &detail.s, &err.s);
    if (st != GT_OK) {
        std::cerr << "error: " << err.str() << "\n";
        return kExitInternal;
    }
    if (equal) {
        std::cout << "EQUIVALENT\n";
        return kExitNormal;
    }
    std::cout << "DIVERGENT\n" << detail.str();
    return kExitNpe;
}

struct BenchRow {
    std::string program;
    double orig_ms = 0;
    double instr_ms = 0;
    double ratio = 0;
};

int cmd_bench(const std::string& dir, bool csv, int reps) {
    std::vector<std::string> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.path().extension() == ".mini") files.push_back(entry.path().string());
    }
    if (ec) {
        std::cerr << "error: cannot read directory " << dir << "\n";
        return kExitInput;
    }
    std::sort(files.begin(), files.end());
    std::vector<BenchRow> rows;
    for (const auto& f : files) {
        ProgramHandle p;
        if (load_program(f, p) != kExitNormal) return kExitInput;
        BenchRow row;
        row.program = std::filesystem::path(f).filename().string();
        StringOut err;
        gt_status st = gt_measure_overhead(p.p, reps, &row.orig_ms, &row.instr_ms,
                                           &row.ratio, &err.s);
        if (st != GT_OK) {
            std::cerr << "error: " << err.str() << "\n";
            return kExitInternal;
        }
        rows.push_back(row);
    }
    if (csv) {
        std::printf("program,orig_ms,instr_ms,ratio\n");
        for (const auto& r : rows)
            std::printf("%s,%.4f,%.4f,%.2f\n", r.program.c_str(), r.orig_ms, r.instr_ms,
                        r.ratio);
    } else {
        std::printf("%-28s %12s %12s %8s\n", "program", "orig_ms", "instr_ms", "ratio");
        for (const auto& r : rows)
            std::printf("%-28s %12.4f %12.4f %7.2fx\n", r.program.c_str(), r.orig_ms,
                        r.instr_ms, r.ratio);
        if (reps == 1 && !rows.empty())
            std::printf("note: single repetition, low confidence\n");
    }
    return kExitNormal;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ghosttrace — null-propagation debugger for MiniLang"};
    app.require_subcommand(1);

    std::string run_file, run_format = "text";
    bool run_raw = false;
    auto* run = app.add_subcommand("run", "instrument and execute a program");
    run->add_option("file", run_file, "MiniLang source file")->required();
    run->add_option("--trace-format", run_format, "report format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    run->add_flag("--raw", run_raw, "append the unprocessed causal links");

    std::string tf_file, tf_out;
    bool tf_report = false;
    auto* tf = app.add_subcommand("transform", "emit the instrumented source");
    tf->add_option("file", tf_file, "MiniLang source file")->required();
    tf->add_option("-o,--output", tf_out, "write to a file instead of stdout");
    tf->add_flag("--report", tf_report, "print per-rule application counts");

    std::string check_file;
    auto* check = app.add_subcommand("check", "compare original and instrumented behavior");
    check->add_option("file", check_file, "MiniLang source file")->required();

    std::string bench_dir;
    bool bench_csv = false;
    int bench_reps = 5;
    auto* bench = app.add_subcommand("bench", "time every program in a directory");
    bench->add_option("dir", bench_dir, "directory of .mini files")->required();
    bench->add_flag("--csv", bench_csv, "machine-readable output");
    bench->add_option("--reps", bench_reps, "repetitions per program")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(run_file, run_format, run_raw);
    if (tf->parsed()) return cmd_transform(tf_file, tf_out, tf_report);
    if (check->parsed()) return cmd_check(check_file);
    if (bench->parsed()) return cmd_bench(bench_dir, bench_csv, bench_reps);
    return kExitInternal;
}
