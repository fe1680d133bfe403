#ifndef RLOCI_BENCH_HPP
#define RLOCI_BENCH_HPP

#include <string>
#include <vector>

#include "rloci/tracer.hpp"

namespace rloci {

/// One benchmark plant with its sweep conditions.
struct BenchCase {
    std::string name;
    RationalTF plant;
    double k_start = 0.0;
    double k_end = 10.0;
    double dk = 0.01;
};

/// The ten benchmark transfer functions g1..g10, built by expanding
/// their factored forms with exact polynomial arithmetic. All cases
/// default to K in [0, 10] with dk = 0.01.
std::vector<BenchCase> corpus();

struct BenchRow {
    std::string name;
    int repetitions = 0;
    double tracer_mean_s = 0.0;
    double tracer_min_s = 0.0;
    double exact_mean_s = 0.0;
    double exact_min_s = 0.0;
    /// exact_mean_s / tracer_mean_s.
    double speedup = 0.0;
    double err_mean = 0.0;
    double err_max = 0.0;
    bool ok = true;
    std::string message;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::string environment;
};

/// Times trace_locus against the exact per-grid-point baseline over
/// identical grids for every corpus case. One warm-up repetition per
/// case is run and discarded; timing uses the monotonic clock and
/// excludes I/O; the accuracy columns come from locus_error. Cases run
/// strictly serially. Per-case trace failures are recorded in the row,
/// not rethrown. Sweep knobs other than the per-case grid (stabilizer,
/// event thresholds, re-anchor period) come from cfg.
BenchReport run_bench(int repetitions, const TraceConfig& cfg = {});

std::string bench_report_to_json(const BenchReport& report);
BenchReport bench_report_from_json(const std::string& text);

/// Fixed-width human-readable table.
std::string bench_report_table(const BenchReport& report);

}  // namespace rloci

#endif
