#include "rloci/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rloci {

namespace {

Polynomial real_poly(std::initializer_list<double> coeffs) {
    std::vector<Complex> c;
    c.reserve(coeffs.size());
    for (double v : coeffs) c.emplace_back(v, 0.0);
    return Polynomial(std::move(c));
}

}  // namespace

std::vector<BenchCase> corpus() {
    const Polynomial s = real_poly({0, 1});
    auto lin = [&](double a) { return real_poly({a, 1}); };  // s + a

    std::vector<BenchCase> cases;
    cases.reserve(10);
    auto add = [&](const std::string& name, Polynomial num, Polynomial den) {
        cases.push_back({name, RationalTF(std::move(num), std::move(den)), 0.0, 10.0, 0.01});
    };

    // g1 = (s+3) / (s (s+2))
    add("g1", lin(3), s * lin(2));
    // g2 = 4 s / ((s+4)((s+1)^2 + 2^2))
    add("g2", real_poly({0, 4}), lin(4) * real_poly({5, 2, 1}));
    // g3 = 10 (s-1) / (s (s+1)(s^2+8s+25))
    add("g3", real_poly({-10, 10}), s * lin(1) * real_poly({25, 8, 1}));
    // g4 = 10 (s+0.2) / ((s-1)(s-2)(s+10))
    add("g4", real_poly({2, 10}), lin(-1) * lin(-2) * lin(10));
    // g5 = 0.8 / (s ((s+2)^2 + 1))
    add("g5", real_poly({0.8}), s * real_poly({5, 4, 1}));
    // g6 = 12 / (s (s+1)(s+2)(s+3))
    add("g6", real_poly({12}), s * lin(1) * lin(2) * lin(3));
    // g7 = 12 / (s ((s+2)^2 + 1)(s+4))
    add("g7", real_poly({12}), s * real_poly({5, 4, 1}) * lin(4));
    // g8 = 10 (s+2)^2 / (s^2 (s+4)^2)
    add("g8", real_poly({10}) * lin(2) * lin(2), s * s * lin(4) * lin(4));
    // g9 = 30 (s^2+4s+25) / (s^2 (s+2)(s+6))
    add("g9", real_poly({30}) * real_poly({25, 4, 1}), s * s * lin(2) * lin(6));
    // g10 = 10 (s+2)^2 / (s^2 (s+2)^2 + 3 s (s+1)(s+3))
    add("g10", real_poly({10}) * lin(2) * lin(2),
        s * s * lin(2) * lin(2) + real_poly({3}) * s * lin(1) * lin(3));
    return cases;
}

BenchReport run_bench(int repetitions, const TraceConfig& cfg) {
    if (repetitions < 1) throw std::invalid_argument("run_bench requires repetitions >= 1");
    using clock = std::chrono::steady_clock;

    BenchReport report;
    {
        std::ostringstream env;
        env << "compiler=" <<
#if defined(__clang__)
            "clang " << __clang_major__ << "." << __clang_minor__
#elif defined(__GNUC__)
            "gcc " << __GNUC__ << "." << __GNUC_MINOR__
#else
            "unknown"
#endif
            << "; clock=steady_clock "
            << (double)clock::period::num / clock::period::den * 1e9 << "ns"
            << "; baseline=per-step exact all-roots solve (not MATLAB rlocus)";
        report.environment = env.str();
    }

    for (const BenchCase& bc : corpus()) {
        BenchRow row;
        row.name = bc.name;
        row.repetitions = repetitions;
        TraceConfig run_cfg = cfg;
        run_cfg.k_start = bc.k_start;
        run_cfg.k_end = bc.k_end;
        run_cfg.dk = bc.dk;
        try {
            // Warm-up repetition, discarded.
            Locus traced = trace_locus(bc.plant, run_cfg);
            Locus exact = exact_locus(bc.plant, run_cfg);
            auto [em, ex] = locus_error(traced, exact);
            row.err_mean = em;
            row.err_max = ex;

            double tracer_sum = 0.0, exact_sum = 0.0;
            double tracer_min = std::numeric_limits<double>::infinity();
            double exact_min = tracer_min;
            for (int r = 0; r < repetitions; ++r) {
                auto t0 = clock::now();
                Locus t = trace_locus(bc.plant, run_cfg);
                auto t1 = clock::now();
                Locus e = exact_locus(bc.plant, run_cfg);
                auto t2 = clock::now();
                double dt_tracer = std::chrono::duration<double>(t1 - t0).count();
                double dt_exact = std::chrono::duration<double>(t2 - t1).count();
                tracer_sum += dt_tracer;
                exact_sum += dt_exact;
                tracer_min = std::min(tracer_min, dt_tracer);
                exact_min = std::min(exact_min, dt_exact);
            }
            row.tracer_mean_s = tracer_sum / repetitions;
            row.tracer_min_s = tracer_min;
            row.exact_mean_s = exact_sum / repetitions;
            row.exact_min_s = exact_min;
            row.speedup = row.exact_mean_s / row.tracer_mean_s;
        } catch (const std::exception& e) {
            row.ok = false;
            row.message = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string bench_report_to_json(const BenchReport& report) {
    nlohmann::json j;
    j["environment"] = report.environment;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : report.rows) {
        j["rows"].push_back({{"name", r.name},
                             {"repetitions", r.repetitions},
                             {"tracer_mean_s", r.tracer_mean_s},
                             {"tracer_min_s", r.tracer_min_s},
                             {"exact_mean_s", r.exact_mean_s},
                             {"exact_min_s", r.exact_min_s},
                             {"speedup", r.speedup},
                             {"err_mean", r.err_mean},
                             {"err_max", r.err_max},
                             {"ok", r.ok},
                             {"message", r.message}});
    }
    return j.dump(2);
}

BenchReport bench_report_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BenchReport report;
    report.environment = j.at("environment").get<std::string>();
    for (const auto& e : j.at("rows")) {
        BenchRow r;
        r.name = e.at("name").get<std::string>();
        r.repetitions = e.at("repetitions").get<int>();
        r.tracer_mean_s = e.at("tracer_mean_s").get<double>();
        r.tracer_min_s = e.at("tracer_min_s").get<double>();
        r.exact_mean_s = e.at("exact_mean_s").get<double>();
        r.exact_min_s = e.at("exact_min_s").get<double>();
        r.speedup = e.at("speedup").get<double>();
        r.err_mean = e.at("err_mean").get<double>();
        r.err_max = e.at("err_max").get<double>();
        r.ok = e.at("ok").get<bool>();
        r.message = e.at("message").get<std::string>();
        report.rows.push_back(std::move(r));
    }
    return report;
}

std::string bench_report_table(const BenchReport& report) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-5s %4s %12s %12s %12s %8s %11s %11s\n", "case", "reps",
                  "tracer[ms]", "exact[ms]", "min(tr)[ms]", "speedup", "err_mean", "err_max");
    out << line;
    for (const auto& r : report.rows) {
        if (!r.ok) {
            std::snprintf(line, sizeof(line), "%-5s FAILED: %s\n", r.name.c_str(), r.message.c_str());
            out << line;
            continue;
        }
        std::snprintf(line, sizeof(line), "%-5s %4d %12.4f %12.4f %12.4f %7.2fx %11.3e %11.3e\n",
                      r.name.c_str(), r.repetitions, r.tracer_mean_s * 1e3, r.exact_mean_s * 1e3,
                      r.tracer_min_s * 1e3, r.speedup, r.err_mean, r.err_max);
        out << line;
    }
    out << "# " << report.environment << "\n";
    return out.str();
}

}  // namespace rloci
