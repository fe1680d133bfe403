// Acceptance suite: one pass/fail line per criterion. Returns the
// number of failed criteria as the exit code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rloci/bench.hpp"
#include "rloci/models.hpp"
#include "rloci/tracer.hpp"

using namespace rloci;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

RationalTF case_study_plant() {
    return RationalTF(Polynomial{0, 4}, Polynomial{20, 13, 6, 1});
}

bool within_factor(double value, double reference, double factor) {
    return value >= reference / factor && value <= reference * factor;
}

Complex field_velocity_at(const VelocityField& f, Complex pole) {
    double best = 1e300;
    Complex v{};
    for (const auto& e : f.entries) {
        if (std::abs(e.pole - pole) < best) {
            best = std::abs(e.pole - pole);
            v = e.velocity;
        }
    }
    return v;
}

// ---- criterion 1: golden residues/velocities of the case study ----
bool criterion_golden_velocities(std::string& detail) {
    RationalTF g = case_study_plant();

    struct Golden {
        double k;
        Complex pole;
        Complex velocity;
    };
    const std::vector<Golden> golden = {
        {0.0, {-4, 0}, {1.231, 0}},          {0.0, {-1, 2}, {-0.615, 0.077}},
        {0.0, {-1, -2}, {-0.615, -0.077}},   {2.0, {-1.362, 0}, {0.533, 0}},
        {2.0, {-2.319, 3.050}, {-0.267, 0.739}}, {2.0, {-2.319, -3.050}, {-0.267, -0.739}},
    };

    double worst = 0.0;
    for (const auto& gold : golden) {
        VelocityField f = gain_velocities(g, gold.k);
        Complex v = field_velocity_at(f, gold.pole);
        worst = std::max(worst, std::max(std::abs(v.real() - gold.velocity.real()),
                                         std::abs(v.imag() - gold.velocity.imag())));
    }

    const int reps = 200;
    auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) {
        volatile double sink = closed_loop_residues(g, 2.0).entries[0].residue.real();
        (void)sink;
    }
    double per_call_ms = seconds_since(t0) / reps * 1e3;

    std::ostringstream os;
    os << "max component error " << worst << " (tol 1e-3), " << per_call_ms << " ms/call";
    detail = os.str();
    return worst <= 1e-3 && per_call_ms < 1.0;
}

// ---- criterion 2: closed-loop poles of the case study at K=2 ----
bool criterion_closed_loop_poles(std::string& detail) {
    auto roots = find_roots(closed_loop_charpoly(case_study_plant(), 2.0)).roots;
    std::vector<Complex> expected = {{-2.319, -3.050}, {-2.319, 3.050}, {-1.362, 0}};
    auto matched = oracle::match_to(expected, roots);
    double worst = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i)
        worst = std::max(worst, std::abs(expected[i] - matched[i]));
    std::ostringstream os;
    os << "max pole error " << worst << " (tol 1e-3)";
    detail = os.str();
    return worst <= 1e-3;
}

// ---- criterion 3: stabilizer ablation on g10 ----
bool criterion_stabilizer_ablation(std::string& detail) {
    auto t0 = clock_type::now();
    RationalTF g10 = [] {
        for (const auto& bc : corpus())
            if (bc.name == "g10") return bc.plant;
        throw std::logic_error("corpus misses g10");
    }();
    TraceConfig cfg;
    cfg.k_start = 0.0;
    cfg.k_end = 10.0;
    cfg.dk = 0.01;

    Locus truth = exact_locus(g10, cfg);
    cfg.stabilizer_on = true;
    auto [mean_on, max_on] = locus_error(trace_locus(g10, cfg), truth);
    cfg.stabilizer_on = false;
    auto [mean_off, max_off] = locus_error(trace_locus(g10, cfg), truth);
    double elapsed = seconds_since(t0);

    bool ok = within_factor(mean_on, 6.13e-5, 3.0) && within_factor(max_on, 3.5e-3, 3.0) &&
              within_factor(mean_off, 5.11e-3, 3.0) && within_factor(max_off, 5.07e-2, 3.0) &&
              mean_on * 10.0 <= mean_off && elapsed < 5.0;
    std::ostringstream os;
    os << "stabilized (" << mean_on << ", " << max_on << ") vs (6.13e-5, 3.5e-3); unstabilized ("
       << mean_off << ", " << max_off << ") vs (5.11e-3, 5.07e-2); " << elapsed << " s";
    detail = os.str();
    return ok;
}

// ---- criterion 4: finite-difference oracle suite ----
bool criterion_fd_oracles(std::string& detail) {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> deg(2, 6);
    std::uniform_real_distribution<double> gain(0.1, 1.5);

    double worst_gain = 0.0;
    int accepted = 0;
    while (accepted < 50) {
        RationalTF g = oracle::random_strictly_proper_plant(rng, deg(rng));
        double k = gain(rng);
        auto rs = find_roots(closed_loop_charpoly(g, k));
        bool simple = rs.clusters.size() == rs.roots.size();
        double min_sep = 1e300;
        double max_mag = 0.0;
        for (std::size_t a = 0; a < rs.roots.size(); ++a) {
            max_mag = std::max(max_mag, std::abs(rs.roots[a]));
            for (std::size_t b = a + 1; b < rs.roots.size(); ++b)
                min_sep = std::min(min_sep, std::abs(rs.roots[a] - rs.roots[b]));
        }
        if (!simple || min_sep < 0.3 || max_mag > 10.0) continue;
        ++accepted;

        VelocityField f = gain_velocities(g, k);
        auto fd = oracle::fd_gain_velocities(g, k);
        for (const auto& e : f.entries) {
            double best = 1e300;
            Complex fd_vel{};
            for (const auto& [pole, vel] : fd) {
                if (std::abs(pole - e.pole) < best) {
                    best = std::abs(pole - e.pole);
                    fd_vel = vel;
                }
            }
            worst_gain = std::max(worst_gain, std::abs(e.velocity - fd_vel));
        }
    }

    double worst_param = 0.0;
    std::uniform_real_distribution<double> hval(0.4, 2.5);
    std::uniform_real_distribution<double> coeff(-2, 2);
    accepted = 0;
    while (accepted < 20) {
        int n = deg(rng);
        auto poles = oracle::random_pole_set(rng, n, 8.0, 0.4);
        Polynomial delta = Polynomial::from_roots(poles, Complex{1, 0});
        std::vector<Complex> bc;
        for (int i = 0; i < n; ++i) bc.emplace_back(coeff(rng), 0.0);
        Polynomial b(bc);
        double h0 = hval(rng);
        Polynomial a = delta - b * Complex{h0, 0};
        std::vector<Parameter> params = {{"h", h0, ParamKind::dynamic}};
        std::vector<ParamCharPoly::Decomposition> decomp = {{a, b}};
        ParamCharPoly model(params, decomp);
        ++accepted;

        VelocityField f = param_velocities(model, 0);
        auto fd = oracle::fd_param_velocities(model, 0);
        for (const auto& e : f.entries) {
            if (e.multiplicity > 1) continue;
            double best = 1e300;
            Complex fd_vel{};
            for (const auto& [pole, vel] : fd) {
                if (std::abs(pole - e.pole) < best) {
                    best = std::abs(pole - e.pole);
                    fd_vel = vel;
                }
            }
            worst_param = std::max(worst_param, std::abs(e.velocity - fd_vel));
        }
    }

    std::ostringstream os;
    os << "50 plants: max gain-velocity error " << worst_gain << "; 20 models: max param error "
       << worst_param << " (tol 1e-4)";
    detail = os.str();
    return worst_gain <= 1e-4 && worst_param <= 1e-4;
}

// ---- criterion 5: multiple-pole displacement exponent ----
bool criterion_multiple_pole_law(std::string& detail) {
    std::ostringstream os;
    bool ok = true;
    for (int r : {2, 3}) {
        std::vector<Complex> dc(static_cast<std::size_t>(r) + 1, Complex{});
        dc.back() = Complex{1, 0};
        RationalTF g(Polynomial{1}, Polynomial(dc));  // closed loop s^r + K
        std::vector<double> lx, ly;
        for (double dk = 1e-2; dk >= 0.5e-6; dk /= 10.0) {
            auto roots = find_roots(closed_loop_charpoly(g, dk)).roots;
            double mean_disp = 0.0;
            for (Complex z : roots) mean_disp += std::abs(z);
            mean_disp /= static_cast<double>(roots.size());
            lx.push_back(std::log10(dk));
            ly.push_back(std::log10(mean_disp));
        }
        double slope = oracle::regression_slope(lx, ly);
        os << "r=" << r << " slope " << slope << " (want " << 1.0 / r << " +/- 0.01); ";
        ok = ok && std::abs(slope - 1.0 / r) < 0.01;
    }
    detail = os.str();
    return ok;
}

// ---- criterion 6: benchmark property over the ten plants ----
bool criterion_benchmark(std::string& detail) {
    auto t0 = clock_type::now();
    BenchReport report = run_bench(10, TraceConfig{});
    double elapsed = seconds_since(t0);

    int wins = 0;
    std::ostringstream os;
    os << "speedups:";
    for (const auto& row : report.rows) {
        if (row.ok && row.tracer_mean_s < row.exact_mean_s) ++wins;
        os << ' ' << row.name << '=' << std::fixed;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2fx", row.speedup);
        os << buf;
    }
    os << "; tracer faster on " << wins << "/10; " << elapsed << " s";
    detail = os.str();
    return wins >= 8 && elapsed < 60.0;
}

// ---- criterion 7: dc motor case study ----
bool criterion_dc_motor(std::string& detail) {
    ParamCharPoly motor = dc_motor();
    double pole_scale = 0.0;
    for (Complex r : find_roots(motor.charpoly()).roots)
        pole_scale = std::max(pole_scale, std::abs(r));

    double worst = 0.0;
    for (const char* name : {"L", "R", "J", "b", "Ke"}) {
        std::size_t i = motor.index_of(name);
        VelocityField f = param_velocities(motor, i);
        auto fd = oracle::fd_param_velocities(motor, i);
        for (const auto& e : f.entries) {
            double best = 1e300;
            Complex fd_vel{};
            for (const auto& [pole, vel] : fd) {
                if (std::abs(pole - e.pole) < best) {
                    best = std::abs(pole - e.pole);
                    fd_vel = vel;
                }
            }
            worst = std::max(worst, std::abs(e.velocity - fd_vel) / pole_scale);
        }
    }

    // structure: linear in L, R, J, b
    bool structure_ok = true;
    const double scale = motor.charpoly().coeff_scale();
    for (const char* name : {"L", "R", "J", "b"}) {
        std::size_t i = motor.index_of(name);
        const double h = motor.parameters()[i].value;
        const double d = 0.25 * std::max(1.0, std::abs(h));
        Polynomial second = motor.charpoly_from_evaluator(i, h + d) -
                            motor.charpoly_from_evaluator(i, h) * Complex{2, 0} +
                            motor.charpoly_from_evaluator(i, h - d);
        if (second.coeff_scale() > 1e-12 * scale) structure_ok = false;
        if (motor.square_affine(i)) structure_ok = false;
    }
    // even quadratic in Ke
    std::size_t ke = motor.index_of("Ke");
    if (!motor.square_affine(ke)) structure_ok = false;
    const double v = motor.parameters()[ke].value;
    Polynomial even = motor.charpoly_from_evaluator(ke, v) - motor.charpoly_from_evaluator(ke, -v);
    if (even.coeff_scale() > 1e-14 * scale) structure_ok = false;
    const double d = 0.3;
    Polynomial third = motor.charpoly_from_evaluator(ke, v + 1.5 * d) -
                       motor.charpoly_from_evaluator(ke, v + 0.5 * d) * Complex{3, 0} +
                       motor.charpoly_from_evaluator(ke, v - 0.5 * d) * Complex{3, 0} -
                       motor.charpoly_from_evaluator(ke, v - 1.5 * d);
    if (third.coeff_scale() > 1e-12 * scale) structure_ok = false;

    std::ostringstream os;
    os << "max velocity error " << worst << " of pole scale (tol 1e-4); structure checks "
       << (structure_ok ? "hold" : "FAIL");
    detail = os.str();
    return worst <= 1e-4 && structure_ok;
}

// ---- criterion 8: tangency to the exact locus ----
bool criterion_tangency(std::string& detail) {
    RationalTF g = case_study_plant();
    double worst = 0.0;
    for (double k : {0.0, 0.5, 1.0, 2.0}) {
        VelocityField f = gain_velocities(g, k);
        auto secants = oracle::fd_gain_velocities(g, k, 1e-4);
        for (const auto& e : f.entries) {
            double best = 1e300;
            Complex secant{};
            for (const auto& [pole, vel] : secants) {
                if (std::abs(pole - e.pole) < best) {
                    best = std::abs(pole - e.pole);
                    secant = vel;
                }
            }
            double cross = e.velocity.real() * secant.imag() - e.velocity.imag() * secant.real();
            double dot = e.velocity.real() * secant.real() + e.velocity.imag() * secant.imag();
            worst = std::max(worst, std::abs(std::atan2(cross, dot)));
        }
    }
    std::ostringstream os;
    os << "max angular error " << worst << " rad (tol 1e-3)";
    detail = os.str();
    return worst <= 1e-3;
}

// ---- criterion 9: polynomial round-trip kernel ----
bool criterion_poly_round_trip(std::string& detail) {
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> deg(2, 10);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        auto roots = oracle::random_pole_set(rng, deg(rng), 10.0, 1.5e-3);
        Polynomial p = Polynomial::from_roots(roots, Complex{1, 0});
        auto rs = find_roots(p);
        if (rs.roots.size() != roots.size()) {
            detail = "lost roots on instance " + std::to_string(rep);
            return false;
        }
        auto matched = oracle::match_to(roots, rs.roots);
        for (std::size_t i = 0; i < roots.size(); ++i)
            worst = std::max(worst, std::abs(roots[i] - matched[i]));
    }
    std::ostringstream os;
    os << "200 instances, worst recovery error " << worst << " (tol 1e-7)";
    detail = os.str();
    return worst <= 1e-7;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* label;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "golden residues/velocities (case-study plant)", criterion_golden_velocities},
        {2, "closed-loop poles at K=2", criterion_closed_loop_poles},
        {3, "stabilizer ablation on g10", criterion_stabilizer_ablation},
        {4, "finite-difference oracle suite", criterion_fd_oracles},
        {5, "multiple-pole displacement law", criterion_multiple_pole_law},
        {6, "benchmark: tracer vs exact baseline", criterion_benchmark},
        {7, "dc motor parameter sensitivities", criterion_dc_motor},
        {8, "tangency of velocity vectors", criterion_tangency},
        {9, "polynomial root round trip", criterion_poly_round_trip},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string det;
        bool ok = false;
        try {
            ok = c.run(det);
        } catch (const std::exception& e) {
            det = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", c.id, c.label,
                    det.c_str());
        std::fflush(stdout);
    }
    return failures;
}
