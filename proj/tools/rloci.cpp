// rloci command-line front end: residues/velocity tables, root locus
// and contour tracing with CSV/SVG output, and the tracer-vs-exact
// benchmark.
//
// Exit codes: 0 success, 2 usage or file-format error, 3 numeric
// failure.
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rloci/bench.hpp"
#include "rloci/io.hpp"
#include "rloci/models.hpp"
#include "rloci/tracer.hpp"

namespace {

using namespace rloci;

std::string fmt_complex(Complex v, int digits) {
    if (std::isinf(std::abs(v))) return "inf";
    std::ostringstream out;
    out << format_double(v.real(), digits);
    if (v.imag() != 0.0) {
        out << (v.imag() < 0 ? "-" : "+") << format_double(std::abs(v.imag()), digits) << "i";
    }
    return out.str();
}

struct TraceFlags {
    double kmin = 0.0;
    double kmax = 1.0;
    double dk = 0.01;
    bool no_stabilizer = false;
    int reanchor = 0;

    TraceConfig config() const {
        TraceConfig cfg;
        cfg.k_start = kmin;
        cfg.k_end = kmax;
        cfg.dk = dk;
        cfg.stabilizer_on = !no_stabilizer;
        cfg.reanchor_every = reanchor;
        return cfg;
    }
};

void add_trace_flags(CLI::App* cmd, TraceFlags& flags) {
    cmd->add_option("--kmin", flags.kmin, "Sweep start")->required();
    cmd->add_option("--kmax", flags.kmax, "Sweep end")->required();
    cmd->add_option("--dk", flags.dk, "Grid precision (default 0.01)");
    cmd->add_flag("--no-stabilizer", flags.no_stabilizer,
                  "Drop the stabilizing correction term (ablation)");
    cmd->add_option("--reanchor", flags.reanchor, "Exact re-solve every N steps (0 = never)");
}

std::string svg_path_for(const std::string& out) {
    if (out.size() > 4 && out.substr(out.size() - 4) == ".csv")
        return out.substr(0, out.size() - 4) + ".svg";
    return out + ".svg";
}

void emit_locus(const Locus& locus, const std::string& out, bool svg, int digits) {
    if (out.empty()) {
        std::cout << locus_to_csv(locus, digits);
        return;
    }
    write_text_file(out, locus_to_csv(locus, digits));
    if (!locus.events.empty()) write_text_file(out + ".events.json", events_to_json(locus.events));
    if (svg) write_text_file(svg_path_for(out), locus_to_svg(locus));
}

int cmd_residues(const std::string& plant_path, double gain, int digits) {
    RationalTF plant = load_plant(plant_path);
    if (plant.common_factor_warning())
        std::cerr << "warning: numerator and denominator share a near-common root\n";
    PoleResidueSet set = closed_loop_residues(plant, gain);
    std::cout << "pole,multiplicity,residue,velocity\n";
    for (const auto& e : set.entries) {
        std::string velocity =
            e.multiplicity > 1 ? "inf" : fmt_complex(-e.residue, digits);
        std::cout << fmt_complex(e.pole, digits) << ',' << e.multiplicity << ','
                  << fmt_complex(e.residue, digits) << ',' << velocity << '\n';
    }
    return 0;
}

int cmd_trace(const std::string& plant_path, const TraceFlags& flags, const std::string& method,
              const std::string& out, bool svg, int digits) {
    RationalTF plant = load_plant(plant_path);
    TraceConfig cfg = flags.config();
    Locus locus = method == "exact" ? exact_locus(plant, cfg) : trace_locus(plant, cfg);
    emit_locus(locus, out, svg, digits);
    return 0;
}

int cmd_contour(const std::string& model_path, const std::string& param, const TraceFlags& flags,
                const std::string& out, bool svg, int digits) {
    ParamCharPoly model = load_param_model(model_path);
    Locus locus = trace_contour(model, model.index_of(param), flags.config());
    emit_locus(locus, out, svg, digits);
    return 0;
}

int cmd_paramvel(const std::string& model_path, int digits) {
    ParamCharPoly model = load_param_model(model_path);
    const auto& params = model.parameters();

    std::vector<VelocityField> fields;
    for (std::size_t i = 0; i < params.size(); ++i) fields.push_back(param_velocities(model, i));

    std::cout << "pole";
    for (const auto& p : params) std::cout << ",d/d" << p.name;
    std::cout << '\n';
    for (const auto& anchor : fields[0].entries) {
        std::cout << fmt_complex(anchor.pole, digits);
        for (const auto& field : fields) {
            double best = 1e300;
            const PoleVelocity* match = nullptr;
            for (const auto& e : field.entries) {
                if (std::abs(e.pole - anchor.pole) < best) {
                    best = std::abs(e.pole - anchor.pole);
                    match = &e;
                }
            }
            std::cout << ','
                      << (match->multiplicity > 1 ? "inf" : fmt_complex(match->velocity, digits));
        }
        std::cout << '\n';
    }
    return 0;
}

int cmd_bench(int reps, const std::string& out) {
    BenchReport report = run_bench(reps, TraceConfig{});
    std::cout << bench_report_table(report);
    if (!out.empty()) write_text_file(out, bench_report_to_json(report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Root locus and pole sensitivity analysis via partial-fraction residues"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global flags after the subcommand name
    int digits = 17;
    app.add_option("--digits", digits, "Significant digits for display output (default 17)")
        ->check(CLI::Range(1, 17));

    std::string plant_path, model_path, method = "tracer", out, param;
    bool svg = false;
    double gain = 0.0;
    int reps = 10;
    TraceFlags trace_flags, contour_flags;

    auto* residues_cmd = app.add_subcommand("residues", "Closed-loop residues and pole velocities");
    residues_cmd->add_option("plant", plant_path, "Plant spec JSON")->required();
    residues_cmd->add_option("--gain,-K", gain, "Feedback gain K (default 0)");

    auto* trace_cmd = app.add_subcommand("trace", "Trace the root locus over a gain range");
    trace_cmd->add_option("plant", plant_path, "Plant spec JSON")->required();
    add_trace_flags(trace_cmd, trace_flags);
    trace_cmd->add_option("--method", method, "tracer (default) or exact")
        ->check(CLI::IsMember({"tracer", "exact"}));
    trace_cmd->add_option("--out", out, "CSV output path (stdout when omitted)");
    trace_cmd->add_flag("--svg", svg, "Also write an SVG plot next to --out")->needs("--out");

    auto* contour_cmd =
        app.add_subcommand("contour", "Trace a contour locus over a parameter range");
    contour_cmd->add_option("model", model_path, "Parameter model JSON")->required();
    contour_cmd->add_option("--param", param, "Parameter name to sweep")->required();
    add_trace_flags(contour_cmd, contour_flags);
    contour_cmd->add_option("--out", out, "CSV output path (stdout when omitted)");
    contour_cmd->add_flag("--svg", svg, "Also write an SVG plot next to --out")->needs("--out");

    auto* paramvel_cmd =
        app.add_subcommand("paramvel", "Pole velocity table over all model parameters");
    paramvel_cmd->add_option("model", model_path, "Parameter model JSON")->required();

    auto* bench_cmd = app.add_subcommand("bench", "Time the tracer against the exact baseline");
    bench_cmd->add_option("--reps", reps, "Timed repetitions per case (default 10)")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out", out, "Write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        if (residues_cmd->parsed()) return cmd_residues(plant_path, gain, digits);
        if (trace_cmd->parsed()) return cmd_trace(plant_path, trace_flags, method, out, svg, digits);
        if (contour_cmd->parsed())
            return cmd_contour(model_path, param, contour_flags, out, svg, digits);
        if (paramvel_cmd->parsed()) return cmd_paramvel(model_path, digits);
        if (bench_cmd->parsed()) return cmd_bench(reps, out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
