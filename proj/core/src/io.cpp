#include "rloci/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rloci {

namespace {

using nlohmann::json;

[[noreturn]] void bad_format(const std::string& what) { throw std::invalid_argument(what); }

std::vector<Complex> coeff_list(const json& arr, const std::string& order, const char* field) {
    if (!arr.is_array() || arr.empty()) bad_format(std::string(field) + " must be a nonempty array");
    std::vector<Complex> c;
    c.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) bad_format(std::string(field) + " entries must be real numbers");
        c.emplace_back(v.get<double>(), 0.0);
    }
    if (order == "desc") std::reverse(c.begin(), c.end());
    return c;
}

Complex complex_entry(const json& v, const char* field) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    bad_format(std::string(field) + " entries must be numbers or [re, im] pairs");
}

std::string require_order(const json& j) {
    if (!j.contains("order")) bad_format("missing mandatory \"order\" field (\"asc\" or \"desc\")");
    std::string order = j.at("order").get<std::string>();
    if (order != "asc" && order != "desc") bad_format("\"order\" must be \"asc\" or \"desc\"");
    return order;
}

}  // namespace

RationalTF parse_plant(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad_format(std::string("plant spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) bad_format("plant spec must be a JSON object");

    const bool coeff_form = j.contains("num") || j.contains("den");
    const bool zpk_form = j.contains("zeros") || j.contains("poles") || j.contains("gain");
    if (coeff_form && zpk_form) bad_format("coefficient and zpk forms are mutually exclusive");

    if (coeff_form) {
        if (!j.contains("num") || !j.contains("den")) bad_format("coefficient form needs num and den");
        const std::string order = require_order(j);
        return RationalTF(Polynomial(coeff_list(j.at("num"), order, "num")),
                          Polynomial(coeff_list(j.at("den"), order, "den")));
    }
    if (zpk_form) {
        if (!j.contains("zeros") || !j.contains("poles") || !j.contains("gain"))
            bad_format("zpk form needs zeros, poles and gain");
        std::vector<Complex> zeros, poles;
        for (const auto& v : j.at("zeros")) zeros.push_back(complex_entry(v, "zeros"));
        for (const auto& v : j.at("poles")) poles.push_back(complex_entry(v, "poles"));
        if (!j.at("gain").is_number()) bad_format("gain must be a number");
        const double gain = j.at("gain").get<double>();
        if (gain == 0.0) bad_format("gain must be nonzero");
        Polynomial num = zeros.empty() ? Polynomial{Complex(gain, 0.0)}
                                       : Polynomial::from_roots(zeros, Complex(gain, 0.0));
        if (poles.empty()) bad_format("zpk form needs at least one pole");
        Polynomial den = Polynomial::from_roots(poles, Complex(1.0, 0.0));
        return RationalTF(std::move(num), std::move(den));
    }
    bad_format("plant spec must use coefficient form (num/den/order) or zpk form (zeros/poles/gain)");
}

RationalTF load_plant(const std::string& path) { return parse_plant(read_text_file(path)); }

ParamCharPoly parse_param_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad_format(std::string("parameter model is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("params") || !j.at("params").is_array() ||
        j.at("params").empty())
        bad_format("parameter model needs a nonempty \"params\" array");
    const std::string order = require_order(j);

    std::vector<Parameter> params;
    std::vector<ParamCharPoly::Decomposition> decomp;
    for (const auto& e : j.at("params")) {
        if (!e.contains("name") || !e.contains("value") || !e.contains("kind") ||
            !e.contains("A") || !e.contains("B"))
            bad_format("each parameter needs name, value, kind, A and B");
        Parameter p;
        p.name = e.at("name").get<std::string>();
        p.value = e.at("value").get<double>();
        try {
            p.kind = param_kind_from_name(e.at("kind").get<std::string>());
        } catch (const std::invalid_argument& err) {
            bad_format(err.what());
        }
        params.push_back(std::move(p));
        decomp.push_back({Polynomial(coeff_list(e.at("A"), order, "A")),
                          Polynomial(coeff_list(e.at("B"), order, "B"))});
    }
    try {
        return ParamCharPoly(std::move(params), std::move(decomp));
    } catch (const std::invalid_argument& err) {
        bad_format(err.what());
    }
}

ParamCharPoly load_param_model(const std::string& path) {
    return parse_param_model(read_text_file(path));
}

std::string format_double(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

std::string locus_to_csv(const Locus& locus, int digits) {
    std::ostringstream out;
    out << "k,branch,re,im,vel_re,vel_im\n";
    for (std::size_t j = 0; j < locus.branches.size(); ++j) {
        for (const auto& s : locus.branches[j]) {
            out << format_double(s.k, digits) << ',' << j << ',' << format_double(s.pole.real(), digits)
                << ',' << format_double(s.pole.imag(), digits) << ','
                << format_double(s.velocity.real(), digits) << ','
                << format_double(s.velocity.imag(), digits) << '\n';
        }
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Locus locus_from_csv(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) bad_format("empty locus CSV");
    if (line.rfind("k,branch,re,im,vel_re,vel_im", 0) != 0)
        bad_format("unexpected locus CSV header: " + line);

    std::map<std::size_t, std::vector<LocusSample>> branches;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        double vals[5];
        std::size_t branch = 0;
        for (int col = 0; col < 6; ++col) {
            if (!std::getline(row, field, ',' ))
                bad_format("locus CSV line " + std::to_string(lineno) + " has too few fields");
            try {
                if (col == 1)
                    branch = static_cast<std::size_t>(std::stoul(field));
                else
                    vals[col > 1 ? col - 1 : col] = std::stod(field);
            } catch (const std::exception&) {
                bad_format("locus CSV line " + std::to_string(lineno) + ": bad number '" + field + "'");
            }
        }
        branches[branch].push_back(
            {vals[0], Complex(vals[1], vals[2]), Complex(vals[3], vals[4])});
    }
    Locus locus;
    if (branches.empty()) return locus;
    const std::size_t nb = branches.rbegin()->first + 1;
    locus.branches.resize(nb);
    for (auto& [idx, samples] : branches) locus.branches[idx] = std::move(samples);
    return locus;
}

std::string events_to_json(const std::vector<LocusEvent>& events) {
    json j = json::array();
    for (const auto& e : events)
        j.push_back({{"k", e.k}, {"kind", event_kind_name(e.kind)}, {"detail", e.detail}});
    return j.dump(2);
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

std::string locus_to_svg(const Locus& locus, const SvgOptions& opts) {
    double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
    bool first = true;
    double max_vel = 0.0;
    for (const auto& branch : locus.branches) {
        for (const auto& s : branch) {
            if (first) {
                re_min = re_max = s.pole.real();
                im_min = im_max = s.pole.imag();
                first = false;
            }
            re_min = std::min(re_min, s.pole.real());
            re_max = std::max(re_max, s.pole.real());
            im_min = std::min(im_min, s.pole.imag());
            im_max = std::max(im_max, s.pole.imag());
            if (finite(s.velocity)) max_vel = std::max(max_vel, std::abs(s.velocity));
        }
    }
    if (first) {
        re_min = im_min = -1;
        re_max = im_max = 1;
    }
    double span_re = std::max(re_max - re_min, 1e-9);
    double span_im = std::max(im_max - im_min, 1e-9);
    re_min -= 0.08 * span_re;
    re_max += 0.08 * span_re;
    im_min -= 0.08 * span_im;
    im_max += 0.08 * span_im;
    span_re = re_max - re_min;
    span_im = im_max - im_min;

    const double margin = 48;
    const double pw = opts.width - 2 * margin;
    const double ph = opts.height - 2 * margin;
    auto X = [&](double re) { return margin + (re - re_min) / span_re * pw; };
    auto Y = [&](double im) { return margin + (im_max - im) / span_im * ph; };

    double arrow_scale = opts.arrow_scale;
    if (arrow_scale <= 0.0 && max_vel > 0.0)
        arrow_scale = 0.15 * std::max(span_re, span_im) / max_vel;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
        << opts.height << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\">\n";
    svg << "<metadata>rloci locus plot; arrow_scale=" << format_double(arrow_scale, 6)
        << "</metadata>\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // frame and ticks
    svg << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
    const int nticks = 6;
    for (int t = 0; t <= nticks; ++t) {
        double re = re_min + span_re * t / nticks;
        double im = im_min + span_im * t / nticks;
        svg << "<line x1=\"" << X(re) << "\" y1=\"" << margin + ph << "\" x2=\"" << X(re)
            << "\" y2=\"" << margin + ph + 5 << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << X(re) << "\" y=\"" << margin + ph + 18
            << "\" font-size=\"10\" text-anchor=\"middle\">" << format_double(re, 3) << "</text>\n";
        svg << "<line x1=\"" << margin - 5 << "\" y1=\"" << Y(im) << "\" x2=\"" << margin
            << "\" y2=\"" << Y(im) << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << margin - 8 << "\" y=\"" << Y(im) + 3
            << "\" font-size=\"10\" text-anchor=\"end\">" << format_double(im, 3) << "</text>\n";
    }
    // zero axes when inside the viewport
    if (re_min < 0 && re_max > 0)
        svg << "<line x1=\"" << X(0) << "\" y1=\"" << margin << "\" x2=\"" << X(0) << "\" y2=\""
            << margin + ph << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
    if (im_min < 0 && im_max > 0)
        svg << "<line x1=\"" << margin << "\" y1=\"" << Y(0) << "\" x2=\"" << margin + pw
            << "\" y2=\"" << Y(0) << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<text x=\"" << margin + pw / 2 << "\" y=\"" << opts.height - 8
        << "\" font-size=\"12\" text-anchor=\"middle\">Real Axis</text>\n";
    svg << "<text x=\"14\" y=\"" << margin + ph / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << margin + ph / 2 << ")\">Imaginary Axis</text>\n";

    for (std::size_t j = 0; j < locus.branches.size(); ++j) {
        const auto& branch = locus.branches[j];
        if (branch.empty()) continue;
        const char* color = kPalette[j % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& s : branch) svg << X(s.pole.real()) << ',' << Y(s.pole.imag()) << ' ';
        svg << "\"/>\n";
        // open-loop pole marker at the branch start
        svg << "<g stroke=\"" << color << "\" stroke-width=\"1.5\">"
            << "<line x1=\"" << X(branch[0].pole.real()) - 4 << "\" y1=\""
            << Y(branch[0].pole.imag()) - 4 << "\" x2=\"" << X(branch[0].pole.real()) + 4
            << "\" y2=\"" << Y(branch[0].pole.imag()) + 4 << "\"/>"
            << "<line x1=\"" << X(branch[0].pole.real()) - 4 << "\" y1=\""
            << Y(branch[0].pole.imag()) + 4 << "\" x2=\"" << X(branch[0].pole.real()) + 4
            << "\" y2=\"" << Y(branch[0].pole.imag()) - 4 << "\"/></g>\n";

        if (opts.velocity_arrows && arrow_scale > 0.0) {
            int stride = opts.arrow_stride > 0
                             ? opts.arrow_stride
                             : std::max<int>(1, static_cast<int>(branch.size()) / 12);
            for (std::size_t i = 0; i < branch.size(); i += static_cast<std::size_t>(stride)) {
                const auto& s = branch[i];
                if (!finite(s.velocity) || std::abs(s.velocity) == 0.0) continue;
                double x0 = X(s.pole.real()), y0 = Y(s.pole.imag());
                double x1 = X(s.pole.real() + arrow_scale * s.velocity.real());
                double y1 = Y(s.pole.imag() + arrow_scale * s.velocity.imag());
                svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\""
                    << y1 << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
                // arrowhead
                double dx = x1 - x0, dy = y1 - y0;
                double len = std::hypot(dx, dy);
                if (len < 1e-9) continue;
                dx /= len;
                dy /= len;
                const double ah = 4.0;
                svg << "<path d=\"M" << x1 << ' ' << y1 << " L" << x1 - ah * (dx + 0.5 * dy) << ' '
                    << y1 - ah * (dy - 0.5 * dx) << " L" << x1 - ah * (dx - 0.5 * dy) << ' '
                    << y1 - ah * (dy + 0.5 * dx) << " Z\" fill=\"" << color << "\"/>\n";
            }
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace rloci
