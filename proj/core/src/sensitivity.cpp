#include "rloci/sensitivity.hpp"

#include <algorithm>
#include <cmath>

namespace rloci {

VelocityField velocity_field_from(const PoleResidueSet& set, double at_gain) {
    VelocityField field;
    field.at_gain = at_gain;
    int max_mult = 1;
    for (const auto& e : set.entries) {
        PoleVelocity v;
        v.pole = e.pole;
        v.multiplicity = e.multiplicity;
        if (e.multiplicity == 1) {
            v.velocity = -e.residue;
        } else {
            v.infinite_speed = true;
            v.generalized_residue = e.residue;
            max_mult = std::max(max_mult, e.multiplicity);
        }
        field.entries.push_back(v);
    }
    if (max_mult > 1) field.log_slope = -static_cast<double>(max_mult - 1) / max_mult;
    return field;
}

VelocityField gain_velocities(const RationalTF& g, double k, const RootsOptions& opts) {
    return velocity_field_from(closed_loop_residues(g, k, opts), k);
}

double multiple_pole_speed(Complex kbar, int r, double dk) {
    if (r < 2) throw Error(Errc::invalid_multiplicity, "multiple-pole law needs multiplicity >= 2");
    if (!(dk > 0.0)) throw std::invalid_argument("multiple_pole_speed requires dk > 0");
    return std::pow(std::abs(kbar) / std::pow(dk, r - 1), 1.0 / r);
}

const char* param_kind_name(ParamKind kind) {
    switch (kind) {
        case ParamKind::dynamic: return "dynamic";
        case ParamKind::dissipative: return "static";
        case ParamKind::connection: return "connection";
    }
    return "unknown";
}

ParamKind param_kind_from_name(const std::string& name) {
    if (name == "dynamic") return ParamKind::dynamic;
    if (name == "static") return ParamKind::dissipative;
    if (name == "connection") return ParamKind::connection;
    throw std::invalid_argument("unknown parameter kind: " + name);
}

namespace {

double coeff_distance(const Polynomial& a, const Polynomial& b) {
    double d = 0.0;
    const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(a.coeff(i) - b.coeff(i)));
    return d;
}

}  // namespace

ParamCharPoly::ParamCharPoly(std::vector<Parameter> params, std::vector<Decomposition> decomp,
                             Evaluator fallback)
    : params_(std::move(params)), decomp_(std::move(decomp)), fallback_(std::move(fallback)) {
    if (params_.empty()) throw std::invalid_argument("ParamCharPoly needs at least one parameter");
    if (decomp_.size() != params_.size())
        throw std::invalid_argument("one decomposition per parameter required");

    // Reassembly check: every declared A_i + q_i B_i must reproduce
    // the same delta(s).
    Polynomial reference = charpoly_with(0, params_[0].value);
    const double scale = std::max(reference.coeff_scale(), 1e-300);
    for (std::size_t i = 1; i < params_.size(); ++i) {
        Polynomial alt = charpoly_with(i, params_[i].value);
        if (coeff_distance(reference, alt) > 1e-10 * scale)
            throw std::invalid_argument("parameter decompositions reassemble to different delta(s)");
    }
    if (fallback_) {
        std::vector<double> values;
        for (const auto& p : params_) values.push_back(p.value);
        if (coeff_distance(reference, fallback_(values)) > 1e-10 * scale)
            throw std::invalid_argument("evaluator disagrees with analytic decomposition");
    }
}

ParamCharPoly::ParamCharPoly(std::vector<Parameter> params, Evaluator fallback)
    : params_(std::move(params)), fallback_(std::move(fallback)) {
    if (params_.empty()) throw std::invalid_argument("ParamCharPoly needs at least one parameter");
    if (!fallback_) throw std::invalid_argument("numeric-only model needs an evaluator");
}

std::size_t ParamCharPoly::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i].name == name) return i;
    throw Error(Errc::unknown_parameter, name);
}

bool ParamCharPoly::square_affine(std::size_t i) const {
    if (i >= params_.size()) throw Error(Errc::unknown_parameter, "parameter index out of range");
    return params_[i].kind == ParamKind::connection;
}

Polynomial ParamCharPoly::charpoly() const { return charpoly_with(0, params_[0].value); }

Polynomial ParamCharPoly::charpoly_with(std::size_t i, double value) const {
    if (i >= params_.size()) throw Error(Errc::unknown_parameter, "parameter index out of range");
    if (!decomp_.empty()) {
        const double q = square_affine(i) ? value * value : value;
        return decomp_[i].a + decomp_[i].b * Complex(q, 0.0);
    }
    return charpoly_from_evaluator(i, value);
}

Polynomial ParamCharPoly::charpoly_from_evaluator(std::size_t i, double value) const {
    if (i >= params_.size()) throw Error(Errc::unknown_parameter, "parameter index out of range");
    if (!fallback_) throw std::logic_error("model has no numeric evaluator");
    std::vector<double> values;
    values.reserve(params_.size());
    for (const auto& p : params_) values.push_back(p.value);
    values[i] = value;
    return fallback_(values);
}

ParamCharPoly::Decomposition ParamCharPoly::affine_in(std::size_t i) const {
    if (i >= params_.size()) throw Error(Errc::unknown_parameter, "parameter index out of range");
    if (!decomp_.empty()) return decomp_[i];

    // Refit delta = A + q B from two evaluations, then certify the fit
    // at a third point.
    const double h0 = params_[i].value;
    const double step = 0.5 * std::max(1.0, std::abs(h0));
    const double h1 = h0 + step;
    const double h2 = h0 - 0.3 * step;
    auto q_of = [&](double h) { return square_affine(i) ? h * h : h; };

    Polynomial d0 = charpoly_with(i, h0);
    Polynomial d1 = charpoly_with(i, h1);
    const double q0 = q_of(h0), q1 = q_of(h1), q2 = q_of(h2);
    if (std::abs(q1 - q0) < 1e-300)
        throw Error(Errc::non_affine_parameter, "degenerate refit interval for " + params_[i].name);
    Polynomial b = (d1 - d0) * Complex(1.0 / (q1 - q0), 0.0);
    Polynomial a = d0 - b * Complex(q0, 0.0);

    Polynomial check = a + b * Complex(q2, 0.0);
    Polynomial truth = charpoly_with(i, h2);
    const double scale = std::max({truth.coeff_scale(), a.coeff_scale(), 1e-300});
    if (coeff_distance(check, truth) > 1e-8 * scale)
        throw Error(Errc::non_affine_parameter,
                    "delta is not affine in " + params_[i].name + " (or its square)");
    return {a, b};
}

Polynomial param_derivative(const ParamCharPoly& model, std::size_t i) {
    const auto& params = model.parameters();
    if (i >= params.size()) throw Error(Errc::unknown_parameter, "parameter index out of range");
    const double h = params[i].value;

    std::optional<Polynomial> analytic;
    if (model.has_decomposition()) {
        auto dec = model.affine_in(i);
        analytic = model.square_affine(i) ? dec.b * Complex(2.0 * h, 0.0) : dec.b;
    }

    std::optional<Polynomial> numeric;
    if (model.has_fallback()) {
        // Central differences at steps d and d/2 with Richardson
        // extrapolation; both dependencies supported here (affine and
        // even quadratic) make the central difference exact up to
        // rounding, so the two estimates also serve as a consistency
        // check.
        const double d = 1e-6 * std::max(1.0, std::abs(h));
        auto central = [&](double step) {
            return (model.charpoly_from_evaluator(i, h + step) -
                    model.charpoly_from_evaluator(i, h - step)) *
                   Complex(1.0 / (2.0 * step), 0.0);
        };
        Polynomial d1 = central(d);
        Polynomial d2 = central(d / 2.0);
        numeric = d2 * Complex(4.0 / 3.0, 0.0) - d1 * Complex(1.0 / 3.0, 0.0);
        const double scale = std::max(numeric->coeff_scale(), 1e-300);
        if (analytic && coeff_distance(*analytic, *numeric) > 1e-6 * scale)
            throw Error(Errc::fallback_inconsistent,
                        "analytic and numeric derivatives disagree for " + params[i].name);
    }

    if (analytic) return *analytic;
    if (numeric) return *numeric;
    throw Error(Errc::non_affine_parameter, "model carries neither decomposition nor evaluator");
}

VelocityField param_velocities(const ParamCharPoly& model, std::size_t i,
                               const RootsOptions& opts) {
    Polynomial delta = model.charpoly();
    if (delta.degree() < 1)
        throw Error(Errc::degenerate_denominator, "delta must have degree >= 1");
    Polynomial nbar = param_derivative(model, i);
    if (nbar.is_zero()) {
        // Parameter absent from delta: every pole is stationary.
        VelocityField field;
        field.at_gain = model.parameters()[i].value;
        for (const auto& cl : find_roots(delta, opts).clusters) {
            PoleVelocity v;
            v.pole = cl.value;
            v.multiplicity = cl.multiplicity;
            v.velocity = Complex{};
            field.entries.push_back(v);
        }
        return field;
    }
    PoleResidueSet set = residues(nbar, delta, opts);
    return velocity_field_from(set, model.parameters()[i].value);
}

}  // namespace rloci
