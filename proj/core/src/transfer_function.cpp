#include "rloci/transfer_function.hpp"

#include <cmath>

namespace rloci {

Properness classify_properness(const Polynomial& num, const Polynomial& den) {
    if (num.degree() > den.degree()) return Properness::improper;
    if (num.degree() == den.degree()) return Properness::proper;
    return Properness::strictly_proper;
}

RationalTF::RationalTF(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)), properness_(Properness::strictly_proper) {
    if (den_.degree() < 1)
        throw Error(Errc::degenerate_denominator, "denominator must have degree >= 1");
    properness_ = classify_properness(num_, den_);
    if (properness_ == Properness::improper)
        throw Error(Errc::improper_transfer_function, "deg N > deg D is not supported");

    const Complex lead = den_.leading();
    den_ = den_ * (1.0 / lead);
    num_ = num_ * (1.0 / lead);

    if (!num_.is_zero() && num_.degree() >= 1) {
        auto zeros = find_roots(num_);
        auto poles = find_roots(den_);
        for (Complex z : zeros.roots)
            for (Complex p : poles.roots)
                if (std::abs(z - p) < 1e-8) common_factor_warning_ = true;
    }
}

Polynomial closed_loop_charpoly(const RationalTF& g, double k) {
    Polynomial delta = g.den() + g.num() * Complex(k, 0.0);
    if (delta.degree() < g.den().degree()) {
        // Equal-degree plants lose a root when 1 + K * lead(N) cancels.
        throw Error(Errc::degree_drop_at_k,
                    "leading coefficient of delta(s, K) vanishes at this gain");
    }
    return delta;
}

PoleResidueSet residues(const Polynomial& num, const Polynomial& charpoly,
                        const RootsOptions& opts) {
    if (num.degree() > charpoly.degree())
        throw Error(Errc::improper_input, "residues require deg num <= deg charpoly");

    RootSet rs = find_roots(charpoly, opts);
    const Complex lead = charpoly.leading();

    // Evaluation-magnitude scale of the numerator, for flagging
    // stationary poles (num vanishes at the pole).
    const double num_scale = num.coeff_scale();

    PoleResidueSet out;
    out.entries.reserve(rs.clusters.size());
    for (std::size_t j = 0; j < rs.clusters.size(); ++j) {
        const auto& cl = rs.clusters[j];
        Complex denom = lead;
        for (std::size_t h = 0; h < rs.clusters.size(); ++h) {
            if (h == j) continue;
            for (int m = 0; m < rs.clusters[h].multiplicity; ++m)
                denom *= cl.value - rs.clusters[h].value;
        }
        const Complex num_at_pole = num(cl.value);
        PoleResidue entry;
        entry.pole = cl.value;
        entry.multiplicity = cl.multiplicity;
        entry.residue = num_at_pole / denom;
        const double eval_scale =
            num_scale * std::pow(std::max(1.0, std::abs(cl.value)), std::max(num.degree(), 0));
        entry.stationary = std::abs(num_at_pole) < 1e-12 * std::max(eval_scale, 1e-300);
        out.entries.push_back(entry);
    }
    return out;
}

PoleResidueSet closed_loop_residues(const RationalTF& g, double k, const RootsOptions& opts) {
    PoleResidueSet set = residues(g.num(), closed_loop_charpoly(g, k), opts);
    set.gain_k = k;
    return set;
}

}  // namespace rloci
