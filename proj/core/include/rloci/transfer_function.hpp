#ifndef RLOCI_TRANSFER_FUNCTION_HPP
#define RLOCI_TRANSFER_FUNCTION_HPP

#include <optional>
#include <vector>

#include "rloci/polynomial.hpp"

namespace rloci {

enum class Properness { strictly_proper, proper, improper };

Properness classify_properness(const Polynomial& num, const Polynomial& den);

/// Rational transfer function G(s) = N(s)/D(s), stored with a monic
/// denominator (numerator rescaled by the same factor, so the value of
/// G is unchanged at every s). The denominator must have degree >= 1;
/// improper functions (deg N > deg D) are rejected because closing the
/// loop would change the pole count with K.
class RationalTF {
public:
    RationalTF(Polynomial num, Polynomial den);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    Properness properness() const { return properness_; }
    int order() const { return den_.degree(); }

    Complex operator()(Complex s) const { return num_(s) / den_(s); }

    /// Some numerator root lies within 1e-8 of a denominator root.
    /// Common factors are never cancelled, only reported.
    bool common_factor_warning() const { return common_factor_warning_; }
    bool zero_numerator() const { return num_.is_zero(); }

private:
    Polynomial num_;
    Polynomial den_;
    Properness properness_;
    bool common_factor_warning_ = false;
};

/// Characteristic polynomial of the unit-feedback loop with gain K:
/// delta(s, K) = D(s) + K * N(s). Throws DegreeDropAtK when an
/// equal-degree plant makes the leading coefficient vanish at this K.
Polynomial closed_loop_charpoly(const RationalTF& g, double k);

/// One pole of the decomposition. For multiplicity 1 the residue is
/// the cover-up residue of num/charpoly; for multiplicity r > 1 it is
/// the leading Laurent coefficient num(p) / (lead * prod over the
/// other roots of (p - p_h)).
struct PoleResidue {
    Complex pole;
    int multiplicity = 1;
    Complex residue;
    /// |num(pole)| is negligible: the pole does not move with the
    /// swept parameter (zero residue).
    bool stationary = false;
};

struct PoleResidueSet {
    std::vector<PoleResidue> entries;
    /// Gain at which the set was computed, when it came from a
    /// closed-loop evaluation.
    std::optional<double> gain_k;
};

/// Partial-fraction residues of num/charpoly at the (clustered) roots
/// of charpoly. Requires deg num <= deg charpoly; equal degrees are
/// accepted because the polynomial part of a proper fraction does not
/// affect residues at the poles. Throws ImproperInput otherwise.
PoleResidueSet residues(const Polynomial& num, const Polynomial& charpoly,
                        const RootsOptions& opts = {});

/// Residues of the closed-loop transfer function G0 = N / delta(., K)
/// at gain K. The numerator is N(s), not K*N(s).
PoleResidueSet closed_loop_residues(const RationalTF& g, double k,
                                    const RootsOptions& opts = {});

}  // namespace rloci

#endif
