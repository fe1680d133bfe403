#include "rloci/errors.hpp"

namespace rloci {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::zero_leading_coefficient: return "ZeroLeadingCoefficient";
        case Errc::degree_zero: return "DegreeZero";
        case Errc::degenerate_denominator: return "DegenerateDenominator";
        case Errc::improper_transfer_function: return "ImproperTransferFunction";
        case Errc::degree_drop_at_k: return "DegreeDropAtK";
        case Errc::improper_input: return "ImproperInput";
        case Errc::unknown_parameter: return "UnknownParameter";
        case Errc::fallback_inconsistent: return "FallbackInconsistent";
        case Errc::non_affine_parameter: return "NonAffineParameter";
        case Errc::colliding_estimates: return "CollidingEstimates";
        case Errc::grid_mismatch: return "GridMismatch";
        case Errc::invalid_multiplicity: return "InvalidMultiplicity";
        case Errc::no_convergence: return "NoConvergence";
    }
    return "UnknownError";
}

}  // namespace rloci
