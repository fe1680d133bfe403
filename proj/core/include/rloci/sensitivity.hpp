#ifndef RLOCI_SENSITIVITY_HPP
#define RLOCI_SENSITIVITY_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rloci/transfer_function.hpp"

namespace rloci {

/// Velocity of one closed-loop pole with respect to the swept
/// parameter. Simple poles carry the finite velocity -residue. Poles
/// of multiplicity r > 1 have unbounded speed; they are flagged and
/// carry the generalized residue, from which the finite-step surrogate
/// |dp| = (|kbar| * dK)^(1/r) can be formed.
struct PoleVelocity {
    Complex pole;
    int multiplicity = 1;
    Complex velocity;
    bool infinite_speed = false;
    Complex generalized_residue;
};

struct VelocityField {
    double at_gain = 0.0;
    std::vector<PoleVelocity> entries;
    /// Log-log slope -(r-1)/r of |dp/dK| vs dK for the highest
    /// multiplicity present; unset when all poles are simple.
    std::optional<double> log_slope;
};

/// Builds a velocity field from a residue set (velocity = -residue for
/// simple poles).
VelocityField velocity_field_from(const PoleResidueSet& set, double at_gain);

/// Pole velocities dp/dK of the feedback loop around g at gain k.
VelocityField gain_velocities(const RationalTF& g, double k, const RootsOptions& opts = {});

/// Speed law at a pole of multiplicity r >= 2 for a finite step dk:
/// (|kbar| / dk^(r-1))^(1/r). Diverges as dk -> 0. Throws
/// InvalidMultiplicity for r < 2.
double multiple_pole_speed(Complex kbar, int r, double dk);

enum class ParamKind { dynamic, dissipative, connection };

const char* param_kind_name(ParamKind kind);
ParamKind param_kind_from_name(const std::string& name);

struct Parameter {
    std::string name;
    double value = 0.0;
    ParamKind kind = ParamKind::dynamic;
};

/// Characteristic polynomial delta(s, h) with declared per-parameter
/// dependence. Energy-storing and dissipating parameters enter delta
/// affinely (delta = A_i + h_i * B_i); energy-converting (connection)
/// parameters enter through their square (delta = A_i + h_i^2 * B_i).
/// A_i and B_i are taken at the current operating point of all other
/// parameters. A numeric evaluator mapping the full parameter vector
/// to delta can stand in when no analytic decomposition is available;
/// when both exist the analytic path is used and cross-checked.
class ParamCharPoly {
public:
    struct Decomposition {
        Polynomial a;
        Polynomial b;
    };
    using Evaluator = std::function<Polynomial(std::span<const double>)>;

    /// Analytic form; every parameter needs its decomposition. The
    /// reassembled A_i + q_i * B_i must agree coefficient-wise across
    /// parameters to 1e-10 relative, else std::invalid_argument.
    ParamCharPoly(std::vector<Parameter> params, std::vector<Decomposition> decomp,
                  Evaluator fallback = {});
    /// Numeric-only form.
    ParamCharPoly(std::vector<Parameter> params, Evaluator fallback);

    const std::vector<Parameter>& parameters() const { return params_; }
    std::size_t index_of(const std::string& name) const;  // throws UnknownParameter
    bool has_decomposition() const { return !decomp_.empty(); }
    bool has_fallback() const { return static_cast<bool>(fallback_); }
    /// Connection parameters enter delta through their square.
    bool square_affine(std::size_t i) const;

    /// delta(s) at the stored parameter values.
    Polynomial charpoly() const;
    /// delta(s) with parameter i moved to `value`, others unchanged.
    /// Prefers the analytic decomposition when declared.
    Polynomial charpoly_with(std::size_t i, double value) const;
    /// Same, but forced through the numeric evaluator (used to
    /// cross-check the analytic path). Throws std::logic_error when no
    /// evaluator was supplied.
    Polynomial charpoly_from_evaluator(std::size_t i, double value) const;
    /// Affine view delta = A + q * B in q = h_i (or q = h_i^2 for
    /// connection parameters). Derived from the declared decomposition
    /// or refit from the evaluator; refit failure to certify affine
    /// dependence throws NonAffineParameter.
    Decomposition affine_in(std::size_t i) const;

private:
    std::vector<Parameter> params_;
    std::vector<Decomposition> decomp_;
    Evaluator fallback_;
};

/// d delta / d h_i: B_i for affine parameters, 2 h_i B_i for connection
/// parameters; central finite difference of the evaluator when no
/// decomposition is declared. When both paths exist they are compared
/// and FallbackInconsistent is thrown on relative disagreement > 1e-6.
Polynomial param_derivative(const ParamCharPoly& model, std::size_t i);

/// Pole velocities dp/dh_i: negated residues of
/// (d delta / d h_i) / delta at the poles of delta.
VelocityField param_velocities(const ParamCharPoly& model, std::size_t i,
                               const RootsOptions& opts = {});

}  // namespace rloci

#endif
