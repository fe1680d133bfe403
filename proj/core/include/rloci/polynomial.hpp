#ifndef RLOCI_POLYNOMIAL_HPP
#define RLOCI_POLYNOMIAL_HPP

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include "rloci/errors.hpp"

namespace rloci {

using Complex = std::complex<double>;

/// Dense univariate polynomial with complex coefficients stored in
/// ascending degree order (coeffs()[0] is the constant term).
///
/// Construction normalizes the coefficient list: coefficients whose
/// magnitude is below 1e-14 times the largest magnitude are treated as
/// zero, and trailing zeros are trimmed so the stored leading
/// coefficient is nonzero. The zero polynomial is stored as an empty
/// list and reports degree() == -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coeffs);
    Polynomial(std::initializer_list<Complex> coeffs);

    /// Convenience constructor from real coefficients, ascending order.
    static Polynomial from_real(std::span<const double> coeffs);

    /// leading * prod_i (s - roots[i]). Throws ZeroLeadingCoefficient.
    static Polynomial from_roots(std::span<const Complex> roots, Complex leading);

    bool is_zero() const { return coeffs_.empty(); }
    /// Degree of the stored polynomial; -1 flags the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    /// Coefficient of s^i; zero beyond the stored degree.
    Complex coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Complex{}; }
    Complex leading() const { return coeffs_.empty() ? Complex{} : coeffs_.back(); }
    /// Largest coefficient magnitude (0 for the zero polynomial).
    double coeff_scale() const;

    /// Horner evaluation at s.
    Complex operator()(Complex s) const;

    Polynomial derivative() const;

    /// True when every coefficient has negligible imaginary part
    /// relative to the coefficient scale.
    bool is_real(double rel_tol = 1e-12) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, Complex c);
    friend Polynomial operator*(Complex c, const Polynomial& a) { return a * c; }

private:
    void normalize();

    std::vector<Complex> coeffs_;
};

/// One clustered root with its multiplicity.
struct RootCluster {
    Complex value;
    int multiplicity = 1;
};

/// All-roots result. `roots` holds every root of the polynomial
/// (degree of them, counted with multiplicity) sorted by ascending
/// real part, then imaginary part. `clusters` groups roots closer than
/// `cluster_tol` into single values with multiplicities.
struct RootSet {
    std::vector<Complex> roots;
    double cluster_tol = 0.0;
    std::vector<RootCluster> clusters;
    /// False when the solver hit its iteration cap before every root
    /// met the residual bound; the best iterates are still returned.
    bool converged = true;
    int iterations = 0;

    std::vector<int> multiplicities() const;
};

struct RootsOptions {
    int max_iterations = 500;
    /// Stop when every per-root correction drops below
    /// correction_tol * (1 + |root|), or the root's residual is
    /// machine-limited.
    double correction_tol = 1e-13;
    /// Residual acceptance: |p(root)| <= residual_tol * max|coeff| * max(1,|root|)^degree.
    double residual_tol = 1e-10;
    /// Clustering radius: max(cluster_tol_abs, cluster_tol_rel * max|root|).
    double cluster_tol_abs = 1e-8;
    double cluster_tol_rel = 1e-6;
};

/// All roots by Aberth-Ehrlich simultaneous iteration started on a
/// Cauchy-bound-scaled circle with golden-angle phases, followed by
/// Newton polishing against the input polynomial. Real-coefficient
/// inputs get exactly conjugate-paired roots. Throws DegreeZero for
/// constant or zero polynomials.
RootSet find_roots(const Polynomial& p, const RootsOptions& opts = {});

}  // namespace rloci

#endif
