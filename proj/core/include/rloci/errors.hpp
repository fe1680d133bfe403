#ifndef RLOCI_ERRORS_HPP
#define RLOCI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rloci {

/// Failure categories raised by the library. Non-fatal conditions
/// (common factors, stationary poles, solver stagnation) are reported
/// as flags on result types instead.
enum class Errc {
    zero_leading_coefficient,
    degree_zero,
    degenerate_denominator,
    improper_transfer_function,
    degree_drop_at_k,
    improper_input,
    unknown_parameter,
    fallback_inconsistent,
    non_affine_parameter,
    colliding_estimates,
    grid_mismatch,
    invalid_multiplicity,
    no_convergence,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace rloci

#endif
