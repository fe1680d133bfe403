#include "rloci/models.hpp"

namespace rloci {

ParamCharPoly dc_motor(const DcMotorParams& p) {
    const double l = p.inductance, r = p.resistance, j = p.inertia, b = p.friction,
                 ke = p.torque_constant;

    auto poly = [](std::initializer_list<double> c) {
        std::vector<Complex> v;
        for (double x : c) v.emplace_back(x, 0.0);
        return Polynomial(std::move(v));
    };

    std::vector<Parameter> params = {
        {"L", l, ParamKind::dynamic},     {"R", r, ParamKind::dissipative},
        {"J", j, ParamKind::dynamic},     {"b", b, ParamKind::dissipative},
        {"Ke", ke, ParamKind::connection},
    };

    // delta = (L s + R)(J s + b) + Ke^2, split as A_i + h_i B_i per
    // parameter (A_Ke + Ke^2 B_Ke for the connection parameter).
    std::vector<ParamCharPoly::Decomposition> decomp = {
        // L: A = R (J s + b) + Ke^2, B = s (J s + b)
        {poly({r * b + ke * ke, r * j}), poly({0, b, j})},
        // R: A = L s (J s + b) + Ke^2, B = J s + b
        {poly({ke * ke, l * b, l * j}), poly({b, j})},
        // J: A = (L s + R) b + Ke^2, B = s (L s + R)
        {poly({r * b + ke * ke, l * b}), poly({0, r, l})},
        // b: A = (L s + R) J s + Ke^2, B = L s + R
        {poly({ke * ke, r * j, l * j}), poly({r, l})},
        // Ke: A = (L s + R)(J s + b), B = 1
        {poly({r * b, l * b + r * j, l * j}), poly({1})},
    };

    auto evaluator = [](std::span<const double> h) {
        const double L = h[0], R = h[1], J = h[2], B = h[3], Ke = h[4];
        std::vector<Complex> c = {Complex(R * B + Ke * Ke, 0.0), Complex(L * B + R * J, 0.0),
                                  Complex(L * J, 0.0)};
        return Polynomial(std::move(c));
    };

    return ParamCharPoly(std::move(params), std::move(decomp), evaluator);
}

}  // namespace rloci
