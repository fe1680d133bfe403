#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rloci/models.hpp"
#include "rloci/sensitivity.hpp"

using namespace rloci;

namespace {

RationalTF case_study_plant() {
    return RationalTF(Polynomial{0, 4}, Polynomial{20, 13, 6, 1});
}

const PoleVelocity* entry_near(const VelocityField& f, Complex pole, double tol = 1e-6) {
    for (const auto& e : f.entries)
        if (std::abs(e.pole - pole) < tol) return &e;
    return nullptr;
}

}  // namespace

TEST_CASE("gain_velocities: case-study values") {
    RationalTF g = case_study_plant();

    VelocityField at0 = gain_velocities(g, 0.0);
    CHECK(at0.at_gain == 0.0);
    CHECK_FALSE(at0.log_slope.has_value());
    const auto* v1 = entry_near(at0, {-4, 0});
    REQUIRE(v1 != nullptr);
    CHECK(std::abs(v1->velocity - Complex{1.231, 0}) < 1e-3);
    const auto* v2 = entry_near(at0, {-1, 2});
    REQUIRE(v2 != nullptr);
    CHECK(std::abs(v2->velocity - Complex{-0.615, 0.077}) < 1e-3);

    VelocityField at2 = gain_velocities(g, 2.0);
    const auto* w1 = entry_near(at2, {-1.362, 0}, 2e-3);
    REQUIRE(w1 != nullptr);
    CHECK(std::abs(w1->velocity - Complex{0.533, 0}) < 1e-3);
    const auto* w2 = entry_near(at2, {-2.319, -3.050}, 2e-3);
    REQUIRE(w2 != nullptr);
    CHECK(std::abs(w2->velocity - Complex{-0.267, -0.739}) < 1e-3);
}

TEST_CASE("gain_velocities: single-pole plant moves at exactly -1") {
    // delta = s - p + K, pole p - K for every K
    RationalTF g(Polynomial{1}, Polynomial{-0.7, 1});
    for (double k : {0.0, 0.5, 3.0, 10.0}) {
        VelocityField f = gain_velocities(g, k);
        REQUIRE(f.entries.size() == 1);
        CHECK(std::abs(f.entries[0].velocity - Complex{-1, 0}) < 1e-13);
    }
}

TEST_CASE("gain_velocities: finite-difference oracle on a random plant") {
    std::mt19937 rng(61);
    RationalTF g = oracle::random_strictly_proper_plant(rng, 4);
    VelocityField f = gain_velocities(g, 0.7);
    auto fd = oracle::fd_gain_velocities(g, 0.7);
    REQUIRE(fd.size() == f.entries.size());
    for (const auto& e : f.entries) {
        double best = 1e300;
        Complex fd_vel{};
        for (const auto& [pole, vel] : fd) {
            if (std::abs(pole - e.pole) < best) {
                best = std::abs(pole - e.pole);
                fd_vel = vel;
            }
        }
        CHECK(std::abs(e.velocity - fd_vel) <= 1e-4);
    }
}

TEST_CASE("gain_velocities: repeated pole is flagged infinite") {
    RationalTF g1(Polynomial{3, 1}, Polynomial{0, 2, 1});
    double kb = oracle::find_breakaway_gain(g1, 0.3, 0.8);
    VelocityField f = gain_velocities(g1, kb);
    REQUIRE(f.entries.size() == 1);
    CHECK(f.entries[0].multiplicity == 2);
    CHECK(f.entries[0].infinite_speed);
    CHECK(std::abs(f.entries[0].generalized_residue - Complex{std::sqrt(3.0), 0}) < 2e-3);
    REQUIRE(f.log_slope.has_value());
    CHECK(*f.log_slope == doctest::Approx(-0.5));
}

TEST_CASE("multiple_pole_speed") {
    CHECK(multiple_pole_speed(Complex{1, 0}, 2, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)multiple_pole_speed(Complex{1, 0}, 1, 0.1), Error);

    // log-log slope -(r-1)/r = -1/2 for r = 2
    std::vector<double> lx, ly;
    for (double dk = 1e-1; dk >= 1e-6 / 2; dk /= 10.0) {
        lx.push_back(std::log10(dk));
        ly.push_back(std::log10(multiple_pole_speed(Complex{0.3, 0.4}, 2, dk)));
    }
    CHECK(std::abs(oracle::regression_slope(lx, ly) + 0.5) < 1e-12);
}

TEST_CASE("multiple_pole_speed: delta = s^2 + K exact-root oracle") {
    // double pole at the origin, kbar = 1; exact roots +/- i sqrt(dK)
    RationalTF g(Polynomial{1}, Polynomial{0, 0, 1});
    PoleResidueSet at0 = closed_loop_residues(g, 0.0);
    REQUIRE(at0.entries.size() == 1);
    REQUIRE(at0.entries[0].multiplicity == 2);
    const Complex kbar = at0.entries[0].residue;
    CHECK(std::abs(kbar - Complex{1, 0}) < 1e-9);

    for (double dk : {1e-2, 1e-4, 1e-6}) {
        auto roots = find_roots(closed_loop_charpoly(g, dk)).roots;
        REQUIRE(roots.size() == 2);
        double measured = 0.5 * (std::abs(roots[0]) + std::abs(roots[1]));
        double predicted = multiple_pole_speed(kbar, 2, dk) * dk;  // (|kbar| dk)^(1/2)
        CHECK(measured == doctest::Approx(predicted).epsilon(1e-6));
    }
}

TEST_CASE("multiple-pole law: displacement exponent 1/r for r = 2, 3") {
    for (int r : {2, 3}) {
        std::vector<Complex> dc(static_cast<std::size_t>(r) + 1, Complex{});
        dc.back() = Complex{1, 0};
        RationalTF g(Polynomial{1}, Polynomial(dc));  // 1 / s^r
        std::vector<double> lx, ly;
        for (double dk = 1e-2; dk >= 0.5e-6; dk /= 10.0) {
            auto roots = find_roots(closed_loop_charpoly(g, dk)).roots;
            double mean_disp = 0.0;
            for (Complex z : roots) mean_disp += std::abs(z);
            mean_disp /= static_cast<double>(roots.size());
            lx.push_back(std::log10(dk));
            ly.push_back(std::log10(mean_disp));
        }
        CHECK(std::abs(oracle::regression_slope(lx, ly) - 1.0 / r) < 0.01);
    }
}

TEST_CASE("tangency: velocities are tangential to the root locus") {
    RationalTF g = case_study_plant();
    for (double k : {0.0, 0.5, 1.0, 2.0}) {
        VelocityField f = gain_velocities(g, k);
        const double dk = 1e-4;
        auto fd = oracle::fd_gain_velocities(g, k, dk);  // secant / (2 dk)
        for (const auto& e : f.entries) {
            Complex secant{};
            double best = 1e300;
            for (const auto& [pole, vel] : fd) {
                if (std::abs(pole - e.pole) < best) {
                    best = std::abs(pole - e.pole);
                    secant = vel;
                }
            }
            const double cross = e.velocity.real() * secant.imag() - e.velocity.imag() * secant.real();
            const double dot = e.velocity.real() * secant.real() + e.velocity.imag() * secant.imag();
            const double angle = std::abs(std::atan2(cross, dot));
            CHECK(angle < 1e-3);
            CHECK(std::abs(cross) < 1e-3 * std::norm(e.velocity));
        }
    }
}

TEST_CASE("dc motor: param_derivative matches the analytic numerators") {
    ParamCharPoly motor = dc_motor();
    const DcMotorParams p;

    // d delta / dL = s (J s + b)
    Polynomial dl = param_derivative(motor, motor.index_of("L"));
    CHECK(std::abs(dl.coeff(0)) < 1e-15);
    CHECK(std::abs(dl.coeff(1) - Complex{p.friction, 0}) < 1e-15);
    CHECK(std::abs(dl.coeff(2) - Complex{p.inertia, 0}) < 1e-15);

    // d delta / dKe = 2 Ke (constant)
    Polynomial dke = param_derivative(motor, motor.index_of("Ke"));
    CHECK(dke.degree() == 0);
    CHECK(std::abs(dke.coeff(0) - Complex{2.0 * p.torque_constant, 0}) < 1e-12);

    CHECK_THROWS_AS((void)motor.index_of("nope"), Error);
}

TEST_CASE("param_derivative: parameter absent from delta") {
    std::vector<Parameter> params = {{"a", 2.0, ParamKind::dynamic},
                                     {"ghost", 1.0, ParamKind::dissipative}};
    Polynomial delta{1, 3, 1};
    std::vector<ParamCharPoly::Decomposition> decomp = {
        {delta - Polynomial{0, 2} * Complex{2, 0}, Polynomial{0, 2}},
        {delta, Polynomial{}},
    };
    ParamCharPoly model(params, decomp);
    CHECK(param_derivative(model, 1).is_zero());

    VelocityField f = param_velocities(model, 1);
    REQUIRE(f.entries.size() == 2);
    for (const auto& e : f.entries) CHECK(std::abs(e.velocity) == 0.0);
}

TEST_CASE("dc motor: velocity fields match the finite-difference oracle") {
    ParamCharPoly motor = dc_motor();
    double pole_scale = 0.0;
    for (Complex r : find_roots(motor.charpoly()).roots)
        pole_scale = std::max(pole_scale, std::abs(r));

    for (const auto& name : {"L", "R", "J", "b", "Ke"}) {
        std::size_t i = motor.index_of(name);
        VelocityField f = param_velocities(motor, i);
        REQUIRE(f.entries.size() == 2);
        auto fd = oracle::fd_param_velocities(motor, i);
        for (const auto& e : f.entries) {
            Complex fd_vel{};
            double best = 1e300;
            for (const auto& [pole, vel] : fd) {
                if (std::abs(pole - e.pole) < best) {
                    best = std::abs(pole - e.pole);
                    fd_vel = vel;
                }
            }
            CHECK(std::abs(e.velocity - fd_vel) <= 1e-4 * pole_scale);
        }
    }
}

TEST_CASE("dc motor: delta structure (linear in L,R,J,b; even quadratic in Ke)") {
    ParamCharPoly motor = dc_motor();
    const double scale = motor.charpoly().coeff_scale();

    for (const auto& name : {"L", "R", "J", "b"}) {
        std::size_t i = motor.index_of(name);
        CHECK_FALSE(motor.square_affine(i));
        const double h = motor.parameters()[i].value;
        const double d = 0.25 * std::max(1.0, std::abs(h));
        // second central difference of the coefficients vanishes
        Polynomial second = motor.charpoly_from_evaluator(i, h + d) -
                            motor.charpoly_from_evaluator(i, h) * Complex{2, 0} +
                            motor.charpoly_from_evaluator(i, h - d);
        CHECK(second.coeff_scale() <= 1e-12 * scale);
    }

    std::size_t ke = motor.index_of("Ke");
    CHECK(motor.square_affine(ke));
    const double v = motor.parameters()[ke].value;
    // even: delta(+Ke) == delta(-Ke) coefficient-wise
    Polynomial even_diff =
        motor.charpoly_from_evaluator(ke, v) - motor.charpoly_from_evaluator(ke, -v);
    CHECK(even_diff.coeff_scale() <= 1e-14 * scale);
    // quadratic: third central difference vanishes
    const double d = 0.3;
    Polynomial third = motor.charpoly_from_evaluator(ke, v + 1.5 * d) -
                       motor.charpoly_from_evaluator(ke, v + 0.5 * d) * Complex{3, 0} +
                       motor.charpoly_from_evaluator(ke, v - 0.5 * d) * Complex{3, 0} -
                       motor.charpoly_from_evaluator(ke, v - 1.5 * d);
    CHECK(third.coeff_scale() <= 1e-12 * scale);
}

TEST_CASE("ParamCharPoly: reassembly validation") {
    std::vector<Parameter> params = {{"a", 1.0, ParamKind::dynamic},
                                     {"c", 2.0, ParamKind::dissipative}};
    // decompositions that do NOT reassemble to the same delta
    std::vector<ParamCharPoly::Decomposition> bad = {
        {Polynomial{1, 0, 1}, Polynomial{0, 1}},
        {Polynomial{5, 0, 1}, Polynomial{0, 1}},
    };
    CHECK_THROWS_AS(ParamCharPoly(params, bad), std::invalid_argument);
}

TEST_CASE("ParamCharPoly: fallback cross-check") {
    std::vector<Parameter> params = {{"a", 1.5, ParamKind::dynamic}};
    Polynomial b{0, 1};
    Polynomial a{2, 0, 1};
    std::vector<ParamCharPoly::Decomposition> decomp = {{a, b}};

    // evaluator agreeing at the operating point but with a different
    // slope: param_derivative must detect the inconsistency
    auto skewed = [a, b](std::span<const double> h) {
        return a + b * Complex{h[0], 0} + Polynomial{1} * Complex{0.5 * (h[0] - 1.5), 0};
    };
    ParamCharPoly model(params, decomp, skewed);
    CHECK_THROWS_AS((void)param_derivative(model, 0), Error);
    try {
        (void)param_derivative(model, 0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::fallback_inconsistent);
    }

    // evaluator disagreeing already at the operating point is rejected
    // at construction
    auto shifted = [a, b](std::span<const double> h) {
        return a + b * Complex{h[0], 0} + Polynomial{1};
    };
    CHECK_THROWS_AS(ParamCharPoly(params, decomp, shifted), std::invalid_argument);
}

TEST_CASE("ParamCharPoly: numeric-only models") {
    std::vector<Parameter> params = {{"a", 2.0, ParamKind::dynamic}};
    ParamCharPoly affine(params, [](std::span<const double> h) {
        return Polynomial{1, 0, 1} + Polynomial{0, 1} * Complex{h[0], 0};
    });
    Polynomial d = param_derivative(affine, 0);
    CHECK(std::abs(d.coeff(1) - Complex{1, 0}) < 1e-9);
    auto dec = affine.affine_in(0);
    CHECK(std::abs(dec.b.coeff(1) - Complex{1, 0}) < 1e-9);

    ParamCharPoly cubic(params, [](std::span<const double> h) {
        return Polynomial{1, 0, 1} + Polynomial{0, 1} * Complex{h[0] * h[0] * h[0], 0};
    });
    CHECK_THROWS_AS((void)cubic.affine_in(0), Error);
    try {
        (void)cubic.affine_in(0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::non_affine_parameter);
    }
}

TEST_CASE("property: gain velocity oracle equivalence over random plants") {
    std::mt19937 rng(71);
    std::uniform_int_distribution<int> deg(2, 6);
    std::uniform_real_distribution<double> gain(0.1, 2.0);
    int done = 0;
    while (done < 15) {
        RationalTF g = oracle::random_strictly_proper_plant(rng, deg(rng));
        double k = gain(rng);
        auto rs = find_roots(closed_loop_charpoly(g, k));
        bool simple = true;
        for (const auto& cl : rs.clusters)
            if (cl.multiplicity > 1) simple = false;
        double min_sep = 1e300;
        for (std::size_t a = 0; a < rs.roots.size(); ++a)
            for (std::size_t b = a + 1; b < rs.roots.size(); ++b)
                min_sep = std::min(min_sep, std::abs(rs.roots[a] - rs.roots[b]));
        if (!simple || min_sep < 0.3) continue;  // oracle matching needs separation

        VelocityField f = gain_velocities(g, k);
        auto fd = oracle::fd_gain_velocities(g, k);
        for (const auto& e : f.entries) {
            Complex fd_vel{};
            double best = 1e300;
            for (const auto& [pole, vel] : fd) {
                if (std::abs(pole - e.pole) < best) {
                    best = std::abs(pole - e.pole);
                    fd_vel = vel;
                }
            }
            CHECK(std::abs(e.velocity - fd_vel) <= 1e-4);
        }
        ++done;
    }
}
