#include "rloci/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rloci {

namespace {

constexpr double kTrimRel = 1e-14;

bool canonical_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

Polynomial::Polynomial(std::initializer_list<Complex> coeffs) : coeffs_(coeffs) { normalize(); }

Polynomial Polynomial::from_real(std::span<const double> coeffs) {
    std::vector<Complex> c(coeffs.begin(), coeffs.end());
    return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, Complex leading) {
    if (leading == Complex{})
        throw Error(Errc::zero_leading_coefficient, "from_roots requires a nonzero leading coefficient");
    std::vector<Complex> c{leading};
    for (Complex r : roots) {
        // multiply by (s - r)
        c.push_back(c.back());
        for (std::size_t i = c.size() - 2; i > 0; --i) c[i] = c[i - 1] - r * c[i];
        c[0] = -r * c[0];
    }
    return Polynomial(std::move(c));
}

void Polynomial::normalize() {
    double scale = 0.0;
    for (Complex c : coeffs_) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) {
        coeffs_.clear();
        return;
    }
    const double tiny = kTrimRel * scale;
    for (Complex& c : coeffs_)
        if (std::abs(c) <= tiny) c = Complex{};
    while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

double Polynomial::coeff_scale() const {
    double scale = 0.0;
    for (Complex c : coeffs_) scale = std::max(scale, std::abs(c));
    return scale;
}

Complex Polynomial::operator()(Complex s) const {
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{};
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

bool Polynomial::is_real(double rel_tol) const {
    const double bound = rel_tol * coeff_scale();
    for (Complex c : coeffs_)
        if (std::abs(c.imag()) > bound) return false;
    return true;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial{};
    std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, Complex c) {
    std::vector<Complex> out(a.coeffs_);
    for (Complex& v : out) v *= c;
    return Polynomial(std::move(out));
}

namespace {

// Evaluate p and p' at z in one Horner pass, plus the running magnitude
// bound e = sum_k |c_k| |z|^k used for the machine-precision residual
// floor (Adams' criterion).
struct HornerState {
    Complex value;
    Complex deriv;
    double magnitude_bound;
};

HornerState horner_with_derivative(const std::vector<Complex>& c, Complex z) {
    Complex p{};
    Complex dp{};
    double e = 0.0;
    const double az = std::abs(z);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
        e = e * az + std::abs(p);
    }
    return {p, dp, e};
}

// Greedy conjugate pairing for roots of real-coefficient polynomials:
// each root is matched with the nearest conjugate of the remaining
// roots; matching itself means the root is real.
void symmetrize_conjugates(std::vector<Complex>& roots) {
    const std::size_t n = roots.size();
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::size_t best = i;
        double best_dist = std::abs(roots[i] - std::conj(roots[i]));
        for (std::size_t j = i + 1; j < n; ++j) {
            if (used[j]) continue;
            double d = std::abs(roots[i] - std::conj(roots[j]));
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (best == i) {
            roots[i] = Complex(roots[i].real(), 0.0);
            used[i] = true;
        } else {
            Complex avg = 0.5 * (roots[i] + std::conj(roots[best]));
            roots[i] = avg;
            roots[best] = std::conj(avg);
            used[i] = used[best] = true;
        }
    }
}

std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots, double tol) {
    const std::size_t n = roots.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    // Union-find over pairs within tol, then merge cluster centroids
    // that still fall within tol of each other until stable.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(roots[i] - roots[j]) <= tol) parent[find(i)] = find(j);

    bool merged = true;
    std::vector<RootCluster> clusters;
    while (merged) {
        clusters.clear();
        std::vector<std::size_t> rep_of;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = find(i);
            auto it = std::find(rep_of.begin(), rep_of.end(), r);
            if (it == rep_of.end()) {
                rep_of.push_back(r);
                clusters.push_back({roots[i], 1});
            } else {
                auto& cl = clusters[static_cast<std::size_t>(it - rep_of.begin())];
                cl.value += roots[i];
                cl.multiplicity += 1;
            }
        }
        for (auto& cl : clusters) cl.value /= static_cast<double>(cl.multiplicity);

        merged = false;
        for (std::size_t a = 0; a < clusters.size() && !merged; ++a)
            for (std::size_t b = a + 1; b < clusters.size() && !merged; ++b)
                if (std::abs(clusters[a].value - clusters[b].value) <= tol) {
                    parent[find(rep_of[a])] = find(rep_of[b]);
                    merged = true;
                }
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const RootCluster& a, const RootCluster& b) { return canonical_less(a.value, b.value); });
    return clusters;
}

}  // namespace

std::vector<int> RootSet::multiplicities() const {
    std::vector<int> m;
    m.reserve(clusters.size());
    for (const auto& c : clusters) m.push_back(c.multiplicity);
    return m;
}

RootSet find_roots(const Polynomial& p, const RootsOptions& opts) {
    const int n = p.degree();
    if (n < 1) throw Error(Errc::degree_zero, "root solving needs degree >= 1");

    // Work on the monic copy; polish against the original coefficients.
    std::vector<Complex> monic(p.coeffs());
    const Complex lead = monic.back();
    for (Complex& c : monic) c /= lead;

    std::vector<Complex> z(static_cast<std::size_t>(n));
    int iterations = 0;

    if (n == 1) {
        z[0] = -monic[0];
    } else {
        // Initial guesses on a circle scaled by the Cauchy bound, with
        // golden-angle phases so no guess starts on a symmetry axis.
        double cauchy = 0.0;
        for (int i = 0; i < n; ++i) cauchy = std::max(cauchy, std::abs(monic[static_cast<std::size_t>(i)]));
        const double radius = 0.5 * (1.0 + cauchy);
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < n; ++k) {
            double theta = 2.0 * std::numbers::pi * k / n + golden * (k + 1) + 0.35;
            z[static_cast<std::size_t>(k)] = radius * Complex(std::cos(theta), std::sin(theta));
        }

        std::vector<bool> frozen(static_cast<std::size_t>(n), false);
        constexpr double eps = 2.220446049250313e-16;
        for (; iterations < opts.max_iterations; ++iterations) {
            bool all_done = true;
            for (int i = 0; i < n; ++i) {
                auto ii = static_cast<std::size_t>(i);
                if (frozen[ii]) continue;
                auto h = horner_with_derivative(monic, z[ii]);
                if (std::abs(h.value) <= 4.0 * eps * h.magnitude_bound) {
                    frozen[ii] = true;  // residual is machine-limited
                    continue;
                }
                Complex w;
                if (h.deriv == Complex{}) {
                    w = (1.0 + std::abs(z[ii])) * 0.1 * Complex(std::cos(golden * (iterations + i + 1)),
                                                                std::sin(golden * (iterations + i + 1)));
                } else {
                    Complex newton = h.value / h.deriv;
                    Complex sum{};
                    for (int j = 0; j < n; ++j)
                        if (j != i) sum += 1.0 / (z[ii] - z[static_cast<std::size_t>(j)]);
                    Complex denom = 1.0 - newton * sum;
                    w = (denom == Complex{}) ? newton : newton / denom;
                }
                z[ii] -= w;
                if (std::abs(w) >= opts.correction_tol * (1.0 + std::abs(z[ii]))) all_done = false;
            }
            if (all_done) {
                ++iterations;
                break;
            }
        }
    }

    // Newton polish against the original polynomial, keeping the best
    // residual iterate.
    const auto& orig = p.coeffs();
    for (auto& root : z) {
        Complex best = root;
        double best_res = std::abs(horner_with_derivative(orig, root).value);
        Complex cur = root;
        for (int step = 0; step < 3; ++step) {
            auto h = horner_with_derivative(orig, cur);
            if (h.deriv == Complex{}) break;
            cur -= h.value / h.deriv;
            double res = std::abs(horner_with_derivative(orig, cur).value);
            if (res < best_res) {
                best_res = res;
                best = cur;
            }
        }
        root = best;
    }

    if (p.is_real()) symmetrize_conjugates(z);
    std::sort(z.begin(), z.end(), canonical_less);

    RootSet out;
    out.roots = std::move(z);
    out.iterations = iterations;

    double max_abs_root = 0.0;
    for (Complex r : out.roots) max_abs_root = std::max(max_abs_root, std::abs(r));
    out.cluster_tol = std::max(opts.cluster_tol_abs, opts.cluster_tol_rel * max_abs_root);
    out.clusters = cluster_roots(out.roots, out.cluster_tol);

    const double scale = p.coeff_scale();
    for (Complex r : out.roots) {
        double bound = opts.residual_tol * scale * std::pow(std::max(1.0, std::abs(r)), n);
        if (std::abs(p(r)) > bound) {
            out.converged = false;
            break;
        }
    }
    return out;
}

}  // namespace rloci
