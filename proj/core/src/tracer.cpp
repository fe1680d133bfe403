#include "rloci/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>

namespace rloci {

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::branch_point_suspected: return "branch_point_suspected";
        case EventKind::reanchored: return "reanchored";
        case EventKind::degree_drop: return "degree_drop";
    }
    return "unknown";
}

namespace {

struct Grid {
    double start = 0.0;
    double step = 0.0;  // signed
    std::size_t count = 0;

    double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
};

Grid make_grid(const TraceConfig& cfg) {
    if (!(cfg.dk > 0.0)) throw std::invalid_argument("dk must be positive");
    if (cfg.k_end == cfg.k_start) throw std::invalid_argument("k_end must differ from k_start");
    const double span = std::abs(cfg.k_end - cfg.k_start);
    if (cfg.dk > span) throw std::invalid_argument("dk exceeds the sweep range");
    Grid g;
    g.start = cfg.k_start;
    g.step = cfg.k_end > cfg.k_start ? cfg.dk : -cfg.dk;
    g.count = static_cast<std::size_t>(std::floor(span / cfg.dk + 1e-9)) + 1;
    return g;
}

double min_separation(std::span<const Complex> pts, std::size_t j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < pts.size(); ++h)
        if (h != j) best = std::min(best, std::abs(pts[j] - pts[h]));
    return best;
}

// prod_{h != j} (est[j] - est[h]) times lead, with the factors
// multiplied in canonical order so the value is bit-identical under
// any permutation of the estimate vector.
Complex denominator_product(std::span<const Complex> est, std::size_t j, Complex lead) {
    std::vector<Complex> factors;
    factors.reserve(est.size());
    for (std::size_t h = 0; h < est.size(); ++h)
        if (h != j) factors.push_back(est[j] - est[h]);
    std::sort(factors.begin(), factors.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    Complex prod = lead;
    for (Complex f : factors) prod *= f;
    return prod;
}

Complex coverup_velocity(std::span<const Complex> est, std::size_t j, const Polynomial& numer,
                         Complex lead) {
    Complex prod = denominator_product(est, j, lead);
    if (prod == Complex{})
        return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    return -numer(est[j]) / prod;
}

// Greedy nearest-neighbor assignment of fresh points to the previous
// estimates; ties broken by ascending indices with fresh points in
// canonical order, so matching is deterministic.
std::vector<Complex> nn_match(const std::vector<Complex>& prev, std::vector<Complex> fresh) {
    std::sort(fresh.begin(), fresh.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    const std::size_t n = prev.size();
    struct Pair {
        double dist;
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pairs.push_back({std::abs(prev[i] - fresh[j]), i, j});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    std::vector<Complex> out(n);
    std::vector<bool> used_prev(n, false), used_fresh(n, false);
    std::size_t assigned = 0;
    for (const auto& p : pairs) {
        if (used_prev[p.i] || used_fresh[p.j]) continue;
        out[p.i] = fresh[p.j];
        used_prev[p.i] = used_fresh[p.j] = true;
        if (++assigned == n) break;
    }
    return out;
}

double median_of(const std::deque<double>& values) {
    std::vector<double> v(values.begin(), values.end());
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

// Shared continuation engine for gain and contour sweeps. delta_at maps
// a display-grid value to the characteristic polynomial (throwing
// DegreeDropAtK when its degree collapses); q_of maps the display value
// to the affine sweep variable; chain_of is dq/dk for recorded
// velocities.
Locus run_trace(const Polynomial& step_numer, const std::function<Polynomial(double)>& delta_at,
                const std::function<double(double)>& q_of,
                const std::function<double(double)>& chain_of, const TraceConfig& cfg,
                const RootsOptions& ropts = {}) {
    const Grid grid = make_grid(cfg);
    Locus locus;
    locus.config = cfg;

    Polynomial delta0 = delta_at(grid.at(0));
    const int order = delta0.degree();
    if (order < 1) throw Error(Errc::degree_zero, "characteristic polynomial has no roots");
    const auto nb = static_cast<std::size_t>(order);

    RootSet seed = find_roots(delta0, ropts);
    if (!seed.converged)
        throw Error(Errc::no_convergence, "root solve did not converge while seeding the trace");
    std::vector<Complex> est = seed.roots;

    locus.branches.resize(nb);
    auto record = [&](double k, Complex lead) {
        const double chain = chain_of(k);
        for (std::size_t j = 0; j < nb; ++j) {
            Complex v = coverup_velocity(est, j, step_numer, lead) * chain;
            locus.branches[j].push_back({k, est[j], v});
        }
    };
    record(grid.at(0), delta0.leading());

    std::vector<std::deque<double>> history(nb);
    bool pending_reanchor = false;

    for (std::size_t i = 1; i < grid.count; ++i) {
        const double k_prev = grid.at(i - 1);
        const double k = grid.at(i);

        Polynomial delta_next;
        try {
            delta_next = delta_at(k);
            if (delta_next.degree() < order)
                throw Error(Errc::degree_drop_at_k, "characteristic polynomial lost degree");
        } catch (const Error& e) {
            if (e.code() != Errc::degree_drop_at_k) throw;
            locus.events.push_back({k, EventKind::degree_drop, e.what()});
            pending_reanchor = true;
            continue;  // this grid value is not traced
        }

        bool reanchor = false;
        EventKind kind = EventKind::reanchored;
        std::string detail;

        if (pending_reanchor) {
            reanchor = true;
            detail = "recovery after degree drop";
        } else if (cfg.reanchor_every > 0 && i % static_cast<std::size_t>(cfg.reanchor_every) == 0) {
            reanchor = true;
            detail = "periodic re-anchor";
        }

        std::vector<Complex> updates;
        if (!reanchor) {
            const double scale = [&] {
                double m = 0.0;
                for (Complex p : est) m = std::max(m, std::abs(p));
                return std::max(1.0, m);
            }();
            double min_sep = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < nb; ++j) min_sep = std::min(min_sep, min_separation(est, j));

            if (min_sep < 1e-12) {
                reanchor = true;
                kind = EventKind::branch_point_suspected;
                detail = "colliding estimates";
            } else if (min_sep < cfg.branch_event_tol * scale) {
                reanchor = true;
                kind = EventKind::branch_point_suspected;
                detail = "estimates within branch_event_tol";
            } else {
                const Polynomial delta_prev = delta_at(k_prev);
                const double dq = q_of(k) - q_of(k_prev);
                const Complex lead = delta_next.leading();
                updates.resize(nb);
                for (std::size_t j = 0; j < nb; ++j) {
                    Complex numer = step_numer(est[j]) * dq;
                    if (cfg.stabilizer_on) numer += delta_prev(est[j]);
                    updates[j] = -numer / denominator_product(est, j, lead);
                }
                for (std::size_t j = 0; j < nb && !reanchor; ++j) {
                    const double u = std::abs(updates[j]);
                    if (u > cfg.overshoot_fraction * min_separation(est, j)) {
                        reanchor = true;
                        kind = EventKind::branch_point_suspected;
                        detail = "update overshoots neighboring branch " + std::to_string(j);
                    } else if (history[j].size() >= 5 && u > cfg.max_step_factor * median_of(history[j])) {
                        reanchor = true;
                        kind = EventKind::branch_point_suspected;
                        detail = "update blow-up on branch " + std::to_string(j);
                    }
                }
                if (!reanchor && cfg.stabilizer_on) {
                    const double residual_bound = cfg.residual_event_tol * delta_next.coeff_scale();
                    for (std::size_t j = 0; j < nb && !reanchor; ++j) {
                        if (std::abs(delta_next(est[j] + updates[j])) > residual_bound) {
                            reanchor = true;
                            kind = EventKind::branch_point_suspected;
                            detail = "stepped estimate left the locus vicinity on branch " +
                                     std::to_string(j);
                        }
                    }
                }
            }
        }

        if (reanchor) {
            RootSet rs = find_roots(delta_next, ropts);
            if (!rs.converged)
                throw Error(Errc::no_convergence, "root solve did not converge while re-anchoring");
            est = nn_match(est, rs.roots);
            locus.events.push_back({k, kind, detail});
            for (auto& h : history) h.clear();
        } else {
            for (std::size_t j = 0; j < nb; ++j) {
                est[j] += updates[j];
                history[j].push_back(std::abs(updates[j]));
                if (history[j].size() > 10) history[j].pop_front();
            }
        }
        pending_reanchor = false;
        record(k, delta_next.leading());
    }
    return locus;
}

}  // namespace

std::vector<Complex> step_update(std::span<const Complex> estimates, const RationalTF& g,
                                 double k_i, double dk, bool stabilizer_on) {
    const std::size_t n = estimates.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (std::abs(estimates[a] - estimates[b]) < 1e-12)
                throw Error(Errc::colliding_estimates,
                            "estimates " + std::to_string(a) + " and " + std::to_string(b) +
                                " coincide; re-anchor before stepping");

    const Polynomial delta_i = closed_loop_charpoly(g, k_i);
    const Complex lead = closed_loop_charpoly(g, k_i + dk).leading();
    std::vector<Complex> updates(n);
    for (std::size_t j = 0; j < n; ++j) {
        Complex numer = g.num()(estimates[j]) * dk;
        if (stabilizer_on) numer += delta_i(estimates[j]);
        updates[j] = -numer / denominator_product(estimates, j, lead);
    }
    return updates;
}

Locus trace_locus(const RationalTF& g, const TraceConfig& cfg) {
    return run_trace(
        g.num(), [&](double k) { return closed_loop_charpoly(g, k); },
        [](double k) { return k; }, [](double) { return 1.0; }, cfg);
}

Locus exact_locus(const RationalTF& g, const TraceConfig& cfg) {
    const Grid grid = make_grid(cfg);
    Locus locus;
    locus.config = cfg;

    Polynomial delta0 = closed_loop_charpoly(g, grid.at(0));
    const int order = delta0.degree();
    const auto nb = static_cast<std::size_t>(order);
    locus.branches.resize(nb);

    std::vector<Complex> est;
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double k = grid.at(i);
        Polynomial delta;
        try {
            delta = closed_loop_charpoly(g, k);
            if (delta.degree() < order)
                throw Error(Errc::degree_drop_at_k, "characteristic polynomial lost degree");
        } catch (const Error& e) {
            if (e.code() != Errc::degree_drop_at_k) throw;
            locus.events.push_back({k, EventKind::degree_drop, e.what()});
            continue;
        }
        RootSet rs = find_roots(delta);
        if (!rs.converged)
            throw Error(Errc::no_convergence, "root solve did not converge at k = " + std::to_string(k));
        est = est.empty() ? rs.roots : nn_match(est, rs.roots);
        for (std::size_t j = 0; j < nb; ++j) {
            Complex v = coverup_velocity(est, j, g.num(), delta.leading());
            locus.branches[j].push_back({k, est[j], v});
        }
    }
    return locus;
}

std::pair<double, double> locus_error(const Locus& test, const Locus& truth) {
    if (test.branch_count() != truth.branch_count())
        throw Error(Errc::grid_mismatch, "branch counts differ");
    if (test.samples_per_branch() != truth.samples_per_branch())
        throw Error(Errc::grid_mismatch, "sample counts differ");
    const std::size_t nb = test.branch_count();
    const std::size_t ns = test.samples_per_branch();
    if (nb == 0 || ns == 0) return {0.0, 0.0};

    double sum = 0.0;
    double max_err = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
        std::vector<Complex> a(nb), b(nb);
        for (std::size_t j = 0; j < nb; ++j) {
            const auto& ta = test.branches[j][s];
            const auto& tb = truth.branches[j][s];
            if (std::abs(ta.k - tb.k) > 1e-12 * std::max(1.0, std::abs(tb.k)))
                throw Error(Errc::grid_mismatch, "k grids differ at sample " + std::to_string(s));
            a[j] = ta.pole;
            b[j] = tb.pole;
        }
        std::vector<Complex> matched = nn_match(a, b);
        for (std::size_t j = 0; j < nb; ++j) {
            double d = std::abs(a[j] - matched[j]);
            sum += d;
            max_err = std::max(max_err, d);
        }
    }
    return {sum / static_cast<double>(nb * ns), max_err};
}

Locus trace_contour(const ParamCharPoly& model, std::size_t param_index, const TraceConfig& cfg) {
    const auto dec = model.affine_in(param_index);
    const bool squared = model.square_affine(param_index);
    auto q_of = [squared](double h) { return squared ? h * h : h; };

    // Degree reference for drop detection comes from the grid start.
    const Polynomial at_start = dec.a + dec.b * Complex(q_of(cfg.k_start), 0.0);
    const int order = at_start.degree();

    auto delta_at = [&dec, q_of, order](double h) {
        Polynomial d = dec.a + dec.b * Complex(q_of(h), 0.0);
        if (d.degree() < order)
            throw Error(Errc::degree_drop_at_k, "delta degree drops at parameter value");
        return d;
    };
    auto chain_of = [squared](double h) { return squared ? 2.0 * h : 1.0; };
    return run_trace(dec.b, delta_at, q_of, chain_of, cfg);
}

}  // namespace rloci
