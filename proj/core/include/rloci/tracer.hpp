#ifndef RLOCI_TRACER_HPP
#define RLOCI_TRACER_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rloci/sensitivity.hpp"
#include "rloci/transfer_function.hpp"

namespace rloci {

struct TraceConfig {
    double k_start = 0.0;
    double k_end = 1.0;
    /// Grid precision; the grid is inclusive of both endpoints with
    /// N = floor((k_end - k_start) / dk) + 1 samples. Sweeps toward
    /// smaller k are expressed by k_end < k_start.
    double dk = 0.01;
    /// Keep the delta(s, k_i) correction term in the update. Turning
    /// it off reduces the step to an explicit Euler step on the
    /// velocity field (the ablation mode).
    bool stabilizer_on = true;
    /// Exact re-solve every this many steps; 0 disables periodic
    /// re-anchoring (events still force local re-anchors).
    int reanchor_every = 0;
    /// Two estimates closer than branch_event_tol * max(1, pole scale)
    /// flag a suspected branch point.
    double branch_event_tol = 1e-3;
    /// An update exceeding this factor times the median update of the
    /// branch's trailing ten steps flags a suspected branch point.
    double max_step_factor = 50.0;
    /// An update exceeding this fraction of the distance to the
    /// nearest other estimate overshoots toward a neighboring branch
    /// and flags a suspected branch point.
    double overshoot_fraction = 0.25;
    /// Stabilized traces re-anchor when a stepped estimate leaves a
    /// characteristic-polynomial residual above this fraction of the
    /// coefficient scale, which keeps every recorded sample in the
    /// vicinity of the true locus. Ignored with the stabilizer off
    /// (the ablation mode measures uncorrected drift).
    double residual_event_tol = 2e-3;
};

struct LocusSample {
    double k = 0.0;
    Complex pole;
    Complex velocity;
};

enum class EventKind { branch_point_suspected, reanchored, degree_drop };

const char* event_kind_name(EventKind kind);

struct LocusEvent {
    double k = 0.0;
    EventKind kind = EventKind::branch_point_suspected;
    std::string detail;
};

/// Traced root locus: one ordered sample list per branch (every branch
/// has one sample per grid value actually traced, and identical k
/// sequences across branches), plus the recovery events encountered.
struct Locus {
    std::vector<std::vector<LocusSample>> branches;
    std::vector<LocusEvent> events;
    TraceConfig config;

    std::size_t branch_count() const { return branches.size(); }
    std::size_t samples_per_branch() const { return branches.empty() ? 0 : branches[0].size(); }
};

/// One step of the residue-driven difference equation: returns the
/// increments
///   -(N(s) dk + delta(s, k_i)) / (lead(delta(., k_i + dk)) *
///     prod_{h != j} (s - estimates[h]))  at s = estimates[j],
/// all computed from the same input snapshot. With stabilizer_on false
/// the delta(s, k_i) term is dropped. Throws CollidingEstimates when
/// two estimates are closer than 1e-12 (the caller must re-anchor).
std::vector<Complex> step_update(std::span<const Complex> estimates, const RationalTF& g,
                                 double k_i, double dk, bool stabilizer_on);

/// Root locus of the feedback loop around g over the configured gain
/// grid. Branches are seeded from the exact roots at k_start (sorted
/// by real part, then imaginary part) and advanced by step_update.
/// Suspected branch points and degree drops trigger an exact re-solve
/// at that grid point with nearest-neighbor re-matching; the trace
/// then resumes.
Locus trace_locus(const RationalTF& g, const TraceConfig& cfg);

/// Ground-truth baseline: one exact all-roots solve per grid point,
/// branches matched greedily to the previous step.
Locus exact_locus(const RationalTF& g, const TraceConfig& cfg);

/// Mean and maximum per-sample distance between two loci over the same
/// grid, after nearest-neighbor branch alignment at each grid point.
/// Throws GridMismatch when grids or branch counts differ.
std::pair<double, double> locus_error(const Locus& test, const Locus& truth);

/// Contour locus: the tracer applied to delta(s, h_i) = A(s) + q B(s)
/// with q = h_i (or q = h_i^2 for connection parameters). The grid and
/// recorded velocities are in h_i; square-affine parameters get the
/// chain-rule factor dq/dh = 2 h_i applied to the recorded velocities.
Locus trace_contour(const ParamCharPoly& model, std::size_t param_index, const TraceConfig& cfg);

}  // namespace rloci

#endif
