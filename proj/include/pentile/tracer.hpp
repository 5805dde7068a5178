#pragma once

// Walks a geodesic line through the pentagon tiling: which chamber contains a
// point, which side the line exits through, and the full crossing sequence
// over a parameter window. Chamber w*P0 is bounded by the lines w*side[i];
// its interior is where all five signed products <p, w*e_i> are negative.

#include <optional>
#include <vector>

#include "pentile/coxeter.hpp"
#include "pentile/errors.hpp"

namespace pentile {

struct TraceStep {
    Word chamber;        // the chamber being crossed
    int entry_side = -1; // side through which the line entered (-1 for the first)
    int exit_side = -1;  // side through which it leaves (-1 for the last)
    double t_entry = 0.0;
    double t_exit = 0.0;
};

// Chamber containing the given point, found by walking from the identity
// chamber across the most violated side. The walk is geometric and
// terminates because each step strictly decreases the distance to the
// target chamber's center.
inline Word locate_chamber(const HPoint& p, int max_steps = 4096) {
    const Pentagon& P = pentagon();
    Word w;
    HIsometry inv = HIsometry::identity();  // maps p into the base chamber's frame
    for (int step = 0; step < max_steps; ++step) {
        HPoint local = inv.apply(p);
        int worst = -1;
        double worst_val = 1e-12;
        for (int i = 0; i < 5; ++i) {
            double s = mdot(local.v, P.side[i].v);
            if (s > worst_val) {
                worst_val = s;
                worst = i;
            }
        }
        if (worst < 0) return w;
        canonical_append(w, static_cast<Letter>(worst));
        inv = compose(P.refl[worst], inv);
    }
    throw invariant_violation("locate_chamber: walk did not terminate");
}

namespace detail {

// Smallest parameter t > t_min where <gamma(t), e> = 0 with an upward
// crossing is not needed; any sign change will do since we track sides.
inline std::optional<double> line_crossing_after(const Geodesic& g, const SpacelikeVector& e,
                                                 double t_min) {
    double alpha = mdot(g.base.v, e.v);
    double beta = mdot(g.dir.v, e.v);
    // alpha cosh t + beta sinh t = 0  =>  tanh t = -alpha/beta
    if (std::abs(beta) <= std::abs(alpha)) return std::nullopt;  // no crossing
    double t = std::atanh(-alpha / beta);
    if (t <= t_min) return std::nullopt;
    return t;
}

} // namespace detail

// Crossing sequence of the line gamma over [t0, t1]. Vertex-touching lines
// (two sides crossed at indistinguishable parameters) raise
// degenerate_input_error; callers perturb and flag.
inline std::vector<TraceStep> trace_geodesic(const Geodesic& gamma, double t0, double t1,
                                             double vertex_eps = 1e-9) {
    const Pentagon& P = pentagon();
    std::vector<TraceStep> steps;
    Word w = locate_chamber(gamma.point_at(t0));
    int entry = -1;
    double t = t0;
    HIsometry inv = word_isometry(w).inverse();
    while (t < t1) {
        // candidate exits: crossings of the five local side lines after t
        double best_t = 1e300;
        int best_side = -1;
        Geodesic local{inv.apply(gamma.base), inv.apply(gamma.dir)};
        for (int i = 0; i < 5; ++i) {
            auto tc = detail::line_crossing_after(local, P.side[i], t + vertex_eps);
            if (!tc) continue;
            if (*tc < best_t) {
                best_t = *tc;
                best_side = i;
            }
        }
        if (best_side < 0 || best_t >= t1) {
            steps.push_back({w, entry, -1, t, t1});
            break;
        }
        // an exit point lying on a second side line is a tiling vertex
        HPoint exit_pt = local.point_at(best_t);
        for (int i = 0; i < 5; ++i) {
            if (i == best_side) continue;
            if (std::abs(mdot(exit_pt.v, P.side[i].v)) < vertex_eps)
                throw degenerate_input_error("trace_geodesic: line passes through a tiling vertex");
        }
        steps.push_back({w, entry, best_side, t, best_t});
        // the chamber across side i of chamber w is w s_i
        canonical_append(w, static_cast<Letter>(best_side));
        inv = compose(P.refl[best_side], inv);
        entry = best_side;
        t = best_t;
    }
    return steps;
}

} // namespace pentile
