#pragma once

// Numeric verification of the metric comparison between the pentagon tiling
// and its dual square complex: the length table, the optimal multiplicative
// constants and their two-sided distance comparison, sharpness over the
// conjugacy census, and the crossing-type case analysis for geodesics
// through adjacent pentagon pairs.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "pentile/census.hpp"
#include "pentile/errors.hpp"
#include "pentile/parallel.hpp"
#include "pentile/rng.hpp"
#include "pentile/tracer.hpp"

namespace pentile {

struct LengthTable {
    double K, a, b, c, d, e, f, g;
    double lambda;           // d / c
    double rederive_error;   // worst gap between closed forms and measured geometry
};

// Closed-form table plus an independent re-derivation by explicit
// construction: distances between vertices and midpoints of the base
// pentagon, and the two-wall quadrilateral for 2g.
inline LengthTable length_table() {
    const Pentagon& P = pentagon();
    LengthTable t{P.K, P.a, P.b, P.c, P.d, P.e, P.f, P.g, P.lambda, 0.0};
    double err = 0.0;
    auto track = [&](double measured, double expected) {
        err = std::max(err, std::abs(measured - expected));
    };
    track(dist(P.vertex[0], P.vertex[4]), 2.0 * t.a);
    track(dist(P.center, P.midpoint[2]), t.b);
    track(dist(P.midpoint[0], P.midpoint[1]), t.c);
    track(dist(P.midpoint[0], P.midpoint[2]), t.d);
    track(dist(P.vertex[0], P.midpoint[2]), t.e);
    track(dist(P.vertex[0], P.vertex[2]), t.f);
    {
        // quadrilateral with right angles at the ends of side 0 and wall
        // segments of length 4a; the far side measures 2g
        Geodesic wallA = geodesic_through(P.vertex[4], P.midpoint[4]);
        Geodesic wallB = geodesic_through(P.vertex[0], P.midpoint[1]);
        track(dist(wallA.point_at(4.0 * t.a), wallB.point_at(4.0 * t.a)), 2.0 * t.g);
    }
    t.rederive_error = err;
    if (err > 1e-9) throw invariant_violation("length table re-derivation drifted");
    return t;
}

// --- two-sided comparison ----------------------------------------------------

struct TwoSidedReport {
    int ball_radius = 0;
    double eps_lower = 0.0, eps_upper = 0.0;
    uint64_t elements_checked = 0;  // difference elements u = g^-1 h scanned
    uint64_t implied_pairs = 0;     // |B(radius)|^2
    uint64_t violations = 0;
    double ratio_min = 1e300;  // min (d_H + eps_lower) / d_X
    double ratio_max = 0.0;    // max (d_H - eps_upper) / d_X
};

// Checks c*d_X - eps_lower <= d_H <= d*d_X + eps_upper over all chamber
// pairs in the radius-n ball. By equivariance the inequality for the pair
// (g, h) depends only on u = g^-1 h, and the set of such u is exactly the
// radius-2n ball, so the scan walks difference elements once each instead of
// the quadratically many pairs.
inline TwoSidedReport verify_two_sided(int ball_radius, double eps_lower, double eps_upper,
                                       int workers = 1) {
    const Pentagon& P = pentagon();
    TwoSidedReport rep;
    rep.ball_radius = ball_radius;
    rep.eps_lower = eps_lower;
    rep.eps_upper = eps_upper;
    const int depth = 2 * ball_radius;

    // per-length acceptance bands on z = cosh d_H(o, u o)
    std::vector<double> z_lo(depth + 1), z_hi(depth + 1);
    for (int L = 1; L <= depth; ++L) {
        z_lo[L] = std::cosh(std::max(0.0, P.c * L - eps_lower));
        z_hi[L] = std::cosh(P.d * L + eps_upper);
    }

    std::vector<Word> roots = subtree_roots(std::min(3, depth), depth);
    struct Chunk {
        uint64_t n = 0, viol = 0;
        std::vector<double> zmin, zmax;
    };
    std::vector<Chunk> chunks(roots.size());
    for (auto& c : chunks) {
        c.zmin.assign(depth + 1, 1e300);
        c.zmax.assign(depth + 1, 0.0);
    }

    parallel_chunks(roots.size(), workers, roots.size(), [&](size_t ci, size_t b, size_t) {
        const Word& root = roots[b];
        int limit = static_cast<int>(root.size()) < std::min(3, depth)
                        ? static_cast<int>(root.size())
                        : depth;
        Chunk& mine = chunks[ci];
        enumerate_subtree(root, limit, [&](const Word& w, const HIsometry& M) {
            int L = static_cast<int>(w.size());
            double z = M.m[8];
            ++mine.n;
            if (z < z_lo[L] - 1e-12 || z > z_hi[L] + 1e-12) ++mine.viol;
            if (z < mine.zmin[L]) mine.zmin[L] = z;
            if (z > mine.zmax[L]) mine.zmax[L] = z;
            return true;
        });
    });

    std::vector<double> zmin(depth + 1, 1e300), zmax(depth + 1, 0.0);
    for (auto& c : chunks) {
        rep.elements_checked += c.n;
        rep.violations += c.viol;
        for (int L = 1; L <= depth; ++L) {
            zmin[L] = std::min(zmin[L], c.zmin[L]);
            zmax[L] = std::max(zmax[L], c.zmax[L]);
        }
    }
    uint64_t ball = ball_size(ball_radius);
    rep.implied_pairs = ball * ball;
    for (int L = 1; L <= depth; ++L) {
        if (zmax[L] <= 0.0) continue;  // no elements of this length
        double dmin = acosh_clamped(std::max(1.0, zmin[L]));
        double dmax = acosh_clamped(std::max(1.0, zmax[L]));
        rep.ratio_min = std::min(rep.ratio_min, (dmin + eps_lower) / L);
        rep.ratio_max = std::max(rep.ratio_max, (dmax - eps_upper) / L);
    }
    return rep;
}

// --- sharpness over the census -----------------------------------------------

struct SharpnessReport {
    int n_max = 0;
    double sup_ratio = 0.0, inf_ratio = 1e300;
    Word sup_witness, inf_witness;
    uint64_t classes = 0;
    uint64_t out_of_band = 0;  // ratios outside [c - 1e-9, d + 1e-9]
};

inline SharpnessReport sharpness(int n_max, int workers = 1,
                                 const CensusBudget& budget = CensusBudget{}) {
    const Pentagon& P = pentagon();
    ClassCensus census = class_census_cube(n_max, workers, budget);
    SharpnessReport rep;
    rep.n_max = n_max;
    for (const auto& c : census.classes) {
        double ratio = *c.len_hyp / c.len_cube;
        ++rep.classes;
        if (ratio < P.c - 1e-9 || ratio > P.d + 1e-9) ++rep.out_of_band;
        if (ratio > rep.sup_ratio) {
            rep.sup_ratio = ratio;
            rep.sup_witness = c.rep;
        }
        if (ratio < rep.inf_ratio) {
            rep.inf_ratio = ratio;
            rep.inf_witness = c.rep;
        }
    }
    return rep;
}

// --- crossing types ------------------------------------------------------------

enum class CrossingType { I = 0, II, III, IV, V };

inline const char* to_string(CrossingType t) {
    switch (t) {
        case CrossingType::I: return "I";
        case CrossingType::II: return "II";
        case CrossingType::III: return "III";
        case CrossingType::IV: return "IV";
        default: return "V";
    }
}

// Infimal altitude-to-altitude lengths per type.
inline std::array<double, 5> crossing_minima_table() {
    const Pentagon& P = pentagon();
    return {P.a, 2.0 * P.a, P.d, P.f / 2.0, P.c};
}

// Combinatorial type of a geodesic crossing two adjacent pentagons, from the
// entry side of the first and the exit side of the second, both normalized
// so the shared side has index 0. Sides 1 and 4 are adjacent to the shared
// side; a same-end adjacent pair is impossible because those side lines are
// collinear.
inline CrossingType crossing_type(int entry, int exit) {
    bool e_adj = entry == 1 || entry == 4;
    bool x_adj = exit == 1 || exit == 4;
    if (e_adj && x_adj) {
        if (entry == exit) throw degenerate_input_error("collinear adjacent sides");
        return CrossingType::V;
    }
    if (!e_adj && !x_adj) return entry == exit ? CrossingType::II : CrossingType::III;
    int gap = std::abs(entry - exit);
    return gap == 1 ? CrossingType::I : CrossingType::IV;
}

// Altitude of the base pentagon whose reflection swaps sides i and j: the
// symmetry k -> (i+j-k) mod 5 fixes side m = 3(i+j) mod 5, so the altitude
// runs from the midpoint of side m to the opposite vertex.
inline Geodesic altitude_line(int i, int j) {
    const Pentagon& P = pentagon();
    int m = (3 * (i + j)) % 5;
    return geodesic_through(P.midpoint[m], P.vertex[(m + 2) % 5]);
}

namespace detail {

inline std::optional<double> crossing_param(const Geodesic& chord, const SpacelikeVector& polar) {
    double al = mdot(chord.base.v, polar.v), be = mdot(chord.dir.v, polar.v);
    if (std::abs(be) <= std::abs(al)) return std::nullopt;
    return std::atanh(-al / be);
}

} // namespace detail

struct CrossingRecord {
    CrossingType type;
    int entry_side = -1;  // normalized local indices (shared side = 0)
    int exit_side = -1;
    double length = 0.0;  // altitude-to-altitude length of the segment
    bool perturbed = false;
};

// Classifies the crossing of two consecutive trace steps and measures the
// segment between the two associated altitudes.
inline std::optional<CrossingRecord> classify_step_pair(const Geodesic& chord, const TraceStep& s1,
                                                        const TraceStep& s2) {
    if (s1.entry_side < 0 || s1.exit_side < 0 || s2.entry_side < 0 || s2.exit_side < 0)
        return std::nullopt;
    int shared = s1.exit_side;
    int e = ((s1.entry_side - shared) % 5 + 5) % 5;
    int x = ((s2.exit_side - shared) % 5 + 5) % 5;
    if (e == 0 || x == 0) return std::nullopt;
    CrossingRecord rec;
    rec.entry_side = e;
    rec.exit_side = x;
    rec.type = crossing_type(e, x);
    HIsometry M1 = word_isometry(s1.chamber);
    HIsometry M2 = word_isometry(s2.chamber);
    Geodesic a1 = altitude_line(s1.entry_side, s1.exit_side);
    Geodesic a2 = altitude_line(s2.entry_side, s2.exit_side);
    auto t1 = detail::crossing_param(chord, M1.apply(a1.polar()));
    auto t2 = detail::crossing_param(chord, M2.apply(a2.polar()));
    if (!t1 || !t2) return std::nullopt;
    rec.length = std::abs(*t2 - *t1);
    return rec;
}

// Chord through the base pentagon pair (chambers {} and {0}); endpoints on
// the pair's outer boundary, crossing the shared side. Vertex-touching
// chords are perturbed by a 1e-7 parameter shift and flagged.
inline CrossingRecord classify_crossing(const Geodesic& chord) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        Geodesic probe = chord;
        if (attempt > 0) {
            // rotate the direction by attempt * 1e-7 within the tangent plane
            double eps = attempt * 1e-7;
            SpacelikeVector nrm = normalize_spacelike(applyJ(cross(chord.base.v, chord.dir.v)));
            Vec3 dirv = add(scale(chord.dir.v, std::cos(eps)), scale(nrm.v, std::sin(eps)));
            probe = Geodesic{chord.base, normalize_spacelike(dirv)};
        }
        std::vector<TraceStep> steps;
        try {
            steps = trace_geodesic(probe, -4.0, 4.0);
        } catch (const degenerate_input_error&) {
            continue;
        }
        for (size_t k = 0; k + 1 < steps.size(); ++k) {
            bool first_is_base = steps[k].chamber.empty() && steps[k + 1].chamber == Word{0};
            bool first_is_other = steps[k].chamber == Word{0} && steps[k + 1].chamber.empty();
            if (!first_is_base && !first_is_other) continue;
            auto rec = classify_step_pair(probe, steps[k], steps[k + 1]);
            if (rec) {
                rec->perturbed = attempt > 0;
                return *rec;
            }
        }
        break;
    }
    throw degenerate_input_error("classify_crossing: chord does not cross the base pair");
}

// --- Monte Carlo over the base pair -------------------------------------------

struct CrossingMinima {
    std::array<double, 5> observed_min{1e300, 1e300, 1e300, 1e300, 1e300};
    std::array<uint64_t, 5> samples{0, 0, 0, 0, 0};
    uint64_t total = 0;
    uint64_t undercuts = 0;  // observations below the table minimum - 1e-6
};

// Random chords through the shared side of the base pair, classified and
// measured; per-type quotas ensure every type is exercised.
inline CrossingMinima crossing_minima(uint64_t samples_per_type, uint64_t seed) {
    const Pentagon& P = pentagon();
    auto table = crossing_minima_table();
    CrossingMinima out;
    Geodesic shared = geodesic_through(P.vertex[4], P.vertex[0]);
    Rng rng(seed, 0xC5055);
    uint64_t budget = samples_per_type * 200;
    for (uint64_t it = 0; it < budget; ++it) {
        bool need_more = false;
        for (auto s : out.samples)
            if (s < samples_per_type) need_more = true;
        if (!need_more) break;
        double u = (rng.next_double() * 2.0 - 1.0) * P.a * 0.9999;
        HPoint x = shared.point_at(P.a + u);
        double th = rng.next_double() * M_PI;
        if (std::abs(std::sin(th)) < 1e-3) continue;
        SpacelikeVector tang = shared.tangent_at(P.a + u);
        SpacelikeVector nrm = normalize_spacelike(applyJ(cross(x.v, tang.v)));
        Vec3 dirv = add(scale(tang.v, std::cos(th)), scale(nrm.v, std::sin(th)));
        Geodesic chord{x, normalize_spacelike(dirv)};
        CrossingRecord rec;
        try {
            rec = classify_crossing(chord);
        } catch (const degenerate_input_error&) {
            continue;
        }
        size_t t = static_cast<size_t>(rec.type);
        if (out.samples[t] >= samples_per_type * 4) continue;  // keep quotas balanced
        ++out.samples[t];
        ++out.total;
        out.observed_min[t] = std::min(out.observed_min[t], rec.length);
        if (rec.length < table[t] - 1e-6) ++out.undercuts;
    }
    return out;
}

// --- claims about consecutive segments -----------------------------------------

struct ClaimsReport {
    double margin_pair = 0.0;    // min(3a, g) - 2c
    double margin_triple = 0.0;  // 2e - 3c
    // Monte Carlo over traced geodesics
    uint64_t type1_interior = 0;        // interior type-I segments seen
    uint64_t claim1_violations = 0;     // type-I segment with no II/III/IV neighbor
    uint64_t claim2_violations = 0;     // I-II-I or I-IV-I patterns
    double pair_sum_min = 1e300;        // min over type-I adjacent pairs of len_i + len_j
    uint64_t pair_undercuts = 0;        // pair sums below min(3a,g) - 1e-6
    double triple_sum_min = 1e300;      // min over I-III-I triples
    uint64_t triple_undercuts = 0;      // triple sums below 2e - 1e-6
    uint64_t traces = 0;
    uint64_t degenerate_traces = 0;
};

inline ClaimsReport claims_check(uint64_t traces, uint64_t seed) {
    const Pentagon& P = pentagon();
    ClaimsReport rep;
    rep.margin_pair = std::min(3.0 * P.a, P.g) - 2.0 * P.c;
    rep.margin_triple = 2.0 * P.e - 3.0 * P.c;
    const double pair_bound = std::min(3.0 * P.a, P.g) - 1e-6;
    const double triple_bound = 2.0 * P.e - 1e-6;

    Rng rng(seed, 0xC1A1);
    for (uint64_t it = 0; it < traces; ++it) {
        // random geodesic near the base pentagon
        double r = rng.next_double() * 1.0;
        double phi = rng.next_double() * 2.0 * M_PI;
        HPoint x{Vec3{std::sinh(r) * std::cos(phi), std::sinh(r) * std::sin(phi), std::cosh(r)}};
        double th = rng.next_double() * M_PI;
        Vec3 e1{std::cos(th), std::sin(th), 0.0};
        Vec3 dd = add(e1, scale(x.v, mdot(e1, x.v)));
        if (mdot(dd, dd) < 1e-9) continue;
        Geodesic gamma{x, normalize_spacelike(dd)};
        std::vector<TraceStep> steps;
        try {
            steps = trace_geodesic(gamma, -4.5, 4.5);
        } catch (const degenerate_input_error&) {
            ++rep.degenerate_traces;
            continue;
        }
        ++rep.traces;
        // segment k sits between the altitudes of chambers k and k+1
        std::vector<std::optional<CrossingRecord>> segs;
        for (size_t k = 0; k + 1 < steps.size(); ++k)
            segs.push_back(classify_step_pair(gamma, steps[k], steps[k + 1]));
        auto type_at = [&](size_t k) -> std::optional<CrossingType> {
            if (k >= segs.size() || !segs[k]) return std::nullopt;
            return segs[k]->type;
        };
        auto lender = [](CrossingType t) {
            return t == CrossingType::II || t == CrossingType::III || t == CrossingType::IV;
        };
        for (size_t k = 0; k < segs.size(); ++k) {
            auto t = type_at(k);
            if (!t) continue;
            if (*t == CrossingType::I) {
                auto lt = type_at(k - 1);  // size_t wrap lands out of range at k = 0
                auto rt = type_at(k + 1);
                if (!lt || !rt) continue;  // boundary segment: claims apply to interior
                ++rep.type1_interior;
                if (!lender(*lt) && !lender(*rt)) ++rep.claim1_violations;
                for (size_t j : {k - 1, k + 1}) {
                    if (!lender(*type_at(j))) continue;
                    double sum = segs[k]->length + segs[j]->length;
                    rep.pair_sum_min = std::min(rep.pair_sum_min, sum);
                    if (sum < pair_bound) ++rep.pair_undercuts;
                }
            } else if (lender(*t) && k > 0) {
                auto lt = type_at(k - 1), rt = type_at(k + 1);
                bool both_I = lt && rt && *lt == CrossingType::I && *rt == CrossingType::I;
                if (!both_I) continue;
                if (*t == CrossingType::III) {
                    double tsum = segs[k - 1]->length + segs[k]->length + segs[k + 1]->length;
                    rep.triple_sum_min = std::min(rep.triple_sum_min, tsum);
                    if (tsum < triple_bound) ++rep.triple_undercuts;
                } else {
                    ++rep.claim2_violations;  // a II or IV lender flanked by two type-I borrowers
                }
            }
        }
    }
    return rep;
}

} // namespace pentile
