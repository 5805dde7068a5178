#pragma once

// C'(alpha) verdicts for presentations over the tiling group: loose
// cone-piece censuses for every ordered relator pair (including self-pairs),
// wall-piece and carrier checks per relator, and the antipodal-wallspace
// premise checks. Piece diameters are measured in the hyperbolic metric
// against hyperbolic systoles; a violated bound anywhere flips the verdict.

#include <optional>
#include <string>
#include <vector>

#include "pentile/pieces.hpp"

namespace pentile {

struct Presentation {
    std::vector<ConjClass> relators;
    double alpha = 1.0 / 20.0;
    CensusOptions census;
};

// Duplicate relator classes are a degenerate presentation: the piece
// definition excludes coincident universal covers, so sampling the same
// class twice is rejected at construction.
inline Presentation make_presentation(std::vector<ConjClass> relators, double alpha,
                                      CensusOptions census = CensusOptions{}) {
    if (relators.empty()) throw std::invalid_argument("presentation needs at least one relator");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    for (const auto& r : relators)
        if (!r.hyperbolic) throw std::domain_error("presentation relators must be hyperbolic");
    for (size_t i = 0; i < relators.size(); ++i)
        for (size_t j = i + 1; j < relators.size(); ++j)
            if (relators[i].rep == relators[j].rep)
                throw excluded_case_error("duplicate relator classes");
    return Presentation{std::move(relators), alpha, census};
}

// Hyperbolic/cubical systole of a quasi-circle relator: the translation
// lengths of its generator. Non-primitive input is flagged and the root's
// systole returned.
struct SystoleReport {
    double hyp = 0.0;
    int cube = 0;
    bool was_primitive = true;
    Word root;  // = rep when primitive
};

inline SystoleReport systole(const ConjClass& c, const ClassCensus& census) {
    if (!c.hyperbolic) throw std::domain_error("systole: elliptic class");
    SystoleReport rep;
    rep.hyp = *c.len_hyp;
    rep.cube = c.len_cube;
    rep.root = c.rep;
    if (!is_primitive(c, census)) {
        rep.was_primitive = false;
        // locate the primitive root: smallest class whose power matches
        for (const auto& r : census.classes) {
            if (!r.hyperbolic || r.len_cube >= c.len_cube) continue;
            if (c.len_cube % r.len_cube != 0) continue;
            int n = c.len_cube / r.len_cube;
            if (n < 2) continue;
            Word power;
            for (int k = 0; k < n; ++k) power.insert(power.end(), r.rep.begin(), r.rep.end());
            if (conj_min_word(power) == c.rep) {
                rep.hyp = *r.len_hyp;
                rep.cube = r.len_cube;
                rep.root = r.rep;
                break;
            }
        }
    }
    return rep;
}

enum class VerdictState { satisfied, violated, unknown };

inline const char* to_string(VerdictState s) {
    switch (s) {
        case VerdictState::satisfied: return "satisfied";
        case VerdictState::violated: return "violated";
        default: return "unknown";
    }
}

struct PairDiagnostic {
    size_t i = 0, j = 0;
    double diameter = 0.0;
    double bound = 0.0;
    Word translate;
};

struct WallDiagnostic {
    size_t relator = 0;
    double diameter = 0.0;
    double bound = 0.0;
    bool crossing = false;
    bool axis_on_wall = false;
};

struct Verdict {
    VerdictState state = VerdictState::unknown;
    bool satisfied = false;
    double alpha = 0.0;
    // threshold flags for the three named small-cancellation bands
    bool alpha_below_1_20 = false, alpha_below_1_14 = false, alpha_below_1_12 = false;
    std::optional<PairDiagnostic> worst_cone;
    std::optional<WallDiagnostic> worst_wall;     // disjoint walls
    std::optional<WallDiagnostic> worst_carrier;  // walls crossing the axis
    bool any_axis_on_wall = false;
    std::vector<double> systole_hyp;  // per relator
    uint64_t cone_pairs_checked = 0;
    std::string note;
};

// Full C'(alpha) check in the hyperbolic metric: every ordered pair of
// relators (including i = j via translates) must have max cone-piece
// diameter < alpha * systole(Y_i), and every wall-piece or carrier
// intersection must obey the same bound.
inline Verdict cprime_verdict(const Presentation& p, const PieceConfig& cfg = PieceConfig{}) {
    Verdict v;
    v.alpha = p.alpha;
    v.alpha_below_1_20 = p.alpha < 1.0 / 20.0 + 1e-12;
    v.alpha_below_1_14 = p.alpha < 1.0 / 14.0 + 1e-12;
    v.alpha_below_1_12 = p.alpha < 1.0 / 12.0 + 1e-12;
    v.satisfied = true;

    const size_t k = p.relators.size();
    for (const auto& r : p.relators) v.systole_hyp.push_back(*r.len_hyp);

    for (size_t i = 0; i < k; ++i) {
        double bound_i = p.alpha * v.systole_hyp[i];
        for (size_t j = 0; j < k; ++j) {
            PieceCensus census =
                max_piece_census(p.relators[i], p.relators[j], cfg.J_cone, p.census);
            ++v.cone_pairs_checked;
            if (!census.max_piece) continue;
            double dia = census.max_piece->diameter;
            // worst = largest excess over its own bound
            if (!v.worst_cone ||
                dia - bound_i > v.worst_cone->diameter - v.worst_cone->bound) {
                v.worst_cone = PairDiagnostic{i, j, dia, bound_i, census.max_piece->translate};
            }
            if (dia >= bound_i) v.satisfied = false;
        }
        WallCensusResult walls = wall_piece_census(p.relators[i], cfg.kappa_wall, p.census);
        if (walls.axis_on_wall) {
            // the relator's axis coincides with a tiling wall: its loose
            // wall-piece is unbounded, which violates any alpha bound
            v.any_axis_on_wall = true;
            v.satisfied = false;
            if (!v.worst_wall)
                v.worst_wall = WallDiagnostic{i, 1e300, bound_i, false, true};
        }
        if (walls.max_disjoint) {
            double dia = walls.max_disjoint->diameter;
            if (!v.worst_wall ||
                dia - bound_i > v.worst_wall->diameter - v.worst_wall->bound)
                v.worst_wall = WallDiagnostic{i, dia, bound_i, false, false};
            if (dia >= bound_i) v.satisfied = false;
        }
        if (walls.max_crossing) {
            double dia = walls.max_crossing->diameter;
            if (!v.worst_carrier ||
                dia - bound_i > v.worst_carrier->diameter - v.worst_carrier->bound)
                v.worst_carrier = WallDiagnostic{i, dia, bound_i, true, false};
            if (dia >= bound_i) v.satisfied = false;
        }
    }
    v.state = v.satisfied ? VerdictState::satisfied : VerdictState::violated;
    return v;
}

// --- wallspace premises ----------------------------------------------------------

struct WallspacePremises {
    int crossings_per_period = 0;   // before doubling
    bool doubled = true;            // one barycentric doubling is always applied
    bool auto_doubled_for_parity = false;  // the undoubled count was odd
    double min_pair_gap = 1e300;    // min distance between antipodal wall lines
    double margin = 0.0;            // min gap - 8 alpha systole (edge terms in tol)
    bool feasible = false;
};

// Checks the antipodal-pairing premises along one period of the axis: the
// wall crossings are counted, doubled once (subdivision hyperplanes at the
// parameter midpoints), and each antipodal pair's line distance must exceed
// 8 alpha systole. Edge-length correction terms are absorbed into the
// reported tolerance, per the subdivision argument.
inline WallspacePremises wallspace_premises(const ConjClass& c, double alpha,
                                            const ClassCensus& census) {
    if (!c.hyperbolic) throw std::domain_error("wallspace_premises: elliptic class");
    if (!is_primitive(c, census))
        throw std::domain_error("wallspace_premises: non-primitive class");
    const Pentagon& P = pentagon();
    AxisLine A = axis_of(c);
    double T = A.period;

    WallspacePremises rep;

    // tiling walls crossing the axis over one period, with their parameters
    struct Crossing {
        double t;
        bool real;  // tiling wall (vs subdivision midpoint)
        SpacelikeVector line;
    };
    std::vector<Crossing> crossings;
    auto tube = detail::tube_chambers(A, 0.0, T, 0.5);
    std::set<std::pair<long long, long long>> seen;
    for (const auto& w : tube) {
        for (int i = 0; i < 5; ++i) {
            SpacelikeVector e = w.iso.apply(P.side[i]);
            Vec3 canon = e.v[2] < 0.0 ? scale(e.v, -1.0) : e.v;
            auto key = std::make_pair(std::llround(canon[0] * 1e7), std::llround(canon[1] * 1e7));
            if (!seen.insert(key).second) continue;
            double al = mdot(A.line.base.v, e.v), be = mdot(A.line.dir.v, e.v);
            if (std::abs(be) <= std::abs(al)) continue;  // no crossing
            double t = std::atanh(-al / be);
            if (t < -1e-9 || t >= T - 1e-9) continue;
            crossings.push_back({t, true, SpacelikeVector{canon}});
        }
    }
    std::sort(crossings.begin(), crossings.end(),
              [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
    rep.crossings_per_period = static_cast<int>(crossings.size());
    rep.auto_doubled_for_parity = rep.crossings_per_period % 2 == 1;

    // one barycentric doubling: subdivision hyperplanes at parameter
    // midpoints between consecutive crossings (cyclically, wrapping by T).
    // The polar of the perpendicular at gamma(t) is the tangent there, so
    // every pair gap reduces to the polar product.
    std::vector<Crossing> doubled;
    for (size_t i = 0; i < crossings.size(); ++i) {
        doubled.push_back(crossings[i]);
        double next_t =
            (i + 1 < crossings.size()) ? crossings[i + 1].t : crossings[0].t + T;
        double tm = 0.5 * (crossings[i].t + next_t);
        doubled.push_back({tm, false, A.line.tangent_at(tm)});
    }
    const size_t n = doubled.size();
    if (n < 2 || n % 2 != 0) {
        rep.feasible = false;
        return rep;
    }
    const size_t half = n / 2;
    for (size_t i = 0; i < half; ++i) {
        double dot = std::abs(mdot(doubled[i].line.v, doubled[i + half].line.v));
        double gap = dot >= 1.0 ? std::acosh(dot) : 0.0;  // crossing lines: gap 0
        rep.min_pair_gap = std::min(rep.min_pair_gap, gap);
    }
    rep.margin = rep.min_pair_gap - 8.0 * alpha * *c.len_hyp;
    rep.feasible = rep.margin > 0.0;
    return rep;
}

} // namespace pentile
