#pragma once

// Closed-form detection of J-loose cone-pieces and wall-pieces between
// geodesic axes in the hyperbolic plane, plus the translate census over a
// finite window and the combinatorial cross-check on the square complex.
//
// The distance from gamma(t) to the line with unit polar e is
// arcsinh|alpha cosh t + beta sinh t| with alpha = <base,e>, beta = <dir,e>,
// so the J-neighborhood condition solves in closed form: one interval,
// empty set, or (for lines sharing an ideal endpoint) a half-line, which is
// rejected as degenerate.

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pentile/census.hpp"
#include "pentile/davis.hpp"
#include "pentile/errors.hpp"
#include "pentile/rng.hpp"
#include "pentile/tracer.hpp"

namespace pentile {

// Hull thickness of the dual square complex, frozen from the census of all
// conjugacy-minimal axes with stable length <= 10 over three-period windows
// (the value is already stable from cap 6).
inline constexpr int kHullThickness = 2;

struct PieceConfig {
    double J_cone = 2.0 * geometry_defaults().delta;     // 2*delta
    double kappa_wall = 2.0 * geometry_defaults().delta; // geodesic walls: quasiconvexity 0, + 2*delta
    int J_cubical = 3 * kHullThickness;
    double R_cap = 0.0;  // filled by the reversing-overlap census when used
};

struct AxisLine {
    Geodesic line;      // unit speed, anchored with t = 0 at the foot of the basepoint
    GroupElement carrier;
    double period = 0.0;  // translation length of the carrier
};

inline AxisLine axis_of(const GroupElement& g) {
    if (classify(g.iso) != IsometryClass::hyperbolic)
        throw std::domain_error("axis_of: element is not hyperbolic");
    Geodesic raw = axis(g.iso);
    double t0 = raw.foot_param(HPoint{});
    Geodesic anchored{raw.point_at(t0), raw.tangent_at(t0)};
    return AxisLine{anchored, g, translation_length(g.iso)};
}

inline AxisLine axis_of(const ConjClass& c) { return axis_of(group_element(c.rep)); }

enum class PieceKind { cone, wall };

struct LoosePieceReport {
    PieceKind kind = PieceKind::cone;
    double J = 0.0;
    double t0 = 0.0, t1 = 0.0;     // maximal segment on the first axis
    double companion_t0 = 0.0, companion_t1 = 0.0;  // feet on the second object
    double diameter = 0.0;          // t1 - t0
    double min_dist = 0.0;          // distance between the two lines
    bool crossing = false;          // the two lines intersect
    bool boundary_ambiguous = false;  // |min_dist - J| within tolerance
    bool orientation_valid = false; // set for cone self-pieces with diameter > 2J
    bool orientation_preserved = false;
    double overlap_len = 0.0;       // h-overlap for cone self-pieces
    Word translate;                 // the h used, when found by a census
};

namespace detail {

struct Interval {
    double lo, hi, min_dist;
    bool crossing;
};

// Solve |alpha cosh t + beta sinh t| <= sinh J. The discriminant
// q = alpha^2 - beta^2 is parameterization-invariant: sinh^2 of the line
// distance when positive, minus the squared crossing speed when negative,
// and exactly zero only for coincident or asymptotic lines.
inline std::optional<Interval> loose_interval(double alpha, double beta, double J) {
    double q = alpha * alpha - beta * beta;
    if (std::abs(q) <= 1e-9) {
        if (std::max(std::abs(alpha), std::abs(beta)) <= 1e-7)
            throw excluded_case_error("loose piece: the two lines coincide");
        throw degenerate_input_error("loose piece: lines share an ideal endpoint");
    }
    double sJ = std::sinh(J);
    if (q > 0.0) {
        double root = std::sqrt(q);
        if (root > sJ) return std::nullopt;
        double tc = std::atanh(-beta / alpha);
        double h = std::acosh(std::max(sJ / root, 1.0));
        return Interval{tc - h, tc + h, std::asinh(root), false};
    }
    double root = std::sqrt(-q);
    double tc = std::atanh(-alpha / beta);
    double h = std::asinh(sJ / root);
    return Interval{tc - h, tc + h, 0.0, true};
}

} // namespace detail

// Maximal J-loose cone-piece between two distinct axes, or nullopt when the
// lines stay farther than J apart. Identical lines raise excluded_case_error;
// lines sharing an ideal endpoint raise degenerate_input_error.
inline std::optional<LoosePieceReport> cone_piece(const AxisLine& gamma, const AxisLine& gamma2,
                                                  double J,
                                                  const GeometryConfig& cfg = geometry_defaults()) {
    SpacelikeVector e2 = gamma2.line.polar();
    double alpha = mdot(gamma.line.base.v, e2.v);
    double beta = mdot(gamma.line.dir.v, e2.v);
    auto iv = detail::loose_interval(alpha, beta, J);
    LoosePieceReport rep;
    rep.kind = PieceKind::cone;
    rep.J = J;
    if (!iv) {
        // report boundary ambiguity for near-miss emptiness
        double q = alpha * alpha - beta * beta;
        if (q > 0 && std::abs(std::asinh(std::sqrt(q)) - J) < cfg.tol) {
            rep.boundary_ambiguous = true;
        }
        return std::nullopt;
    }
    rep.t0 = iv->lo;
    rep.t1 = iv->hi;
    rep.diameter = iv->hi - iv->lo;
    rep.min_dist = iv->min_dist;
    rep.crossing = iv->crossing;
    rep.boundary_ambiguous = !iv->crossing && std::abs(iv->min_dist - J) < cfg.tol;
    rep.companion_t0 = gamma2.line.foot_param(gamma.line.point_at(iv->lo));
    rep.companion_t1 = gamma2.line.foot_param(gamma.line.point_at(iv->hi));
    return rep;
}

// Maximal kappa-loose wall-piece of an axis against a wall line. An axis
// lying on the wall raises degenerate_input_error (its loose piece would be
// the whole line).
inline std::optional<LoosePieceReport> wall_piece(const AxisLine& gamma, const Wall& wall,
                                                  double kappa,
                                                  const GeometryConfig& cfg = geometry_defaults()) {
    double alpha = mdot(gamma.line.base.v, wall.line.v);
    double beta = mdot(gamma.line.dir.v, wall.line.v);
    if (std::abs(alpha) < cfg.tol && std::abs(beta) < cfg.tol)
        throw degenerate_input_error("wall_piece: axis lies on the wall line");
    auto iv = detail::loose_interval(alpha, beta, kappa);
    if (!iv) return std::nullopt;
    LoosePieceReport rep;
    rep.kind = PieceKind::wall;
    rep.J = kappa;
    rep.t0 = iv->lo;
    rep.t1 = iv->hi;
    rep.diameter = iv->hi - iv->lo;
    rep.min_dist = iv->min_dist;
    rep.crossing = iv->crossing;
    rep.boundary_ambiguous = !iv->crossing && std::abs(iv->min_dist - kappa) < cfg.tol;
    // parameterize the wall line through the foot of the basepoint and take
    // the feet of the segment endpoints
    HPoint foot = project_to_line(HPoint{}, wall.line);
    Geodesic wparam{foot, normalize_spacelike(applyJ(cross(foot.v, wall.line.v)))};
    rep.companion_t0 = wparam.foot_param(gamma.line.point_at(iv->lo));
    rep.companion_t1 = wparam.foot_param(gamma.line.point_at(iv->hi));
    return rep;
}

// Orientation and overlap data for a cone self-piece between gamma and
// h*gamma, defined when the piece diameter exceeds 2J.
inline void overlap_orientation(const AxisLine& gamma, const GroupElement& h,
                                LoosePieceReport& piece) {
    if (piece.diameter <= 2.0 * piece.J)
        throw std::invalid_argument("overlap_orientation: piece diameter must exceed 2J");
    Geodesic image{h.iso.apply(gamma.line.base), h.iso.apply(gamma.line.dir)};
    double tp = image.foot_param(gamma.line.point_at(piece.t0));
    double tq = image.foot_param(gamma.line.point_at(piece.t1));
    piece.orientation_valid = true;
    piece.orientation_preserved = tp < tq;
    // h^-1 s' in gamma's own parameterization is [tp, tq] sorted
    double lo = std::min(tp, tq), hi = std::max(tp, tq);
    piece.overlap_len = std::max(0.0, std::min(hi, piece.t1) - std::max(lo, piece.t0));
    piece.companion_t0 = tp;
    piece.companion_t1 = tq;
}

// --- translate census ----------------------------------------------------------

namespace detail {

// Chambers crossed by the axis over [t0, t1], found by sampling at half the
// in-radius (robust also for axes running along tiling walls, where exact
// tracing is degenerate). The tube flood around them restores completeness.
inline std::vector<Word> sampled_axis_chambers(const Geodesic& line, double t0, double t1) {
    const Pentagon& P = pentagon();
    std::vector<Word> out;
    std::set<std::string> seen;
    double step = P.b * 0.5;
    for (double t = t0; t <= t1 + 1e-9; t += step) {
        Word w = locate_chamber(line.point_at(t));
        if (seen.insert(word_string(w)).second) out.push_back(std::move(w));
    }
    return out;
}

inline double dist_to_segment(const HPoint& x, const Geodesic& line, double t0, double t1) {
    double t = std::clamp(line.foot_param(x), t0, t1);
    return dist(x, line.point_at(t));
}

struct TubeChamber {
    Word word;
    HIsometry iso;
};

// All chambers whose centers lie within reach of the padded window segment.
// Any orbit line approaching the segment within J crosses one of them.
inline std::vector<TubeChamber> tube_chambers(const AxisLine& axis, double t0, double t1,
                                              double reach) {
    const Pentagon& P = pentagon();
    double r_circ = std::acosh(std::cosh(P.a) * std::cosh(P.b));  // circumradius
    double limit = reach + r_circ + 1e-9;
    std::vector<TubeChamber> out;
    std::unordered_set<std::string> seen;
    std::vector<Word> queue = sampled_axis_chambers(axis.line, t0, t1);
    for (auto& w : queue) seen.insert(word_string(w));
    for (size_t head = 0; head < queue.size(); ++head) {
        Word w = queue[head];
        HIsometry M = word_isometry(w);
        HPoint center = M.apply(HPoint{});
        if (dist_to_segment(center, axis.line, t0, t1) > limit) continue;
        out.push_back({w, M});
        for (Letter s = 0; s < 5; ++s) {
            Word nb = w;
            canonical_append(nb, s);
            std::string key = word_string(nb);
            if (seen.insert(std::move(key)).second) queue.push_back(std::move(nb));
        }
    }
    return out;
}

// Lifts of the closed geodesic of g2 through the base chamber: one per
// chamber crossed over a single period, carried as the conjugated
// parameterization v^-1 * axis(g2) together with v^-1.
struct LocalLine {
    Geodesic line;        // v^-1 * axis line, transported parameterization
    SpacelikeVector polar;  // v^-1 * polar; transported as a unit vector, since
                            // recomputing it from large entries loses the form
    Word inv_word;        // canonical word of v^-1
    HIsometry inv_iso;
};

inline std::vector<LocalLine> local_lines(const AxisLine& axis2) {
    std::vector<LocalLine> out;
    SpacelikeVector pol = axis2.line.polar();
    auto chambers = sampled_axis_chambers(axis2.line, 0.0, axis2.period);
    for (auto& v : chambers) {
        HIsometry inv = word_isometry(v).inverse();
        LocalLine ll;
        ll.line = Geodesic{inv.apply(axis2.line.base), inv.apply(axis2.line.dir)};
        ll.polar = inv.apply(pol);
        ll.inv_word = normal_form_word(inverse_word(v));
        ll.inv_iso = inv;
        out.push_back(std::move(ll));
    }
    return out;
}

inline bool same_line(const SpacelikeVector& e1, const SpacelikeVector& e2, double tol = 1e-9) {
    double dot = mdot(e1.v, e2.v);
    return std::abs(std::abs(dot) - 1.0) < tol;
}

} // namespace detail

struct CensusOptions {
    int window_radius = 6;  // padding control for the translate tube
    bool collect_all = false;  // keep every piece, not just the maximum
};

struct PieceCensus {
    std::optional<LoosePieceReport> max_piece;
    std::vector<LoosePieceReport> pieces;  // when collect_all
    uint64_t candidates = 0;
    uint64_t translates = 0;
    // reversing-overlap summary over self-pieces with diameter > 2J
    double max_reversing_overlap = 0.0;
    uint64_t reversing_pieces = 0;
};

// Enumerates the W-translates h whose image of axis(g2) approaches the axis
// of g within J along one period window, and reports the maximal loose
// piece. Self-censuses (same class) exclude the setwise stabilizer of the
// axis line and carry orientation/overlap data.
inline PieceCensus max_piece_census(const ConjClass& g, const ConjClass& g2, double J,
                                    const CensusOptions& opt = CensusOptions{}) {
    const GeometryConfig& cfg = geometry_defaults();
    AxisLine A = axis_of(g);
    AxisLine B = axis_of(g2);
    bool self = g.rep == g2.rep;
    double T = A.period;
    double pad = J + 2.0 * cfg.delta;
    double w0 = -T / 2.0 - pad, w1 = T / 2.0 + pad;
    double reach = J + 0.25 * opt.window_radius;

    auto tube = detail::tube_chambers(A, w0, w1, reach);
    auto lines = detail::local_lines(B);
    SpacelikeVector polA = A.line.polar();

    PieceCensus census;
    census.translates = tube.size() * lines.size();
    std::set<std::string> seen_h;
    std::set<std::pair<long long, long long>> seen_line_keys;

    for (const auto& w : tube) {
        for (const auto& ll : lines) {
            SpacelikeVector e = w.iso.apply(ll.polar);
            if (detail::same_line(e, polA)) continue;  // stabilizer / coincident lines excluded
            double alpha = mdot(A.line.base.v, e.v);
            double beta = mdot(A.line.dir.v, e.v);
            ++census.candidates;
            std::optional<detail::Interval> iv;
            try {
                iv = detail::loose_interval(alpha, beta, J);
            } catch (const std::invalid_argument&) {
                continue;  // coincident or asymptotic line: excluded from the census
            }
            if (!iv) continue;
            double mid = 0.5 * (iv->lo + iv->hi);
            if (mid < -T / 2.0 - 1e-9 || mid >= T / 2.0 - 1e-9) continue;  // fold by <g>
            // deduplicate translates by the group element h = w * v^-1
            Word h_word = w.word;
            for (Letter s : ll.inv_word) canonical_append(h_word, s);
            if (self && h_word.empty()) continue;
            if (!seen_h.insert(word_string(h_word)).second) continue;
            HIsometry h_iso = compose(w.iso, ll.inv_iso);
            Geodesic image{h_iso.apply(B.line.base), h_iso.apply(B.line.dir)};

            LoosePieceReport rep;
            rep.kind = PieceKind::cone;
            rep.J = J;
            rep.t0 = iv->lo;
            rep.t1 = iv->hi;
            rep.diameter = iv->hi - iv->lo;
            rep.min_dist = iv->min_dist;
            rep.crossing = iv->crossing;
            rep.boundary_ambiguous = !iv->crossing && std::abs(iv->min_dist - J) < cfg.tol;
            rep.companion_t0 = image.foot_param(A.line.point_at(iv->lo));
            rep.companion_t1 = image.foot_param(A.line.point_at(iv->hi));
            rep.translate = h_word;
            if (self && rep.diameter > 2.0 * J) {
                GroupElement h{h_word, h_iso};
                overlap_orientation(A, h, rep);
                if (!rep.orientation_preserved) {
                    ++census.reversing_pieces;
                    census.max_reversing_overlap =
                        std::max(census.max_reversing_overlap, rep.overlap_len);
                }
            }

            bool better = false;
            long long dia_key = llround(rep.diameter * 1e9);
            if (!census.max_piece) {
                better = true;
            } else {
                long long best_key = llround(census.max_piece->diameter * 1e9);
                if (dia_key > best_key) better = true;
                else if (dia_key == best_key && rep.translate < census.max_piece->translate)
                    better = true;
            }
            if (better) census.max_piece = rep;
            if (opt.collect_all) {
                // dedup by line for the distributional census
                auto key = std::make_pair(llround(e.v[0] / e.v[2] * 1e7),
                                          llround(e.v[1] / e.v[2] * 1e7));
                if (seen_line_keys.insert(key).second) census.pieces.push_back(rep);
            }
        }
    }
    return census;
}

// Walls within reach of one period window of the axis, for the wall-piece
// half of the C'(alpha) verdict.
struct WallCensusResult {
    std::optional<LoosePieceReport> max_disjoint;   // walls not crossing the axis
    std::optional<LoosePieceReport> max_crossing;   // walls crossing it (carrier check)
    bool axis_on_wall = false;  // the axis coincides with a tiling wall line
    uint64_t walls = 0;
};

inline WallCensusResult wall_piece_census(const ConjClass& g, double kappa,
                                          const CensusOptions& opt = CensusOptions{}) {
    const GeometryConfig& cfg = geometry_defaults();
    const Pentagon& P = pentagon();
    AxisLine A = axis_of(g);
    double T = A.period;
    double pad = kappa + 2.0 * cfg.delta;
    double w0 = -T / 2.0 - pad, w1 = T / 2.0 + pad;
    double reach = kappa + 0.25 * opt.window_radius;
    auto tube = detail::tube_chambers(A, w0, w1, reach);

    WallCensusResult out;
    std::set<std::pair<long long, long long>> seen;
    for (const auto& w : tube) {
        for (int i = 0; i < 5; ++i) {
            SpacelikeVector e = w.iso.apply(P.side[i]);
            Vec3 canon = e.v[2] < 0.0 ? scale(e.v, -1.0) : e.v;
            auto key = std::make_pair(llround(canon[0] * 1e7), llround(canon[1] * 1e7));
            if (!seen.insert(key).second) continue;
            ++out.walls;
            double alpha = mdot(A.line.base.v, e.v);
            double beta = mdot(A.line.dir.v, e.v);
            if (std::abs(alpha) < cfg.tol && std::abs(beta) < cfg.tol) {
                out.axis_on_wall = true;
                continue;
            }
            std::optional<detail::Interval> iv;
            try {
                iv = detail::loose_interval(alpha, beta, kappa);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (!iv) continue;
            double mid = 0.5 * (iv->lo + iv->hi);
            if (mid < -T / 2.0 - 1e-9 || mid >= T / 2.0 - 1e-9) continue;
            LoosePieceReport rep;
            rep.kind = PieceKind::wall;
            rep.J = kappa;
            rep.t0 = iv->lo;
            rep.t1 = iv->hi;
            rep.diameter = iv->hi - iv->lo;
            rep.min_dist = iv->min_dist;
            rep.crossing = iv->crossing;
            rep.boundary_ambiguous = !iv->crossing && std::abs(iv->min_dist - kappa) < cfg.tol;
            auto& slot = iv->crossing ? out.max_crossing : out.max_disjoint;
            if (!slot || rep.diameter > slot->diameter) slot = rep;
        }
    }
    return out;
}

// --- combinatorial cross-check ---------------------------------------------------

// Word tracing the combinatorial axis: the class representative for stable
// classes, its squared reduction for glides (whose representative path is
// not a geodesic).
inline Word combinatorial_axis_word(const ConjClass& c) {
    if (c.len_cube == c.len_word) return c.rep;
    Word sq;
    sq.reserve(2 * c.rep.size());
    sq.insert(sq.end(), c.rep.begin(), c.rep.end());
    sq.insert(sq.end(), c.rep.begin(), c.rep.end());
    return conj_min_word(sq);
}

inline std::vector<Word> axis_chamber_path(const ConjClass& c, int periods) {
    Word axis_word = combinatorial_axis_word(c);
    std::vector<Word> path{Word{}};
    Word cur;
    for (int rep = 0; rep < periods; ++rep) {
        for (Letter s : axis_word) {
            size_t before = cur.size();
            canonical_append(cur, s);
            if (cur.size() != before + 1)
                throw invariant_violation("axis word is not geodesic");
            path.push_back(cur);
        }
    }
    return path;
}

// Maximal combinatorial J-loose piece diameter (in edge units) between the
// axis path of g and the h-translate of the axis path of g2, within a
// window of the given number of periods.
inline int cubical_piece_window(const ConjClass& g, const ConjClass& g2, const Word& h,
                                int J_cubical, int periods = 3) {
    auto pa = axis_chamber_path(g, periods);
    auto pb_base = axis_chamber_path(g2, periods);
    std::vector<Word> pb;
    pb.reserve(pb_base.size());
    for (auto& u : pb_base) {
        Word t = h;
        for (Letter s : u) canonical_append(t, s);
        pb.push_back(std::move(t));
    }
    int first = -1, last = -1;
    for (size_t i = 0; i < pa.size(); ++i) {
        int best = INT32_MAX;
        for (auto& u : pb) best = std::min(best, cube_dist_words(pa[i], u));
        if (best <= J_cubical) {
            if (first < 0) first = static_cast<int>(i);
            last = static_cast<int>(i);
        }
    }
    return first < 0 ? 0 : last - first;
}

} // namespace pentile
