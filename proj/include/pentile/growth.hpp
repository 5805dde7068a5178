#pragma once

// Growth tables and exponent fits for the tiling group and the wall
// stabilizer Stab(wall of s0) = <s0> x <s1, s4>, in both the cubical and the
// hyperbolic metric. Hyperbolic-length tables are bucketed at 0.25 since
// lengths are real-valued.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pentile/census.hpp"
#include "pentile/errors.hpp"

namespace pentile {

enum class GrowthMetric { cube, hyp };
enum class GrowthSubject { group, wall_stabilizer, conjugacy, primitive_conjugacy };

inline const char* to_string(GrowthMetric m) { return m == GrowthMetric::cube ? "cube" : "hyp"; }
inline const char* to_string(GrowthSubject s) {
    switch (s) {
        case GrowthSubject::group: return "group";
        case GrowthSubject::wall_stabilizer: return "wall-stabilizer";
        case GrowthSubject::conjugacy: return "conjugacy";
        default: return "primitive-conjugacy";
    }
}

inline constexpr double kHypBucket = 0.25;

struct GrowthTable {
    GrowthSubject subject;
    GrowthMetric metric;
    // rows: (threshold n, cumulative count of elements/classes with length <= n);
    // cube thresholds are integers, hyp thresholds multiples of 0.25
    std::vector<std::pair<double, uint64_t>> rows;
};

struct GrowthBudget {
    int cube_cap = 14;       // group enumeration depth
    double hyp_cap = 12.0;   // hyperbolic length cap
    int conj_cube_cap = 14;  // class census cap (stable length)
    int wall_cap = 64;       // wall-stabilizer enumeration (cheap: linear growth)
};

namespace detail {

// Nontrivial elements of Stab(wall of s0) = <s0> x <s1,s4>, i.e. all
// s0^e * (alternating word in 1,4) of word length <= max_word_len.
template <typename Visit>
void enumerate_wall_stabilizer(int max_word_len, Visit&& visit) {
    if (max_word_len >= 1) visit(Word{Letter(0)});
    for (Letter start : {Letter(1), Letter(4)}) {
        Word alt;
        for (int len = 1; len <= max_word_len; ++len) {
            alt.push_back(len % 2 == 1 ? start : (start == 1 ? Letter(4) : Letter(1)));
            visit(alt);
            if (len + 1 <= max_word_len) {
                Word with0{Letter(0)};
                with0.insert(with0.end(), alt.begin(), alt.end());
                visit(with0);
            }
        }
    }
}

inline std::vector<std::pair<double, uint64_t>> cumulative_rows(std::vector<double> lengths,
                                                                double cap, double bucket) {
    std::sort(lengths.begin(), lengths.end());
    std::vector<std::pair<double, uint64_t>> rows;
    size_t idx = 0;
    int steps = static_cast<int>(std::round(cap / bucket));
    for (int k = 0; k <= steps; ++k) {
        double threshold = k * bucket;
        while (idx < lengths.size() && lengths[idx] <= threshold + 1e-12) ++idx;
        rows.emplace_back(threshold, static_cast<uint64_t>(idx));
    }
    return rows;
}

} // namespace detail

// Exact counts from exhaustive enumeration. Cube-metric group counts come
// from the canonical-word DFS; hyp-metric group counts enumerate to the
// depth where c*n - 4c exceeds the cap, which bounds every displacement.
inline GrowthTable growth(GrowthSubject subject, GrowthMetric metric, double n_max,
                          int workers = 1, const GrowthBudget& budget = GrowthBudget{}) {
    const Pentagon& P = pentagon();
    GrowthTable table{subject, metric, {}};

    switch (subject) {
        case GrowthSubject::group: {
            if (metric == GrowthMetric::cube) {
                int cap = static_cast<int>(n_max);
                if (cap > budget.cube_cap)
                    throw resource_error("group/cube growth cap " + std::to_string(cap) +
                                         " exceeds budget " + std::to_string(budget.cube_cap));
                auto spheres = sphere_sizes(cap);
                uint64_t cum = 0;
                for (int n = 0; n <= cap; ++n) {
                    cum += spheres[n];
                    table.rows.emplace_back(double(n), cum);
                }
            } else {
                if (n_max > budget.hyp_cap)
                    throw resource_error("group/hyp growth cap exceeds budget");
                // d_H(o, g o) >= c*l(g) - 4c, so elements beyond this depth
                // cannot displace the basepoint by <= n_max
                int depth = static_cast<int>(std::floor(n_max / P.c + 4.0)) ;
                int steps = static_cast<int>(std::round(n_max / kHypBucket));
                std::vector<Word> roots = subtree_roots(std::min(3, depth), depth);
                std::vector<std::vector<uint64_t>> counts(roots.size(),
                                                          std::vector<uint64_t>(steps + 1, 0));
                parallel_chunks(roots.size(), workers, roots.size(), [&](size_t ci, size_t b, size_t) {
                    const Word& root = roots[b];
                    int limit = static_cast<int>(root.size()) < std::min(3, depth)
                                    ? static_cast<int>(root.size())
                                    : depth;
                    auto& mine = counts[ci];
                    enumerate_subtree(root, limit, [&](const Word&, const HIsometry& M) {
                        double z = M.m[8];  // cosh displacement of the base point
                        double d = acosh_clamped(std::max(z, 1.0));
                        if (d <= n_max + 1e-12) {
                            int k = static_cast<int>(std::ceil(d / kHypBucket - 1e-12));
                            if (k < 0) k = 0;
                            if (k <= steps) ++mine[k];
                        }
                        return true;
                    });
                });
                std::vector<uint64_t> total(steps + 1, 0);
                for (auto& part : counts)
                    for (int k = 0; k <= steps; ++k) total[k] += part[k];
                uint64_t cum = 1;  // identity
                for (int k = 0; k <= steps; ++k) {
                    cum += total[k];
                    table.rows.emplace_back(k * kHypBucket, cum);
                }
            }
            break;
        }
        case GrowthSubject::wall_stabilizer: {
            std::vector<double> lengths;
            if (metric == GrowthMetric::cube) {
                int cap = static_cast<int>(n_max);
                detail::enumerate_wall_stabilizer(std::min(cap, budget.wall_cap), [&](const Word& w) {
                    if (!w.empty()) lengths.push_back(double(w.size()));
                });
                auto rows = detail::cumulative_rows(std::move(lengths), double(cap), 1.0);
                for (auto& [n, c] : rows) table.rows.emplace_back(n, c + 1);  // + identity
            } else {
                // enumerate far enough that every displacement <= n_max occurs
                int cap = std::min(budget.wall_cap, static_cast<int>(n_max / (2.0 * P.a) + 4.0));
                detail::enumerate_wall_stabilizer(cap, [&](const Word& w) {
                    if (w.empty()) return;
                    HIsometry M = word_isometry(w);
                    double d = acosh_clamped(std::max(M.m[8], 1.0));
                    if (d <= n_max + 1e-12) lengths.push_back(d);
                });
                auto rows = detail::cumulative_rows(std::move(lengths), n_max, kHypBucket);
                for (auto& [n, c] : rows) table.rows.emplace_back(n, c + 1);
            }
            break;
        }
        case GrowthSubject::conjugacy:
        case GrowthSubject::primitive_conjugacy: {
            bool prim_only = subject == GrowthSubject::primitive_conjugacy;
            std::vector<double> lengths;
            if (metric == GrowthMetric::cube) {
                int cap = static_cast<int>(n_max);
                if (cap > budget.conj_cube_cap)
                    throw resource_error("conjugacy/cube cap exceeds budget");
                ClassCensus census = class_census_cube(cap, workers);
                for (const auto& c : census.classes)
                    if (!prim_only || c.primitive) lengths.push_back(double(c.len_cube));
                auto rows = detail::cumulative_rows(std::move(lengths), double(cap), 1.0);
                for (auto& r : rows) table.rows.push_back(r);
            } else {
                if (n_max > budget.hyp_cap)
                    throw resource_error("conjugacy/hyp cap exceeds budget");
                ClassCensus census = class_census_hyp(n_max, workers);
                for (const auto& c : census.classes)
                    if (!prim_only || c.primitive) lengths.push_back(*c.len_hyp);
                auto rows = detail::cumulative_rows(std::move(lengths), n_max, kHypBucket);
                for (auto& r : rows) table.rows.push_back(r);
            }
            break;
        }
    }
    return table;
}

struct ExponentFit {
    double b_hat = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    double residual = 0.0;  // rms of log-count residuals over the window
    double a_hat = 0.0;     // min f(n) e^{-b n} over the window
    double b_upper_hat = 0.0;  // max f(n) e^{-b n} over the window
};

// Least-squares slope of log count against n over the window; the sandwich
// constants bracket f(n) e^{-b_hat n}.
inline ExponentFit fit_exponent(const GrowthTable& t, double window_lo, double window_hi) {
    std::vector<std::pair<double, double>> pts;
    for (auto& [n, cnt] : t.rows)
        if (n >= window_lo - 1e-12 && n <= window_hi + 1e-12 && cnt > 0)
            pts.emplace_back(n, std::log(double(cnt)));
    if (pts.size() < 4) throw std::invalid_argument("fit_exponent: need >= 4 positive rows in window");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = double(pts.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    ExponentFit fit;
    fit.b_hat = slope;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    double rss = 0;
    fit.a_hat = 1e300;
    fit.b_upper_hat = 0.0;
    for (auto& [x, y] : pts) {
        double r = y - (slope * x + intercept);
        rss += r * r;
        double ratio = std::exp(y - slope * x);
        fit.a_hat = std::min(fit.a_hat, ratio);
        fit.b_upper_hat = std::max(fit.b_upper_hat, ratio);
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

// Fraction of non-primitive classes among all nontrivial hyperbolic classes
// of len_hyp <= n, per 0.25 bucket.
inline std::vector<std::pair<double, double>> nonprimitive_fraction(double n_max, int workers = 1,
                                                                    const GrowthBudget& budget
                                                                    = GrowthBudget{}) {
    if (n_max > budget.hyp_cap) throw resource_error("nonprimitive_fraction cap exceeds budget");
    ClassCensus census = class_census_hyp(n_max, workers);
    std::vector<std::pair<double, double>> out;
    int steps = static_cast<int>(std::round(n_max / kHypBucket));
    std::vector<double> all, nonprim;
    for (const auto& c : census.classes) {
        all.push_back(*c.len_hyp);
        if (!c.primitive) nonprim.push_back(*c.len_hyp);
    }
    std::sort(all.begin(), all.end());
    std::sort(nonprim.begin(), nonprim.end());
    size_t ia = 0, inp = 0;
    for (int k = 0; k <= steps; ++k) {
        double threshold = k * kHypBucket;
        while (ia < all.size() && all[ia] <= threshold + 1e-12) ++ia;
        while (inp < nonprim.size() && nonprim[inp] <= threshold + 1e-12) ++inp;
        double frac = ia == 0 ? 0.0 : double(inp) / double(ia);
        out.emplace_back(threshold, frac);
    }
    return out;
}

} // namespace pentile
