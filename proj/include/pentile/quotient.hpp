#pragma once

// Sampling harness for random presentations: uniform draws from a complete
// conjugacy-class census, per-sample C'(alpha) verdicts, and the density
// threshold experiment grid. Every randomized path derives its stream from
// (master seed, grid indices, trial index), so results are independent of
// scheduling and worker count.

#include <cmath>
#include <string>
#include <vector>

#include "pentile/growth.hpp"
#include "pentile/rng.hpp"
#include "pentile/smallcancel.hpp"

namespace pentile {

struct DensityParams {
    double ell = 10.0;
    double c = 0.015;          // density exponent: k = floor(e^{c * ell})
    GrowthMetric metric = GrowthMetric::hyp;
    double b_hat = 1.0;        // fitted ambient growth exponent
    double a_hat = 0.0;        // fitted wall-stabilizer exponent
    double lambda = pentagon().lambda;
    double alpha = 1.0 / 20.0;

    int k() const { return static_cast<int>(std::floor(std::exp(c * ell))); }

    // density thresholds for the two sampling metrics
    double c_star_1() const {
        return metric == GrowthMetric::cube ? (b_hat - a_hat) / 20.0
                                            : (b_hat - a_hat) / (20.0 * lambda);
    }
    double c_star_2() const {
        return metric == GrowthMetric::cube ? b_hat / 41.0 : b_hat / (40.0 * lambda + 1.0);
    }
};

struct QuotientBudget {
    int cube_cap = 14;
    double hyp_cap = 12.0;
};

// Complete, duplicate-free census of nontrivial hyperbolic conjugacy classes
// of length at most ell; elliptic classes are excluded with a count.
inline ClassCensus enumerate_classes(double ell, GrowthMetric metric, int workers = 1,
                                     const QuotientBudget& budget = QuotientBudget{}) {
    if (metric == GrowthMetric::cube) {
        int cap = static_cast<int>(ell);
        if (cap > budget.cube_cap) throw resource_error("class census cap exceeds cube budget");
        ClassCensus census = class_census_cube(cap, workers);
        return census;
    }
    if (ell > budget.hyp_cap) throw resource_error("class census cap exceeds hyp budget");
    return class_census_hyp(ell, workers);
}

enum class SamplerMode { census_uniform, random_word_nonuniform };

inline const char* to_string(SamplerMode m) {
    return m == SamplerMode::census_uniform ? "census-uniform" : "random-word-nonuniform";
}

struct SampleRun {
    uint64_t seed = 0;
    DensityParams params;
    SamplerMode sampler = SamplerMode::census_uniform;
    std::vector<ConjClass> classes;
    bool duplicates = false;  // a duplicate draw is a degenerate presentation
    Verdict verdict;
    double min_systole = 0.0;
    double primitive_fraction = 0.0;
};

// k classes uniform with replacement from the census; the verdict is the
// C'(alpha) check, with duplicate draws recorded as violated (coincident
// relator covers are excluded by the piece definition).
inline SampleRun sample(const ClassCensus& census, const DensityParams& params, uint64_t seed,
                        SamplerMode mode = SamplerMode::census_uniform,
                        const CensusOptions& census_opts = CensusOptions{}) {
    if (census.classes.empty()) throw std::invalid_argument("sample: empty census");
    SampleRun run;
    run.seed = seed;
    run.params = params;
    run.sampler = mode;
    const int k = params.k();
    Rng rng(seed, 0x5A17);
    uint64_t primitive = 0;
    for (int i = 0; i < k; ++i) {
        const ConjClass* pick = nullptr;
        if (mode == SamplerMode::census_uniform) {
            pick = &census.classes[rng.next_below(census.classes.size())];
        } else {
            // non-uniform: reduce a random word of comparable length; kept
            // only as a labeled alternative sampler
            for (;;) {
                Word w;
                int len = 2 + static_cast<int>(rng.next_below(
                                  std::max<uint64_t>(2, uint64_t(params.ell))));
                for (int j = 0; j < len; ++j)
                    w.push_back(static_cast<Letter>(rng.next_below(5)));
                ConjClass c = conj_min(w);
                if (!c.hyperbolic) continue;
                double len_val = params.metric == GrowthMetric::cube ? double(c.len_cube)
                                                                     : *c.len_hyp;
                if (len_val > params.ell + 1e-9 || c.len_cube == 0) continue;
                // keep the draw if it lies in the census; otherwise retry
                bool in_census = false;
                for (const auto& cc : census.classes)
                    if (cc.rep == c.rep) { in_census = true; break; }
                if (!in_census) continue;
                run.classes.push_back(c);
                break;
            }
            continue;
        }
        run.classes.push_back(*pick);
    }
    run.min_systole = 1e300;
    for (const auto& c : run.classes) {
        run.min_systole = std::min(run.min_systole, *c.len_hyp);
        if (c.primitive) ++primitive;
    }
    run.primitive_fraction = run.classes.empty() ? 0.0 : double(primitive) / run.classes.size();

    for (size_t i = 0; i < run.classes.size() && !run.duplicates; ++i)
        for (size_t j = i + 1; j < run.classes.size(); ++j)
            if (run.classes[i].rep == run.classes[j].rep) {
                run.duplicates = true;
                break;
            }
    if (run.duplicates) {
        run.verdict.state = VerdictState::violated;
        run.verdict.satisfied = false;
        run.verdict.alpha = params.alpha;
        run.verdict.note = "duplicate classes drawn";
        return run;
    }
    Presentation p = make_presentation(run.classes, params.alpha, census_opts);
    run.verdict = cprime_verdict(p);
    return run;
}

struct ExperimentRow {
    double ell = 0.0;
    double c = 0.0;
    int k = 0;
    int trials = 0;
    int satisfied = 0;
    int violated = 0;
    int unknown = 0;
    double primitive_fraction = 0.0;  // averaged over trials
    double systole_filter_fraction = 0.0;  // runs with min systole >= (1-q) ell
};

// For each (ell, c) grid point: the fraction of trials whose verdict is
// satisfied, with unknowns counted separately and never as successes.
inline std::vector<ExperimentRow> threshold_experiment(const std::vector<double>& ell_grid,
                                                       const std::vector<double>& c_grid,
                                                       int trials, uint64_t seed,
                                                       GrowthMetric metric = GrowthMetric::hyp,
                                                       double alpha = 1.0 / 20.0, int workers = 1,
                                                       const QuotientBudget& budget
                                                       = QuotientBudget{}) {
    std::vector<ExperimentRow> rows;
    if (trials < 0) throw std::invalid_argument("trials must be >= 0");
    for (size_t ei = 0; ei < ell_grid.size(); ++ei) {
        double ell = ell_grid[ei];
        ClassCensus census = enumerate_classes(ell, metric, workers, budget);
        for (size_t ci = 0; ci < c_grid.size(); ++ci) {
            DensityParams params;
            params.ell = ell;
            params.c = c_grid[ci];
            params.metric = metric;
            params.alpha = alpha;
            ExperimentRow row;
            row.ell = ell;
            row.c = params.c;
            row.k = params.k();
            row.trials = trials;
            if (trials == 0) {
                rows.push_back(row);
                continue;
            }
            std::vector<SampleRun> runs(trials);
            parallel_chunks(trials, workers, std::max(1, trials / 4), [&](size_t, size_t b, size_t e) {
                for (size_t t = b; t < e; ++t) {
                    uint64_t stream = Rng::mix(seed) ^ Rng::mix(ei * 1000003 + ci * 1009 + t);
                    runs[t] = sample(census, params, stream);
                }
            });
            double q = alpha / (alpha + 2.0);
            double prim = 0.0;
            int systole_ok = 0;
            for (const auto& run : runs) {
                switch (run.verdict.state) {
                    case VerdictState::satisfied: ++row.satisfied; break;
                    case VerdictState::violated: ++row.violated; break;
                    default: ++row.unknown; break;
                }
                prim += run.primitive_fraction;
                if (run.min_systole >= (1.0 - q) * ell) ++systole_ok;
            }
            row.primitive_fraction = prim / trials;
            row.systole_filter_fraction = double(systole_ok) / trials;
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace pentile
