#pragma once

// Exhaustive enumeration machinery. Canonical words form a prefix-closed
// regular language, so the group ball B(n) is exactly the depth-n tree under
// canonical_child; the DFS visits every element once while carrying the
// isometry along the path.

#include <cstdint>
#include <functional>
#include <vector>

#include "pentile/coxeter.hpp"
#include "pentile/errors.hpp"
#include "pentile/parallel.hpp"

namespace pentile {

// Depth-first walk of all canonical words with prefix `root` and length
// <= max_len. visit is called once per element (including the root unless it
// is empty) with (word, isometry); returning false prunes the subtree.
template <typename Visit>
void enumerate_subtree(const Word& root, int max_len, Visit&& visit) {
    const Pentagon& P = pentagon();
    Word w = root;
    std::vector<HIsometry> isos{word_isometry(root)};
    if (!root.empty()) {
        if (!visit(static_cast<const Word&>(w), isos.back())) return;
        if (static_cast<int>(w.size()) >= max_len) return;
    }
    std::vector<Letter> pending{0};
    while (!pending.empty()) {
        Letter s = pending.back();
        if (s > 4) {
            pending.pop_back();
            if (w.size() > root.size()) {
                w.pop_back();
                isos.pop_back();
            }
            continue;
        }
        ++pending.back();
        if (!canonical_child(w, s)) continue;
        w.push_back(s);
        isos.push_back(compose(isos.back(), P.refl[s]));
        bool descend = visit(static_cast<const Word&>(w), isos.back());
        if (descend && static_cast<int>(w.size()) < max_len) {
            pending.push_back(0);
        } else {
            w.pop_back();
            isos.pop_back();
        }
    }
}

template <typename Visit>
void enumerate_elements(int max_len, Visit&& visit) {
    if (max_len <= 0) return;
    enumerate_subtree(Word{}, max_len, std::forward<Visit>(visit));
}

// Subtree roots for parallel scans: all canonical words of length exactly
// `depth` plus the shorter words that head no deeper subtree.
inline std::vector<Word> subtree_roots(int depth, int max_len) {
    std::vector<Word> roots;
    if (max_len <= 0) return roots;
    if (depth > max_len) depth = max_len;
    enumerate_elements(depth, [&](const Word& w, const HIsometry&) {
        if (static_cast<int>(w.size()) == depth) {
            roots.push_back(w);
            return false;
        }
        return true;
    });
    // Words shorter than `depth` are covered here as visit-only roots.
    enumerate_elements(depth - 1, [&](const Word& w, const HIsometry&) {
        roots.push_back(w);
        return true;
    });
    return roots;
}

// Exact sphere sizes |S(n)| for n = 0..max_len.
inline std::vector<uint64_t> sphere_sizes(int max_len) {
    std::vector<uint64_t> s(max_len + 1, 0);
    s[0] = 1;
    enumerate_elements(max_len, [&](const Word& w, const HIsometry&) {
        ++s[w.size()];
        return true;
    });
    return s;
}

inline uint64_t ball_size(int radius) {
    auto s = sphere_sizes(radius);
    uint64_t total = 0;
    for (uint64_t x : s) total += x;
    return total;
}

struct CensusBudget {
    int max_cube_len = 16;  // hard cap on class enumeration depth
};

struct ClassCensus {
    int cube_cap = 0;                 // classes enumerated up to this minimal length
    std::vector<ConjClass> classes;   // sorted by (len_cube, rep)
    uint64_t elliptic_count = 0;      // nontrivial elliptic classes, reported not listed

    // hyperbolic classes sorted by len_hyp; indices into `classes`
    std::vector<uint32_t> by_len_hyp;
};

namespace detail {

inline void fill_len_hyp_index(ClassCensus& census) {
    census.by_len_hyp.clear();
    for (uint32_t i = 0; i < census.classes.size(); ++i)
        if (census.classes[i].hyperbolic) census.by_len_hyp.push_back(i);
    std::sort(census.by_len_hyp.begin(), census.by_len_hyp.end(), [&](uint32_t a, uint32_t b) {
        return *census.classes[a].len_hyp < *census.classes[b].len_hyp;
    });
}

// Root search: class C is non-primitive iff some census class r and n >= 2
// satisfy n * len_hyp(r) = len_hyp(C) (translation lengths are additive
// under powers) and rep(r)^n is conjugate into C.
inline bool primitive_by_root_search(const ClassCensus& census, const std::vector<double>& hyp_lens,
                                     const ConjClass& c) {
    constexpr double kLenTol = 1e-6;
    double T = *c.len_hyp;
    // candidate roots have len_hyp = T/n above the shortest translation
    // length in the group, which exceeds 2c > 1.5
    int n_max = static_cast<int>(T / 1.5) + 1;
    for (int n = 2; n <= n_max; ++n) {
        double target = T / n;
        auto lo = std::lower_bound(hyp_lens.begin(), hyp_lens.end(), target - kLenTol);
        auto hi = std::upper_bound(hyp_lens.begin(), hyp_lens.end(), target + kLenTol);
        for (auto it = lo; it != hi; ++it) {
            const ConjClass& r = census.classes[census.by_len_hyp[it - hyp_lens.begin()]];
            if (r.len_cube * n != c.len_cube) continue;  // stable lengths add under powers
            Word power;
            power.reserve(r.rep.size() * n);
            for (int k = 0; k < n; ++k) power.insert(power.end(), r.rep.begin(), r.rep.end());
            if (conj_min_word(power) == c.rep) return false;
        }
    }
    return true;
}

inline std::vector<double> hyp_len_list(const ClassCensus& census) {
    std::vector<double> hyp_lens;
    hyp_lens.reserve(census.by_len_hyp.size());
    for (uint32_t i : census.by_len_hyp) hyp_lens.push_back(*census.classes[i].len_hyp);
    return hyp_lens;
}

inline void fill_primitivity(ClassCensus& census) {
    auto hyp_lens = hyp_len_list(census);
    for (auto& c : census.classes)
        if (c.hyperbolic) c.primitive = primitive_by_root_search(census, hyp_lens, c);
}

} // namespace detail

// True iff the class is not a proper power. The census must contain every
// candidate root, i.e. cover stable lengths up to the class's own.
inline bool is_primitive(const ConjClass& c, const ClassCensus& census) {
    if (!c.hyperbolic) throw std::domain_error("is_primitive: elliptic class");
    if (c.len_cube > census.cube_cap)
        throw std::invalid_argument("is_primitive: class outside the census cap");
    auto hyp_lens = detail::hyp_len_list(census);
    return detail::primitive_by_root_search(census, hyp_lens, c);
}

namespace detail {

// Census of every conjugacy class whose minimal word length is <= word_cap.
// An element is recorded only when it is itself the ShortLex-minimal member
// of its conjugacy closure, so each class is found exactly once, at its
// minimal representative.
inline ClassCensus census_by_word_cap(int word_cap, int elliptic_word_cap, int workers) {
    ClassCensus census;
    if (word_cap <= 0) return census;

    std::vector<Word> roots = subtree_roots(std::min(2, word_cap), word_cap);
    std::vector<std::vector<ConjClass>> found(roots.size());
    std::vector<uint64_t> elliptic(roots.size(), 0);

    parallel_chunks(roots.size(), workers, roots.size(), [&](size_t c, size_t b, size_t) {
        const Word& root = roots[b];
        int limit = static_cast<int>(root.size()) < std::min(2, word_cap)
                        ? static_cast<int>(root.size())
                        : word_cap;
        enumerate_subtree(root, limit, [&](const Word& w, const HIsometry& M) {
            if (conj_minimal(w)) {
                ConjClass cls;
                cls.rep = w;
                cls.len_word = static_cast<int>(w.size());
                if (classify(M) == IsometryClass::hyperbolic) {
                    cls.hyperbolic = true;
                    cls.len_hyp = translation_length(M);
                    cls.len_cube = stable_cube_length(w);
                    // At most one generator can occur once while commuting
                    // with everything present (two such force a two-letter
                    // elliptic word), so the square loses at most one
                    // junction pair: the defect is provably <= 1.
                    if (cls.len_word - cls.len_cube > 1)
                        throw invariant_violation("stable-length defect above 1");
                    found[c].push_back(std::move(cls));
                } else {
                    cls.len_cube = cls.len_word;
                    if (cls.len_word <= elliptic_word_cap) ++elliptic[c];
                }
            }
            return true;
        });
    });

    for (uint64_t e : elliptic) census.elliptic_count += e;
    for (auto& part : found)
        census.classes.insert(census.classes.end(), part.begin(), part.end());
    std::sort(census.classes.begin(), census.classes.end(),
              [](const ConjClass& a, const ConjClass& b) {
                  if (a.len_cube != b.len_cube) return a.len_cube < b.len_cube;
                  if (a.len_word != b.len_word) return a.len_word < b.len_word;
                  return a.rep < b.rep;
              });
    return census;
}

} // namespace detail

// Complete, duplicate-free census of conjugacy classes with stable cubical
// translation length <= cube_cap. Word lengths are enumerated to
// cube_cap + 1; the glide defect bound makes this exhaustive.
inline ClassCensus class_census_cube(int cube_cap, int workers = 1,
                                     const CensusBudget& budget = CensusBudget{}) {
    if (cube_cap > budget.max_cube_len)
        throw resource_error("class census cap " + std::to_string(cube_cap) +
                             " exceeds budget " + std::to_string(budget.max_cube_len));
    ClassCensus census = detail::census_by_word_cap(std::max(0, cube_cap + 1), cube_cap, workers);
    census.cube_cap = cube_cap;
    std::erase_if(census.classes,
                  [&](const ConjClass& c) { return c.len_cube > cube_cap; });
    detail::fill_len_hyp_index(census);
    detail::fill_primitivity(census);
    return census;
}

// Census of hyperbolic classes with translation length len_hyp <= hyp_cap.
// len_hyp >= c * len_cube >= c * (len_word - 1) bounds the word lengths to
// enumerate.
inline ClassCensus class_census_hyp(double hyp_cap, int workers = 1,
                                    const CensusBudget& budget = CensusBudget{}) {
    const Pentagon& P = pentagon();
    int cube_cap = static_cast<int>(std::floor(hyp_cap / P.c + 1e-12));
    int word_cap = cube_cap + 1;
    if (cube_cap > budget.max_cube_len)
        throw resource_error("hyp census cap exceeds the cube-length budget");
    ClassCensus full = detail::census_by_word_cap(word_cap, cube_cap, workers);
    ClassCensus out;
    out.cube_cap = cube_cap;
    out.elliptic_count = full.elliptic_count;
    for (auto& c : full.classes)
        if (c.hyperbolic && *c.len_hyp <= hyp_cap + 1e-12) out.classes.push_back(c);
    detail::fill_len_hyp_index(out);
    detail::fill_primitivity(out);
    return out;
}

} // namespace pentile
