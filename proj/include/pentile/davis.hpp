#pragma once

// The dual square complex of the pentagon tiling, presented as the Davis
// complex of W: chambers are group elements (pentagons w*P0), walls are
// conjugate reflections with their fixed lines, and the combinatorial metric
// is word length. Chambers are keyed by normal form; the geometry carried
// alongside is approximate and only used for cross-checking and rendering.

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pentile/census.hpp"
#include "pentile/coxeter.hpp"
#include "pentile/errors.hpp"

namespace pentile {

struct Chamber {
    GroupElement element;
    HPoint center;
};

struct Wall {
    GroupElement reflection;  // u s u^-1
    SpacelikeVector line;     // fixed line of the reflection
};

inline Chamber make_chamber(const Word& w) {
    GroupElement g = group_element(w);
    HPoint c = g.iso.apply(HPoint{});
    return Chamber{std::move(g), c};
}

// Combinatorial distance between chambers: d(g,h) = l(g^-1 h), the number of
// walls separating them.
inline int cube_dist_words(const Word& g, const Word& h) {
    Word u = inverse_word(g);
    for (Letter s : h) canonical_append(u, s);
    return static_cast<int>(u.size());
}

inline int cube_dist(const Chamber& g, const Chamber& h) {
    return cube_dist_words(g.element.word, h.element.word);
}

struct BallBudget {
    uint64_t max_chambers = 1'500'000;
    int signs_radius_cap = 8;  // wall sign vectors are built only this deep
};

class Ball {
public:
    int radius = 0;
    std::vector<Word> words;              // BFS order; index 0 is the identity
    std::vector<HPoint> centers;
    std::vector<std::array<int32_t, 5>> adj;  // adj[i][s] = index of nf(w_i s), or -1
    std::vector<int> depth;

    // Wall data (present iff has_signs())
    std::vector<Word> wall_words;         // canonical reflection words
    std::vector<SpacelikeVector> wall_lines;
    std::vector<uint64_t> sign_bits;      // per chamber, ceil(#walls/64) blocks
    size_t sign_blocks = 0;

    bool has_signs() const { return sign_blocks > 0; }
    size_t size() const { return words.size(); }

    std::optional<int> index_of(const Word& w) const {
        auto it = index_.find(pack_key(w));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    Chamber chamber(int i) const { return Chamber{group_element(words[i]), centers[i]}; }

    int dist(int i, int j) const {
        if (has_signs()) {
            const uint64_t* a = &sign_bits[i * sign_blocks];
            const uint64_t* b = &sign_bits[j * sign_blocks];
            int d = 0;
            for (size_t k = 0; k < sign_blocks; ++k) d += __builtin_popcountll(a[k] ^ b[k]);
            return d;
        }
        return cube_dist_words(words[i], words[j]);
    }

    // Unique chamber on geodesics between each pair: componentwise majority
    // of the wall-side sign vectors.
    int median(int i, int j, int k) const {
        if (!has_signs()) throw std::logic_error("median requires wall signs");
        std::vector<uint64_t> maj(sign_blocks);
        const uint64_t* a = &sign_bits[i * sign_blocks];
        const uint64_t* b = &sign_bits[j * sign_blocks];
        const uint64_t* c = &sign_bits[k * sign_blocks];
        for (size_t t = 0; t < sign_blocks; ++t)
            maj[t] = (a[t] & b[t]) | (b[t] & c[t]) | (a[t] & c[t]);
        auto it = sign_index_.find(hash_blocks(maj.data(), sign_blocks));
        if (it != sign_index_.end()) {
            for (int cand : it->second) {
                const uint64_t* s = &sign_bits[cand * sign_blocks];
                bool eq = true;
                for (size_t t = 0; t < sign_blocks && eq; ++t) eq = (s[t] == maj[t]);
                if (eq) return cand;
            }
        }
        throw std::out_of_range("median lies outside the precomputed ball");
    }

    static uint64_t pack_key(const Word& w) {
        if (w.size() <= kMaxPackedLen) return pack_word(w);
        throw std::invalid_argument("ball chamber word too long to key");
    }

    friend Ball bfs_ball(int, const BallBudget&);

private:
    std::unordered_map<uint64_t, int32_t> index_;
    std::unordered_map<uint64_t, std::vector<int32_t>> sign_index_;

    static uint64_t hash_blocks(const uint64_t* p, size_t n) {
        uint64_t h = 1469598103934665603ULL;
        for (size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
        return h;
    }
};

// Contains exactly the elements of length <= n, each once; BFS layer equals
// word length, which is asserted during the build.
inline Ball bfs_ball(int n, const BallBudget& budget = BallBudget{}) {
    if (n < 0) throw std::invalid_argument("ball radius must be >= 0");
    Ball ball;
    ball.radius = n;
    ball.words.push_back(Word{});
    ball.centers.push_back(HPoint{});
    ball.depth.push_back(0);
    std::vector<HIsometry> isos{HIsometry::identity()};
    ball.index_.emplace(Ball::pack_key(Word{}), 0);
    const Pentagon& P = pentagon();

    for (size_t head = 0; head < ball.words.size(); ++head) {
        if (ball.depth[head] == n) continue;
        Word w = ball.words[head];
        for (Letter s = 0; s < 5; ++s) {
            Word child = w;
            canonical_append(child, s);
            if (child.size() <= w.size()) continue;  // shorter: already seen
            uint64_t key = Ball::pack_key(child);
            if (ball.index_.count(key)) continue;
            if (ball.words.size() >= budget.max_chambers)
                throw resource_error("ball radius " + std::to_string(n) +
                                     " exceeds chamber budget");
            if (static_cast<int>(child.size()) != ball.depth[head] + 1)
                throw invariant_violation("BFS layer diverged from word length");
            ball.index_.emplace(key, static_cast<int32_t>(ball.words.size()));
            ball.words.push_back(child);
            HIsometry M = compose(isos[head], P.refl[s]);
            isos.push_back(M);
            ball.centers.push_back(M.apply(HPoint{}));
            ball.depth.push_back(ball.depth[head] + 1);
        }
    }

    ball.adj.assign(ball.size(), {-1, -1, -1, -1, -1});
    for (size_t i = 0; i < ball.size(); ++i) {
        for (Letter s = 0; s < 5; ++s) {
            Word nb = ball.words[i];
            canonical_append(nb, s);
            auto j = ball.index_.find(Ball::pack_key(nb));
            if (j != ball.index_.end()) ball.adj[i][s] = j->second;
        }
    }

    if (n <= budget.signs_radius_cap) {
        // Every wall separating two ball chambers is dual to an edge whose
        // deeper endpoint lies in the ball, so this wall list is complete for
        // in-ball distances.
        std::unordered_map<uint64_t, int32_t> wall_index;
        for (size_t i = 0; i < ball.size(); ++i) {
            for (Letter s = 0; s < 5; ++s) {
                int32_t j = ball.adj[i][s];
                if (j < 0 || ball.depth[j] != ball.depth[i] + 1) continue;
                Word refl = ball.words[i];
                refl.push_back(s);
                Word back = inverse_word(ball.words[i]);
                for (Letter t : back) refl.push_back(t);
                refl = normal_form_word(refl);
                uint64_t key = Ball::pack_key(refl);
                if (!wall_index.count(key)) {
                    wall_index.emplace(key, static_cast<int32_t>(ball.wall_words.size()));
                    ball.wall_words.push_back(refl);
                    ball.wall_lines.push_back(isos[i].apply(P.side[s]));
                }
            }
        }
        ball.sign_blocks = (ball.wall_words.size() + 63) / 64;
        ball.sign_bits.assign(ball.size() * ball.sign_blocks, 0);
        for (size_t i = 0; i < ball.size(); ++i) {
            uint64_t* row = &ball.sign_bits[i * ball.sign_blocks];
            for (size_t wll = 0; wll < ball.wall_words.size(); ++wll) {
                double s = mdot(ball.centers[i].v, ball.wall_lines[wll].v);
                if (s > 0.0) row[wll / 64] |= (1ULL << (wll % 64));
            }
        }
        for (size_t i = 0; i < ball.size(); ++i) {
            uint64_t h = Ball::hash_blocks(&ball.sign_bits[i * ball.sign_blocks], ball.sign_blocks);
            ball.sign_index_[h].push_back(static_cast<int32_t>(i));
        }
    }
    return ball;
}

inline Wall wall_of(const Ball& ball, size_t wall_idx) {
    return Wall{group_element(ball.wall_words[wall_idx]), ball.wall_lines[wall_idx]};
}

// --- hulls -------------------------------------------------------------------

struct HullResult {
    std::vector<Word> chambers;  // the hull, i.e. the interval between the window ends
    int k_empirical = 0;         // max over hull chambers of distance to the input set
};

// Convex hull of a combinatorial geodesic window. For a geodesic c_0..c_N the
// hull coincides with the interval I(c_0, c_N): the interval is convex and
// contains the path, and any convex superset of {c_0, c_N} contains the
// interval. K_empirical is the thickness of that interval over the input.
inline HullResult hull_window(const std::vector<Word>& axis_chambers) {
    if (axis_chambers.empty()) throw std::invalid_argument("hull_window: empty input");
    const size_t N = axis_chambers.size() - 1;
    for (size_t i = 0; i + 1 < axis_chambers.size(); ++i)
        if (cube_dist_words(axis_chambers[i], axis_chambers[i + 1]) != 1)
            throw std::invalid_argument("hull_window: input is not a combinatorial path");
    if (cube_dist_words(axis_chambers.front(), axis_chambers.back()) != static_cast<int>(N))
        throw std::invalid_argument("hull_window: input path is not distance-realizing");

    HullResult out;
    if (N == 0) {
        out.chambers = axis_chambers;
        return out;
    }

    const Word& start = axis_chambers.front();
    const Word& goal = axis_chambers.back();
    const int D = static_cast<int>(N);

    struct Node { Word w; int d_from; };
    std::deque<Node> queue{{start, 0}};
    std::unordered_map<std::string, int> seen{{word_string(start), 0}};
    out.chambers.push_back(start);
    while (!queue.empty()) {
        Node cur = std::move(queue.front());
        queue.pop_front();
        if (cur.d_from == D) continue;
        for (Letter s = 0; s < 5; ++s) {
            Word nb = cur.w;
            canonical_append(nb, s);
            std::string key = word_string(nb);
            if (seen.count(key)) continue;
            int d_end = cube_dist_words(nb, goal);
            if (cur.d_from + 1 + d_end != D) continue;
            seen.emplace(std::move(key), cur.d_from + 1);
            out.chambers.push_back(nb);
            queue.push_back({std::move(nb), cur.d_from + 1});
        }
    }

    for (const Word& x : out.chambers) {
        int best = INT32_MAX;
        for (const Word& c : axis_chambers) best = std::min(best, cube_dist_words(x, c));
        out.k_empirical = std::max(out.k_empirical, best);
    }
    return out;
}

} // namespace pentile
