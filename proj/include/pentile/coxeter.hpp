#pragma once

// The right-angled Coxeter group W = <s0..s4 | si^2, (si s_{i+1})^2> of the
// pentagon tiling. Elements are kept in ShortLex normal form: the
// lexicographically least word among all commutation-equivalent reduced
// words, with letters compared by generator index.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pentile/minkowski.hpp"
#include "pentile/pentagon.hpp"

namespace pentile {

using Letter = uint8_t;
using Word = std::vector<Letter>;

// Adjacent pentagon sides meet at right angles, so adjacent generators
// commute; non-adjacent pairs generate infinite dihedral groups.
inline bool commute(Letter i, Letter j) {
    int d = (int(i) - int(j) + 5) % 5;
    return d == 1 || d == 4;
}

inline void check_letters(const Word& w) {
    for (Letter s : w)
        if (s > 4) throw std::invalid_argument("letter out of range 0..4");
}

inline Word parse_word(const std::string& digits) {
    Word w;
    w.reserve(digits.size());
    for (char ch : digits) {
        if (ch < '0' || ch > '4') throw std::invalid_argument("word digits must be 0..4");
        w.push_back(static_cast<Letter>(ch - '0'));
    }
    return w;
}

inline std::string word_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (Letter l : w) s.push_back(char('0' + l));
    return s;
}

// Deletes every shuffle-cancellable pair. A word in a RACG is reduced iff no
// two equal letters are separated only by letters commuting with them.
inline void free_reduce(Word& w) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i + 1 < w.size() && !changed; ++i) {
            for (size_t j = i + 1; j < w.size(); ++j) {
                if (w[j] == w[i]) {
                    w.erase(w.begin() + j);
                    w.erase(w.begin() + i);
                    changed = true;
                    break;
                }
                if (!commute(w[i], w[j])) break;
            }
        }
    }
}

// Lex-least linearization of a reduced word's trace: greedily emit the
// smallest letter that commutes with everything before it.
inline void canonical_linearize(Word& w) {
    Word out;
    out.reserve(w.size());
    Word rest = w;
    while (!rest.empty()) {
        size_t best = rest.size();
        for (size_t k = 0; k < rest.size(); ++k) {
            bool visible = true;
            for (size_t j = 0; j < k; ++j) {
                if (!commute(rest[j], rest[k])) { visible = false; break; }
            }
            if (visible && (best == rest.size() || rest[k] < rest[best])) best = k;
        }
        out.push_back(rest[best]);
        rest.erase(rest.begin() + best);
    }
    w = std::move(out);
}

inline Word normal_form_word(Word w) {
    check_letters(w);
    free_reduce(w);
    canonical_linearize(w);
    return w;
}

// Incremental variant: appends one letter to a word already in normal form.
// Matches normal_form_word(w + s); the equivalence is exercised in tests.
inline void canonical_append(Word& nf, Letter s) {
    int n = static_cast<int>(nf.size());
    int j = n - 1;
    for (; j >= 0; --j) {
        if (nf[j] == s) {
            nf.erase(nf.begin() + j);
            return;
        }
        if (!commute(nf[j], s)) break;
    }
    // s commutes with the whole tail nf[j+1..]; the lex-least placement is
    // just before the first larger letter of that tail, else at the end.
    int pos = n;
    for (int p = j + 1; p < n; ++p) {
        if (s < nf[p]) {
            pos = p;
            break;
        }
    }
    nf.insert(nf.begin() + pos, s);
}

// True iff appending s to the normal form u yields a word that is longer and
// already canonical as written. Used to enumerate each group element exactly
// once: canonical words form a prefix-closed language.
inline bool canonical_child(const Word& nf, Letter s) {
    for (int j = static_cast<int>(nf.size()) - 1; j >= 0; --j) {
        if (nf[j] == s) return false;           // would cancel
        if (!commute(nf[j], s)) return true;    // blocked: s stays at the end
        if (nf[j] > s) return false;            // s would bubble left
    }
    return true;
}

inline Word inverse_word(Word w) {
    std::reverse(w.begin(), w.end());
    return w;  // generators are involutions
}

inline HIsometry word_isometry(const Word& w) {
    const Pentagon& P = pentagon();
    HIsometry M = HIsometry::identity();
    for (Letter s : w) M = compose(M, P.refl[s]);
    return M;
}

struct GroupElement {
    Word word;       // ShortLex normal form
    HIsometry iso;   // cached product of side reflections

    bool operator==(const GroupElement& o) const { return word == o.word; }
};

inline GroupElement group_element(const Word& w) {
    Word nf = normal_form_word(w);
    return GroupElement{nf, word_isometry(nf)};
}

inline GroupElement multiply(const GroupElement& u, const GroupElement& v) {
    Word w = u.word;
    for (Letter s : v.word) canonical_append(w, s);
    return GroupElement{w, compose(u.iso, v.iso)};
}

inline GroupElement inverse(const GroupElement& u) {
    return GroupElement{normal_form_word(inverse_word(u.word)), u.iso.inverse()};
}

// --- packed word keys -------------------------------------------------------
// Words of length <= 19 pack into a uint64: 5 bits of length, then 3 bits per
// letter. Census words never exceed this.

inline constexpr size_t kMaxPackedLen = 19;

inline uint64_t pack_word(const Word& w) {
    if (w.size() > kMaxPackedLen) throw std::invalid_argument("pack_word: word too long");
    uint64_t k = static_cast<uint64_t>(w.size());
    for (size_t i = 0; i < w.size(); ++i) k |= static_cast<uint64_t>(w[i] + 1) << (5 + 3 * i);
    return k;
}

inline void unpack_word_into(uint64_t k, Word& w) {
    w.resize(k & 31);
    for (size_t i = 0; i < w.size(); ++i) w[i] = static_cast<Letter>(((k >> (5 + 3 * i)) & 7) - 1);
}

inline Word unpack_word(uint64_t k) {
    Word w;
    unpack_word_into(k, w);
    return w;
}

// --- conjugacy ---------------------------------------------------------------

// Positions whose letters can commute to the front (resp. back) of the word.
// Letter x at position i is left-visible iff it commutes with everything
// before it; a single blocked-generator table makes the scan linear.
inline void left_visible_positions(const Word& u, std::vector<int>& out) {
    out.clear();
    bool blocked[5] = {false, false, false, false, false};
    for (size_t i = 0; i < u.size(); ++i) {
        Letter x = u[i];
        if (!blocked[x]) out.push_back(static_cast<int>(i));
        for (Letter h = 0; h < 5; ++h)
            if (!commute(x, h)) blocked[h] = true;
        blocked[x] = true;
    }
}

inline void right_visible_positions(const Word& u, std::vector<int>& out) {
    out.clear();
    bool blocked[5] = {false, false, false, false, false};
    for (size_t ii = u.size(); ii-- > 0;) {
        Letter x = u[ii];
        if (!blocked[x]) out.push_back(static_cast<int>(ii));
        for (Letter h = 0; h < 5; ++h)
            if (!commute(x, h)) blocked[h] = true;
        blocked[x] = true;
    }
}

// A canonical word admits a length-reducing rotation iff some generator is
// left-visible and right-visible at two distinct positions: rotating the
// left occurrence to the back cancels them.
inline bool cyclically_reduced_quick(const Word& u, std::vector<int>& scratch_l,
                                     std::vector<int>& scratch_r) {
    left_visible_positions(u, scratch_l);
    right_visible_positions(u, scratch_r);
    for (int i : scratch_l)
        for (int j : scratch_r)
            if (u[i] == u[j] && i != j) return false;
    return true;
}

// One trace-level cyclic shift for every letter that can commute to the
// front; covers the single-step shifts of all reduced linearizations.
inline void shift_moves(const Word& u, std::vector<Word>& out) {
    out.clear();
    std::vector<int> vis;
    left_visible_positions(u, vis);
    for (int k : vis) {
        Word v;
        v.reserve(u.size());
        for (size_t j = 0; j < u.size(); ++j)
            if (static_cast<int>(j) != k) v.push_back(u[j]);
        v.push_back(u[k]);
        out.push_back(normal_form_word(std::move(v)));
    }
}

inline bool shortlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

// Closure of a word under {cyclic shift, commutation move, free reduction},
// recorded as canonical forms. Rotations never lengthen a word, so the
// closure is finite and contains the conjugacy-minimal representatives.
inline std::vector<uint64_t> conj_closure_keys(const Word& start) {
    Word w0 = normal_form_word(start);
    std::vector<uint64_t> members{pack_word(w0)};
    std::vector<Word> stack{w0}, moves;
    auto contains = [&](uint64_t k) {
        return std::find(members.begin(), members.end(), k) != members.end();
    };
    while (!stack.empty()) {
        Word u = std::move(stack.back());
        stack.pop_back();
        shift_moves(u, moves);
        for (auto& v : moves) {
            uint64_t k = pack_word(v);
            if (!contains(k)) {
                members.push_back(k);
                stack.push_back(std::move(v));
            }
        }
    }
    return members;
}

// Conjugacy-minimal canonical representative: minimal length, ties broken
// ShortLex, over the full closure. Dispatches to string keys for words too
// long to pack.
inline Word conj_min_word(const Word& w) {
    Word w0 = normal_form_word(w);
    if (w0.size() <= kMaxPackedLen) {
        auto keys = conj_closure_keys(w0);
        Word best;
        bool first = true;
        for (uint64_t k : keys) {
            Word u = unpack_word(k);
            if (first || shortlex_less(u, best)) { best = std::move(u); first = false; }
        }
        return best;
    }
    std::vector<std::string> members{word_string(w0)};
    std::vector<Word> stack{w0}, moves;
    Word best = w0;
    auto contains = [&](const std::string& k) {
        return std::find(members.begin(), members.end(), k) != members.end();
    };
    while (!stack.empty()) {
        Word u = std::move(stack.back());
        stack.pop_back();
        shift_moves(u, moves);
        for (auto& v : moves) {
            if (shortlex_less(v, best)) best = v;
            std::string k = word_string(v);
            if (!contains(k)) {
                members.push_back(std::move(k));
                stack.push_back(std::move(v));
            }
        }
    }
    return best;
}

// Stable combinatorial translation length: lim l(g^n)/n. Minimal conjugacy
// word length except for glide-type classes, whose axes pass through no
// vertex of the unsubdivided complex; there the junction of w*w cancels and
// the limit is l_min(w^2)/2 (the powers stabilize at squares, which the
// tests verify against fourth powers).
//
// A junction cancellation in any rotated square exists iff some generator
// occurs exactly once and commutes with every other generator present; that
// invariant test gates the expensive square closure.
inline bool square_junction_cancels(const Word& w) {
    int count[5] = {0, 0, 0, 0, 0};
    for (Letter s : w) ++count[s];
    for (Letter x = 0; x < 5; ++x) {
        if (count[x] != 1) continue;
        bool commutes_with_all = true;
        for (Letter y = 0; y < 5 && commutes_with_all; ++y)
            if (y != x && count[y] > 0 && !commute(x, y)) commutes_with_all = false;
        if (commutes_with_all) return true;
    }
    return false;
}

inline int stable_cube_length(const Word& class_min_rep) {
    const Word& w = class_min_rep;
    if (w.empty()) return 0;
    if (!square_junction_cancels(w)) return static_cast<int>(w.size());
    Word sq;
    sq.reserve(2 * w.size());
    sq.insert(sq.end(), w.begin(), w.end());
    sq.insert(sq.end(), w.begin(), w.end());
    size_t l2 = conj_min_word(sq).size();
    return static_cast<int>(l2 / 2);
}

// Early-abort minimality test for census enumeration: true iff w is the
// ShortLex-least member of its conjugacy closure. Two cheap filters (the
// visibility cyclic-reduction test and single rotations) reject the vast
// majority of inputs before the allocation-heavy closure runs.
inline bool conj_minimal(const Word& w0) {
    thread_local std::vector<int> vis_l, vis_r;
    if (!cyclically_reduced_quick(w0, vis_l, vis_r)) return false;
    thread_local Word rot;
    for (int k : vis_l) {
        rot.clear();
        for (size_t j = 0; j < w0.size(); ++j)
            if (static_cast<int>(j) != k) canonical_append(rot, w0[j]);
        canonical_append(rot, w0[k]);
        if (shortlex_less(rot, w0)) return false;
    }
    // full closure with early abort; members carried as packed keys and
    // rotations built in a reused buffer, so the loop does not allocate
    thread_local std::vector<uint64_t> members, stack;
    thread_local Word ubuf;
    members.clear();
    stack.clear();
    members.push_back(pack_word(w0));
    stack.push_back(members[0]);
    while (!stack.empty()) {
        unpack_word_into(stack.back(), ubuf);
        stack.pop_back();
        left_visible_positions(ubuf, vis_l);
        for (int k : vis_l) {
            rot.clear();
            for (size_t j = 0; j < ubuf.size(); ++j)
                if (static_cast<int>(j) != k) canonical_append(rot, ubuf[j]);
            canonical_append(rot, ubuf[k]);
            if (shortlex_less(rot, w0)) return false;
            uint64_t key = pack_word(rot);
            if (std::find(members.begin(), members.end(), key) == members.end()) {
                members.push_back(key);
                stack.push_back(key);
            }
        }
    }
    return true;
}

struct ConjClass {
    Word rep;                       // minimal-word-length ShortLex representative
    int len_word = 0;               // = rep.size(): minimal word length in the class
    int len_cube = 0;               // stable cubical translation length (<= len_word)
    bool hyperbolic = false;
    std::optional<double> len_hyp;  // translation length on H^2 when hyperbolic
    bool primitive = false;         // filled in by the census root search

    uint64_t key() const { return pack_word(rep); }
};

inline ConjClass conj_min(const Word& w) {
    Word nf = normal_form_word(w);
    ConjClass c;
    c.rep = conj_min_word(nf);
    c.len_word = static_cast<int>(c.rep.size());
    if (!c.rep.empty()) {
        HIsometry M = word_isometry(c.rep);
        if (classify(M) == IsometryClass::hyperbolic) {
            c.hyperbolic = true;
            c.len_hyp = translation_length(M);
            c.len_cube = stable_cube_length(c.rep);
        } else {
            c.len_cube = c.len_word;
        }
    }
    return c;
}

} // namespace pentile
