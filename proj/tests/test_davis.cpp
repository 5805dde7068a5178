#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "pentile/davis.hpp"
#include "pentile/rng.hpp"

using namespace pentile;

TEST_CASE("ball counts") {
    Ball b0 = bfs_ball(0);
    CHECK(b0.size() == 1);
    Ball b1 = bfs_ball(1);
    CHECK(b1.size() == 6);
    Ball b2 = bfs_ball(2);
    CHECK(b2.size() == 21);
    CHECK(bfs_ball(4).size() == ball_size(4));
}

TEST_CASE("ball budget error names the radius") {
    BallBudget tiny;
    tiny.max_chambers = 10;
    try {
        bfs_ball(3, tiny);
        FAIL("expected resource_error");
    } catch (const resource_error& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
}

TEST_CASE("chamber degree and duality") {
    const Pentagon& P = pentagon();
    Ball ball = bfs_ball(4);
    int interior = 0;
    for (size_t i = 0; i < ball.size(); ++i) {
        int deg = 0;
        for (int s = 0; s < 5; ++s)
            if (ball.adj[i][s] >= 0) ++deg;
        if (ball.depth[i] < 4) {
            // interior chambers meet exactly 5 walls / have 5 neighbors
            CHECK(deg == 5);
            ++interior;
        }
        for (int s = 0; s < 5; ++s) {
            int j = ball.adj[i][s];
            if (j < 0) continue;
            // adjacency <=> pentagons share a side <=> centers 2b apart
            CHECK_THAT(dist(ball.centers[i], ball.centers[j]),
                       Catch::Matchers::WithinAbs(2.0 * P.b, 1e-9));
        }
    }
    CHECK(interior == static_cast<int>(ball_size(3)));
}

TEST_CASE("cube_dist equals word length of the quotient") {
    Ball ball = bfs_ball(4);
    Rng rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        int i = int(rng.next_below(ball.size()));
        int j = int(rng.next_below(ball.size()));
        CHECK(ball.dist(i, j) == cube_dist_words(ball.words[i], ball.words[j]));
    }
    CHECK(ball.dist(3, 3) == 0);
    auto idx = ball.index_of(parse_word("02"));
    REQUIRE(idx);
    CHECK(ball.dist(0, *idx) == 2);
}

TEST_CASE("cube_dist matches geometric wall separation") {
    Ball ball = bfs_ball(6);
    REQUIRE(ball.has_signs());
    Rng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        int i = int(rng.next_below(ball.size()));
        int j = int(rng.next_below(ball.size()));
        // count walls with the two centers strictly on opposite sides
        int sep = 0;
        for (size_t w = 0; w < ball.wall_lines.size(); ++w) {
            double si = mdot(ball.centers[i].v, ball.wall_lines[w].v);
            double sj = mdot(ball.centers[j].v, ball.wall_lines[w].v);
            if ((si > 0) != (sj > 0)) ++sep;
        }
        CHECK(sep == cube_dist_words(ball.words[i], ball.words[j]));
    }
}

TEST_CASE("cube_dist triangle inequality") {
    Ball ball = bfs_ball(5);
    Rng rng(77);
    for (int trial = 0; trial < 10000; ++trial) {
        int a = int(rng.next_below(ball.size()));
        int b = int(rng.next_below(ball.size()));
        int c = int(rng.next_below(ball.size()));
        CHECK(ball.dist(a, c) <= ball.dist(a, b) + ball.dist(b, c));
    }
}

namespace {

// interval-enumeration oracle: chambers on geodesics between i and j
std::set<int> interval_oracle(const Ball& ball, int i, int j) {
    std::set<int> out;
    int D = ball.dist(i, j);
    for (size_t x = 0; x < ball.size(); ++x)
        if (ball.dist(i, int(x)) + ball.dist(int(x), j) == D) out.insert(int(x));
    return out;
}

} // namespace

TEST_CASE("median basics and oracle") {
    Ball ball = bfs_ball(5);
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        int a = int(rng.next_below(ball_size(3)));  // keep medians inside the ball
        int b = int(rng.next_below(ball_size(3)));
        int c = int(rng.next_below(ball_size(3)));
        int m = ball.median(a, b, c);
        // symmetric under permutations
        CHECK(ball.median(b, c, a) == m);
        CHECK(ball.median(c, a, b) == m);
        CHECK(ball.median(a, a, b) == a);
        // oracle: unique chamber in all three pairwise intervals
        auto iab = interval_oracle(ball, a, b);
        auto ibc = interval_oracle(ball, b, c);
        auto iac = interval_oracle(ball, a, c);
        std::set<int> common;
        for (int x : iab)
            if (ibc.count(x) && iac.count(x)) common.insert(x);
        REQUIRE(common.size() == 1);
        CHECK(*common.begin() == m);
    }
}

TEST_CASE("median closure of hull windows: idempotent and matches brute force") {
    // axis path of [s0 s2]: prefixes of (02)^k
    Word g = parse_word("02");
    std::vector<Word> path;
    Word cur;
    path.push_back(cur);
    for (int rep = 0; rep < 2; ++rep)
        for (Letter s : g) {
            canonical_append(cur, s);
            path.push_back(cur);
        }
    HullResult hull = hull_window(path);
    CHECK(hull.k_empirical >= 0);

    // brute-force median closure within ball(6)
    Ball ball = bfs_ball(6);
    std::set<int> closure;
    for (const auto& w : path) closure.insert(*ball.index_of(w));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> members(closure.begin(), closure.end());
        for (size_t x = 0; x < members.size(); ++x)
            for (size_t y = x + 1; y < members.size(); ++y)
                for (size_t z = y + 1; z < members.size(); ++z) {
                    int m = ball.median(members[x], members[y], members[z]);
                    if (closure.insert(m).second) grew = true;
                }
    }
    std::set<std::string> hull_words;
    for (const auto& w : hull.chambers) hull_words.insert(word_string(w));
    std::set<std::string> closure_words;
    for (int i : closure) closure_words.insert(word_string(ball.words[i]));
    CHECK(hull_words == closure_words);
}

TEST_CASE("hull window edge cases") {
    HullResult single = hull_window({parse_word("0")});
    CHECK(single.chambers.size() == 1);
    CHECK(single.k_empirical == 0);

    HullResult pair = hull_window({Word{}, parse_word("0")});
    CHECK(pair.chambers.size() == 2);
    CHECK(pair.k_empirical == 0);

    CHECK_THROWS_AS(hull_window({Word{}, parse_word("02")}), std::invalid_argument);
}
