#include <catch2/catch_amalgamated.hpp>

#include "pentile/minkowski.hpp"
#include "pentile/pentagon.hpp"
#include "pentile/rng.hpp"

using namespace pentile;

namespace {

HPoint random_point(Rng& rng, double rmax = 3.0) {
    double r = rng.next_double() * rmax;
    double th = rng.next_double() * 2.0 * M_PI;
    return HPoint{Vec3{std::sinh(r) * std::cos(th), std::sinh(r) * std::sin(th), std::cosh(r)}};
}

HIsometry random_word_isometry(Rng& rng, int len) {
    const Pentagon& P = pentagon();
    HIsometry M = HIsometry::identity();
    for (int i = 0; i < len; ++i) M = compose(M, P.refl[rng.next_below(5)]);
    return M;
}

} // namespace

TEST_CASE("dist basics") {
    HPoint o{};
    CHECK(dist(o, o) == 0.0);
    const Pentagon& P = pentagon();
    // centers of adjacent pentagons are 2b apart
    HPoint c2 = P.refl[0].apply(o);
    CHECK_THAT(dist(o, c2), Catch::Matchers::WithinAbs(2.0 * P.b, 1e-12));

    // composition cross-check: R0 R2 displaces the base center by the same
    // amount as the closed-form double-reflection distance
    HIsometry M = compose(P.refl[0], P.refl[2]);
    double direct = dist(o, M.apply(o));
    double tl = translation_length(M);
    double rho = dist_to_line(o, axis(M).polar());
    // displacement at distance rho from the axis of a translation by tl
    double expect = std::acosh(std::cosh(tl) + (std::cosh(tl) - 1.0) * std::sinh(rho) * std::sinh(rho));
    CHECK_THAT(direct, Catch::Matchers::WithinAbs(expect, 1e-9));
}

TEST_CASE("dist_to_line basics") {
    const Pentagon& P = pentagon();
    HPoint o{};
    // point on the line
    HPoint m = P.midpoint[0];
    CHECK(dist_to_line(m, P.side[0]) < 1e-12);
    // pentagon center to a side line is b
    CHECK_THAT(dist_to_line(o, P.side[0]), Catch::Matchers::WithinAbs(P.b, 1e-12));

    // center to a reflected non-adjacent side line: dense-sampling oracle
    SpacelikeVector far_line = P.refl[0].apply(P.side[2]);
    Geodesic line{project_to_line(o, far_line), SpacelikeVector{}};
    // parameterize the far line directly
    HPoint foot = project_to_line(o, far_line);
    Vec3 tang = applyJ(cross(foot.v, far_line.v));
    Geodesic param{foot, normalize_spacelike(tang)};
    double best = 1e9;
    for (double t = -4.0; t <= 4.0; t += 1e-4) best = std::min(best, dist(o, param.point_at(t)));
    CHECK_THAT(dist_to_line(o, far_line), Catch::Matchers::WithinAbs(best, 1e-6));
}

TEST_CASE("reflection properties") {
    const Pentagon& P = pentagon();
    for (int i = 0; i < 5; ++i) {
        HIsometry sq = compose(P.refl[i], P.refl[i]);
        // involution: R^2 is the identity matrix to machine precision
        double err = 0.0;
        for (int k = 0; k < 9; ++k)
            err = std::max(err, std::abs(sq.m[k] - (k % 4 == 0 ? 1.0 : 0.0)));
        CHECK(err < 1e-14);
        CHECK(sq.j_orthogonality_error() < 1e-12);
        // fixes the side midpoints on its line; acosh resolves distances only
        // to ~sqrt(eps) near zero, hence the 1e-7 band
        HPoint m = P.midpoint[i];
        CHECK(dist(m, P.refl[i].apply(m)) < 1e-7);
    }
    // adjacent side polars are orthogonal: right angles
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(mdot(P.side[i].v, P.side[(i + 1) % 5].v)) < 1e-12);
    }
    // algebraic check tanh^2 b = K
    double tb = std::tanh(P.b);
    CHECK_THAT(tb * tb, Catch::Matchers::WithinAbs(P.K, 1e-14));
}

TEST_CASE("classification") {
    const Pentagon& P = pentagon();
    CHECK(classify(HIsometry::identity()) == IsometryClass::elliptic);
    CHECK(classify(compose(P.refl[0], P.refl[2])) == IsometryClass::hyperbolic);
    // adjacent sides: order-2 rotation
    CHECK(classify(compose(P.refl[0], P.refl[1])) == IsometryClass::elliptic);
    CHECK(classify(P.refl[3]) == IsometryClass::elliptic);
}

TEST_CASE("translation length") {
    const Pentagon& P = pentagon();
    // glide = product of reflections in two disjoint lines at distance t -> 2t
    HIsometry M = compose(P.refl[0], P.refl[2]);
    double t02 = translation_length(M);
    CHECK_THAT(t02, Catch::Matchers::WithinAbs(4.0 * P.a, 1e-12));

    // equals lim d(p, M^n p)/n; exact for p on the axis, and converging at
    // rate 2 log cosh(rho) / n for p at distance rho from it
    HIsometry Mn = HIsometry::identity();
    for (int i = 0; i < 64; ++i) Mn = compose(Mn, M);
    HPoint on_axis = axis(M).point_at(0.3);
    CHECK_THAT(dist(on_axis, Mn.apply(on_axis)) / 64.0, Catch::Matchers::WithinAbs(t02, 1e-6));
    HPoint o{};
    double rho = dist_to_line(o, axis(M).polar());
    double excess = dist(o, Mn.apply(o)) / 64.0 - t02;
    CHECK(excess >= -1e-9);
    CHECK(excess <= 2.0 * std::log(std::cosh(rho)) / 64.0 + 1e-9);

    // power scaling
    HIsometry M2 = compose(M, M);
    CHECK_THAT(translation_length(M2), Catch::Matchers::WithinAbs(2.0 * t02, 1e-10));

    CHECK_THROWS_AS(translation_length(P.refl[0]), std::domain_error);
}

TEST_CASE("axis") {
    const Pentagon& P = pentagon();
    HIsometry M = compose(P.refl[0], P.refl[2]);
    Geodesic ax = axis(M);
    // axis of s0 s2 is the common-perpendicular line of sides 0 and 2, i.e.
    // the line through side 1
    CHECK(std::abs(std::abs(mdot(ax.polar().v, P.side[1].v)) - 1.0) < 1e-9);
    // invariance: points of the axis map into the axis
    for (double t : {-1.0, 0.0, 2.5}) {
        HPoint q = M.apply(ax.point_at(t));
        CHECK(ax.dist_to_point(q) < 1e-9);
    }
    // M translates forward by its translation length
    double tl = translation_length(M);
    HPoint q = M.apply(ax.point_at(0.0));
    CHECK_THAT(ax.foot_param(q), Catch::Matchers::WithinAbs(tl, 1e-9));

    // powers share axes (unoriented)
    HIsometry M3 = compose(M, compose(M, M));
    Geodesic ax3 = axis(M3);
    CHECK(std::abs(std::abs(mdot(ax.polar().v, ax3.polar().v)) - 1.0) < 1e-9);

    CHECK_THROWS_AS(axis(P.refl[0]), std::domain_error);
}

TEST_CASE("J-orthogonality drift over random compositions") {
    // Entries of a word isometry grow like e^displacement and mid-word
    // excursions bound the achievable residual by eps * peak norm, so the
    // drift bound is checked relative to the final matrix scale with a band
    // wide enough for 64-letter excursions. Logic bugs produce O(1) here.
    Rng rng(20240801);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        HIsometry M = random_word_isometry(rng, 1 + int(rng.next_below(64)));
        double nrm = std::max(1.0, M.max_entry());
        worst = std::max(worst, M.j_orthogonality_error() / (nrm * nrm));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("triangle inequality on random triples") {
    Rng rng(7);
    for (int trial = 0; trial < 10000; ++trial) {
        HPoint a = random_point(rng), b = random_point(rng), c = random_point(rng);
        CHECK(dist(a, c) <= dist(a, b) + dist(b, c) + 1e-9);
    }
}

TEST_CASE("displacement bounded below by translation length") {
    Rng rng(99);
    const Pentagon& P = pentagon();
    int hyperbolic_seen = 0;
    while (hyperbolic_seen < 200) {
        HIsometry M = random_word_isometry(rng, 2 + int(rng.next_below(10)));
        if (classify(M) != IsometryClass::hyperbolic) continue;
        ++hyperbolic_seen;
        double tl = translation_length(M);
        for (int k = 0; k < 5; ++k) {
            HPoint p = random_point(rng);
            CHECK(dist(p, M.apply(p)) >= tl - 1e-9);
        }
    }
    (void)P;
}

TEST_CASE("quadrilateral thinness") {
    // For quadrilaterals with two opposite sides of length <= J, every point
    // of one long side is within J + 2*delta of the other long side.
    Rng rng(4242);
    const double J = 1.3;
    const double bound = J + 2.0 * geometry_defaults().delta;
    for (int trial = 0; trial < 1000; ++trial) {
        HPoint p = random_point(rng), q = random_point(rng);
        if (dist(p, q) < 0.5) continue;
        // pick p', q' within J of p, q
        HPoint ps = random_point(rng, 0.4), qs = random_point(rng, 0.4);
        // transport the small offsets to p and q
        Geodesic gp = geodesic_through(HPoint{}, p);
        (void)gp;
        auto offset = [&](const HPoint& at, const HPoint& small) {
            // crude transported point: walk from `at` toward small's angle
            double r = dist(HPoint{}, small);
            if (r > J) r = J * 0.9;
            double th = std::atan2(small.v[1], small.v[0]);
            Vec3 dir{std::cos(th), std::sin(th), 0.0};
            Vec3 d = add(dir, scale(at.v, mdot(dir, at.v)));
            if (mdot(d, d) < 1e-12) return at;
            Geodesic g{at, normalize_spacelike(d)};
            return g.point_at(r);
        };
        HPoint pp = offset(p, ps), qq = offset(q, qs);
        REQUIRE(dist(p, pp) <= J + 1e-9);
        REQUIRE(dist(q, qq) <= J + 1e-9);
        Geodesic top = geodesic_through(p, q);
        Geodesic bottom = geodesic_through(pp, qq);
        double tmax = dist(p, q);
        double far = dist(pp, qq);
        for (double t = 0.0; t <= tmax; t += tmax / 16.0) {
            HPoint x = top.point_at(t);
            double ft = bottom.foot_param(x);
            ft = std::clamp(ft, 0.0, far);
            CHECK(dist(x, bottom.point_at(ft)) <= bound + 1e-9);
        }
    }
}
