#pragma once

// The base regular right-angled pentagon of the {5,4} tiling, centered at
// (0,0,1), and everything derived from it in closed form. All tiling
// constants live in Q(sqrt 5), so K is computed as (sqrt5 - 1)/4 rather than
// cos(2*pi/5).

#include <array>
#include <cmath>

#include "pentile/minkowski.hpp"

namespace pentile {

struct Pentagon {
    double K;        // cos(2*pi/5) = (sqrt 5 - 1)/4
    double a;        // half side length
    double b;        // center-to-side distance (half dual edge)
    double c;        // distance between midpoints of adjacent sides
    double d;        // distance between midpoints of non-adjacent sides
    double e;        // hypotenuse over legs (2a, a)
    double f;        // hypotenuse over legs (2a, 2a); pentagon diagonal
    double g;        // half the two-pentagon crossing length
    double lambda;   // d / c

    std::array<SpacelikeVector, 5> side;  // polar of side i
    std::array<HIsometry, 5> refl;        // reflection in side i
    std::array<HPoint, 5> vertex;         // vertex between sides i and i+1
    std::array<HPoint, 5> midpoint;       // midpoint of side i
    HPoint center;                        // (0,0,1)

    // Chamber u P0 is adjacent to u s_i P0 across side i.
};

inline const Pentagon& pentagon() {
    static const Pentagon P = [] {
        Pentagon p;
        p.K = (std::sqrt(5.0) - 1.0) / 4.0;
        const double K = p.K;
        p.a = std::acosh(std::sqrt(K + 1.0));
        p.b = std::acosh(1.0 / std::sqrt(1.0 - K));
        p.c = std::acosh(K + 1.0);
        p.d = std::acosh(2.0 * K * K + 2.0 * K + 1.0);
        p.e = std::acosh((2.0 * K + 1.0) * std::sqrt(K + 1.0));
        p.f = std::acosh(4.0 * K * K + 4.0 * K + 1.0);
        const double c4a = 8.0 * K * K + 8.0 * K + 1.0;  // cosh(4a)
        p.g = 0.5 * std::acosh(1.0 + 2.0 * K * c4a * c4a);
        p.lambda = p.d / p.c;

        const double ch = std::cosh(p.b), sh = std::sinh(p.b);
        for (int i = 0; i < 5; ++i) {
            double th = 2.0 * M_PI * i / 5.0;
            p.side[i] = SpacelikeVector{Vec3{ch * std::cos(th), ch * std::sin(th), sh}};
            p.refl[i] = reflect(p.side[i]);
        }
        p.center = HPoint{};
        for (int i = 0; i < 5; ++i) {
            int j = (i + 1) % 5;
            p.vertex[i] = normalize_timelike(applyJ(cross(p.side[i].v, p.side[j].v)));
            p.midpoint[i] = project_to_line(p.center, p.side[i]);
        }
        return p;
    }();
    return P;
}

// Sides i and j of the base pentagon meet at a right angle iff adjacent.
inline bool sides_adjacent(int i, int j) {
    int d = (i - j + 5) % 5;
    return d == 1 || d == 4;
}

} // namespace pentile
