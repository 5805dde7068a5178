#pragma once

// Hyperboloid-model primitives for the hyperbolic plane. Points live on the
// upper sheet of <p,p> = -1 with respect to the form J = diag(+1,+1,-1);
// oriented geodesic lines are represented by unit spacelike polar vectors,
// and isometries by J-orthogonal 3x3 matrices.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "pentile/errors.hpp"

namespace pentile {

struct GeometryConfig {
    double delta = 0.8813735870195430;  // ln(1+sqrt(2)); thinness constant used for H^2
    double tol = 1e-9;
    double clamp_eps = 1e-12;
};

inline const GeometryConfig& geometry_defaults() {
    static const GeometryConfig cfg{};
    return cfg;
}

using Vec3 = std::array<double, 3>;

inline double mdot(const Vec3& u, const Vec3& v) {
    return u[0] * v[0] + u[1] * v[1] - u[2] * v[2];
}

inline Vec3 add(const Vec3& u, const Vec3& v) { return {u[0] + v[0], u[1] + v[1], u[2] + v[2]}; }
inline Vec3 sub(const Vec3& u, const Vec3& v) { return {u[0] - v[0], u[1] - v[1], u[2] - v[2]}; }
inline Vec3 scale(const Vec3& u, double s) { return {u[0] * s, u[1] * s, u[2] * s}; }

// Euclidean cross product; composed with J it produces Minkowski-orthogonal
// complements: mdot(J*(u x v), u) = 0.
inline Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

inline Vec3 applyJ(const Vec3& u) { return {u[0], u[1], -u[2]}; }

struct HPoint {
    Vec3 v{0.0, 0.0, 1.0};

    double x() const { return v[0]; }
    double y() const { return v[1]; }
    double z() const { return v[2]; }
};

struct SpacelikeVector {
    Vec3 v{1.0, 0.0, 0.0};
};

inline HPoint normalize_timelike(const Vec3& u) {
    double q = -mdot(u, u);
    if (q <= 0.0) throw invariant_violation("normalize_timelike: vector is not timelike");
    double s = 1.0 / std::sqrt(q);
    if (u[2] < 0.0) s = -s;
    return HPoint{scale(u, s)};
}

inline SpacelikeVector normalize_spacelike(const Vec3& u) {
    double q = mdot(u, u);
    if (q <= 0.0) throw invariant_violation("normalize_spacelike: vector is not spacelike");
    return SpacelikeVector{scale(u, 1.0 / std::sqrt(q))};
}

// arccosh with the documented clamping policy: arguments in [1-clamp_eps, 1)
// are treated as roundoff and clamped to 1; anything below that band is a
// logic error, not noise.
inline double acosh_clamped(double x, const GeometryConfig& cfg = geometry_defaults()) {
    if (x < 1.0) {
        if (x >= 1.0 - cfg.clamp_eps) return 0.0;
        throw invariant_violation("acosh argument " + std::to_string(x) + " below clamp band");
    }
    return std::acosh(x);
}

inline double dist(const HPoint& p, const HPoint& q, const GeometryConfig& cfg = geometry_defaults()) {
    double arg = -mdot(p.v, q.v);
    if (arg < 1.0) {
        // the achievable accuracy of the form is eps * sum |p_i q_i|, so the
        // clamp band scales with the coordinate magnitudes
        double band = cfg.clamp_eps +
                      1e-13 * (std::abs(p.v[0] * q.v[0]) + std::abs(p.v[1] * q.v[1]) +
                               std::abs(p.v[2] * q.v[2]));
        if (arg >= 1.0 - band) return 0.0;
        throw invariant_violation("dist: arccosh argument " + std::to_string(arg) +
                                  " below the clamp band");
    }
    return std::acosh(arg);
}

inline double dist_to_line(const HPoint& p, const SpacelikeVector& e) {
    return std::asinh(std::abs(mdot(p.v, e.v)));
}

// Foot of the perpendicular from p onto the line polar to e.
inline HPoint project_to_line(const HPoint& p, const SpacelikeVector& e) {
    double s = mdot(p.v, e.v);
    return normalize_timelike(sub(p.v, scale(e.v, s)));
}

enum class IsometryClass { elliptic, hyperbolic, boundary_degenerate };

inline const char* to_string(IsometryClass c) {
    switch (c) {
        case IsometryClass::elliptic: return "elliptic";
        case IsometryClass::hyperbolic: return "hyperbolic";
        default: return "boundary-degenerate";
    }
}

struct HIsometry {
    // Row-major 3x3.
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};
    // Compositions since the last re-orthonormalization; drift grows linearly
    // in word length, so matrices are re-orthonormalized against J every 32
    // compositions.
    int comp_count = 0;

    static HIsometry identity() { return HIsometry{}; }

    Vec3 apply(const Vec3& u) const {
        return {m[0] * u[0] + m[1] * u[1] + m[2] * u[2],
                m[3] * u[0] + m[4] * u[1] + m[5] * u[2],
                m[6] * u[0] + m[7] * u[1] + m[8] * u[2]};
    }

    HPoint apply(const HPoint& p) const { return HPoint{apply(p.v)}; }

    // Polars transform like points under J-orthogonal maps.
    SpacelikeVector apply(const SpacelikeVector& e) const { return SpacelikeVector{apply(e.v)}; }

    double det() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    bool orientation_reversing() const { return det() < 0.0; }

    double trace() const { return m[0] + m[4] + m[8]; }

    // Exact inverse for J-orthogonal matrices: M^{-1} = J M^T J.
    HIsometry inverse() const {
        HIsometry r;
        r.comp_count = comp_count;
        const auto& a = m;
        r.m = {a[0], a[3], -a[6], a[1], a[4], -a[7], -a[2], -a[5], a[8]};
        return r;
    }

    Vec3 column(int j) const { return {m[j], m[3 + j], m[6 + j]}; }

    void set_column(int j, const Vec3& c) {
        m[j] = c[0];
        m[3 + j] = c[1];
        m[6 + j] = c[2];
    }

    double max_entry() const {
        double m_ = 0.0;
        for (double x : m) m_ = std::max(m_, std::abs(x));
        return m_;
    }

    // Gram-Schmidt against J: the timelike column is fixed up first, then the
    // two spacelike ones are projected and renormalized. Columns of size E
    // carry the form values only to ~E^2 * eps absolute, so beyond E ~ 1e4
    // the projection would inject noise instead of removing drift; such
    // matrices are left alone (their entries are still relatively accurate,
    // which is what distances, traces and eigenvectors depend on).
    void reorthonormalize() {
        comp_count = 0;
        if (max_entry() > 1e2) return;
        Vec3 c2 = normalize_timelike(column(2)).v;
        Vec3 c0 = column(0);
        c0 = add(c0, scale(c2, mdot(c0, c2)));
        c0 = normalize_spacelike(c0).v;
        Vec3 c1 = column(1);
        c1 = add(c1, scale(c2, mdot(c1, c2)));
        c1 = sub(c1, scale(c0, mdot(c1, c0)));
        c1 = normalize_spacelike(c1).v;
        set_column(0, c0);
        set_column(1, c1);
        set_column(2, c2);
    }

    double j_orthogonality_error() const {
        // max |M^T J M - J| entry
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double s = m[i] * m[j] + m[3 + i] * m[3 + j] - m[6 + i] * m[6 + j];
                double target = (i == j) ? (i == 2 ? -1.0 : 1.0) : 0.0;
                worst = std::max(worst, std::abs(s - target));
            }
        }
        return worst;
    }
};

inline HIsometry compose(const HIsometry& A, const HIsometry& B) {
    HIsometry r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r.m[3 * i + j] =
                A.m[3 * i] * B.m[j] + A.m[3 * i + 1] * B.m[3 + j] + A.m[3 * i + 2] * B.m[6 + j];
        }
    }
    r.comp_count = std::max(A.comp_count, B.comp_count) + 1;
    if (r.comp_count >= 32) r.reorthonormalize();
    return r;
}

// Reflection across the line polar to the unit spacelike vector e:
// v -> v - 2<e,v> e, i.e. M = I - 2 e (Je)^T.
inline HIsometry reflect(const SpacelikeVector& e) {
    HIsometry r;
    Vec3 je = applyJ(e.v);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[3 * i + j] = (i == j ? 1.0 : 0.0) - 2.0 * e.v[i] * je[j];
    return r;
}

namespace detail {

// Null vector of a (near-)singular 3x3 matrix via the largest row cross
// product. Returns nullopt when the null space is higher-dimensional.
inline std::optional<Vec3> null_vector(const std::array<double, 9>& n) {
    Vec3 r0{n[0], n[1], n[2]}, r1{n[3], n[4], n[5]}, r2{n[6], n[7], n[8]};
    Vec3 c01 = cross(r0, r1), c02 = cross(r0, r2), c12 = cross(r1, r2);
    auto nrm2 = [](const Vec3& u) { return u[0] * u[0] + u[1] * u[1] + u[2] * u[2]; };
    Vec3 best = c01;
    double bn = nrm2(c01);
    if (nrm2(c02) > bn) { best = c02; bn = nrm2(c02); }
    if (nrm2(c12) > bn) { best = c12; bn = nrm2(c12); }
    double row_scale = std::sqrt(std::max({nrm2(r0), nrm2(r1), nrm2(r2), 1e-300}));
    if (std::sqrt(bn) <= 1e-8 * row_scale * row_scale + 1e-14) return std::nullopt;
    double s = 1.0 / std::sqrt(bn);
    return Vec3{best[0] * s, best[1] * s, best[2] * s};
}

} // namespace detail

// (trace - det)/2 equals cosh(translation length) for hyperbolic isometries
// and cos(rotation angle) for elliptic ones, in both orientation classes.
inline double spectral_sigma(const HIsometry& M) {
    double det = M.det() < 0.0 ? -1.0 : 1.0;
    return (M.trace() - det) / 2.0;
}

inline double spectral_radius(const HIsometry& M) {
    double sigma = spectral_sigma(M);
    if (sigma <= 1.0) return 1.0;
    return sigma + std::sqrt(sigma * sigma - 1.0);
}

// Timelike fixed vector of a (near-)elliptic isometry, if one exists.
inline std::optional<HPoint> fixed_point(const HIsometry& M, double tol) {
    std::array<double, 9> n = M.m;
    n[0] -= 1.0;
    n[4] -= 1.0;
    n[8] -= 1.0;
    double mag = 0.0;
    for (double x : n) mag = std::max(mag, std::abs(x));
    if (mag <= tol) return HPoint{};  // identity
    auto nv = detail::null_vector(n);
    if (!nv) {
        // Rank-one (M - I): M is a reflection; any nonzero row of M - I is
        // parallel to J e. The projection of the origin onto the fixed line
        // is a fixed timelike vector.
        Vec3 row{n[0], n[1], n[2]};
        double rn = row[0] * row[0] + row[1] * row[1] + row[2] * row[2];
        for (int i = 1; i < 3; ++i) {
            Vec3 r{n[3 * i], n[3 * i + 1], n[3 * i + 2]};
            double q = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
            if (q > rn) { row = r; rn = q; }
        }
        if (rn < tol * tol) return HPoint{};
        Vec3 e_raw = applyJ(row);
        if (mdot(e_raw, e_raw) <= 0.0) return std::nullopt;
        SpacelikeVector e = normalize_spacelike(e_raw);
        return project_to_line(HPoint{}, e);
    }
    Vec3 v = *nv;
    if (mdot(v, v) >= -tol) return std::nullopt;  // fixed direction not timelike
    // Verify the residual: a spurious cross product must not be accepted.
    Vec3 res{n[0] * v[0] + n[1] * v[1] + n[2] * v[2], n[3] * v[0] + n[4] * v[1] + n[5] * v[2],
             n[6] * v[0] + n[7] * v[1] + n[8] * v[2]};
    double rmag = std::sqrt(res[0] * res[0] + res[1] * res[1] + res[2] * res[2]);
    if (rmag > 1e-6) return std::nullopt;
    return normalize_timelike(v);
}

// Hyperbolic iff the spectral radius exceeds its tolerance band around 1.
// The band is expressed on sigma = cosh(log rho): roundoff perturbs sigma by
// O(eps) but rho by O(sqrt(eps)), and for this cocompact group sigma is
// either 1 + O(roundoff) or >= cosh of the shortest translation length, so
// any band in between classifies identically. Inside the band the verdict is
// elliptic only if a timelike fixed vector exists; otherwise the outcome is
// boundary-degenerate, which callers must handle (parabolics do not occur
// here, so the band indicates numerical trouble).
inline IsometryClass classify(const HIsometry& M, const GeometryConfig& cfg = geometry_defaults()) {
    double sigma = spectral_sigma(M);
    if (sigma > 1.0 + cfg.tol) return IsometryClass::hyperbolic;
    if (fixed_point(M, cfg.tol)) return IsometryClass::elliptic;
    return IsometryClass::boundary_degenerate;
}

inline double translation_length(const HIsometry& M, const GeometryConfig& cfg = geometry_defaults()) {
    if (classify(M, cfg) != IsometryClass::hyperbolic)
        throw std::domain_error("translation_length: isometry is not hyperbolic");
    return std::acosh(spectral_sigma(M));
}

// Unit-speed parameterized geodesic: gamma(t) = base cosh t + dir sinh t.
struct Geodesic {
    HPoint base;
    SpacelikeVector dir;  // unit tangent at t = 0, J-orthogonal to base

    HPoint point_at(double t) const {
        return HPoint{add(scale(base.v, std::cosh(t)), scale(dir.v, std::sinh(t)))};
    }

    SpacelikeVector tangent_at(double t) const {
        return SpacelikeVector{add(scale(base.v, std::sinh(t)), scale(dir.v, std::cosh(t)))};
    }

    SpacelikeVector polar() const { return normalize_spacelike(applyJ(cross(base.v, dir.v))); }

    // Parameter of the foot of the perpendicular from x.
    double foot_param(const HPoint& x) const {
        double alpha = mdot(x.v, base.v);  // = -cosh d(x, base) < 0
        double beta = mdot(x.v, dir.v);
        return std::atanh(-beta / alpha);
    }

    double dist_to_point(const HPoint& x) const {
        double alpha = mdot(x.v, base.v), beta = mdot(x.v, dir.v);
        return acosh_clamped(std::sqrt(std::max(alpha * alpha - beta * beta, 1.0)));
    }
};

inline Geodesic geodesic_through(const HPoint& p, const HPoint& q,
                                 const GeometryConfig& cfg = geometry_defaults()) {
    double ip = mdot(q.v, p.v);
    Vec3 u = add(q.v, scale(p.v, ip));
    if (mdot(u, u) <= cfg.tol * cfg.tol) throw degenerate_input_error("geodesic_through: coincident points");
    return Geodesic{p, normalize_spacelike(u)};
}

namespace detail {

inline Vec3 dominant_null_direction(const HIsometry& M) {
    // Power iteration; the attracting fixed direction dominates strictly for
    // hyperbolic isometries with det +1.
    Vec3 w{0.21341, -0.55712, 1.0};
    for (int it = 0; it < 96; ++it) {
        w = M.apply(w);
        double n = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
        w = scale(w, 1.0 / n);
        if (w[2] < 0.0) w = scale(w, -1.0);
    }
    // Snap onto the forward light cone.
    double r = std::hypot(w[0], w[1]);
    return Vec3{w[0] / r, w[1] / r, 1.0};
}

} // namespace detail

// Oriented invariant axis of a hyperbolic isometry, directed toward the
// attracting fixed point at infinity.
inline Geodesic axis(const HIsometry& M, const GeometryConfig& cfg = geometry_defaults()) {
    if (classify(M, cfg) != IsometryClass::hyperbolic)
        throw std::domain_error("axis: isometry is not hyperbolic");
    // For glides, M^2 is orientation-preserving with the same axis and the
    // same attracting point.
    HIsometry P = M.orientation_reversing() ? compose(M, M) : M;
    Vec3 n_plus = detail::dominant_null_direction(P);
    Vec3 n_minus = detail::dominant_null_direction(P.inverse());
    double ip = mdot(n_plus, n_minus);  // < 0 for distinct null rays
    if (ip >= -1e-14) throw invariant_violation("axis: null fixed directions collapsed");
    HPoint base = normalize_timelike(add(n_plus, n_minus));
    SpacelikeVector dir = normalize_spacelike(sub(n_plus, n_minus));
    return Geodesic{base, dir};
}

} // namespace pentile
