// Local parametrisation around a nontrivial pair (r0, s0) with prior pi0.
//
// Frames:
//   p0 = d0/|d0| with d0 = pi0 r0 - pi1 s0,
//   l0 in the (r0, s0) plane orthogonal to p0, oriented so that r0.l0 >= 0,
//   k0 = p0 x l0.
// Angles:
//   sin(phi0) = r0^.p0,  cos(phi0) = r0^.l0,
//   sin(phi1) = -s0^.p0, cos(phi1) = s0^.l0.
// With these signs |d0| = pi0 r0 sin(phi0) + pi1 s0 sin(phi1) and
// pi0 r0 cos(phi0) = pi1 s0 cos(phi1).
//
// Local frames: a3 = r0^, b3 = s0^, a2 = b2 = k0, with a1.l0 = sin(phi0) and
// b1.l0 = -sin(phi1).

#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "qclass/helstrom.hpp"
#include "qclass/qubit.hpp"

namespace qclass {

struct LocalFrame {
    Vec3 p0, l0, k0;
    Vec3 a1, a2, a3;
    Vec3 b1, b2, b3;
    double sin_phi0 = 0.0, cos_phi0 = 0.0;
    double sin_phi1 = 0.0, cos_phi1 = 0.0;
    double d0_norm = 0.0;
    double r0_norm = 0.0, s0_norm = 0.0;
    double pi0 = 0.5;
    Vec3 r0, s0;  // centre Bloch vectors

    double pi1() const { return 1.0 - pi0; }
};

/// Components of a vector in the plane orthogonal to p0, in the (l0, k0) basis.
struct PerpEstimate {
    double z_l = 0.0;
    double z_k = 0.0;

    friend bool operator==(const PerpEstimate&, const PerpEstimate&) = default;
};

/// Local perturbations (u, v), each in its own frame: u = u1 a1 + u2 a2 + u3 a3.
struct LocalParameters {
    Vec3 u{};
    Vec3 v{};
};

namespace detail {

// Component of w orthogonal to unit p, Gram-Schmidt applied twice.
inline Vec3 orthogonal_part(const Vec3& w, const Vec3& p) {
    Vec3 o = w - dot(w, p) * p;
    return o - dot(o, p) * p;
}

// First of x, y, z that is well away from p, projected orthogonally to p.
inline Vec3 fallback_perpendicular(const Vec3& p) {
    for (const Vec3& axis : {kAxisX, kAxisY, kAxisZ}) {
        if (std::abs(dot(axis, p)) < 0.9) return normalized(orthogonal_part(axis, p));
    }
    return normalized(orthogonal_part(kAxisX, p));  // unreachable for unit p
}

}  // namespace detail

/// Threshold below which r0 is treated as parallel to p0 (degenerate plane).
inline constexpr double kParallelTolerance = 1e-12;

inline LocalFrame build_frame(const BlochVector& r0, const BlochVector& s0, double pi0) {
    const double r_len = r0.length();
    const double s_len = s0.length();
    if (!(r_len > 0.0) || !(s_len > 0.0)) throw PreconditionError("local frame needs nonzero Bloch vectors r0 and s0");
    const auto verdict = triviality_check(r0, s0, pi0);
    if (verdict.kind != TrivialityKind::Nontrivial)
        throw PreconditionError("local frame needs a nontrivial configuration, got " +
                                std::string(to_string(verdict.kind)));

    LocalFrame f;
    f.pi0 = pi0;
    f.r0 = r0.vec();
    f.s0 = s0.vec();
    f.r0_norm = r_len;
    f.s0_norm = s_len;

    const Vec3 d0 = pi0 * r0.vec() - (1.0 - pi0) * s0.vec();
    f.d0_norm = norm(d0);
    f.p0 = d0 / f.d0_norm;

    const Vec3 r_hat = r0.vec() / r_len;
    const Vec3 s_hat = s0.vec() / s_len;

    const Vec3 r_perp = detail::orthogonal_part(r_hat, f.p0);
    if (norm(r_perp) > kParallelTolerance) {
        f.l0 = normalized(r_perp);
        f.l0 = normalized(detail::orthogonal_part(f.l0, f.p0));
    } else {
        f.l0 = detail::fallback_perpendicular(f.p0);
    }
    f.k0 = cross(f.p0, f.l0);

    f.sin_phi0 = dot(r_hat, f.p0);
    f.cos_phi0 = dot(r_hat, f.l0);
    f.sin_phi1 = -dot(s_hat, f.p0);
    f.cos_phi1 = dot(s_hat, f.l0);

    f.a3 = r_hat;
    f.b3 = s_hat;
    f.a2 = f.k0;
    f.b2 = f.k0;
    f.a1 = -f.cos_phi0 * f.p0 + f.sin_phi0 * f.l0;
    f.b1 = -f.cos_phi1 * f.p0 - f.sin_phi1 * f.l0;
    return f;
}

/// Cartesian vector u1 a1 + u2 a2 + u3 a3 for frame coordinates u.
inline Vec3 rho_frame_to_cartesian(const LocalFrame& f, const Vec3& u) { return u.x * f.a1 + u.y * f.a2 + u.z * f.a3; }
inline Vec3 sigma_frame_to_cartesian(const LocalFrame& f, const Vec3& v) {
    return v.x * f.b1 + v.y * f.b2 + v.z * f.b3;
}

/// Split of z_l into the classical part (from u3, v3) and the quantum part (u1, v1).
struct RelativeComponents {
    double z_l_classical = 0.0;
    double z_l_quantum = 0.0;
    double z_k = 0.0;
};

inline RelativeComponents relative_components(const Vec3& u, const Vec3& v, const LocalFrame& f) {
    const double pi0 = f.pi0;
    const double pi1 = f.pi1();
    return {pi0 * f.cos_phi0 * u.z - pi1 * f.cos_phi1 * v.z, pi0 * f.sin_phi0 * u.x + pi1 * f.sin_phi1 * v.x,
            pi0 * u.y - pi1 * v.y};
}

/// Components of (pi0 u - pi1 v) orthogonal to p0, for u, v in frame coordinates.
inline PerpEstimate relative_perp(const Vec3& u, const Vec3& v, const LocalFrame& f) {
    const auto c = relative_components(u, v, f);
    return {c.z_l_classical + c.z_l_quantum, c.z_k};
}

/// |z_perp - z_hat|^2 / (4 |d0|).
inline double quadratic_loss(const PerpEstimate& z_perp, const PerpEstimate& z_hat, double d0_norm) {
    if (!(d0_norm > 0.0)) throw PreconditionError("quadratic loss needs |d0| > 0");
    const double dl = z_perp.z_l - z_hat.z_l;
    const double dk = z_perp.z_k - z_hat.z_k;
    return (dl * dl + dk * dk) / (4.0 * d0_norm);
}

/// Rank-1 projector with Bloch vector (p0 + z_hat/sqrt(n)) / |p0 + z_hat/sqrt(n)|.
inline Projector estimator_to_projector(const PerpEstimate& z_hat, const LocalFrame& f, std::uint64_t n) {
    if (n < 1) throw PreconditionError("sample size n must be >= 1");
    // z_hat estimates the perpendicular part of sqrt(n) (d - d0), so the
    // perturbation is applied to d0 rather than to the unit vector p0.
    const double scale = 1.0 / (f.d0_norm * std::sqrt(static_cast<double>(n)));
    const Vec3 p = f.p0 + scale * (z_hat.z_l * f.l0 + z_hat.z_k * f.k0);
    return Projector::rank_one(normalized(p));
}

/// States with Bloch vectors r0 + u/sqrt(n) and s0 + v/sqrt(n), u and v Cartesian.
/// Perturbations leaving the Bloch ball are rejected.
inline std::pair<DensityMatrix, DensityMatrix> local_states(const BlochVector& r0, const BlochVector& s0,
                                                            const Vec3& u, const Vec3& v, std::uint64_t n) {
    if (n < 1) throw PreconditionError("sample size n must be >= 1");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const BlochVector r(r0.vec() + scale * u);
    const BlochVector s(s0.vec() + scale * v);
    return {bloch_to_density(r), bloch_to_density(s)};
}

/// Component of (r0 + s0) orthogonal to p0, in (l0, k0) coordinates.
inline PerpEstimate prior_direction_perp(const LocalFrame& f) {
    const Vec3 w = f.r0 + f.s0;
    return {dot(w, f.l0), dot(w, f.k0)};
}

}  // namespace qclass
