// Closed-form limits of n * excess risk for a nontrivial configuration.
//
// All quantities are functions of a LocalFrame. "Terms" are numerators that
// still carry the 1/(4 |d0|) normalisation; "risks" include it.

#pragma once

#include <cmath>

#include "qclass/local_geometry.hpp"

namespace qclass {

/// Mean square error of the classical estimator of z_l^(c).
inline double classical_risk_term(const LocalFrame& f) {
    const double c0 = f.cos_phi0 * f.cos_phi0;
    const double c1 = f.cos_phi1 * f.cos_phi1;
    return f.pi0 * (1.0 - f.r0_norm * f.r0_norm) * c0 + f.pi1() * (1.0 - f.s0_norm * f.s0_norm) * c1;
}

/// c in [Q^(l), Q^(k)] = i c: 2 r0 pi0 sin(phi0) - 2 s0 pi1 sin(phi1).
inline double commutator_c(const LocalFrame& f) {
    return 2.0 * f.r0_norm * f.pi0 * f.sin_phi0 - 2.0 * f.s0_norm * f.pi1() * f.sin_phi1;
}

/// Var(Q^(l)) for the thermal modes: pi0 sin^2(phi0) + pi1 sin^2(phi1).
inline double quantum_l_variance(const LocalFrame& f) {
    return f.pi0 * f.sin_phi0 * f.sin_phi0 + f.pi1() * f.sin_phi1 * f.sin_phi1;
}

/// Var(Q^(k)) = pi0 + pi1.
inline double quantum_k_variance(const LocalFrame&) { return 1.0; }

/// Minimal summed MSE of the joint measurement: Var(Q^l) + Var(Q^k) + |c|.
inline double quantum_risk_term(const LocalFrame& f) {
    return quantum_l_variance(f) + quantum_k_variance(f) + std::abs(commutator_c(f));
}

/// (2 + 2 |pi0 r0 sin(phi0) - pi1 s0 sin(phi1)| - r0 s0 cos(phi0) cos(phi1)) / (4 |d0|).
inline double optimal_minimax_risk(const LocalFrame& f) {
    const double asym = std::abs(f.pi0 * f.r0_norm * f.sin_phi0 - f.pi1() * f.s0_norm * f.sin_phi1);
    const double numerator = 2.0 + 2.0 * asym - f.r0_norm * f.s0_norm * f.cos_phi0 * f.cos_phi1;
    return numerator / (4.0 * f.d0_norm);
}

/// Heterodyne plug-in strategy based on optimal state estimation.
inline double plugin_risk(const LocalFrame& f) {
    const double r = f.r0_norm;
    const double s = f.s0_norm;
    const double sin0 = f.sin_phi0 * f.sin_phi0;
    const double sin1 = f.sin_phi1 * f.sin_phi1;
    const double cos0 = f.cos_phi0 * f.cos_phi0;
    const double cos1 = f.cos_phi1 * f.cos_phi1;
    const double numerator =
        2.0 + f.pi0 * (r * sin0 + r - r * r * cos0) + f.pi1() * (s * sin1 + s - s * s * cos1);
    return numerator / (4.0 * f.d0_norm);
}

/// pi0 r0 (1 +/- sin phi0)^2 + pi1 s0 (1 -/+ sin phi1)^2; upper_sign selects (+, -).
inline double gap_numerator(const LocalFrame& f, bool upper_sign) {
    const double sign = upper_sign ? 1.0 : -1.0;
    const double t0 = 1.0 + sign * f.sin_phi0;
    const double t1 = 1.0 - sign * f.sin_phi1;
    return f.pi0 * f.r0_norm * t0 * t0 + f.pi1() * f.s0_norm * t1 * t1;
}

/// plugin_risk - optimal_minimax_risk from the gap formula. The lower sign pair
/// applies when c > 0 and the upper one otherwise; at c = 0 both coincide.
inline double risk_gap(const LocalFrame& f) {
    return gap_numerator(f, !(commutator_c(f) > 0.0)) / (4.0 * f.d0_norm);
}

/// Extra risk when the priors are estimated from label counts:
/// pi0 pi1 |(r0 + s0)_perp|^2 / (4 |d0|).
inline double prior_correction(const LocalFrame& f) {
    const auto w = prior_direction_perp(f);
    return f.pi0 * f.pi1() * (w.z_l * w.z_l + w.z_k * w.z_k) / (4.0 * f.d0_norm);
}

struct RiskReport {
    double classical_term = 0.0;
    double quantum_term = 0.0;
    double commutator_c = 0.0;
    double optimal_risk = 0.0;
    double plugin_risk = 0.0;
    double gap = 0.0;
    double prior_correction = 0.0;

    double unknown_priors_risk() const { return optimal_risk + prior_correction; }
};

inline RiskReport make_risk_report(const LocalFrame& f) {
    return {classical_risk_term(f), quantum_risk_term(f), commutator_c(f), optimal_minimax_risk(f),
            plugin_risk(f),         risk_gap(f),          prior_correction(f)};
}

}  // namespace qclass
