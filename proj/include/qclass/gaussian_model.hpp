// Limit Gaussian shift model of the training set and the two learning strategies.
//
// The model has two classical components
//   X_r ~ N(sqrt(pi0) u3, 1 - r0^2),   X_s ~ N(sqrt(pi1) v3, 1 - s0^2)
// and two displaced thermal modes with quadrature means
//   (sqrt(pi0/(2 r0)) u1, sqrt(pi0/(2 r0)) u2),  variance 1/(2 r0) per quadrature,
// and analogously for (pi1, s0, v). Measurement outcomes of linear observables
// of Gaussian states are Gaussian, so they are sampled directly.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "qclass/asymptotics.hpp"
#include "qclass/local_geometry.hpp"
#include "qclass/monte_carlo.hpp"

namespace qclass {

struct GaussianShiftModel {
    double mean_xr = 0.0, var_xr = 0.0;
    double mean_xs = 0.0, var_xs = 0.0;
    double mode1_q_mean = 0.0, mode1_p_mean = 0.0, mode1_var = 0.0;
    double mode2_q_mean = 0.0, mode2_p_mean = 0.0, mode2_var = 0.0;
    // Mean maps u1 -> q1 and v1 -> q2: sqrt(pi0/(2 r0)) and sqrt(pi1/(2 s0)).
    double mode1_scale = 0.0, mode2_scale = 0.0;
};

/// Heterodyne record of both modes plus the classical samples.
struct HeterodyneRecord {
    double x_r = 0.0, x_s = 0.0;
    double q1 = 0.0, p1 = 0.0, q2 = 0.0, p2 = 0.0;
};

/// Outcome of the optimal joint measurement of (Q^(l), Q^(k)) plus the classical samples.
struct JointRecord {
    double x_r = 0.0, x_s = 0.0;
    double y_l = 0.0, y_k = 0.0;
};

enum class StrategyKind { OptimalJoint, HeterodynePlugin, OptimalJointUnknownPriors };

inline std::string_view to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::OptimalJoint: return "optimal-joint";
        case StrategyKind::HeterodynePlugin: return "heterodyne-plugin";
        case StrategyKind::OptimalJointUnknownPriors: return "optimal-joint-unknown-priors";
    }
    return "unknown";
}

/// `u` and `v` are in frame coordinates (a- and b-frames).
inline GaussianShiftModel build_gaussian_model(const LocalFrame& f, const Vec3& u, const Vec3& v) {
    if (!(f.r0_norm > 0.0) || !(f.s0_norm > 0.0))
        throw PreconditionError("Gaussian model needs r0 > 0 and s0 > 0 (thermal variance 1/(2r))");
    const double pi0 = f.pi0;
    const double pi1 = f.pi1();
    GaussianShiftModel m;
    m.mean_xr = std::sqrt(pi0) * u.z;
    m.var_xr = std::max(0.0, 1.0 - f.r0_norm * f.r0_norm);
    m.mean_xs = std::sqrt(pi1) * v.z;
    m.var_xs = std::max(0.0, 1.0 - f.s0_norm * f.s0_norm);
    m.mode1_scale = std::sqrt(pi0 / (2.0 * f.r0_norm));
    m.mode2_scale = std::sqrt(pi1 / (2.0 * f.s0_norm));
    m.mode1_q_mean = m.mode1_scale * u.x;
    m.mode1_p_mean = m.mode1_scale * u.y;
    m.mode1_var = 1.0 / (2.0 * f.r0_norm);
    m.mode2_q_mean = m.mode2_scale * v.x;
    m.mode2_p_mean = m.mode2_scale * v.y;
    m.mode2_var = 1.0 / (2.0 * f.s0_norm);
    return m;
}

namespace detail {

// Zero variance gives the mean exactly (pure-state classical component).
template <class Rng>
double sample_normal(double mean, double variance, Rng& rng) {
    if (variance <= 0.0) return mean;
    std::normal_distribution<double> dist(mean, std::sqrt(variance));
    return dist(rng);
}

}  // namespace detail

/// Heterodyne adds 1/2 to each quadrature variance.
template <class Rng>
HeterodyneRecord sample_heterodyne(const GaussianShiftModel& m, Rng& rng) {
    HeterodyneRecord rec;
    rec.x_r = detail::sample_normal(m.mean_xr, m.var_xr, rng);
    rec.x_s = detail::sample_normal(m.mean_xs, m.var_xs, rng);
    rec.q1 = detail::sample_normal(m.mode1_q_mean, m.mode1_var + 0.5, rng);
    rec.p1 = detail::sample_normal(m.mode1_p_mean, m.mode1_var + 0.5, rng);
    rec.q2 = detail::sample_normal(m.mode2_q_mean, m.mode2_var + 0.5, rng);
    rec.p2 = detail::sample_normal(m.mode2_p_mean, m.mode2_var + 0.5, rng);
    return rec;
}

/// Means and variances of Q^(l) = sqrt(2 r0 pi0) sin(phi0) Q1 + sqrt(2 s0 pi1) sin(phi1) Q2
/// and Q^(k) = sqrt(2 r0 pi0) P1 - sqrt(2 s0 pi1) P2 in the given model.
struct CanonicalPair {
    double mean_l = 0.0, var_l = 0.0;
    double mean_k = 0.0, var_k = 0.0;
};

inline CanonicalPair canonical_pair(const GaussianShiftModel& m, const LocalFrame& f) {
    const double w1 = std::sqrt(2.0 * f.r0_norm * f.pi0);
    const double w2 = std::sqrt(2.0 * f.s0_norm * f.pi1());
    const double cl1 = w1 * f.sin_phi0;
    const double cl2 = w2 * f.sin_phi1;
    return {cl1 * m.mode1_q_mean + cl2 * m.mode2_q_mean, cl1 * cl1 * m.mode1_var + cl2 * cl2 * m.mode2_var,
            w1 * m.mode1_p_mean - w2 * m.mode2_p_mean, w1 * w1 * m.mode1_var + w2 * w2 * m.mode2_var};
}

/// Optimal joint measurement: each outcome carries its observable's variance plus
/// |c|/2 of ancilla noise, the split minimising the summed MSE.
template <class Rng>
JointRecord sample_optimal_joint(const GaussianShiftModel& m, const LocalFrame& f, Rng& rng) {
    const CanonicalPair q = canonical_pair(m, f);
    const double penalty = 0.5 * std::abs(commutator_c(f));
    JointRecord rec;
    rec.x_r = detail::sample_normal(m.mean_xr, m.var_xr, rng);
    rec.x_s = detail::sample_normal(m.mean_xs, m.var_xs, rng);
    rec.y_l = detail::sample_normal(q.mean_l, q.var_l + penalty, rng);
    rec.y_k = detail::sample_normal(q.mean_k, q.var_k + penalty, rng);
    return rec;
}

/// z_hat = (sqrt(pi0) cos(phi0) X_r - sqrt(pi1) cos(phi1) X_s + y_l, y_k).
inline PerpEstimate optimal_estimate(const JointRecord& rec, const LocalFrame& f) {
    const double classical =
        std::sqrt(f.pi0) * f.cos_phi0 * rec.x_r - std::sqrt(f.pi1()) * f.cos_phi1 * rec.x_s;
    return {classical + rec.y_l, rec.y_k};
}

/// Inverts the mean maps to get (u~, v~) and returns (pi0 u~ - pi1 v~)_perp.
inline PerpEstimate plugin_estimate(const HeterodyneRecord& rec, const GaussianShiftModel& m, const LocalFrame& f) {
    const Vec3 u{rec.q1 / m.mode1_scale, rec.p1 / m.mode1_scale, rec.x_r / std::sqrt(f.pi0)};
    const Vec3 v{rec.q2 / m.mode2_scale, rec.p2 / m.mode2_scale, rec.x_s / std::sqrt(f.pi1())};
    return relative_perp(u, v, f);
}

struct MonteCarloOptions {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double delta = 0.0;  // local prior parameter, used by OptimalJointUnknownPriors
};

/// Empirical mean and standard error of the quadratic loss of `strategy` at (u, v).
///
/// For OptimalJointUnknownPriors the training set also yields Z ~ N(delta, pi0 pi1),
/// the loss target becomes z_perp + delta w and the estimate z_hat + Z w, with
/// w = (r0 + s0)_perp.
inline ExperimentResult monte_carlo_risk(StrategyKind strategy, const LocalFrame& f, const Vec3& u, const Vec3& v,
                                         const MonteCarloOptions& opt) {
    const GaussianShiftModel model = build_gaussian_model(f, u, v);
    const PerpEstimate z_perp = relative_perp(u, v, f);
    const PerpEstimate w = prior_direction_perp(f);
    const double prior_var = f.pi0 * f.pi1();

    auto trial = [&](std::uint64_t, Rng& rng) -> TrialOutcome {
        switch (strategy) {
            case StrategyKind::HeterodynePlugin: {
                const auto rec = sample_heterodyne(model, rng);
                return {quadratic_loss(z_perp, plugin_estimate(rec, model, f), f.d0_norm)};
            }
            case StrategyKind::OptimalJoint: {
                const auto rec = sample_optimal_joint(model, f, rng);
                return {quadratic_loss(z_perp, optimal_estimate(rec, f), f.d0_norm)};
            }
            case StrategyKind::OptimalJointUnknownPriors: {
                const auto rec = sample_optimal_joint(model, f, rng);
                const double z_prior = detail::sample_normal(opt.delta, prior_var, rng);
                PerpEstimate est = optimal_estimate(rec, f);
                est.z_l += z_prior * w.z_l;
                est.z_k += z_prior * w.z_k;
                const PerpEstimate target{z_perp.z_l + opt.delta * w.z_l, z_perp.z_k + opt.delta * w.z_k};
                return {quadratic_loss(target, est, f.d0_norm)};
            }
        }
        throw PreconditionError("unknown strategy");
    };
    return to_experiment_result(run_trials(opt.trials, opt.seed, opt.threads, trial), 0, 1.0);
}

/// Closed-form constant that monte_carlo_risk converges to.
inline double closed_form_risk(StrategyKind strategy, const LocalFrame& f) {
    switch (strategy) {
        case StrategyKind::OptimalJoint: return optimal_minimax_risk(f);
        case StrategyKind::HeterodynePlugin: return plugin_risk(f);
        case StrategyKind::OptimalJointUnknownPriors: return optimal_minimax_risk(f) + prior_correction(f);
    }
    throw PreconditionError("unknown strategy");
}

}  // namespace qclass
