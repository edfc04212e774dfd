// Finite-n simulation of the plug-in classifier built from per-copy Pauli
// tomography, with exact excess-risk evaluation, plus two classical baselines.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "qclass/asymptotics.hpp"
#include "qclass/helstrom.hpp"
#include "qclass/monte_carlo.hpp"

namespace qclass {

enum class LabelMode { RandomLabels, FixedCounts };

inline std::string_view to_string(LabelMode m) {
    return m == LabelMode::RandomLabels ? "random-labels" : "fixed-counts";
}

struct TrainingSetSpec {
    std::uint64_t n = 0;
    ClassificationProblem problem;
    LabelMode label_mode = LabelMode::RandomLabels;
    bool known_priors = false;  // use pi0 instead of n0/n in the plug-in
    bool localize = false;      // two-stage localisation with epsilon = kLocalizationEpsilon
};

inline constexpr double kLocalizationEpsilon = 0.1;

/// (n0, n1) with n0 ~ Binomial(n, pi0), or n0 = round(pi0 n) for FixedCounts.
template <class Rng>
std::pair<std::uint64_t, std::uint64_t> sample_labels(std::uint64_t n, double pi0, LabelMode mode, Rng& rng) {
    if (n < 1) throw PreconditionError("training set size n must be >= 1");
    if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw PreconditionError("prior pi0 must lie in [0, 1]");
    std::uint64_t n0;
    if (mode == LabelMode::FixedCounts) {
        n0 = static_cast<std::uint64_t>(std::llround(pi0 * static_cast<double>(n)));
    } else if (pi0 <= 0.0 || pi0 >= 1.0) {
        n0 = pi0 >= 1.0 ? n : 0;
    } else {
        std::binomial_distribution<std::uint64_t> dist(n, pi0);
        n0 = dist(rng);
    }
    return {n0, n - n0};
}

/// Number of +1 outcomes among m single-shot measurements of axis.sigma;
/// distributed as a sum of m independent sample_pauli draws.
template <class Rng>
std::uint64_t count_pauli_plus(const BlochVector& r, const Vec3& axis, std::uint64_t m, Rng& rng) {
    const double p_plus = std::clamp(0.5 * (1.0 + dot(r.vec(), axis)), 0.0, 1.0);
    if (m == 0 || p_plus <= 0.0) return 0;
    if (p_plus >= 1.0) return m;
    std::binomial_distribution<std::uint64_t> dist(m, p_plus);
    return dist(rng);
}

struct TomographyEstimate {
    BlochVector estimate;
    bool clipped = false;
};

/// Copies per Pauli axis: equal thirds, remainder to x then y.
inline std::array<std::uint64_t, 3> pauli_allocation(std::uint64_t m) {
    const std::uint64_t base = m / 3;
    const std::uint64_t rem = m % 3;
    return {base + (rem >= 1 ? 1 : 0), base + (rem >= 2 ? 1 : 0), base};
}

/// Per-copy Pauli tomography from m copies; estimates outside the ball are
/// rescaled onto the unit sphere.
template <class Rng>
TomographyEstimate tomographic_estimate(const BlochVector& r, std::uint64_t m, Rng& rng) {
    if (m < 3) throw PreconditionError("tomography needs at least 3 copies");
    const auto alloc = pauli_allocation(m);
    const std::array<Vec3, 3> axes{kAxisX, kAxisY, kAxisZ};
    std::array<double, 3> coord{};
    for (int j = 0; j < 3; ++j) {
        const std::uint64_t plus = count_pauli_plus(r, axes[j], alloc[j], rng);
        coord[j] = (2.0 * static_cast<double>(plus) - static_cast<double>(alloc[j])) / static_cast<double>(alloc[j]);
    }
    Vec3 raw{coord[0], coord[1], coord[2]};
    const double len = norm(raw);
    if (len > 1.0) return {BlochVector(raw / len), true};
    return {BlochVector(raw), false};
}

namespace detail {

// Rough estimate from m^(1-eps) copies, refined estimate from the rest, the
// refined one confined to the ball of radius m^(-1/2+eps) around the rough one.
template <class Rng>
TomographyEstimate localized_estimate(const BlochVector& r, std::uint64_t m, Rng& rng) {
    const auto rough_copies = std::max<std::uint64_t>(
        3, static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(m), 1.0 - kLocalizationEpsilon))));
    if (m < rough_copies + 3) throw PreconditionError("too few copies for two-stage localisation");
    const auto rough = tomographic_estimate(r, rough_copies, rng);
    auto refined = tomographic_estimate(r, m - rough_copies, rng);
    const double radius = std::pow(static_cast<double>(m), -0.5 + kLocalizationEpsilon);
    const Vec3 offset = refined.estimate.vec() - rough.estimate.vec();
    if (norm(offset) > radius) {
        Vec3 moved = rough.estimate.vec() + (radius / norm(offset)) * offset;
        const double len = norm(moved);
        if (len > 1.0) moved = moved / len;
        return {BlochVector(moved), refined.clipped || rough.clipped};
    }
    return {refined.estimate, refined.clipped || rough.clipped};
}

}  // namespace detail

struct PluginRunResult {
    double excess = 0.0;
    bool exact = false;    // P_hat equals the Helstrom projector
    bool clipped = false;  // some tomography estimate hit the sphere
};

inline bool same_projector(const Projector& a, const Projector& b) {
    if (a.rank() != b.rank()) return false;
    return a.rank() != 1 || norm(a.bloch() - b.bloch()) <= kStateTolerance;
}

/// One training set: tomography of rho and sigma, plug-in projector
/// [pi0^ rho^ - pi1^ sigma^]_+, exact excess risk against the true problem.
template <class Rng>
PluginRunResult plugin_strategy_run(const TrainingSetSpec& spec, Rng& rng) {
    const auto& problem = spec.problem;
    const auto [n0, n1] = sample_labels(spec.n, problem.pi0(), spec.label_mode, rng);
    if (n0 == 0 || n1 == 0) throw DegenerateTrainingSetError("training set lacks copies of one of the states");
    const BlochVector r = problem.r();
    const BlochVector s = problem.s();
    const auto est_r = spec.localize ? detail::localized_estimate(r, n0, rng) : tomographic_estimate(r, n0, rng);
    const auto est_s = spec.localize ? detail::localized_estimate(s, n1, rng) : tomographic_estimate(s, n1, rng);
    const double pi0_hat = spec.known_priors ? problem.pi0() : static_cast<double>(n0) / static_cast<double>(spec.n);
    const HermitianOperator diff =
        pi0_hat * bloch_to_density(est_r.estimate).op() - (1.0 - pi0_hat) * bloch_to_density(est_s.estimate).op();
    const Projector p_hat = positive_eigenprojector(diff);
    const Projector p_star = positive_eigenprojector(problem.weighted_difference());
    return {excess_risk(p_hat, problem), same_projector(p_hat, p_star), est_r.clipped || est_s.clipped};
}

/// One ExperimentResult per n, mean_rescaled_excess = n * mean excess risk.
/// The n-th point uses the stream derive_seed(seed, n).
inline std::vector<ExperimentResult> rescaled_risk_curve(const TrainingSetSpec& templ,
                                                         const std::vector<std::uint64_t>& n_list,
                                                         std::uint64_t trials, std::uint64_t seed,
                                                         unsigned threads = 1) {
    if (n_list.empty()) throw PreconditionError("n_list must not be empty");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw PreconditionError("n_list must be strictly ascending");
    std::vector<ExperimentResult> out;
    out.reserve(n_list.size());
    for (const std::uint64_t n : n_list) {
        TrainingSetSpec spec = templ;
        spec.n = n;
        const auto summary = run_trials(trials, derive_seed(seed, n), threads, [&](std::uint64_t, Rng& rng) {
            const auto run = plugin_strategy_run(spec, rng);
            return TrialOutcome{run.excess, run.exact, run.clipped};
        });
        out.push_back(to_experiment_result(summary, n, static_cast<double>(n)));
    }
    return out;
}

/// Delta-method limit of n * excess risk for the Pauli-tomography plug-in.
/// Each coordinate j of r^ has variance 3 (1 - r_j^2) / (pi0 n); the error of
/// pi0 r^ - pi1 s^ orthogonal to p0 enters the quadratic loss. With random
/// labels and estimated priors the prior fluctuation adds prior_correction.
/// This is a derived quantity for this particular separable scheme.
inline double tomography_delta_constant(const LocalFrame& f, LabelMode mode, bool known_priors) {
    double sum = 0.0;
    for (int j = 0; j < 3; ++j) {
        const double perp_weight = 1.0 - f.p0[j] * f.p0[j];
        sum += perp_weight * (f.pi0 * (1.0 - f.r0[j] * f.r0[j]) + f.pi1() * (1.0 - f.s0[j] * f.s0[j]));
    }
    double c = 3.0 * sum / (4.0 * f.d0_norm);
    if (mode == LabelMode::RandomLabels && !known_priors) c += prior_correction(f);
    return c;
}

// ---------------------------------------------------------------------------
// Classical baselines.

inline double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Error of the threshold rule "label 1 iff x >= t" for N(a,1) vs N(b,1), equal priors.
inline double midpoint_error(double threshold, double a, double b) {
    return 0.5 * (1.0 - standard_normal_cdf(threshold - a)) + 0.5 * standard_normal_cdf(threshold - b);
}

/// Bayes risk Phi(-(b - a)/2).
inline double gaussian_bayes_risk(double a, double b) { return standard_normal_cdf(-0.5 * (b - a)); }

inline double midpoint_excess_risk(double threshold, double a, double b) {
    return midpoint_error(threshold, a, b) - midpoint_error(0.5 * (a + b), a, b);
}

/// Two unit-variance Gaussians with unknown means a < b, equal priors. Each trial
/// draws n labelled samples (through their sufficient statistics n0 and the class
/// means) and thresholds at the estimated midpoint. A class without samples
/// leaves only a constant guess, with error 1/2.
inline ExperimentResult classical_gaussian_example(double a, double b, std::uint64_t n, std::uint64_t trials,
                                                   std::uint64_t seed, unsigned threads = 1) {
    if (!(a < b)) throw PreconditionError("Gaussian example needs a < b");
    if (n < 1) throw PreconditionError("n must be >= 1");
    const double bayes = gaussian_bayes_risk(a, b);
    const auto summary = run_trials(trials, seed, threads, [&](std::uint64_t, Rng& rng) {
        std::binomial_distribution<std::uint64_t> labels(n, 0.5);
        const std::uint64_t n0 = labels(rng);
        const std::uint64_t n1 = n - n0;
        if (n0 == 0 || n1 == 0) return TrialOutcome{0.5 - bayes};
        std::normal_distribution<double> mean0(a, 1.0 / std::sqrt(static_cast<double>(n0)));
        std::normal_distribution<double> mean1(b, 1.0 / std::sqrt(static_cast<double>(n1)));
        const double a_hat = mean0(rng);
        const double b_hat = mean1(rng);
        const double excess = midpoint_excess_risk(0.5 * (a_hat + b_hat), a, b);
        return TrialOutcome{excess, excess == 0.0};
    });
    return to_experiment_result(summary, n, static_cast<double>(n));
}

/// Midpoint-threshold limit n * E[excess] -> (b - a)/4 * phi((b - a)/2).
inline double gaussian_example_constant(double a, double b) {
    const double h = 0.5 * (b - a);
    const double pdf = std::exp(-0.5 * h * h) / std::sqrt(2.0 * std::acos(-1.0));
    return 0.5 * h * pdf;
}

/// Binary feature X with P(X=0) = px0 and regression eta(x) = P(Y=1|x) with
/// eta0 < 1/2 < eta1. The plug-in estimates eta per cell (an empty cell gives
/// eta^ = 1/2) and predicts 1 iff eta^ > 1/2. fraction_exact counts trials with
/// zero excess.
inline ExperimentResult classical_coin_example(double eta0, double eta1, double px0, std::uint64_t n,
                                               std::uint64_t trials, std::uint64_t seed, unsigned threads = 1) {
    if (!(eta0 >= 0.0 && eta0 < 0.5 && eta1 > 0.5 && eta1 <= 1.0))
        throw PreconditionError("coin example needs eta0 < 1/2 < eta1");
    if (!(px0 > 0.0 && px0 < 1.0)) throw PreconditionError("coin example needs 0 < P(X=0) < 1");
    if (n < 1) throw PreconditionError("n must be >= 1");
    const double cost0 = px0 * std::abs(1.0 - 2.0 * eta0);
    const double cost1 = (1.0 - px0) * std::abs(1.0 - 2.0 * eta1);
    const auto summary = run_trials(trials, seed, threads, [&](std::uint64_t, Rng& rng) {
        std::binomial_distribution<std::uint64_t> cells(n, px0);
        const std::uint64_t n_cell0 = cells(rng);
        const std::uint64_t n_cell1 = n - n_cell0;
        auto eta_hat = [&rng](std::uint64_t count, double eta) {
            if (count == 0) return 0.5;
            std::binomial_distribution<std::uint64_t> ones(count, eta);
            return static_cast<double>(ones(rng)) / static_cast<double>(count);
        };
        const bool wrong0 = eta_hat(n_cell0, eta0) > 0.5;   // h*(0) = 0
        const bool wrong1 = !(eta_hat(n_cell1, eta1) > 0.5);  // h*(1) = 1
        const double excess = (wrong0 ? cost0 : 0.0) + (wrong1 ? cost1 : 0.0);
        return TrialOutcome{excess, excess == 0.0};
    });
    return to_experiment_result(summary, n, static_cast<double>(n));
}

}  // namespace qclass
