#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qclass/asymptotics.hpp"
#include "test_support.hpp"

namespace qclass {
namespace {

LocalFrame frame(Vec3 r, Vec3 s, double pi0) { return build_frame(BlochVector(r), BlochVector(s), pi0); }

TEST(Asymptotics, AntipodalPure) {
    const auto f = frame({0, 0, 1}, {0, 0, -1}, 0.5);
    EXPECT_NEAR(optimal_minimax_risk(f), 0.5, 1e-12);
    EXPECT_NEAR(plugin_risk(f), 1.0, 1e-12);
    EXPECT_NEAR(risk_gap(f), 0.5, 1e-12);
    EXPECT_NEAR(prior_correction(f), 0.0, 1e-12);
}

TEST(Asymptotics, ParallelSameDirection) {
    const auto f = frame({0, 0, 0.9}, {0, 0, 0.3}, 0.5);
    EXPECT_NEAR(optimal_minimax_risk(f), 8.0 / 3.0, 1e-12);
    EXPECT_NEAR(plugin_risk(f), 8.0 / 3.0, 1e-12);
    EXPECT_NEAR(risk_gap(f), 0.0, 1e-12);
}

TEST(Asymptotics, PlanarConfiguration) {
    const auto f = frame({0.8, 0, 0}, {0, 0.6, 0}, 0.5);
    EXPECT_NEAR(classical_risk_term(f), 0.2696, 1e-12);
    EXPECT_NEAR(quantum_risk_term(f), 1.78, 1e-12);
    EXPECT_NEAR(commutator_c(f), 0.28, 1e-12);
    EXPECT_NEAR(optimal_minimax_risk(f), 1.0248, 1e-12);
    EXPECT_NEAR(plugin_risk(f), 1.4168, 1e-12);
    EXPECT_NEAR(risk_gap(f), 0.392, 1e-12);
    EXPECT_NEAR(prior_correction(f), 0.1152, 1e-12);

    const auto rep = make_risk_report(f);
    EXPECT_NEAR(rep.unknown_priors_risk(), 1.0248 + 0.1152, 1e-12);
}

TEST(Asymptotics, IdentitiesOnRandomConfigurations) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 10000; ++i) {
        const auto c = testing::random_nontrivial(rng);
        const auto f = build_frame(c.r0, c.s0, c.pi0);
        const double scale = 4.0 * f.d0_norm;
        const double opt = optimal_minimax_risk(f);
        EXPECT_NEAR(opt, (classical_risk_term(f) + quantum_risk_term(f)) / scale, 1e-9 * std::max(1.0, opt));
        const double plug = plugin_risk(f);
        EXPECT_NEAR(plug - opt, risk_gap(f), 1e-9 * std::max(1.0, plug));
        EXPECT_GE(risk_gap(f), -1e-12);
        EXPECT_GE(prior_correction(f), 0.0);
        EXPECT_NEAR(gap_numerator(f, true) - gap_numerator(f, false), 2.0 * commutator_c(f), 1e-12);
    }
}

TEST(Asymptotics, GapVanishesForParallelSameDirection) {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> len(0.05, 1.0), prior(0.05, 0.95);
    int checked = 0;
    while (checked < 500) {
        const Vec3 dir = testing::random_unit(rng);
        const double pi0 = prior(rng);
        const Vec3 r = len(rng) * dir, s = len(rng) * dir;
        if (triviality_check(BlochVector(r), BlochVector(s), pi0).kind != TrivialityKind::Nontrivial) continue;
        EXPECT_NEAR(risk_gap(frame(r, s, pi0)), 0.0, 1e-12);
        ++checked;
    }
}

TEST(Asymptotics, GapPositiveAwayFromParallel) {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 2000; ++i) {
        const auto c = testing::random_nontrivial(rng);
        const auto f = build_frame(c.r0, c.s0, c.pi0);
        const double cosang = dot(c.r0.vec(), c.s0.vec()) / (c.r0.length() * c.s0.length());
        if (cosang > 1.0 - 1e-6) continue;
        EXPECT_GT(risk_gap(f), 0.0);
    }
}

// Numerator of the gap, before the 1/(4 |d0|) normalisation.
double selected_gap_numerator(const LocalFrame& f) { return 4.0 * f.d0_norm * risk_gap(f); }

TEST(Asymptotics, GapNumeratorLargestForAntiparallelPureStates) {
    const double pi = std::acos(-1.0);
    double best = -1.0, best_angle = -1.0;
    for (int k = 1; k <= 180; ++k) {
        const double a = pi * k / 180.0;
        const double g = selected_gap_numerator(frame({0, 0, 1}, {std::sin(a), 0, std::cos(a)}, 0.5));
        if (g > best) {
            best = g;
            best_angle = a;
        }
    }
    EXPECT_NEAR(best_angle, pi, 1e-12);
    EXPECT_NEAR(best, 2.0, 1e-12);
}

TEST(Asymptotics, GapNumeratorBoundedByAntiparallelPureValue) {
    std::mt19937_64 rng(34);
    for (double pi0 : {0.2, 0.5, 0.7}) {
        const double bound = selected_gap_numerator(frame({0, 0, 1}, {0, 0, -1}, pi0));
        for (int i = 0; i < 5000; ++i) {
            const auto c = testing::random_nontrivial(rng, 0.05, 1.0, 1e-3, pi0, pi0);
            EXPECT_LE(selected_gap_numerator(build_frame(c.r0, c.s0, c.pi0)), bound + 1e-12);
        }
    }
}

TEST(Asymptotics, SignChoiceIrrelevantWhenCommutatorVanishes) {
    // pi0 r0 sin(phi0) = pi1 s0 sin(phi1) for a symmetric antiparallel pair.
    const auto f = frame({0, 0, 0.5}, {0, 0, -0.5}, 0.5);
    EXPECT_NEAR(commutator_c(f), 0.0, 1e-15);
    EXPECT_NEAR(gap_numerator(f, true), gap_numerator(f, false), 1e-15);
}

}  // namespace
}  // namespace qclass
