#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qclass/monte_carlo.hpp"

namespace qclass {
namespace {

TrialOutcome normal_trial(std::uint64_t, Rng& rng) {
    std::normal_distribution<double> g(1.0, 2.0);
    const double x = g(rng);
    return {x, x > 1.0, x > 3.0};
}

TEST(DeriveSeed, DistinctStreams) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(RunTrials, IndependentOfThreadCount) {
    const auto a = run_trials(50000, 9, 1, normal_trial);
    for (unsigned t : {2u, 3u, 8u}) {
        const auto b = run_trials(50000, 9, t, normal_trial);
        EXPECT_EQ(a.count, b.count);
        EXPECT_EQ(a.mean, b.mean);
        EXPECT_EQ(a.m2, b.m2);
        EXPECT_EQ(a.exact, b.exact);
        EXPECT_EQ(a.clipped, b.clipped);
    }
}

TEST(RunTrials, SeedChangesResult) {
    EXPECT_NE(run_trials(1000, 1, 1, normal_trial).mean, run_trials(1000, 2, 1, normal_trial).mean);
}

TEST(RunTrials, MomentsOfKnownDistribution) {
    const auto s = run_trials(200000, 10, 0, normal_trial);
    EXPECT_NEAR(s.mean, 1.0, 4 * 2.0 / std::sqrt(200000.0));
    EXPECT_NEAR(s.variance(), 4.0, 0.05);
    EXPECT_NEAR(double(s.exact) / double(s.count), 0.5, 0.005);
}

TEST(RunTrials, RejectsZeroTrials) { EXPECT_THROW(run_trials(0, 1, 1, normal_trial), PreconditionError); }

TEST(RunTrials, PropagatesExceptions) {
    auto bad = [](std::uint64_t i, Rng&) -> TrialOutcome {
        if (i == 9000) throw NumericalError("boom");
        return {};
    };
    EXPECT_THROW(run_trials(20000, 1, 4, bad), NumericalError);
    EXPECT_THROW(run_trials(20000, 1, 1, bad), NumericalError);
}

TEST(TrialSummary, WelfordMatchesTwoPass) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    std::vector<double> xs(1001);
    for (auto& x : xs) x = u(rng);
    TrialSummary left, right, all;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        all.add({xs[i]});
        (i < 400 ? left : right).add({xs[i]});
    }
    left.merge(right);
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= double(xs.size());
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / double(xs.size() - 1);
    EXPECT_NEAR(all.mean, mean, 1e-12);
    EXPECT_NEAR(all.variance(), var, 1e-10);
    EXPECT_NEAR(left.mean, mean, 1e-12);
    EXPECT_NEAR(left.variance(), var, 1e-10);
    EXPECT_EQ(left.count, xs.size());
}

TEST(ToExperimentResult, Scales) {
    TrialSummary s;
    s.add({1.0, true, false});
    s.add({3.0, false, true});
    const auto r = to_experiment_result(s, 10, 10.0);
    EXPECT_DOUBLE_EQ(r.mean_rescaled_excess, 20.0);
    EXPECT_DOUBLE_EQ(r.std_error, 10.0);
    EXPECT_DOUBLE_EQ(r.fraction_exact, 0.5);
    EXPECT_DOUBLE_EQ(r.fraction_clipped, 0.5);
    EXPECT_DOUBLE_EQ(r.fraction_nonzero(), 0.5);
}

}  // namespace
}  // namespace qclass
