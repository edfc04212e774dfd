// Seeded, thread-count independent Monte Carlo trial runner.
//
// Trials are grouped into fixed blocks of kTrialBlock consecutive indices.
// Block b draws from a std::mt19937_64 seeded with derive_seed(seed, b), runs
// its trials in index order and summarises them with Welford accumulators.
// Block summaries are merged in block order, so the result is bit-identical
// for any number of worker threads.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "qclass/errors.hpp"

namespace qclass {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kTrialBlock = 4096;

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream seed for (seed, stream).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// One trial's contribution.
struct TrialOutcome {
    double value = 0.0;
    bool exact = false;
    bool clipped = false;
};

/// Mean and standard error of the trial values plus flag frequencies.
struct TrialSummary {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    std::uint64_t exact = 0;
    std::uint64_t clipped = 0;

    void add(const TrialOutcome& t) {
        ++count;
        const double delta = t.value - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (t.value - mean);
        exact += t.exact ? 1 : 0;
        clipped += t.clipped ? 1 : 0;
    }

    void merge(const TrialSummary& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double n = static_cast<double>(count + o.count);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / n;
        m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
        count += o.count;
        exact += o.exact;
        clipped += o.clipped;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double std_error() const { return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

/// Outcome of a seeded experiment. n = 0 for the Gaussian limit model.
struct ExperimentResult {
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    double mean_rescaled_excess = 0.0;
    double std_error = 0.0;
    double fraction_exact = 0.0;
    double fraction_clipped = 0.0;

    double fraction_nonzero() const { return 1.0 - fraction_exact; }
};

inline unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs trial(index, rng) -> TrialOutcome for index in [0, trials).
/// threads = 0 uses the hardware concurrency.
template <class TrialFn>
TrialSummary run_trials(std::uint64_t trials, std::uint64_t seed, unsigned threads, TrialFn trial) {
    if (trials < 1) throw PreconditionError("trials must be >= 1");
    const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<TrialSummary> block_summaries(blocks);

    auto run_block = [&](std::uint64_t b) {
        Rng rng(derive_seed(seed, b));
        TrialSummary s;
        const std::uint64_t end = std::min(trials, (b + 1) * kTrialBlock);
        for (std::uint64_t i = b * kTrialBlock; i < end; ++i) s.add(trial(i, rng));
        block_summaries[b] = s;
    };

    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), blocks));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t b = next++; b < blocks; b = next++) {
                    try {
                        run_block(b);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = blocks;
                    }
                }
            });
        }
        pool.clear();
        if (failure) std::rethrow_exception(failure);
    }

    TrialSummary total;
    for (const auto& s : block_summaries) total.merge(s);
    return total;
}

/// Converts a summary of per-trial excess risks into an ExperimentResult scaled by `scale`.
inline ExperimentResult to_experiment_result(const TrialSummary& s, std::uint64_t n, double scale) {
    ExperimentResult r;
    r.n = n;
    r.trials = s.count;
    r.mean_rescaled_excess = scale * s.mean;
    r.std_error = scale * s.std_error();
    r.fraction_exact = static_cast<double>(s.exact) / static_cast<double>(s.count);
    r.fraction_clipped = static_cast<double>(s.clipped) / static_cast<double>(s.count);
    return r;
}

}  // namespace qclass
