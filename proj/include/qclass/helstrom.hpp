// Helstrom (oracle) classifier for two known qubit states with priors.

#pragma once

#include <cmath>
#include <string_view>

#include "qclass/qubit.hpp"

namespace qclass {

/// Two states with prior pi0 for rho and pi1 = 1 - pi0 for sigma.
class ClassificationProblem {
public:
    ClassificationProblem(const DensityMatrix& rho, const DensityMatrix& sigma, double pi0)
        : rho_(rho), sigma_(sigma), pi0_(pi0) {
        if (!(pi0 > 0.0 && pi0 < 1.0)) throw PreconditionError("prior pi0 must lie in (0, 1)");
    }
    static ClassificationProblem from_bloch(const BlochVector& r, const BlochVector& s, double pi0) {
        return {bloch_to_density(r), bloch_to_density(s), pi0};
    }

    const DensityMatrix& rho() const { return rho_; }
    const DensityMatrix& sigma() const { return sigma_; }
    double pi0() const { return pi0_; }
    double pi1() const { return 1.0 - pi0_; }
    BlochVector r() const { return density_to_bloch(rho_); }
    BlochVector s() const { return density_to_bloch(sigma_); }

    /// pi0 rho - pi1 sigma; its positive part is the Helstrom projector.
    HermitianOperator weighted_difference() const { return pi0_ * rho_.op() - pi1() * sigma_.op(); }

private:
    DensityMatrix rho_;
    DensityMatrix sigma_;
    double pi0_;
};

enum class TrivialityKind { Nontrivial, TrivialGuessRho, TrivialGuessSigma, Degenerate };

struct TrivialityVerdict {
    TrivialityKind kind;
    double weighted_distance;  // |pi0 r0 - pi1 s0|
    double prior_gap;          // |pi0 - pi1|
};

inline std::string_view to_string(TrivialityKind k) {
    switch (k) {
        case TrivialityKind::Nontrivial: return "Nontrivial";
        case TrivialityKind::TrivialGuessRho: return "TrivialGuessRho";
        case TrivialityKind::TrivialGuessSigma: return "TrivialGuessSigma";
        case TrivialityKind::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

/// Nontrivial iff |pi0 r0 - pi1 s0| > |pi0 - pi1|; the boundary (within 1e-12)
/// is reported as Degenerate. Below it the Helstrom projector is 0 or I.
inline TrivialityVerdict triviality_check(const BlochVector& r0, const BlochVector& s0, double pi0) {
    if (!(pi0 > 0.0 && pi0 < 1.0)) throw PreconditionError("prior pi0 must lie in (0, 1)");
    const double pi1 = 1.0 - pi0;
    const double lhs = norm(pi0 * r0.vec() - pi1 * s0.vec());
    const double rhs = std::abs(pi0 - pi1);
    TrivialityKind kind;
    if (std::abs(lhs - rhs) <= kStateTolerance)
        kind = TrivialityKind::Degenerate;
    else if (lhs > rhs)
        kind = TrivialityKind::Nontrivial;
    else
        kind = pi0 > pi1 ? TrivialityKind::TrivialGuessRho : TrivialityKind::TrivialGuessSigma;
    return {kind, lhs, rhs};
}

inline Projector helstrom_projector(const ClassificationProblem& p) {
    const auto diff = p.weighted_difference().pauli();
    if (norm(diff.vector) <= kStateTolerance && std::abs(diff.scalar) <= kStateTolerance)
        throw DegenerateProblemError("equal priors and identical states: no unique Helstrom projector");
    return positive_eigenprojector(p.weighted_difference());
}

/// (1 - Tr|pi1 sigma - pi0 rho|) / 2.
inline double helstrom_risk(const ClassificationProblem& p) {
    return 0.5 * (1.0 - trace_norm(p.pi1() * p.sigma().op() - p.pi0() * p.rho().op()));
}

/// pi0 Tr[rho (1 - P)] + pi1 Tr[sigma P].
inline double error_probability(const Projector& p_hat, const ClassificationProblem& p) {
    return p.pi0() * (1.0 - expectation(p.rho(), p_hat)) + p.pi1() * expectation(p.sigma(), p_hat);
}

/// Tr[(pi1 sigma - pi0 rho)(P_hat - P*)], evaluated on the Pauli coordinates of
/// the projector difference so that no two error probabilities are subtracted.
inline double excess_risk(const Projector& p_hat, const ClassificationProblem& p) {
    const HermitianOperator a = p.pi1() * p.sigma().op() - p.pi0() * p.rho().op();
    const Projector p_star = positive_eigenprojector(p.weighted_difference());
    const auto ph = p_hat.pauli();
    const auto ps = p_star.pauli();
    return trace_product(a.pauli(), PauliDecomposition{ph.scalar - ps.scalar, ph.vector - ps.vector});
}

}  // namespace qclass
