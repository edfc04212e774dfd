// Walks through the library on one configuration: Helstrom measurement,
// asymptotic risk constants, the Gaussian limit model and a finite-n run.

#include <cstdio>

#include "qclass/asymptotics.hpp"
#include "qclass/gaussian_model.hpp"
#include "qclass/helstrom.hpp"
#include "qclass/qubit_experiment.hpp"

int main() {
    using namespace qclass;

    const BlochVector r0(0.8, 0.0, 0.0);
    const BlochVector s0(0.0, 0.6, 0.0);
    const double pi0 = 0.5;

    const auto problem = ClassificationProblem::from_bloch(r0, s0, pi0);
    const Projector p_star = helstrom_projector(problem);
    const Vec3 p = p_star.bloch();
    std::printf("Helstrom projector Bloch vector: (%.4f, %.4f, %.4f)\n", p.x, p.y, p.z);
    std::printf("Helstrom risk: %.4f\n", helstrom_risk(problem));

    const auto verdict = triviality_check(r0, s0, pi0);
    std::printf("verdict: %s\n", std::string(to_string(verdict.kind)).c_str());

    const LocalFrame frame = build_frame(r0, s0, pi0);
    const RiskReport report = make_risk_report(frame);
    std::printf("optimal %.4f  plug-in %.4f  gap %.4f  prior correction %.4f\n", report.optimal_risk,
                report.plugin_risk, report.gap, report.prior_correction);

    for (auto kind : {StrategyKind::OptimalJoint, StrategyKind::HeterodynePlugin}) {
        const auto mc = monte_carlo_risk(kind, frame, {0.2, -0.1, 0.3}, {0.0, 0.5, 0.0}, {200000, 1, 0, 0.0});
        std::printf("%-20s MC %.4f +- %.4f  closed form %.4f\n", std::string(to_string(kind)).c_str(),
                    mc.mean_rescaled_excess, mc.std_error, closed_form_risk(kind, frame));
    }

    const TrainingSetSpec spec{0, problem, LabelMode::FixedCounts, false, false};
    for (const auto& point : rescaled_risk_curve(spec, {100, 1000, 10000}, 2000, 7, 0)) {
        std::printf("n = %6llu  n * excess = %.3f +- %.3f\n", static_cast<unsigned long long>(point.n),
                    point.mean_rescaled_excess, point.std_error);
    }
    std::printf("delta-method constant: %.4f\n", tomography_delta_constant(frame, LabelMode::FixedCounts, false));
}
