#include "survopt/joint_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "survopt/errors.hpp"
#include "survopt/threshold_opt.hpp"

namespace survopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_survival(const Distribution& d, double tau) {
    return std::isinf(tau) ? 0.0 : d.survival(tau);
}

double safe_truncated_mean(const Distribution& d, double tau) {
    if (tau == 0.0) return 0.0;
    if (std::isinf(tau)) return d.mean();
    return d.truncated_mean(tau);
}

/// Central finite-difference gradient of a 2-D objective with relative
/// steps; falls back to a forward difference at the nonnegativity wall.
std::array<double, 2> fd_gradient(const CoupledScenario& s, std::array<double, 2> tau, double f0) {
    std::array<double, 2> grad{};
    for (int i = 0; i < 2; ++i) {
        const double h = 1e-5 * std::max(std::abs(tau[i]), 1e-2);
        auto shifted = [&](double delta) {
            auto t = tau;
            t[i] += delta;
            return unhealthy_downtime(s, t[0], t[1]);
        };
        if (tau[i] - h >= 0.0) {
            grad[i] = (shifted(h) - shifted(-h)) / (2.0 * h);
        } else {
            grad[i] = (shifted(h) - f0) / h;
        }
    }
    return grad;
}

double lattice_scale(const Distribution& d) {
    return d.has_finite_mean() ? d.mean() : 10.0 * d.quantile(0.5);
}

JointOptResult descend(const CoupledScenario& s, std::array<double, 2> tau) {
    constexpr int kMaxIterations = 5000;
    constexpr double kArmijoC1 = 1e-4;
    constexpr double kMinStep = 1e-18;

    // the thresholds live on very different scales; descend in relative
    // coordinates u_i = tau_i / axis_i with the axis following the iterate
    const std::array<double, 2> floor{1e-3 * lattice_scale(s.organic_recovery),
                                      1e-3 * lattice_scale(s.reboot_recovery)};

    JointOptResult result;
    double f = unhealthy_downtime(s, tau[0], tau[1]);
    double step = 0.01;
    int stalled = 0;
    int iter = 0;
    for (; iter < kMaxIterations; ++iter) {
        const auto grad = fd_gradient(s, tau, f);
        const double grad_norm = std::max(std::abs(grad[0]), std::abs(grad[1]));
        if (grad_norm < 1e-6 * std::max(f, 1e-12)) {
            result.converged = true;
            break;
        }
        const std::array<double, 2> axis{std::max(tau[0], floor[0]), std::max(tau[1], floor[1])};
        // descent direction in u-space is axis_i * grad_i; back in tau-space
        // the displacement picks up another axis_i
        const double gg = axis[0] * grad[0] * axis[0] * grad[0] +
                          axis[1] * grad[1] * axis[1] * grad[1];
        bool accepted = false;
        for (double s_try = step; s_try >= kMinStep; s_try *= 0.5) {
            const std::array<double, 2> candidate{
                std::max(tau[0] - s_try * axis[0] * axis[0] * grad[0], 0.0),
                std::max(tau[1] - s_try * axis[1] * axis[1] * grad[1], 0.0)};
            const double f_try = unhealthy_downtime(s, candidate[0], candidate[1]);
            if (f_try <= f - kArmijoC1 * s_try * gg) {
                stalled = f - f_try < 1e-14 * (1.0 + std::abs(f)) ? stalled + 1 : 0;
                tau = candidate;
                f = f_try;
                step = s_try * 2.0;
                accepted = true;
                break;
            }
        }
        if (!accepted || stalled >= 40) break;  // no movement left at working precision
    }
    result.tau1 = tau[0];
    result.tau2 = tau[1];
    result.downtime = f;
    result.iterations = iter;
    return result;
}

/// Optimize tau2 against the investigation cost alone, then tau1 against
/// the resulting reboot cost. Exact when there is no bounce; a good warm
/// start otherwise.
std::array<double, 2> sequential_start(const CoupledScenario& s) {
    const auto stage2 = optimal_threshold(s.reboot_recovery, std::max(s.hi_cost, 1e-9));
    const double tau2 = std::isinf(stage2.tau_hat)
                            ? 10.0 * lattice_scale(s.reboot_recovery)
                            : stage2.tau_hat;
    const auto stage1 = optimal_threshold(s.organic_recovery, stage2.edt_at_tau_hat);
    const double tau1 = std::isinf(stage1.tau_hat)
                            ? 10.0 * lattice_scale(s.organic_recovery)
                            : stage1.tau_hat;
    return {tau1, tau2};
}

}  // namespace

void CoupledScenario::validate() const {
    if (!(bounce_prob >= 0.0) || bounce_prob >= 1.0) {
        throw std::invalid_argument("bounce probability must lie in [0, 1)");
    }
    if (!(bounce_time >= 0.0)) throw std::invalid_argument("bounce time must be nonnegative");
    if (!(hi_cost >= 0.0)) throw std::invalid_argument("investigation cost must be nonnegative");
}

TransitionModel build_two_state_model(const CoupledScenario& s, double tau, double c_int_base) {
    s.validate();
    if (!(tau >= 0.0)) throw std::domain_error("tau must be nonnegative");
    if (!(c_int_base >= 0.0)) throw std::domain_error("c_int_base must be nonnegative");

    const double surv = safe_survival(s.organic_recovery, tau);
    const double p = s.bounce_prob;

    TransitionModel m;
    m.states = {"Unhealthy", "PoweringOn", "Ready"};
    m.absorbing = 2;
    m.probabilities = Eigen::MatrixXd::Zero(3, 3);
    m.durations = Eigen::MatrixXd::Zero(3, 3);

    m.probabilities(0, 1) = surv;
    m.probabilities(0, 2) = 1.0 - surv;
    m.durations(0, 1) = std::isinf(tau) ? 0.0 : tau;
    m.durations(0, 2) = safe_truncated_mean(s.organic_recovery, tau);

    m.probabilities(1, 0) = p;
    m.probabilities(1, 2) = 1.0 - p;
    m.durations(1, 0) = s.bounce_time;
    m.durations(1, 2) = c_int_base;
    return m;
}

std::vector<std::pair<double, double>> intervention_cost_vs_tau(const CoupledScenario& s,
                                                                double c_int_base,
                                                                std::span<const double> tau_grid) {
    std::vector<std::pair<double, double>> curve;
    curve.reserve(tau_grid.size());
    for (const double tau : tau_grid) {
        const auto model = build_two_state_model(s, tau, c_int_base);
        const auto t = expected_time_to_absorption(model);
        curve.emplace_back(tau, t(1));
    }
    return curve;
}

TransitionModel build_four_state_model(const CoupledScenario& s, double tau1, double tau2) {
    s.validate();
    if (!(tau1 >= 0.0) || !(tau2 >= 0.0)) throw std::domain_error("thresholds must be nonnegative");

    const double surv1 = safe_survival(s.organic_recovery, tau1);
    const double surv2 = safe_survival(s.reboot_recovery, tau2);
    const double p = s.bounce_prob;

    TransitionModel m;
    m.states = {"Unhealthy", "PoweringOn", "HumanInvestigate", "Ready"};
    m.absorbing = 3;
    m.probabilities = Eigen::MatrixXd::Zero(4, 4);
    m.durations = Eigen::MatrixXd::Zero(4, 4);

    m.probabilities(0, 1) = surv1;
    m.probabilities(0, 3) = 1.0 - surv1;
    m.durations(0, 1) = std::isinf(tau1) ? 0.0 : tau1;
    m.durations(0, 3) = safe_truncated_mean(s.organic_recovery, tau1);

    m.probabilities(1, 0) = p;
    m.probabilities(1, 2) = (1.0 - p) * surv2;
    m.probabilities(1, 3) = (1.0 - p) * (1.0 - surv2);
    m.durations(1, 0) = s.bounce_time;
    m.durations(1, 2) = std::isinf(tau2) ? 0.0 : tau2;
    m.durations(1, 3) = safe_truncated_mean(s.reboot_recovery, tau2);

    m.probabilities(2, 3) = 1.0;
    m.durations(2, 3) = s.hi_cost;
    return m;
}

double unhealthy_downtime(const CoupledScenario& s, double tau1, double tau2) {
    const auto model = build_four_state_model(s, tau1, tau2);
    return expected_time_to_absorption(model)(0);
}

JointOptResult joint_optimize(const CoupledScenario& s, std::array<double, 2> init) {
    s.validate();
    if (!(init[0] >= 0.0) || !(init[1] >= 0.0)) {
        throw std::domain_error("initial thresholds must be nonnegative");
    }
    return descend(s, init);
}

JointOptResult joint_optimize(const CoupledScenario& s) {
    s.validate();
    const double m1 = lattice_scale(s.organic_recovery);
    const double m2 = lattice_scale(s.reboot_recovery);
    const std::array<std::array<double, 2>, 6> starts{{sequential_start(s),
                                                       {1.0 * m1, 1.0 * m2},
                                                       {3.0 * m1, 3.0 * m2},
                                                       {9.0 * m1, 9.0 * m2},
                                                       {1.0 * m1, 9.0 * m2},
                                                       {9.0 * m1, 1.0 * m2}}};
    JointOptResult best;
    best.downtime = kInf;
    for (const auto& start : starts) {
        const auto r = descend(s, start);
        const bool better = r.downtime < best.downtime * (1.0 - 1e-12);
        const bool tie = std::abs(r.downtime - best.downtime) <=
                         1e-9 * std::max(std::abs(best.downtime), 1.0);
        if (better || (tie && std::pair(r.tau1, r.tau2) < std::pair(best.tau1, best.tau2))) {
            best = r;
        }
    }
    return best;
}

}  // namespace survopt
