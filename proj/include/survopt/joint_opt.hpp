#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "survopt/distributions.hpp"
#include "survopt/markov_cost.hpp"

namespace survopt {

/// Two coupled waiting thresholds: tau1 gates Unhealthy -> PoweringOn,
/// tau2 gates PoweringOn -> HumanInvestigate. A bounce sends the node from
/// PoweringOn back to Unhealthy with probability `bounce_prob`, taking a
/// fixed `bounce_time`; HumanInvestigate always reaches Ready after
/// `hi_cost`.
struct CoupledScenario {
    Distribution organic_recovery;    // T1: Unhealthy -> Ready
    Distribution reboot_recovery;     // T2: PoweringOn -> Ready
    double bounce_prob = 0.0;         // p, in [0, 1)
    double bounce_time = 0.0;         // B
    double hi_cost = 0.0;             // C_HI

    void validate() const;
};

/// The three-state system {Unhealthy, PoweringOn, Ready} where the reboot
/// cost is the flat `c_int_base`:
///   P = [0, S1(tau), F1(tau); p, 0, 1-p]
///   T = [0, tau,     E[T1|T1<tau]; B, 0, c_int_base]
TransitionModel build_two_state_model(const CoupledScenario& s, double tau, double c_int_base);

/// PoweringOn hitting time as a function of the Unhealthy threshold. Flat
/// at c_int_base when bounce_prob is 0.
std::vector<std::pair<double, double>> intervention_cost_vs_tau(const CoupledScenario& s,
                                                                double c_int_base,
                                                                std::span<const double> tau_grid);

/// The four-state system {Unhealthy, PoweringOn, HumanInvestigate, Ready}
/// with both thresholds active.
TransitionModel build_four_state_model(const CoupledScenario& s, double tau1, double tau2);

/// Unhealthy hitting time of the four-state system.
double unhealthy_downtime(const CoupledScenario& s, double tau1, double tau2);

struct JointOptResult {
    double tau1 = 0.0;
    double tau2 = 0.0;
    double downtime = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Projected gradient descent on unhealthy_downtime from a given start,
/// with central-finite-difference gradients; thresholds stay nonnegative.
JointOptResult joint_optimize(const CoupledScenario& s, std::array<double, 2> init);

/// Multi-start variant: a deterministic 5-point lattice spanning
/// [0, 10 * mean] per axis plus the sequential (tau2-first) solution as a
/// warm start; ties break toward the smaller thresholds.
JointOptResult joint_optimize(const CoupledScenario& s);

}  // namespace survopt
