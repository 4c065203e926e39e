#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "survopt/transition_record.hpp"

namespace survopt {

/// An absorbing Markov model of node states: transition probabilities P,
/// mean transition durations T, and the index of the absorbing state.
/// Rows of P sum to 1 for transient states and are all zero for the
/// absorbing one; T entries paired with a zero probability are ignored.
struct TransitionModel {
    std::vector<std::string> states;
    Eigen::MatrixXd probabilities;  // P
    Eigen::MatrixXd durations;      // T
    Eigen::Index absorbing = 0;

    Eigen::Index state_index(std::string_view name) const;

    /// Throws std::invalid_argument when shapes, row sums, or signs are off.
    void validate() const;
};

/// Empirical P and T from transition logs: P(i,j) is the fraction of
/// transitions out of state i that went to j, T(i,j) the mean logged
/// duration of those transitions. Records leaving the absorbing state are
/// ignored. Throws UnreachableStateError when a listed transient state has
/// no outgoing transitions in the data.
TransitionModel estimate_transition_model(std::span<const TransitionRecord> logs,
                                          std::vector<std::string> states,
                                          std::string_view absorbing_state = "Ready");

/// Expected time to reach the absorbing state from each state, solved from
///   (I - Q) t = (P o T) 1
/// where Q drops the absorbing row and column and o is the elementwise
/// product. Returned vector is aligned with `states` (absorbing entry 0).
/// Throws UnreachableStateError when I - Q is singular beyond a condition
/// estimate of 1e12.
Eigen::VectorXd expected_time_to_absorption(const TransitionModel& m);

/// The `from_state` component of expected_time_to_absorption.
double intervention_cost(const TransitionModel& m, std::string_view from_state);

}  // namespace survopt
