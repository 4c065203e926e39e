#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "survopt/joint_opt.hpp"
#include "survopt/markov_cost.hpp"
#include "survopt/transition_record.hpp"

namespace survopt {

/// Waiting policy applied during simulation; +inf disables a threshold.
struct EpisodePolicy {
    double tau1 = 0.0;
    double tau2 = std::numeric_limits<double>::infinity();
};

/// Simulate `n_episodes` node episodes starting in Unhealthy and log every
/// transition. Organic recovery times are drawn from the scenario
/// distributions; a draw beyond the threshold is logged censored at the
/// threshold, exactly as the controller would record it. Each episode uses
/// its own random stream derived from (seed, episode index), so the output
/// is byte-identical for a given seed regardless of scheduling.
/// `features`, when nonempty, is attached to every record (e.g. a cluster
/// one-hot).
std::vector<TransitionRecord> generate_logs(const CoupledScenario& s, EpisodePolicy policy,
                                            std::int64_t n_episodes, std::uint64_t seed,
                                            std::vector<double> features = {});

/// Random walk on an arbitrary transition model: next state sampled from
/// the P row, duration taken from T. Used as a model-independent check of
/// the hitting-time solve.
std::vector<TransitionRecord> generate_logs(const TransitionModel& m, std::string_view start_state,
                                            std::int64_t n_episodes, std::uint64_t seed);

/// Total downtime of one episode: the sum of its transition durations.
/// Throws IncompleteEpisodeError unless the episode ends at Ready.
double episode_downtime(std::span<const TransitionRecord> episode);

/// Per-episode downtimes of a log list (episodes are maximal runs of equal
/// node_id).
std::vector<double> episode_downtimes(std::span<const TransitionRecord> logs);

struct TTestResult {
    double t_stat = 0.0;
    double p_value = 1.0;
};

/// Welch two-sample t-test, two-sided. Throws InsufficientSampleError when
/// a sample has fewer than two points and ZeroVarianceError when both
/// samples are constant.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct AbResult {
    double treatment_mean = 0.0;
    double control_mean = 0.0;
    std::int64_t treatment_n = 0;
    std::int64_t control_n = 0;
    double t_stat = 0.0;
    double p_value = 1.0;
    double assignment_prob = 0.0;
};

/// Randomized threshold experiment: each episode flips a coin with
/// P(heads) = assignment_prob and runs under tau_treatment on heads,
/// tau_control on tails; group downtimes are compared with Welch's t-test.
AbResult ab_experiment(const CoupledScenario& s, double tau_treatment, double tau_control,
                       double assignment_prob, std::int64_t n_episodes, std::uint64_t seed);

}  // namespace survopt
