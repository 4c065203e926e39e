#include "survopt/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "detail/special_functions.hpp"
#include "survopt/errors.hpp"
#include "survopt/rng.hpp"

namespace survopt {

namespace {

constexpr std::int64_t kTimestampBase = 1700000000;
constexpr int kMaxWalkSteps = 1000000;

std::string episode_node_id(const char* prefix, std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%08lld", prefix, static_cast<long long>(index));
    return buf;
}

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;  // sample variance (n - 1 denominator)
};

MeanVar mean_and_variance(std::span<const double> xs) {
    MeanVar mv;
    const auto n = static_cast<double>(xs.size());
    for (const double x : xs) mv.mean += x;
    mv.mean /= n;
    for (const double x : xs) mv.variance += (x - mv.mean) * (x - mv.mean);
    mv.variance /= (n - 1.0);
    return mv;
}

/// One node episode under the coupled-threshold policy; appends its
/// records and returns the summed downtime.
double run_episode(const CoupledScenario& s, EpisodePolicy policy, std::string node_id,
                   std::mt19937_64& rng, std::int64_t& timestamp,
                   const std::vector<double>& features, std::vector<TransitionRecord>* out) {
    double downtime = 0.0;
    auto log = [&](const char* from, const char* to, double duration) {
        downtime += duration;
        if (out != nullptr) {
            out->push_back({node_id, from, to, duration, timestamp, features});
        }
        ++timestamp;
    };

    for (int step = 0; step < kMaxWalkSteps; ++step) {
        const double organic = s.organic_recovery.sample(rng);
        if (organic < policy.tau1) {
            log("Unhealthy", "Ready", organic);
            return downtime;
        }
        log("Unhealthy", "PoweringOn", policy.tau1);

        if (uniform01(rng) < s.bounce_prob) {
            log("PoweringOn", "Unhealthy", s.bounce_time);
            continue;  // back to waiting on organic recovery
        }
        const double reboot = s.reboot_recovery.sample(rng);
        if (reboot < policy.tau2) {
            log("PoweringOn", "Ready", reboot);
            return downtime;
        }
        log("PoweringOn", "HumanInvestigate", policy.tau2);
        log("HumanInvestigate", "Ready", s.hi_cost);
        return downtime;
    }
    throw Error("episode exceeded the step limit; bounce probability too close to 1?");
}

}  // namespace

std::vector<TransitionRecord> generate_logs(const CoupledScenario& s, EpisodePolicy policy,
                                            std::int64_t n_episodes, std::uint64_t seed,
                                            std::vector<double> features) {
    s.validate();
    if (n_episodes < 1) throw std::invalid_argument("n_episodes must be >= 1");
    if (!(policy.tau1 >= 0.0) || !(policy.tau2 >= 0.0)) {
        throw std::invalid_argument("policy thresholds must be nonnegative");
    }

    std::vector<TransitionRecord> records;
    records.reserve(static_cast<std::size_t>(n_episodes) + static_cast<std::size_t>(n_episodes) / 4);
    std::int64_t timestamp = kTimestampBase;
    for (std::int64_t e = 0; e < n_episodes; ++e) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(e)));
        run_episode(s, policy, episode_node_id("n", e), rng, timestamp, features, &records);
    }
    return records;
}

std::vector<TransitionRecord> generate_logs(const TransitionModel& m, std::string_view start_state,
                                            std::int64_t n_episodes, std::uint64_t seed) {
    m.validate();
    if (n_episodes < 1) throw std::invalid_argument("n_episodes must be >= 1");
    const Eigen::Index start = m.state_index(start_state);
    const auto n = static_cast<Eigen::Index>(m.states.size());

    std::vector<TransitionRecord> records;
    records.reserve(static_cast<std::size_t>(n_episodes) * 2);
    std::int64_t timestamp = kTimestampBase;
    for (std::int64_t e = 0; e < n_episodes; ++e) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(e)));
        const std::string node_id = episode_node_id("w", e);
        Eigen::Index state = start;
        for (int step = 0;; ++step) {
            if (step >= kMaxWalkSteps) {
                throw Error("random walk exceeded the step limit before absorption");
            }
            if (state == m.absorbing) break;
            const double u = uniform01(rng);
            double cumulative = 0.0;
            Eigen::Index next = m.absorbing;
            for (Eigen::Index j = 0; j < n; ++j) {
                cumulative += m.probabilities(state, j);
                if (u < cumulative) {
                    next = j;
                    break;
                }
            }
            records.push_back({node_id, m.states[static_cast<std::size_t>(state)],
                               m.states[static_cast<std::size_t>(next)],
                               m.durations(state, next), timestamp, {}});
            ++timestamp;
            state = next;
        }
    }
    return records;
}

double episode_downtime(std::span<const TransitionRecord> episode) {
    if (episode.empty()) throw IncompleteEpisodeError("episode has no records");
    if (episode.back().to_state != "Ready") {
        throw IncompleteEpisodeError("episode for node '" + episode.front().node_id +
                                     "' does not end at Ready");
    }
    double total = 0.0;
    for (const auto& r : episode) total += r.duration;
    return total;
}

std::vector<double> episode_downtimes(std::span<const TransitionRecord> logs) {
    std::vector<double> downtimes;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (i + 1 == logs.size() || logs[i + 1].node_id != logs[begin].node_id) {
            downtimes.push_back(episode_downtime(logs.subspan(begin, i + 1 - begin)));
            begin = i + 1;
        }
    }
    return downtimes;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw InsufficientSampleError("each sample needs at least two observations");
    }
    const auto [mean_a, var_a] = mean_and_variance(a);
    const auto [mean_b, var_b] = mean_and_variance(b);
    if (var_a <= 0.0 && var_b <= 0.0) {
        throw ZeroVarianceError("both samples have zero variance");
    }
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double sa = var_a / na;
    const double sb = var_b / nb;
    const double se = std::sqrt(sa + sb);
    const double t = (mean_a - mean_b) / se;
    const double nu = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    return {t, detail::student_t_two_sided_p(t, nu)};
}

AbResult ab_experiment(const CoupledScenario& s, double tau_treatment, double tau_control,
                       double assignment_prob, std::int64_t n_episodes, std::uint64_t seed) {
    s.validate();
    if (!(assignment_prob > 0.0) || !(assignment_prob < 1.0)) {
        throw std::invalid_argument("assignment probability must lie strictly in (0, 1)");
    }
    if (n_episodes < 1) throw std::invalid_argument("n_episodes must be >= 1");

    std::vector<double> treatment;
    std::vector<double> control;
    std::int64_t timestamp = kTimestampBase;
    for (std::int64_t e = 0; e < n_episodes; ++e) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(e)));
        const bool treated = uniform01(rng) < assignment_prob;
        EpisodePolicy policy;
        policy.tau1 = treated ? tau_treatment : tau_control;
        const double downtime =
            run_episode(s, policy, std::string(), rng, timestamp, {}, nullptr);
        (treated ? treatment : control).push_back(downtime);
    }
    if (treatment.size() < 2 || control.size() < 2) {
        throw InsufficientSampleError("a group ended up with fewer than two episodes");
    }

    const auto test = welch_t_test(treatment, control);
    AbResult result;
    result.treatment_mean = mean_and_variance(treatment).mean;
    result.control_mean = mean_and_variance(control).mean;
    result.treatment_n = static_cast<std::int64_t>(treatment.size());
    result.control_n = static_cast<std::int64_t>(control.size());
    result.t_stat = test.t_stat;
    result.p_value = test.p_value;
    result.assignment_prob = assignment_prob;
    return result;
}

}  // namespace survopt
