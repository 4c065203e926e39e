#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "survopt/distributions.hpp"
#include "survopt/errors.hpp"
#include "survopt/estimation.hpp"
#include "survopt/joint_opt.hpp"
#include "survopt/rng.hpp"
#include "survopt/simulation.hpp"
#include "survopt/threshold_opt.hpp"

using survopt::ab_experiment;
using survopt::CoupledScenario;
using survopt::Distribution;
using survopt::EpisodePolicy;
using survopt::episode_downtime;
using survopt::episode_downtimes;
using survopt::generate_logs;
using survopt::TransitionRecord;
using survopt::welch_t_test;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CoupledScenario scenario(double p = 0.0) {
    return {Distribution::lomax(1.1, 0.2), Distribution::lomax(3.0, 0.1), p, 20.0, 600.0};
}

survopt::CensoredSampleSet unhealthy_sample(const std::vector<TransitionRecord>& logs) {
    survopt::CensoredSampleSet s;
    for (const auto& r : logs) {
        if (r.from_state != "Unhealthy") continue;
        if (r.to_state == "Ready") {
            s.observed.push_back(r.duration);
        } else {
            s.censored.push_back({r.duration, 1});
        }
    }
    return s;
}

}  // namespace

TEST_CASE("an infinite threshold never censors") {
    const auto logs = generate_logs(scenario(), {kInf, kInf}, 500, 3);
    REQUIRE(logs.size() == 500);
    for (const auto& r : logs) {
        CHECK(r.from_state == "Unhealthy");
        CHECK(r.to_state == "Ready");
    }
}

TEST_CASE("a zero threshold reboots immediately") {
    const auto logs = generate_logs(scenario(), {0.0, kInf}, 200, 3);
    for (std::size_t i = 0; i < logs.size(); i += 2) {
        CHECK(logs[i].from_state == "Unhealthy");
        CHECK(logs[i].to_state == "PoweringOn");
        CHECK(logs[i].duration == 0.0);
    }
}

TEST_CASE("identical seeds produce identical logs, different seeds do not") {
    const auto a = generate_logs(scenario(0.2), {60.0, 900.0}, 2000, 99);
    const auto b = generate_logs(scenario(0.2), {60.0, 900.0}, 2000, 99);
    CHECK(a == b);
    const auto c = generate_logs(scenario(0.2), {60.0, 900.0}, 2000, 100);
    CHECK(a != c);
}

TEST_CASE("refitting the generator from simulated logs closes the loop") {
    const auto logs = generate_logs(scenario(), {600.0, kInf}, 100000, 2718);
    const auto sample = unhealthy_sample(logs);
    CHECK(sample.censored.size() > 0);
    const auto fit = survopt::fit_lomax_censored(sample);
    CHECK(oracles::relative_error(fit.dist.param(0), 1.1) < 0.05);
    CHECK(oracles::relative_error(fit.dist.param(1), 0.2) < 0.05);
}

TEST_CASE("lower thresholds censor more and reveal nothing beyond the level") {
    std::size_t previous_censored = 0;
    for (const double tau : {400.0, 100.0, 20.0}) {
        const auto logs = generate_logs(scenario(), {tau, kInf}, 20000, 55);
        std::size_t censored = 0;
        for (const auto& r : logs) {
            if (r.from_state == "Unhealthy" && r.to_state != "Ready") {
                ++censored;
                // the record carries the level itself, nothing about the draw
                CHECK(r.duration == tau);
            }
        }
        CHECK(censored >= previous_censored);
        previous_censored = censored;
    }
}

TEST_CASE("episode downtime sums the walk") {
    const std::vector<TransitionRecord> single{{"n0", "Unhealthy", "Ready", 4.0, 0, {}}};
    CHECK(episode_downtime(single) == 4.0);

    const std::vector<TransitionRecord> two{{"n0", "Unhealthy", "PoweringOn", 18.0, 0, {}},
                                            {"n0", "PoweringOn", "Ready", 9.0, 1, {}}};
    CHECK(episode_downtime(two) == 27.0);

    const std::vector<TransitionRecord> dangling{{"n0", "Unhealthy", "PoweringOn", 18.0, 0, {}}};
    CHECK_THROWS_AS(episode_downtime(dangling), survopt::IncompleteEpisodeError);
}

TEST_CASE("episode mean downtime matches the hitting-time solve") {
    const auto s = scenario(0.05);
    const EpisodePolicy policy{30.0, 700.0};
    const auto logs = generate_logs(s, policy, 1000000, 31415);
    const auto downtimes = episode_downtimes(logs);
    REQUIRE(downtimes.size() == 1000000);
    const double mc = oracles::sample_mean(downtimes);
    const double se = oracles::sample_sd(downtimes) / 1000.0;
    CHECK(std::abs(mc - survopt::unhealthy_downtime(s, policy.tau1, policy.tau2)) < 4.0 * se);
}

TEST_CASE("welch t-test fixed cases") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    const auto same = welch_t_test(a, a);
    CHECK(same.t_stat == 0.0);
    CHECK(same.p_value == 1.0);

    std::mt19937_64 rng(10);
    auto normal = [&rng](double mean) {
        // Box-Muller on the fixed uniform mapping keeps draws identical
        // across standard libraries
        const double u = std::max(survopt::uniform01(rng), 1e-300);
        const double v = survopt::uniform01(rng);
        return mean + std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
    };
    std::vector<double> xs(1000);
    std::vector<double> ys(1000);
    for (auto& x : xs) x = normal(10.0);
    for (auto& y : ys) y = normal(9.0);
    const auto strong = welch_t_test(xs, ys);
    CHECK(strong.t_stat > 15.0);  // the standard-normal scale puts it near 22
    CHECK(strong.p_value < 1e-10);

    const auto swapped = welch_t_test(ys, xs);
    CHECK(swapped.t_stat == doctest::Approx(-strong.t_stat).epsilon(1e-12));
    CHECK(swapped.p_value == doctest::Approx(strong.p_value).epsilon(1e-12));

    const std::vector<double> flat{2.0, 2.0, 2.0};
    CHECK_THROWS_AS(welch_t_test(flat, flat), survopt::ZeroVarianceError);
    const std::vector<double> tiny{1.0};
    CHECK_THROWS_AS(welch_t_test(tiny, a), survopt::InsufficientSampleError);
}

TEST_CASE("null experiments stay quiet") {
    int false_positives = 0;
    const int runs = 100;
    for (int i = 0; i < runs; ++i) {
        const auto result = ab_experiment(scenario(), 600.0, 600.0, 0.5, 600,
                                          9000 + static_cast<std::uint64_t>(i));
        if (result.p_value < 0.05) ++false_positives;
    }
    CHECK(false_positives <= 6);  // at least 94 of 100 accept the null
}

TEST_CASE("a real improvement is detected with high significance") {
    const auto s = scenario();
    const double c_int = s.reboot_recovery.mean();
    const auto optimal = survopt::optimal_threshold(s.organic_recovery, c_int);
    const auto result = ab_experiment(s, optimal.tau_hat, 600.0, 0.35, 100000, 616);
    CHECK(result.treatment_mean < result.control_mean);
    CHECK(result.p_value < 0.01);

    // realized gap vs the analytic downtime difference
    const double expected_gap =
        survopt::expected_downtime(s.organic_recovery, 600.0, c_int) - optimal.edt_at_tau_hat;
    const double realized_gap = result.control_mean - result.treatment_mean;
    CHECK(oracles::relative_error(realized_gap, expected_gap) < 0.05);
}

TEST_CASE("group sizes follow the assignment probability") {
    const auto result = ab_experiment(scenario(), 30.0, 600.0, 0.35, 40000, 77);
    const double expected = 0.35 * 40000.0;
    const double sd = std::sqrt(40000.0 * 0.35 * 0.65);
    CHECK(std::abs(static_cast<double>(result.treatment_n) - expected) < 4.0 * sd);
    CHECK(result.treatment_n + result.control_n == 40000);
}

TEST_CASE("degenerate experiment inputs raise typed errors") {
    CHECK_THROWS_AS(ab_experiment(scenario(), 30.0, 600.0, 0.0, 100, 1), std::invalid_argument);
    // two episodes cannot fill both groups with two members each
    CHECK_THROWS_AS(ab_experiment(scenario(), 30.0, 600.0, 0.5, 2, 1),
                    survopt::InsufficientSampleError);
}
