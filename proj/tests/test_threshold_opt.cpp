#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "survopt/distributions.hpp"
#include "survopt/threshold_opt.hpp"

using survopt::BoundaryCase;
using survopt::Distribution;
using survopt::downtime_curve;
using survopt::expected_downtime;
using survopt::optimal_threshold;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Test-side expected downtime built from the density alone.
double edt_oracle(const Distribution& d, double tau, double c_int) {
    if (tau == 0.0) return c_int;
    const double partial = oracles::integrate(
        [&](double t) { return t == 0.0 ? 0.0 : t * d.pdf(t); }, 0.0, tau, 1e-11);
    return partial + d.survival(tau) * (tau + c_int);
}

}  // namespace

TEST_CASE("expected downtime boundary values") {
    for (const auto& d : {Distribution::lomax(2.0, 0.5), Distribution::weibull(0.8, 300.0),
                          Distribution::exponential(0.01)}) {
        CHECK(expected_downtime(d, 0.0, 10.0) == 10.0);
    }
    CHECK(expected_downtime(Distribution::lomax(2.0, 0.5), kInf, 123.0) ==
          doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("expected downtime closed form vs Monte Carlo") {
    const auto d = Distribution::lomax(2.0, 0.5);
    CHECK(expected_downtime(d, 18.0, 10.0) == doctest::Approx(1.90).epsilon(1e-12));

    std::mt19937_64 rng(11);
    const std::size_t n = 10000000;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = d.sample(rng);
        total += t < 18.0 ? t : 18.0 + 10.0;
    }
    CHECK(total / static_cast<double>(n) == doctest::Approx(1.90).epsilon(2e-3));
}

TEST_CASE("lomax closed form matches quadrature across a parameter grid") {
    for (const double shape : {0.6, 1.0, 1.3, 2.0, 5.0}) {
        for (const double scale : {0.01, 0.5, 1.0}) {
            const auto d = Distribution::lomax(shape, scale);
            const double tau = 2.0 / scale;
            const double expected = edt_oracle(d, tau, 40.0);
            CAPTURE(shape);
            CAPTURE(scale);
            CHECK(expected_downtime(d, tau, 40.0) == doctest::Approx(expected).epsilon(1e-8));
        }
    }
}

TEST_CASE("monte carlo downtime within four standard errors along the curve") {
    const auto d = Distribution::lomax(1.5, 0.05);
    const double c_int = 120.0;
    std::mt19937_64 rng(5);
    const std::size_t n = 1000000;
    for (const double tau : {5.0, 60.0, 400.0}) {
        std::vector<double> downtimes(n);
        for (auto& x : downtimes) {
            const double t = d.sample(rng);
            x = t < tau ? t : tau + c_int;
        }
        const double mc = oracles::sample_mean(downtimes);
        const double se = oracles::sample_sd(downtimes) / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(expected_downtime(d, tau, c_int) - mc) < 4.0 * se);
    }
}

TEST_CASE("optimal threshold: interior lomax case") {
    const auto d = Distribution::lomax(2.0, 0.5);
    const auto report = optimal_threshold(d, 10.0);
    CHECK(report.boundary_case == BoundaryCase::Interior);
    CHECK(report.tau_hat == doctest::Approx(18.0).epsilon(1e-9));
    CHECK(report.edt_at_zero == 10.0);
    CHECK(report.edt_limit.value() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.hazard(report.tau_hat) * 10.0 == doctest::Approx(1.0).epsilon(1e-8));

    // independent grid minimizer of the quadrature-based objective
    const auto grid = oracles::grid_minimize([&](double tau) { return edt_oracle(d, tau, 10.0); },
                                             0.0, 100.0, 20001);
    CHECK(std::abs(report.tau_hat - grid.x) <= 100.0 / 20000.0 + 1e-9);
    CHECK(report.edt_at_tau_hat <= grid.value + 1e-9);
}

TEST_CASE("optimal threshold boundary cases") {
    // hazard starts at 1 and falls; it never reaches 1/c = 2
    const auto low = optimal_threshold(Distribution::lomax(1.0, 1.0), 0.5);
    CHECK(low.boundary_case == BoundaryCase::RebootImmediately);
    CHECK(low.tau_hat == 0.0);
    CHECK(low.edt_at_tau_hat == 0.5);

    // constant hazard above 1/c: waiting always wins
    const auto wait = optimal_threshold(Distribution::exponential(1.0), 10.0);
    CHECK(wait.boundary_case == BoundaryCase::NeverReboot);
    CHECK(std::isinf(wait.tau_hat));
    CHECK(wait.edt_at_tau_hat == doctest::Approx(1.0));

    // constant hazard below 1/c: reboot at once
    const auto reboot = optimal_threshold(Distribution::exponential(0.05), 10.0);
    CHECK(reboot.boundary_case == BoundaryCase::RebootImmediately);
    CHECK(reboot.tau_hat == 0.0);

    // infinite-mean organic recovery: never-reboot would cost infinity and
    // must not be selected even when the interior root does not exist
    const auto heavy = optimal_threshold(Distribution::lomax(0.9, 0.001), 10.0);
    CHECK(heavy.boundary_case == BoundaryCase::RebootImmediately);
    CHECK_FALSE(heavy.edt_limit.has_value());
}

TEST_CASE("interior optima satisfy the rate-balance identity and are stationary") {
    for (const auto& [d, c_int] :
         {std::pair{Distribution::lomax(1.1, 0.2), 600.0},
          std::pair{Distribution::lomax(5.0, 1.0), 10.0},
          std::pair{Distribution::weibull(0.8, 300.0), 100.0},
          std::pair{Distribution::log_logistic(2.5, 40.0), 200.0}}) {
        const auto report = optimal_threshold(d, c_int);
        REQUIRE(report.boundary_case == BoundaryCase::Interior);
        CHECK(d.hazard(report.tau_hat) * c_int == doctest::Approx(1.0).epsilon(1e-8));
        const double h = 1e-4 * report.tau_hat;
        const double slope = (expected_downtime(d, report.tau_hat + h, c_int) -
                              expected_downtime(d, report.tau_hat - h, c_int)) /
                             (2.0 * h);
        CHECK(std::abs(slope) < 1e-6 * c_int);
        CHECK(report.edt_at_tau_hat <=
              std::min(report.edt_at_zero, report.edt_at_baseline) + 1e-9);
    }
}

TEST_CASE("loglogistic with rising-then-falling hazard keeps the falling root") {
    const auto d = Distribution::log_logistic(2.5, 40.0);
    const double c_int = 200.0;
    const auto report = optimal_threshold(d, c_int);
    REQUIRE(report.boundary_case == BoundaryCase::Interior);
    // two crossings exist; the optimum sits on the falling branch
    const double h_before = d.hazard(report.tau_hat * 0.99);
    const double h_after = d.hazard(report.tau_hat * 1.01);
    CHECK(h_before > h_after);

    const auto grid = oracles::grid_minimize(
        [&](double tau) { return edt_oracle(d, tau, c_int); }, 0.0, 1000.0, 20001);
    CHECK(std::abs(report.tau_hat - grid.x) <= 1000.0 / 20000.0 + 1e-9);
}

TEST_CASE("downtime curve") {
    const auto d = Distribution::lomax(2.0, 0.5);
    const std::vector<double> single{0.0};
    const auto at_zero = downtime_curve(d, 10.0, single);
    REQUIRE(at_zero.size() == 1);
    CHECK(at_zero[0] == std::pair{0.0, 10.0});

    std::vector<double> grid;
    for (double tau = 0.0; tau <= 60.0; tau += 0.5) grid.push_back(tau);
    const auto curve = downtime_curve(d, 10.0, grid);
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i].second < curve[argmin].second) argmin = i;
    }
    CHECK(curve[argmin].first == doctest::Approx(18.0).epsilon(1e-12));

    // rising-then-falling hazard: the curve has at most one max-then-min wave
    const auto ll = Distribution::log_logistic(2.5, 40.0);
    std::vector<double> ll_grid;
    for (double tau = 1.0; tau <= 600.0; tau += 1.0) ll_grid.push_back(tau);
    const auto ll_curve = downtime_curve(ll, 50.0, ll_grid);
    int sign_flips = 0;
    for (std::size_t i = 2; i < ll_curve.size(); ++i) {
        const double d1 = ll_curve[i - 1].second - ll_curve[i - 2].second;
        const double d2 = ll_curve[i].second - ll_curve[i - 1].second;
        if ((d1 > 0.0) != (d2 > 0.0)) ++sign_flips;
    }
    CHECK(sign_flips <= 2);
}

TEST_CASE("relative savings") {
    const auto d = Distribution::lomax(2.0, 0.5);
    const auto report = optimal_threshold(d, 10.0);
    CHECK(survopt::relative_savings(d, 10.0, report.tau_hat) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(survopt::relative_savings(d, 10.0, 10.0) ==
          doctest::Approx(0.022857142857142857).epsilon(1e-9));
    // zero baseline compares against an immediate reboot
    CHECK(survopt::relative_savings(d, 10.0, 0.0) ==
          doctest::Approx((10.0 - report.edt_at_tau_hat) / 10.0).epsilon(1e-12));
}
