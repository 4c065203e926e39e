#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "survopt/distributions.hpp"
#include "survopt/estimation.hpp"
#include "survopt/rng.hpp"

using survopt::CensoredSampleSet;
using survopt::Distribution;
using survopt::Family;
using survopt::FitPath;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Draw n samples and censor everything above tau0, exactly like a
/// controller that stops waiting at tau0.
CensoredSampleSet censored_draws(const Distribution& d, std::size_t n, double tau0,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CensoredSampleSet s;
    std::int64_t censored = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = d.sample(rng);
        if (t < tau0) {
            s.observed.push_back(t);
        } else {
            ++censored;
        }
    }
    if (censored > 0) s.censored.push_back({tau0, censored});
    return s;
}

/// Test-side MLE oracle: coarse log-space grid, then shrinking pattern
/// search. Independent of both fitting paths in the library.
Distribution grid_mle(Family family, const CensoredSampleSet& s, double shape_guess,
                      double scale_guess) {
    auto value = [&](double shape, double scale) {
        const double params[2] = {shape, scale};
        return log_likelihood(Distribution::from_params(family, params, 2), s).value;
    };

    double best_shape = shape_guess;
    double best_scale = scale_guess;
    double best = -kInf;
    for (int i = -20; i <= 20; ++i) {
        for (int j = -20; j <= 20; ++j) {
            const double shape = shape_guess * std::pow(10.0, i / 10.0);
            const double scale = scale_guess * std::pow(10.0, j / 10.0);
            const double v = value(shape, scale);
            if (v > best) {
                best = v;
                best_shape = shape;
                best_scale = scale;
            }
        }
    }
    double step = std::pow(10.0, 0.1);
    while (step > 1.0 + 1e-9) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (const auto& [ds, dc] : {std::pair{step, 1.0}, {1.0 / step, 1.0},
                                         {1.0, step}, {1.0, 1.0 / step}}) {
                const double v = value(best_shape * ds, best_scale * dc);
                if (v > best) {
                    best = v;
                    best_shape *= ds;
                    best_scale *= dc;
                    moved = true;
                }
            }
        }
        step = std::sqrt(step);
    }
    const double params[2] = {best_shape, best_scale};
    return Distribution::from_params(family, params, 2);
}

}  // namespace

TEST_CASE("sample set validation") {
    CensoredSampleSet empty;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
    CensoredSampleSet bad{{1.0, -2.0}, {}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CensoredSampleSet bad_count{{1.0}, {{5.0, 0}}};
    CHECK_THROWS_AS(bad_count.validate(), std::invalid_argument);
}

TEST_CASE("log likelihood fixed values") {
    // Lomax(1, 1): log f(0+) = log(scale * shape) = 0
    CHECK(log_likelihood(Distribution::lomax(1.0, 1.0), {{1e-9}, {}}).value ==
          doctest::Approx(0.0).epsilon(1e-8));

    CHECK(log_likelihood(Distribution::exponential(1.0), {{1.0, 1.0}, {{1.0, 1}}}).value ==
          doctest::Approx(-3.0).epsilon(1e-14));

    // independent evaluation of the density and survival terms
    const double expected = std::log(0.125) + 3.0 * std::log(0.25);
    const auto ll = log_likelihood(Distribution::lomax(2.0, 0.5), {{2.0}, {{2.0, 3}}});
    CHECK(ll.value == doctest::Approx(expected).epsilon(1e-14));
    CHECK(ll.value == doctest::Approx(-6.238324625039508).epsilon(1e-12));
    CHECK_FALSE(ll.degenerate);
}

TEST_CASE("log likelihood degenerates to a sentinel, never throws") {
    // survival underflows to exactly zero far beyond a light tail
    const auto censored = log_likelihood(Distribution::weibull(2.0, 1.0), {{1.0}, {{1e160, 1}}});
    CHECK(censored.degenerate);
    CHECK(censored.value == -kInf);
    // density underflows to exactly zero as well
    const auto observed = log_likelihood(Distribution::weibull(2.0, 1.0), {{1e160}, {}});
    CHECK(observed.degenerate);
    CHECK(observed.value == -kInf);
}

TEST_CASE("log likelihood is additive over sample sets") {
    const auto d = Distribution::lomax(1.3, 0.04);
    const CensoredSampleSet a{{3.0, 77.0, 14.5}, {{600.0, 4}}};
    const CensoredSampleSet b{{0.04, 800.0}, {{30.0, 2}, {900.0, 1}}};
    CensoredSampleSet both = a;
    both.observed.insert(both.observed.end(), b.observed.begin(), b.observed.end());
    both.censored.insert(both.censored.end(), b.censored.begin(), b.censored.end());
    CHECK(log_likelihood(d, both).value ==
          doctest::Approx(log_likelihood(d, a).value + log_likelihood(d, b).value)
              .epsilon(1e-14));
}

TEST_CASE("lomax censored fit recovers the generator") {
    const auto truth = Distribution::lomax(1.1, 0.2);
    const auto sample = censored_draws(truth, 100000, 600.0, 91);
    const auto fit = survopt::fit_lomax_censored(sample);
    CHECK(fit.path == FitPath::ClosedForm);
    CHECK(fit.converged);
    CHECK(oracles::relative_error(fit.dist.param(0), 1.1) < 0.05);
    CHECK(oracles::relative_error(fit.dist.param(1), 0.2) < 0.05);
    CHECK(fit.grad_norm < 1e-6);
}

TEST_CASE("lomax fit without censoring agrees with the grid-search oracle") {
    const auto truth = Distribution::lomax(1.4, 0.1);
    auto sample = censored_draws(truth, 2000, kInf, 17);
    REQUIRE(sample.censored.empty());
    const auto fit = survopt::fit_lomax_censored(sample);
    const auto oracle = grid_mle(Family::Lomax, sample, 1.0, 0.1);
    CHECK(oracles::relative_error(fit.dist.param(0), oracle.param(0)) < 1e-4);
    CHECK(oracles::relative_error(fit.dist.param(1), oracle.param(1)) < 1e-4);
}

TEST_CASE("single observation falls back to the numeric path with a warning") {
    const CensoredSampleSet sample{{1.0}, {}};
    const auto fit = survopt::fit_lomax_censored(sample);
    CHECK(fit.path == FitPath::Generic);
    CHECK(fit.boundary_warning);
    // likelihood dominance: no grid point beats the reported fit
    double best_grid = -kInf;
    for (int i = -10; i <= 10; ++i) {
        for (int j = -10; j <= 10; ++j) {
            const double params[2] = {std::pow(10.0, i / 5.0), std::pow(10.0, j / 5.0)};
            best_grid = std::max(
                best_grid,
                log_likelihood(Distribution::from_params(Family::Lomax, params, 2), sample).value);
        }
    }
    CHECK(fit.log_lik >= best_grid - 1e-9);
}

TEST_CASE("fits are local maxima under 1% perturbations") {
    const auto sample = censored_draws(Distribution::lomax(1.2, 0.05), 5000, 400.0, 5);
    for (const auto& fit : {survopt::fit_lomax_censored(sample),
                            survopt::fit_generic_censored(Family::Lomax, sample),
                            survopt::fit_generic_censored(Family::Weibull, sample)}) {
        const double base = fit.log_lik;
        for (const double f1 : {0.99, 1.0, 1.01}) {
            for (const double f2 : {0.99, 1.0, 1.01}) {
                const double params[2] = {fit.dist.param(0) * f1, fit.dist.param(1) * f2};
                const auto d = Distribution::from_params(fit.dist.family(), params, 2);
                CHECK(log_likelihood(d, sample).value <= base + 1e-6);
            }
        }
    }
}

TEST_CASE("heavier censoring lowers the inferred hazard at the censoring level") {
    const CensoredSampleSet base{{5.0, 9.0, 20.0, 31.0, 44.0, 70.0, 102.0, 230.0}, {}};
    const double level = 240.0;
    double prev_hazard = kInf;
    for (const std::int64_t m : {0, 10, 100, 1000}) {
        CensoredSampleSet s = base;
        if (m > 0) s.censored.push_back({level, m});
        const auto fit = survopt::fit_lomax_censored(s);
        const double h = fit.dist.hazard(level);
        CHECK(h <= prev_hazard + 1e-12);
        prev_hazard = h;
    }
}

TEST_CASE("generic fit recovers weibull and loglogistic generators") {
    {
        const auto truth = Distribution::weibull(0.8, 300.0);
        const auto sample = censored_draws(truth, 100000, 600.0, 23);
        const auto fit = survopt::fit_generic_censored(Family::Weibull, sample);
        CHECK(fit.converged);
        CHECK(oracles::relative_error(fit.dist.param(0), 0.8) < 0.05);
        CHECK(oracles::relative_error(fit.dist.param(1), 300.0) < 0.05);
    }
    {
        const auto truth = Distribution::log_logistic(1.5, 300.0);
        const auto sample = censored_draws(truth, 100000, 600.0, 29);
        const auto fit = survopt::fit_generic_censored(Family::LogLogistic, sample);
        CHECK(fit.converged);
        CHECK(oracles::relative_error(fit.dist.param(0), 1.5) < 0.05);
        CHECK(oracles::relative_error(fit.dist.param(1), 300.0) < 0.05);
    }
}

TEST_CASE("generic and closed-form lomax paths agree") {
    const auto sample = censored_draws(Distribution::lomax(1.5, 0.02), 20000, 500.0, 37);
    const auto closed = survopt::fit_lomax_censored(sample);
    const auto generic = survopt::fit_generic_censored(Family::Lomax, sample);
    CHECK(closed.path == FitPath::ClosedForm);
    CHECK(oracles::relative_error(generic.dist.param(0), closed.dist.param(0)) < 1e-3);
    CHECK(oracles::relative_error(generic.dist.param(1), closed.dist.param(1)) < 1e-3);
}

TEST_CASE("generic exponential fit matches its closed-form censored MLE") {
    const auto sample = censored_draws(Distribution::exponential(0.01), 20000, 300.0, 3);
    const auto fit = survopt::fit_generic_censored(Family::Exponential, sample);
    double total = 0.0;
    for (const double t : sample.observed) total += t;
    for (const auto& c : sample.censored) total += static_cast<double>(c.count) * c.level;
    const double rate_mle = static_cast<double>(sample.observed.size()) / total;
    CHECK(oracles::relative_error(fit.dist.param(0), rate_mle) < 1e-6);
}
