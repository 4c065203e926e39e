#include "survopt/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "detail/nelder_mead.hpp"
#include "survopt/errors.hpp"

namespace survopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLambdaLo = 1e-9;
constexpr double kLambdaHi = 1e6;
constexpr int kBisectionMaxIter = 200;
// log-parameter box for the numerical search; hitting it flags a boundary fit
constexpr double kLogParamBox = 25.0;

double observed_mean(const CensoredSampleSet& s) {
    return std::accumulate(s.observed.begin(), s.observed.end(), 0.0) /
           static_cast<double>(s.observed.size());
}

bool all_observed_equal(const CensoredSampleSet& s) {
    const auto [lo, hi] = std::minmax_element(s.observed.begin(), s.observed.end());
    return *lo == *hi;
}

/// Sufficient statistics of the Lomax profile likelihood at a given scale.
struct LomaxProfile {
    double log_sum;    // sum log(1 + lambda t_i) + sum m_j log(1 + lambda x_j)
    double frac_obs;   // sum t_i / (1 + lambda t_i)
    double frac_cens;  // sum m_j x_j / (1 + lambda x_j)
};

LomaxProfile lomax_profile(const CensoredSampleSet& s, double lambda) {
    LomaxProfile p{0.0, 0.0, 0.0};
    for (const double t : s.observed) {
        p.log_sum += std::log1p(lambda * t);
        p.frac_obs += t / (1.0 + lambda * t);
    }
    for (const auto& c : s.censored) {
        const double m = static_cast<double>(c.count);
        p.log_sum += m * std::log1p(lambda * c.level);
        p.frac_cens += m * c.level / (1.0 + lambda * c.level);
    }
    return p;
}

double lomax_profile_shape(const CensoredSampleSet& s, double lambda) {
    return static_cast<double>(s.observed.size()) / lomax_profile(s, lambda).log_sum;
}

/// d/d lambda of the log-likelihood with the profiled shape substituted.
/// By the envelope property this is also the profile-likelihood slope.
double lomax_scale_condition(const CensoredSampleSet& s, double lambda) {
    const auto p = lomax_profile(s, lambda);
    const double n = static_cast<double>(s.observed.size());
    const double kappa = n / p.log_sum;
    return n / lambda - (kappa + 1.0) * p.frac_obs - kappa * p.frac_cens;
}

double best_log_lik(const Distribution& d, const CensoredSampleSet& s) {
    return log_likelihood(d, s).value;
}

}  // namespace

void CensoredSampleSet::validate() const {
    if (observed.empty()) {
        throw std::invalid_argument("at least one uncensored duration is required");
    }
    for (const double t : observed) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw std::invalid_argument("observed durations must be positive and finite");
        }
    }
    for (const auto& c : censored) {
        if (!(c.level > 0.0) || !std::isfinite(c.level)) {
            throw std::invalid_argument("censoring levels must be positive and finite");
        }
        if (c.count < 1) throw std::invalid_argument("censoring counts must be >= 1");
    }
}

std::int64_t CensoredSampleSet::censored_count() const {
    std::int64_t total = 0;
    for (const auto& c : censored) total += c.count;
    return total;
}

LogLikelihood log_likelihood(const Distribution& d, const CensoredSampleSet& s) {
    s.validate();
    LogLikelihood result;
    for (const double t : s.observed) {
        const double lp = d.log_pdf(t);
        if (lp == -kInf) {
            return {-kInf, true};
        }
        result.value += lp;
    }
    for (const auto& c : s.censored) {
        const double ls = d.log_survival(c.level);
        if (ls == -kInf) {
            return {-kInf, true};
        }
        result.value += static_cast<double>(c.count) * ls;
    }
    return result;
}

FitResult fit_lomax_censored(const CensoredSampleSet& s) {
    s.validate();

    // Scan the scale condition for sign changes on a log grid, then bisect.
    constexpr int kPointsPerDecade = 10;
    const int decades = static_cast<int>(std::round(std::log10(kLambdaHi / kLambdaLo)));
    const int n_grid = decades * kPointsPerDecade + 1;

    std::vector<std::pair<double, double>> brackets;
    double prev_lambda = kLambdaLo;
    double prev_g = lomax_scale_condition(s, prev_lambda);
    for (int i = 1; i < n_grid; ++i) {
        const double lambda =
            kLambdaLo * std::pow(10.0, static_cast<double>(i) / kPointsPerDecade);
        const double g = lomax_scale_condition(s, lambda);
        if ((prev_g > 0.0 && g <= 0.0) || (prev_g < 0.0 && g >= 0.0)) {
            brackets.emplace_back(prev_lambda, lambda);
        }
        prev_lambda = lambda;
        prev_g = g;
    }

    if (brackets.empty()) {
        FitResult fallback = fit_generic_censored(Family::Lomax, s);
        fallback.path = FitPath::Generic;
        fallback.boundary_warning = true;
        return fallback;
    }

    double best_lambda = 0.0;
    double best_ll = -kInf;
    for (auto [lo, hi] : brackets) {
        double g_lo = lomax_scale_condition(s, lo);
        for (int iter = 0; iter < kBisectionMaxIter; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;  // bracket at machine resolution
            const double g_mid = lomax_scale_condition(s, mid);
            if ((g_lo <= 0.0) == (g_mid <= 0.0)) {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
            }
            if ((hi - lo) <= 1e-15 * lo) break;
        }
        const double lambda = 0.5 * (lo + hi);
        const double kappa = lomax_profile_shape(s, lambda);
        const double ll = best_log_lik(Distribution::lomax(kappa, lambda), s);
        if (ll > best_ll) {
            best_ll = ll;
            best_lambda = lambda;
        }
    }

    const double lambda = best_lambda;
    const double kappa = lomax_profile_shape(s, lambda);

    // Stationarity of the full (shape, scale) gradient at the fit.
    const auto prof = lomax_profile(s, lambda);
    const double n = static_cast<double>(s.observed.size());
    const double d_kappa = n / kappa - prof.log_sum;
    const double d_lambda = n / lambda - (kappa + 1.0) * prof.frac_obs - kappa * prof.frac_cens;
    const double grad_norm = std::max(std::abs(d_kappa), std::abs(d_lambda));

    FitResult result{Distribution::lomax(kappa, lambda), best_ll, grad_norm < 1e-6,
                     FitPath::ClosedForm, all_observed_equal(s), grad_norm};
    return result;
}

FitResult fit_generic_censored(Family family, const CensoredSampleSet& s) {
    s.validate();
    const std::size_t dim = family_param_count(family);
    const double mean_obs = observed_mean(s);

    // Censoring-adjusted exponential-rate guess; exact MLE for Exponential.
    double total_time = 0.0;
    for (const double t : s.observed) total_time += t;
    for (const auto& c : s.censored) total_time += static_cast<double>(c.count) * c.level;
    const double rate_guess = static_cast<double>(s.observed.size()) / total_time;

    std::vector<std::vector<double>> starts;
    if (family == Family::Exponential) {
        starts = {{rate_guess}, {rate_guess * 4.0}, {rate_guess * 0.25}};
    } else if (family == Family::Lomax) {
        starts = {{2.0, 1.0 / mean_obs}, {1.1, 0.2 / mean_obs}, {4.0, 4.0 / mean_obs}};
    } else {
        const double median_obs = [&] {
            auto sorted = s.observed;
            std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
            return sorted[sorted.size() / 2];
        }();
        starts = {{1.0, mean_obs}, {0.5, median_obs}, {2.0, median_obs}};
    }

    auto negative_ll = [&](const std::vector<double>& log_params) {
        double params[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < dim; ++i) {
            if (std::abs(log_params[i]) > kLogParamBox) return kInf;
            params[i] = std::exp(log_params[i]);
        }
        const auto d = Distribution::from_params(family, params, dim);
        const auto ll = log_likelihood(d, s);
        return ll.degenerate ? kInf : -ll.value;
    };

    detail::NelderMeadResult best;
    best.value = kInf;
    for (const auto& start : starts) {
        std::vector<double> log_start(dim);
        for (std::size_t i = 0; i < dim; ++i) log_start[i] = std::log(start[i]);
        auto r = detail::nelder_mead(negative_ll, log_start);
        if (r.value < best.value || (r.value == best.value && !best.converged)) {
            best = std::move(r);
        }
    }
    // one restart from the winner; escapes premature simplex collapse
    {
        auto r = detail::nelder_mead(negative_ll, best.x, 0.05);
        if (r.value <= best.value) best = std::move(r);
    }

    bool boundary = all_observed_equal(s);
    double params[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) {
        params[i] = std::exp(best.x[i]);
        if (std::abs(best.x[i]) > kLogParamBox - 1.0) boundary = true;
    }
    const auto dist = Distribution::from_params(family, params, dim);
    return {dist, -best.value, best.converged, FitPath::Generic, boundary,
            std::numeric_limits<double>::quiet_NaN()};
}

}  // namespace survopt
