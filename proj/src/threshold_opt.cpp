#include "survopt/threshold_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace survopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kScanLo = 1e-6;   // seconds
constexpr double kScanHi = 1e8;    // seconds
constexpr int kScanPerDecade = 20;

double hazard_or_inf(const Distribution& d, double tau) {
    try {
        return d.hazard(tau);
    } catch (const std::overflow_error&) {
        return kInf;
    }
}

/// All roots of hazard(tau) = target in [kScanLo, kScanHi]: bracket scan on
/// a log grid, bisection per bracket. Collects every crossing so hazards
/// that rise then fall yield both roots.
std::vector<double> hazard_roots(const Distribution& d, double target) {
    const int decades = static_cast<int>(std::round(std::log10(kScanHi / kScanLo)));
    const int n_grid = decades * kScanPerDecade + 1;

    std::vector<double> roots;
    double prev_tau = kScanLo;
    double prev_f = hazard_or_inf(d, prev_tau) - target;
    for (int i = 1; i < n_grid; ++i) {
        const double tau = kScanLo * std::pow(10.0, static_cast<double>(i) / kScanPerDecade);
        const double f = hazard_or_inf(d, tau) - target;
        if (prev_f == 0.0) {
            roots.push_back(prev_tau);
        } else if ((prev_f > 0.0 && f < 0.0) || (prev_f < 0.0 && f > 0.0)) {
            double lo = prev_tau;
            double hi = tau;
            double f_lo = prev_f;
            for (int iter = 0; iter < 200; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                const double f_mid = hazard_or_inf(d, mid) - target;
                if ((f_lo <= 0.0) == (f_mid <= 0.0)) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
                if (hi - lo <= 1e-12 * lo) break;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_tau = tau;
        prev_f = f;
    }
    return roots;
}

}  // namespace

std::string_view to_string(BoundaryCase c) {
    switch (c) {
        case BoundaryCase::Interior: return "Interior";
        case BoundaryCase::RebootImmediately: return "RebootImmediately";
        case BoundaryCase::NeverReboot: return "NeverReboot";
    }
    throw std::logic_error("invalid boundary case");
}

double expected_downtime(const Distribution& d, double tau, double c_int) {
    if (!(tau >= 0.0)) throw std::domain_error("tau must be nonnegative");
    if (!(c_int > 0.0) || !std::isfinite(c_int)) {
        throw std::domain_error("c_int must be positive and finite");
    }
    if (tau == 0.0) return c_int;
    if (std::isinf(tau)) return d.mean();
    return d.partial_expectation(tau) + d.survival(tau) * (tau + c_int);
}

ThresholdReport optimal_threshold(const Distribution& d, double c_int, double tau_baseline) {
    if (!(c_int > 0.0) || !std::isfinite(c_int)) {
        throw std::domain_error("c_int must be positive and finite");
    }
    if (!(tau_baseline >= 0.0)) throw std::domain_error("tau_baseline must be nonnegative");

    struct Candidate {
        double tau;
        double edt;
        BoundaryCase kind;
    };
    std::vector<Candidate> candidates;
    candidates.push_back({0.0, c_int, BoundaryCase::RebootImmediately});
    if (d.has_finite_mean()) {
        candidates.push_back({kInf, d.mean(), BoundaryCase::NeverReboot});
    }
    for (const double root : hazard_roots(d, 1.0 / c_int)) {
        candidates.push_back({root, expected_downtime(d, root, c_int), BoundaryCase::Interior});
    }

    const Candidate* best = &candidates.front();
    for (const auto& c : candidates) {
        if (c.edt < best->edt || (c.edt == best->edt && c.tau < best->tau)) best = &c;
    }

    ThresholdReport report;
    report.tau_hat = best->tau;
    report.edt_at_tau_hat = best->edt;
    report.edt_at_zero = c_int;
    if (d.has_finite_mean()) report.edt_limit = d.mean();
    report.edt_at_baseline = expected_downtime(d, tau_baseline, c_int);
    report.relative_savings =
        std::max(0.0, (report.edt_at_baseline - report.edt_at_tau_hat) / report.edt_at_baseline);
    report.boundary_case = best->kind;
    return report;
}

std::vector<std::pair<double, double>> downtime_curve(const Distribution& d, double c_int,
                                                      std::span<const double> tau_grid) {
    std::vector<std::pair<double, double>> curve;
    curve.reserve(tau_grid.size());
    for (const double tau : tau_grid) {
        curve.emplace_back(tau, expected_downtime(d, tau, c_int));
    }
    return curve;
}

double relative_savings(const Distribution& d, double c_int, double tau_baseline) {
    return optimal_threshold(d, c_int, tau_baseline).relative_savings;
}

}  // namespace survopt
