#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "survopt/distributions.hpp"

namespace survopt {

/// The waiting threshold currently deployed when none is specified
/// (ten minutes, in seconds).
inline constexpr double kDefaultBaselineTau = 600.0;

enum class BoundaryCase { Interior, RebootImmediately, NeverReboot };

std::string_view to_string(BoundaryCase c);

struct ThresholdReport {
    double tau_hat = 0.0;               // +inf for NeverReboot
    double edt_at_tau_hat = 0.0;
    double edt_at_zero = 0.0;           // always equals c_int
    std::optional<double> edt_limit;    // E[T]; empty when the mean diverges
    double edt_at_baseline = 0.0;
    double relative_savings = 0.0;      // vs. baseline, clamped to >= 0
    BoundaryCase boundary_case = BoundaryCase::Interior;
};

/// Expected downtime when waiting `tau` for organic recovery and paying
/// `c_int` on intervention:
///
///   E[DT](tau) = integral_0^tau t f(t) dt + S(tau) * (tau + c_int)
///
/// Exact at the boundaries: E[DT](0) = c_int, E[DT](inf) = E[T].
double expected_downtime(const Distribution& d, double tau, double c_int);

/// Minimize expected downtime over tau. Interior candidates are the roots
/// of hazard(tau) = 1/c_int; the boundary candidates are tau = 0 (downtime
/// c_int) and tau -> inf (downtime E[T], skipped when the mean diverges).
ThresholdReport optimal_threshold(const Distribution& d, double c_int,
                                  double tau_baseline = kDefaultBaselineTau);

/// Pointwise expected downtime over a grid, for plotting.
std::vector<std::pair<double, double>> downtime_curve(const Distribution& d, double c_int,
                                                      std::span<const double> tau_grid);

/// (E[DT](baseline) - E[DT](tau_hat)) / E[DT](baseline), clamped to >= 0.
double relative_savings(const Distribution& d, double c_int, double tau_baseline);

}  // namespace survopt
