#pragma once

#include <cstdint>
#include <vector>

#include "survopt/distributions.hpp"

namespace survopt {

/// A right-censoring level: `count` observations known only to exceed `level`.
struct CensoredLevel {
    double level = 0.0;
    std::int64_t count = 1;
};

/// Fully observed durations plus right-censoring levels.
struct CensoredSampleSet {
    std::vector<double> observed;
    std::vector<CensoredLevel> censored;

    /// Throws std::invalid_argument on nonpositive/nonfinite durations,
    /// levels or counts, or when `observed` is empty.
    void validate() const;

    std::int64_t censored_count() const;
};

/// Censored log-likelihood value. `degenerate` is set when some observed
/// point had zero density or some level had zero survival; `value` is then
/// -infinity rather than an exception.
struct LogLikelihood {
    double value = 0.0;
    bool degenerate = false;
};

LogLikelihood log_likelihood(const Distribution& d, const CensoredSampleSet& s);

enum class FitPath { ClosedForm, Generic };

struct FitResult {
    Distribution dist;
    double log_lik = 0.0;
    bool converged = false;
    FitPath path = FitPath::Generic;
    /// Set when the data pinned the optimum against the search box or the
    /// sample was degenerate (e.g. all observed durations identical).
    bool boundary_warning = false;
    /// Max-abs entry of the log-likelihood gradient at the fit (closed-form
    /// path only; NaN for the generic path).
    double grad_norm = 0.0;
};

/// Lomax maximum likelihood under right censoring. Profiles the shape out
/// of the likelihood and solves the remaining scale condition by bisection;
/// falls back to the generic numerical fit when the condition has no root
/// in the bracket.
FitResult fit_lomax_censored(const CensoredSampleSet& s);

/// Numerical maximum likelihood for any family, censoring included.
/// Searches in log-parameter space from three deterministic starts.
FitResult fit_generic_censored(Family family, const CensoredSampleSet& s);

}  // namespace survopt
