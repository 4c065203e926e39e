#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <string_view>

namespace survopt {

enum class Family { Exponential, Weibull, Lomax, LogLogistic };

Family family_from_string(std::string_view name);
std::string_view to_string(Family family);

/// Number of free parameters of the family (1 for Exponential, 2 otherwise).
std::size_t family_param_count(Family family);

/// Parametric survival distribution over [0, inf).
///
/// Families and parameterizations:
///   Exponential(rate)          pdf = rate * exp(-rate*x)
///   Weibull(shape, scale)      survival = exp(-(x/scale)^shape)
///   Lomax(shape, scale)        pdf = scale*shape / (1 + scale*x)^(shape+1)
///                              (the scale multiplies x, i.e. it is an
///                              inverse time)
///   LogLogistic(shape, scale)  survival = 1 / (1 + (x/scale)^shape)
///
/// All parameters must be strictly positive; zero is rejected at
/// construction. Values are immutable, every member is a pure function.
class Distribution {
  public:
    static Distribution exponential(double rate);
    static Distribution weibull(double shape, double scale);
    static Distribution lomax(double shape, double scale);
    static Distribution log_logistic(double shape, double scale);

    /// Build from a parameter array laid out as (shape, scale), or
    /// (rate) for Exponential.
    static Distribution from_params(Family family, const double* params, std::size_t n);

    Family family() const { return family_; }
    std::size_t param_count() const { return family_param_count(family_); }
    double param(std::size_t i) const;
    /// First parameter: shape for two-parameter families, rate for Exponential.
    double shape() const { return p1_; }
    double scale() const;

    double pdf(double x) const;
    double log_pdf(double x) const;
    double cdf(double x) const;
    double survival(double x) const;
    double log_survival(double x) const;

    /// pdf(x) / survival(x), evaluated in closed form per family.
    /// Throws std::overflow_error if the value is not finite.
    double hazard(double x) const;

    bool has_finite_mean() const;
    /// Throws InfiniteMeanError when the first moment does not exist.
    double mean() const;

    /// Integral of t*pdf(t) over [0, x]. Closed form for Exponential and
    /// Lomax, quadrature otherwise. x may be +inf when the mean is finite.
    double partial_expectation(double x) const;

    /// E[T | T < x]; zero when cdf(x) vanishes.
    double truncated_mean(double x) const;

    /// E[T | T > x]. Throws InfiniteMeanError when the tail mean diverges.
    double conditional_tail_expectation(double x) const;

    /// Inverse CDF; p in [0, 1).
    double quantile(double p) const;

    /// One inverse-CDF draw from the caller-owned generator.
    double sample(std::mt19937_64& rng) const;

    std::string describe() const;

    friend bool operator==(const Distribution&, const Distribution&) = default;

  private:
    Distribution(Family family, double p1, double p2);

    Family family_;
    double p1_;  // shape (or rate for Exponential)
    double p2_;  // scale (unused for Exponential)
};

}  // namespace survopt
