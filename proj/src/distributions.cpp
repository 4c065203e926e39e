#include "survopt/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "detail/quadrature.hpp"
#include "detail/special_functions.hpp"
#include "survopt/errors.hpp"
#include "survopt/rng.hpp"

namespace survopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonnegative(double x) {
    if (!(x >= 0.0)) throw std::domain_error("duration must be nonnegative");
}

void require_positive_param(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be strictly positive and finite");
    }
}

/// log(1 + e^z) without overflow.
double log1pexp(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

/// expm1(h * a) / h, continuous at h = 0 where it equals a.
double expm1_ratio(double a, double h) {
    if (h == 0.0) return a;
    return std::expm1(h * a) / h;
}

}  // namespace

Family family_from_string(std::string_view name) {
    if (name == "exponential") return Family::Exponential;
    if (name == "weibull") return Family::Weibull;
    if (name == "lomax") return Family::Lomax;
    if (name == "loglogistic") return Family::LogLogistic;
    throw std::invalid_argument("unknown distribution family: " + std::string(name));
}

std::string_view to_string(Family family) {
    switch (family) {
        case Family::Exponential: return "exponential";
        case Family::Weibull: return "weibull";
        case Family::Lomax: return "lomax";
        case Family::LogLogistic: return "loglogistic";
    }
    throw std::logic_error("invalid family value");
}

std::size_t family_param_count(Family family) {
    return family == Family::Exponential ? 1 : 2;
}

Distribution::Distribution(Family family, double p1, double p2)
    : family_(family), p1_(p1), p2_(p2) {}

Distribution Distribution::exponential(double rate) {
    require_positive_param(rate, "rate");
    return {Family::Exponential, rate, 1.0};
}

Distribution Distribution::weibull(double shape, double scale) {
    require_positive_param(shape, "shape");
    require_positive_param(scale, "scale");
    return {Family::Weibull, shape, scale};
}

Distribution Distribution::lomax(double shape, double scale) {
    require_positive_param(shape, "shape");
    require_positive_param(scale, "scale");
    return {Family::Lomax, shape, scale};
}

Distribution Distribution::log_logistic(double shape, double scale) {
    require_positive_param(shape, "shape");
    require_positive_param(scale, "scale");
    return {Family::LogLogistic, shape, scale};
}

Distribution Distribution::from_params(Family family, const double* params, std::size_t n) {
    if (n != family_param_count(family)) {
        throw std::invalid_argument("wrong parameter count for family");
    }
    switch (family) {
        case Family::Exponential: return exponential(params[0]);
        case Family::Weibull: return weibull(params[0], params[1]);
        case Family::Lomax: return lomax(params[0], params[1]);
        case Family::LogLogistic: return log_logistic(params[0], params[1]);
    }
    throw std::logic_error("invalid family value");
}

double Distribution::param(std::size_t i) const {
    if (i >= param_count()) throw std::out_of_range("parameter index");
    return i == 0 ? p1_ : p2_;
}

double Distribution::scale() const {
    if (family_ == Family::Exponential) throw std::logic_error("Exponential has no scale parameter");
    return p2_;
}

double Distribution::pdf(double x) const {
    require_nonnegative(x);
    switch (family_) {
        case Family::Exponential:
            return p1_ * std::exp(-p1_ * x);
        case Family::Weibull: {
            if (x == 0.0) {
                if (p1_ < 1.0) return kInf;
                return p1_ == 1.0 ? 1.0 / p2_ : 0.0;
            }
            const double z = p1_ * std::log(x / p2_);
            if (z > 700.0) return 0.0;  // survival underflowed; density is 0
            return (p1_ / p2_) * std::pow(x / p2_, p1_ - 1.0) * std::exp(-std::exp(z));
        }
        case Family::Lomax:
            return p2_ * p1_ * std::pow(1.0 + p2_ * x, -(p1_ + 1.0));
        case Family::LogLogistic: {
            if (x == 0.0) {
                if (p1_ < 1.0) return kInf;
                return p1_ == 1.0 ? 1.0 / p2_ : 0.0;
            }
            const double lt = std::log(x / p2_);
            const double z = p1_ * lt;
            if (z > 350.0) {
                // (1+t^k)^2 ~ t^2k: evaluate in log space
                return std::exp(std::log(p1_ / p2_) - (p1_ + 1.0) * lt);
            }
            const double tk = std::exp(z);
            const double denom = 1.0 + tk;
            return (p1_ / p2_) * std::pow(x / p2_, p1_ - 1.0) / (denom * denom);
        }
    }
    throw std::logic_error("invalid family value");
}

double Distribution::log_pdf(double x) const {
    require_nonnegative(x);
    switch (family_) {
        case Family::Exponential:
            return std::log(p1_) - p1_ * x;
        case Family::Weibull: {
            if (x == 0.0) return p1_ < 1.0 ? kInf : (p1_ == 1.0 ? -std::log(p2_) : -kInf);
            const double lt = std::log(x / p2_);
            const double z = p1_ * lt;
            return std::log(p1_ / p2_) + (p1_ - 1.0) * lt - (z > 700.0 ? kInf : std::exp(z));
        }
        case Family::Lomax:
            return std::log(p2_ * p1_) - (p1_ + 1.0) * std::log1p(p2_ * x);
        case Family::LogLogistic: {
            if (x == 0.0) return p1_ < 1.0 ? kInf : (p1_ == 1.0 ? -std::log(p2_) : -kInf);
            const double lt = std::log(x / p2_);
            return std::log(p1_ / p2_) + (p1_ - 1.0) * lt - 2.0 * log1pexp(p1_ * lt);
        }
    }
    throw std::logic_error("invalid family value");
}

double Distribution::log_survival(double x) const {
    require_nonnegative(x);
    switch (family_) {
        case Family::Exponential:
            return -p1_ * x;
        case Family::Weibull: {
            if (x == 0.0) return 0.0;
            const double z = p1_ * std::log(x / p2_);
            return z > 709.0 ? -kInf : -std::exp(z);
        }
        case Family::Lomax:
            return -p1_ * std::log1p(p2_ * x);
        case Family::LogLogistic: {
            if (x == 0.0) return 0.0;
            return -log1pexp(p1_ * std::log(x / p2_));
        }
    }
    throw std::logic_error("invalid family value");
}

double Distribution::survival(double x) const {
    return std::exp(log_survival(x));
}

double Distribution::cdf(double x) const {
    return 1.0 - survival(x);
}

double Distribution::hazard(double x) const {
    require_nonnegative(x);
    double h = 0.0;
    switch (family_) {
        case Family::Exponential:
            return p1_;
        case Family::Weibull:
            h = x == 0.0 ? (p1_ < 1.0 ? kInf : (p1_ == 1.0 ? 1.0 / p2_ : 0.0))
                         : (p1_ / p2_) * std::pow(x / p2_, p1_ - 1.0);
            break;
        case Family::Lomax:
            h = p2_ * p1_ / (1.0 + p2_ * x);
            break;
        case Family::LogLogistic: {
            if (x == 0.0) {
                h = p1_ < 1.0 ? kInf : (p1_ == 1.0 ? 1.0 / p2_ : 0.0);
                break;
            }
            const double lt = std::log(x / p2_);
            const double z = p1_ * lt;
            h = z > 350.0 ? std::exp(std::log(p1_ / p2_) + (p1_ - 1.0) * lt - log1pexp(z))
                          : (p1_ / p2_) * std::pow(x / p2_, p1_ - 1.0) / (1.0 + std::exp(z));
            break;
        }
    }
    if (!std::isfinite(h)) throw std::overflow_error("hazard is not finite at x=" + std::to_string(x));
    return h;
}

bool Distribution::has_finite_mean() const {
    switch (family_) {
        case Family::Exponential:
        case Family::Weibull:
            return true;
        case Family::Lomax:
        case Family::LogLogistic:
            return p1_ > 1.0;
    }
    return false;
}

double Distribution::mean() const {
    switch (family_) {
        case Family::Exponential:
            return 1.0 / p1_;
        case Family::Weibull:
            return p2_ * std::tgamma(1.0 + 1.0 / p1_);
        case Family::Lomax:
            if (p1_ <= 1.0) throw InfiniteMeanError("Lomax with shape <= 1 lacks a first moment");
            return 1.0 / (p2_ * (p1_ - 1.0));
        case Family::LogLogistic: {
            if (p1_ <= 1.0) throw InfiniteMeanError("LogLogistic with shape <= 1 lacks a first moment");
            const double b = std::numbers::pi / p1_;
            return p2_ * b / std::sin(b);
        }
    }
    throw std::logic_error("invalid family value");
}

double Distribution::partial_expectation(double x) const {
    require_nonnegative(x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return mean();
    switch (family_) {
        case Family::Exponential: {
            const double z = p1_ * x;
            return (-std::expm1(-z) - z * std::exp(-z)) / p1_;
        }
        case Family::Lomax: {
            const double big_l = std::log1p(p2_ * x);
            return (p1_ / p2_) * expm1_ratio(big_l, 1.0 - p1_) + std::expm1(-p1_ * big_l) / p2_;
        }
        case Family::LogLogistic:
            // int_0^x t f(t) dt = E[X] * I_F(x)(1 + 1/k, 1 - 1/k); the
            // regularized incomplete beta needs a finite mean (k > 1)
            if (p1_ > 1.0) {
                return mean() * detail::ibeta(1.0 + 1.0 / p1_, 1.0 - 1.0 / p1_, cdf(x));
            }
            [[fallthrough]];
        case Family::Weibull:
            return detail::integrate([this](double t) { return t * pdf(t); }, 0.0, x, 1e-12);
    }
    throw std::logic_error("invalid family value");
}

double Distribution::truncated_mean(double x) const {
    require_nonnegative(x);
    const double p = cdf(x);
    if (p <= 0.0) return 0.0;
    const double value = partial_expectation(x) / p;
    return std::min(value, x);  // guard quadrature round-off; E[T|T<x] <= x
}

double Distribution::conditional_tail_expectation(double x) const {
    require_nonnegative(x);
    if (!has_finite_mean()) {
        throw InfiniteMeanError("tail expectation diverges: " + describe() + " lacks a first moment");
    }
    switch (family_) {
        case Family::Exponential:
            return x + 1.0 / p1_;
        case Family::Lomax:
            return p1_ / (p1_ - 1.0) * x + 1.0 / (p2_ * (p1_ - 1.0));
        case Family::LogLogistic: {
            // the tail moment int_x^inf t f(t) dt equals
            // E[X] * I_S(x)(1 - 1/k, 1 + 1/k); evaluating the incomplete
            // beta at S(x) directly avoids cancellation in deep tails
            const double surv = survival(x);
            if (surv <= 0.0) throw std::overflow_error("survival underflowed in tail expectation");
            return mean() * detail::ibeta(1.0 - 1.0 / p1_, 1.0 + 1.0 / p1_, surv) / surv;
        }
        case Family::Weibull: {
            // E[T|T>x] = x + int_x^inf S(t) dt / S(x); the ratio of
            // survivals is evaluated in log space so deep tails stay put.
            const double log_sx = log_survival(x);
            const double tail = detail::integrate_to_inf(
                [&](double t) { return std::exp(log_survival(t) - log_sx); }, x, 1e-12);
            return x + tail;
        }
    }
    throw std::logic_error("invalid family value");
}

double Distribution::quantile(double p) const {
    if (!(p >= 0.0) || p >= 1.0) throw std::domain_error("quantile requires p in [0, 1)");
    if (p == 0.0) return 0.0;
    switch (family_) {
        case Family::Exponential:
            return -std::log1p(-p) / p1_;
        case Family::Weibull:
            return p2_ * std::pow(-std::log1p(-p), 1.0 / p1_);
        case Family::Lomax:
            return std::expm1(-std::log1p(-p) / p1_) / p2_;
        case Family::LogLogistic:
            return p2_ * std::pow(p / (1.0 - p), 1.0 / p1_);
    }
    throw std::logic_error("invalid family value");
}

double Distribution::sample(std::mt19937_64& rng) const {
    return quantile(uniform01(rng));
}

std::string Distribution::describe() const {
    if (family_ == Family::Exponential) {
        return "exponential(rate=" + std::to_string(p1_) + ")";
    }
    return std::string(to_string(family_)) + "(shape=" + std::to_string(p1_) +
           ", scale=" + std::to_string(p2_) + ")";
}

}  // namespace survopt
