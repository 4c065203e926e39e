#include "survopt/feature_regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace survopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_point(const RegressionPoint& p, Eigen::Index dim, const char* what) {
    if (!(p.time > 0.0) || !std::isfinite(p.time)) {
        throw std::invalid_argument(std::string(what) + " durations must be positive and finite");
    }
    if (p.features.size() != dim) throw std::invalid_argument("feature dimensions must agree");
    if (p.features(0) != 1.0) {
        throw std::invalid_argument("the first feature element is the bias and must equal 1");
    }
    if (!p.features.allFinite()) throw std::invalid_argument("features must be finite");
}

/// d log pdf / d (shape, scale) at an observed duration.
Eigen::Vector2d score_log_pdf(Family family, const Eigen::Vector2d& theta, double t) {
    const double shape = theta(0);
    const double scale = theta(1);
    switch (family) {
        case Family::Lomax: {
            const double z = 1.0 + scale * t;
            return {1.0 / shape - std::log(z), 1.0 / scale - (shape + 1.0) * t / z};
        }
        case Family::Weibull: {
            const double lt = std::log(t / scale);
            const double zk = std::exp(shape * lt);
            return {1.0 / shape + lt - zk * lt, (shape / scale) * (zk - 1.0)};
        }
        case Family::LogLogistic: {
            const double lt = std::log(t / scale);
            const double zk = std::exp(shape * lt);
            return {1.0 / shape + lt - 2.0 * zk * lt / (1.0 + zk),
                    (shape / scale) * (zk - 1.0) / (1.0 + zk)};
        }
        case Family::Exponential:
            break;
    }
    throw std::invalid_argument("regression requires a two-parameter family");
}

/// d log survival / d (shape, scale) at a censoring level.
Eigen::Vector2d score_log_survival(Family family, const Eigen::Vector2d& theta, double x) {
    const double shape = theta(0);
    const double scale = theta(1);
    switch (family) {
        case Family::Lomax: {
            const double z = 1.0 + scale * x;
            return {-std::log(z), -shape * x / z};
        }
        case Family::Weibull: {
            const double lt = std::log(x / scale);
            const double zk = std::exp(shape * lt);
            return {-zk * lt, (shape / scale) * zk};
        }
        case Family::LogLogistic: {
            const double lt = std::log(x / scale);
            const double zk = std::exp(shape * lt);
            return {-zk * lt / (1.0 + zk), (shape / scale) * zk / (1.0 + zk)};
        }
        case Family::Exponential:
            break;
    }
    throw std::invalid_argument("regression requires a two-parameter family");
}

/// Column-packed dataset for the fit loop: one GEMM per likelihood pass
/// instead of a heap allocation per point.
struct PackedPart {
    Eigen::MatrixXd features;  // dim x N
    Eigen::ArrayXd times;      // N
};

PackedPart pack(const std::vector<RegressionPoint>& points, Eigen::Index dim) {
    PackedPart part;
    const auto n = static_cast<Eigen::Index>(points.size());
    part.features.resize(dim, n);
    part.times.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        part.features.col(j) = points[static_cast<std::size_t>(j)].features;
        part.times(j) = points[static_cast<std::size_t>(j)].time;
    }
    return part;
}

Eigen::ArrayXd softplus(const Eigen::ArrayXd& a) {
    return a.max(0.0) + (1.0 + (-a.abs()).exp()).log();
}

/// Log-likelihood terms and their theta-derivatives for a whole part at
/// once; `censored` switches between density and survival terms.
struct ArrayTerms {
    Eigen::ArrayXd value;
    Eigen::ArrayXd d_shape;
    Eigen::ArrayXd d_scale;
};

ArrayTerms array_terms(Family family, bool censored, const Eigen::ArrayXd& shape,
                       const Eigen::ArrayXd& scale, const Eigen::ArrayXd& t, bool want_grad) {
    ArrayTerms out;
    switch (family) {
        case Family::Lomax: {
            const Eigen::ArrayXd log1p_st = (scale * t).log1p();
            if (censored) {
                out.value = -shape * log1p_st;
                if (want_grad) {
                    out.d_shape = -log1p_st;
                    out.d_scale = -shape * t / (1.0 + scale * t);
                }
            } else {
                out.value = (scale * shape).log() - (shape + 1.0) * log1p_st;
                if (want_grad) {
                    out.d_shape = 1.0 / shape - log1p_st;
                    out.d_scale = 1.0 / scale - (shape + 1.0) * t / (1.0 + scale * t);
                }
            }
            return out;
        }
        case Family::Weibull: {
            const Eigen::ArrayXd lt = t.log() - scale.log();
            const Eigen::ArrayXd z = (shape * lt).exp();
            if (censored) {
                out.value = -z;
                if (want_grad) {
                    out.d_shape = -z * lt;
                    out.d_scale = shape / scale * z;
                }
            } else {
                out.value = (shape / scale).log() + (shape - 1.0) * lt - z;
                if (want_grad) {
                    out.d_shape = 1.0 / shape + lt * (1.0 - z);
                    out.d_scale = shape / scale * (z - 1.0);
                }
            }
            return out;
        }
        case Family::LogLogistic: {
            const Eigen::ArrayXd lt = t.log() - scale.log();
            const Eigen::ArrayXd a = shape * lt;
            const Eigen::ArrayXd w = 1.0 / (1.0 + (-a).exp());  // z / (1 + z)
            if (censored) {
                out.value = -softplus(a);
                if (want_grad) {
                    out.d_shape = -w * lt;
                    out.d_scale = shape / scale * w;
                }
            } else {
                out.value = (shape / scale).log() + (shape - 1.0) * lt - 2.0 * softplus(a);
                if (want_grad) {
                    out.d_shape = 1.0 / shape + lt * (1.0 - 2.0 * w);
                    out.d_scale = shape / scale * (2.0 * w - 1.0);
                }
            }
            return out;
        }
        case Family::Exponential:
            break;
    }
    throw std::invalid_argument("regression requires a two-parameter family");
}

struct PackedEval {
    double value = 0.0;
    bool degenerate = false;
    Eigen::MatrixXd grad;
};

PackedEval eval_packed(Family family, const Eigen::MatrixXd& w, const Eigen::Vector2d& upper,
                       const PackedPart& observed, const PackedPart& censored, bool want_grad) {
    PackedEval result;
    if (want_grad) result.grad = Eigen::MatrixXd::Zero(2, w.cols());
    for (const bool is_censored : {false, true}) {
        const PackedPart& part = is_censored ? censored : observed;
        if (part.times.size() == 0) continue;
        const Eigen::MatrixXd alpha = w * part.features;  // 2 x N
        Eigen::ArrayXd shape = upper(0) / (1.0 + (-alpha.row(0).transpose().array()).exp());
        Eigen::ArrayXd scale = upper(1) / (1.0 + (-alpha.row(1).transpose().array()).exp());
        shape = shape.max(1e-300).min(std::nextafter(upper(0), 0.0));
        scale = scale.max(1e-300).min(std::nextafter(upper(1), 0.0));
        const auto terms =
            array_terms(family, is_censored, shape, scale, part.times, want_grad);
        result.value += terms.value.sum();
        if (!std::isfinite(result.value)) {
            result.degenerate = true;
            result.value = -std::numeric_limits<double>::infinity();
            return result;
        }
        if (want_grad) {
            Eigen::MatrixXd chained(2, part.times.size());
            chained.row(0) = (terms.d_shape * shape * (1.0 - shape / upper(0))).transpose();
            chained.row(1) = (terms.d_scale * scale * (1.0 - scale / upper(1))).transpose();
            result.grad.noalias() += chained * part.features.transpose();
        }
    }
    return result;
}

}  // namespace

void RegressionDataset::validate() const {
    if (observed.empty()) throw std::invalid_argument("at least one observed point is required");
    const Eigen::Index dim = observed.front().features.size();
    if (dim < 1) throw std::invalid_argument("feature vectors must include the bias element");
    for (const auto& p : observed) validate_point(p, dim, "observed");
    for (const auto& p : censored) validate_point(p, dim, "censored");
}

Eigen::Index RegressionDataset::feature_dim() const {
    return observed.empty() ? 0 : observed.front().features.size();
}

CensoredSampleSet RegressionDataset::collapse() const {
    CensoredSampleSet s;
    s.observed.reserve(observed.size());
    for (const auto& p : observed) s.observed.push_back(p.time);
    s.censored.reserve(censored.size());
    for (const auto& p : censored) s.censored.push_back({p.time, 1});
    return s;
}

void RegressionModel::validate() const {
    if (family == Family::Exponential) {
        throw std::invalid_argument("regression requires a two-parameter family");
    }
    if (weights.rows() != 2 || weights.cols() < 1) {
        throw std::invalid_argument("weights must be a 2 x n matrix");
    }
    if (!(upper_bounds.minCoeff() > 0.0)) {
        throw std::invalid_argument("upper bounds must be positive");
    }
}

Eigen::Vector2d sigmoid_link(const Eigen::Vector2d& alpha, const Eigen::Vector2d& upper_bounds) {
    Eigen::Vector2d theta;
    for (int k = 0; k < 2; ++k) {
        const double raw = upper_bounds(k) / (1.0 + std::exp(-alpha(k)));
        // keep strictly inside (0, U) even when the exponential saturates
        theta(k) = std::clamp(raw, 1e-300, std::nextafter(upper_bounds(k), 0.0));
    }
    return theta;
}

Eigen::Vector2d sigmoid_link_derivative(const Eigen::Vector2d& alpha,
                                        const Eigen::Vector2d& upper_bounds) {
    const Eigen::Vector2d theta = sigmoid_link(alpha, upper_bounds);
    Eigen::Vector2d slope;
    for (int k = 0; k < 2; ++k) slope(k) = theta(k) * (1.0 - theta(k) / upper_bounds(k));
    return slope;
}

Eigen::Vector2d sigmoid_link_inverse(const Eigen::Vector2d& theta,
                                     const Eigen::Vector2d& upper_bounds) {
    Eigen::Vector2d alpha;
    for (int k = 0; k < 2; ++k) {
        if (!(theta(k) > 0.0) || !(theta(k) < upper_bounds(k))) {
            throw std::domain_error("theta must lie strictly inside (0, upper_bound)");
        }
        alpha(k) = -std::log(upper_bounds(k) / theta(k) - 1.0);
    }
    return alpha;
}

Distribution predict_params(const RegressionModel& m, const Eigen::VectorXd& features) {
    m.validate();
    if (features.size() != m.weights.cols()) {
        throw std::invalid_argument("feature dimension does not match the weight matrix");
    }
    const Eigen::Vector2d theta = sigmoid_link(m.weights * features, m.upper_bounds);
    const double params[2] = {theta(0), theta(1)};
    return Distribution::from_params(m.family, params, 2);
}

LogLikelihood regression_log_likelihood(const RegressionModel& m, const RegressionDataset& d) {
    m.validate();
    d.validate();
    LogLikelihood result;
    for (const auto& p : d.observed) {
        const double lp = predict_params(m, p.features).log_pdf(p.time);
        if (lp == -kInf) return {-kInf, true};
        result.value += lp;
    }
    for (const auto& p : d.censored) {
        const double ls = predict_params(m, p.features).log_survival(p.time);
        if (ls == -kInf) return {-kInf, true};
        result.value += ls;
    }
    return result;
}

Eigen::MatrixXd regression_gradient(const RegressionModel& m, const RegressionDataset& d) {
    m.validate();
    d.validate();
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(2, m.weights.cols());
    for (const auto& p : d.observed) {
        const Eigen::Vector2d alpha = m.weights * p.features;
        const Eigen::Vector2d theta = sigmoid_link(alpha, m.upper_bounds);
        const Eigen::Vector2d score = score_log_pdf(m.family, theta, p.time);
        const Eigen::Vector2d slope = sigmoid_link_derivative(alpha, m.upper_bounds);
        grad.noalias() += (score.cwiseProduct(slope)) * p.features.transpose();
    }
    for (const auto& p : d.censored) {
        const Eigen::Vector2d alpha = m.weights * p.features;
        const Eigen::Vector2d theta = sigmoid_link(alpha, m.upper_bounds);
        const Eigen::Vector2d score = score_log_survival(m.family, theta, p.time);
        const Eigen::Vector2d slope = sigmoid_link_derivative(alpha, m.upper_bounds);
        grad.noalias() += (score.cwiseProduct(slope)) * p.features.transpose();
    }
    return grad;
}

RegressionFitResult fit_regression(Family family, const RegressionDataset& d,
                                   const RegressionFitOptions& options) {
    d.validate();
    if (family == Family::Exponential) {
        throw std::invalid_argument("regression requires a two-parameter family");
    }

    const auto collapsed = d.collapse();
    const FitResult global = family == Family::Lomax ? fit_lomax_censored(collapsed)
                                                     : fit_generic_censored(family, collapsed);
    Eigen::Vector2d theta_global(global.dist.param(0), global.dist.param(1));

    Eigen::Vector2d upper = options.upper_bounds;
    for (int k = 0; k < 2; ++k) {
        if (!(upper(k) > 0.0)) upper(k) = 10.0 * theta_global(k);
        // keep the starting point strictly inside the box
        theta_global(k) = std::min(theta_global(k), 0.999 * upper(k));
    }

    // Standardize non-bias features for the descent; weights are mapped
    // back to raw-feature space on output.
    const Eigen::Index dim = d.feature_dim();
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sigma = Eigen::VectorXd::Ones(dim);
    if (dim > 1) {
        const double count = static_cast<double>(d.observed.size() + d.censored.size());
        for (const auto* part : {&d.observed, &d.censored}) {
            for (const auto& p : *part) mu += p.features;
        }
        mu /= count;
        mu(0) = 0.0;
        Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
        for (const auto* part : {&d.observed, &d.censored}) {
            for (const auto& p : *part) var += (p.features - mu).cwiseAbs2();
        }
        var /= count;
        for (Eigen::Index i = 1; i < dim; ++i) {
            sigma(i) = var(i) > 1e-24 ? std::sqrt(var(i)) : 1.0;
        }
    }

    RegressionDataset standardized = d;
    auto standardize = [&](Eigen::VectorXd& f) {
        for (Eigen::Index i = 1; i < dim; ++i) f(i) = (f(i) - mu(i)) / sigma(i);
    };
    for (auto& p : standardized.observed) standardize(p.features);
    for (auto& p : standardized.censored) standardize(p.features);

    RegressionModel model;
    model.family = family;
    model.upper_bounds = upper;
    model.weights = Eigen::MatrixXd::Zero(2, dim);
    model.weights.col(0) = sigmoid_link_inverse(theta_global, upper);

    const PackedPart packed_obs = pack(standardized.observed, dim);
    const PackedPart packed_cens = pack(standardized.censored, dim);
    auto value_at = [&](const Eigen::MatrixXd& w) {
        return eval_packed(family, w, upper, packed_obs, packed_cens, false);
    };

    RegressionFitResult result{model, global.dist, false, 0, 0.0, {}};
    double ll = value_at(model.weights).value;
    result.log_lik_trace.push_back(ll);

    double step = options.initial_step;
    constexpr double kArmijoC1 = 1e-4;
    constexpr double kMinStep = 1e-18;
    int stalled = 0;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        const auto at_w = eval_packed(family, model.weights, upper, packed_obs, packed_cens, true);
        const double grad_norm = at_w.grad.cwiseAbs().maxCoeff();
        if (grad_norm < options.grad_tol) {
            result.converged = true;
            break;
        }
        const double gg = at_w.grad.squaredNorm();
        bool accepted = false;
        for (double s = step; s >= kMinStep; s *= options.backtrack_factor) {
            const Eigen::MatrixXd trial = model.weights + s * at_w.grad;
            const auto trial_ll = value_at(trial);
            if (!trial_ll.degenerate && trial_ll.value >= ll + kArmijoC1 * s * gg) {
                stalled = trial_ll.value - ll < 1e-14 * (1.0 + std::abs(ll)) ? stalled + 1 : 0;
                model.weights = trial;
                ll = trial_ll.value;
                result.log_lik_trace.push_back(ll);
                step = s * 2.0;
                accepted = true;
                break;
            }
        }
        // stop once steps no longer move the likelihood at working precision
        if (!accepted || stalled >= 40) break;
    }
    result.iterations = iter;

    // Map the weights back to raw-feature coordinates: standardized f' is
    // an affine image of f, so W f' = (W M) f with M folding mu and sigma
    // into the bias column.
    Eigen::MatrixXd to_standardized = Eigen::MatrixXd::Identity(dim, dim);
    for (Eigen::Index i = 1; i < dim; ++i) {
        to_standardized(i, i) = 1.0 / sigma(i);
        to_standardized(i, 0) = -mu(i) / sigma(i);
    }
    model.weights = (model.weights * to_standardized).eval();

    result.model = model;
    result.final_log_lik = regression_log_likelihood(model, d).value;
    return result;
}

ThresholdReport per_point_threshold(const RegressionModel& m, const Eigen::VectorXd& features,
                                    double c_int, double tau_baseline) {
    return optimal_threshold(predict_params(m, features), c_int, tau_baseline);
}

}  // namespace survopt
