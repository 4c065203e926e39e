#pragma once

#include <Eigen/Dense>
#include <vector>

#include "survopt/distributions.hpp"
#include "survopt/estimation.hpp"
#include "survopt/threshold_opt.hpp"

namespace survopt {

/// One survival observation paired with its feature vector. The first
/// feature element is the bias term and must be exactly 1.
struct RegressionPoint {
    double time = 0.0;          // duration for observed points, level for censored
    Eigen::VectorXd features;
};

struct RegressionDataset {
    std::vector<RegressionPoint> observed;
    std::vector<RegressionPoint> censored;

    void validate() const;
    Eigen::Index feature_dim() const;

    /// Drop the features, keeping durations and censoring levels.
    CensoredSampleSet collapse() const;
};

/// Per-point parameter map theta_i = sigmoid(W f_i) into a two-parameter
/// family; the sigmoid keeps each parameter inside (0, upper_bound).
/// Row 0 of W drives the shape, row 1 the scale.
struct RegressionModel {
    Family family = Family::Lomax;
    Eigen::MatrixXd weights;        // 2 x n
    Eigen::Vector2d upper_bounds;

    void validate() const;
};

/// theta_k = U_k / (1 + exp(-alpha_k))
Eigen::Vector2d sigmoid_link(const Eigen::Vector2d& alpha, const Eigen::Vector2d& upper_bounds);

/// d theta_k / d alpha_k = theta_k * (1 - theta_k / U_k)
Eigen::Vector2d sigmoid_link_derivative(const Eigen::Vector2d& alpha,
                                        const Eigen::Vector2d& upper_bounds);

/// Inverse of sigmoid_link; theta must lie strictly inside (0, U).
Eigen::Vector2d sigmoid_link_inverse(const Eigen::Vector2d& theta,
                                     const Eigen::Vector2d& upper_bounds);

Distribution predict_params(const RegressionModel& m, const Eigen::VectorXd& features);

LogLikelihood regression_log_likelihood(const RegressionModel& m, const RegressionDataset& d);

/// Analytic gradient of the censored log-likelihood with respect to W:
/// per point, the score in theta times the sigmoid slope, outer-multiplied
/// with the feature vector.
Eigen::MatrixXd regression_gradient(const RegressionModel& m, const RegressionDataset& d);

struct RegressionFitOptions {
    /// Parameter caps (U1, U2); nonpositive entries mean "10x the
    /// featureless fit".
    Eigen::Vector2d upper_bounds = Eigen::Vector2d::Zero();
    double grad_tol = 1e-6;
    int max_iterations = 10000;
    double initial_step = 1.0;
    double backtrack_factor = 0.5;
};

struct RegressionFitResult {
    RegressionModel model;
    Distribution global_fit;            // the featureless starting point
    bool converged = false;
    int iterations = 0;
    double final_log_lik = 0.0;
    std::vector<double> log_lik_trace;  // one entry per accepted step
};

/// Gradient ascent on the censored log-likelihood over W. Starts from the
/// featureless fit mapped through the inverse sigmoid, so iteration zero
/// reproduces the global model exactly. Features (except the bias) are
/// standardized internally; the returned weights act on raw features.
RegressionFitResult fit_regression(Family family, const RegressionDataset& d,
                                   const RegressionFitOptions& options = {});

/// Threshold for one data point: predict its parameters, then optimize.
ThresholdReport per_point_threshold(const RegressionModel& m, const Eigen::VectorXd& features,
                                    double c_int, double tau_baseline = kDefaultBaselineTau);

}  // namespace survopt
