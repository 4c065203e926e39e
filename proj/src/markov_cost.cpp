#include "survopt/markov_cost.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "survopt/errors.hpp"

namespace survopt {

namespace {
constexpr double kRowSumTol = 1e-9;
constexpr double kConditionLimit = 1e12;
}  // namespace

Eigen::Index TransitionModel::state_index(std::string_view name) const {
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(states.size()); ++i) {
        if (states[static_cast<std::size_t>(i)] == name) return i;
    }
    throw std::invalid_argument("unknown state name: " + std::string(name));
}

void TransitionModel::validate() const {
    const auto n = static_cast<Eigen::Index>(states.size());
    if (n < 2) throw std::invalid_argument("a transition model needs at least two states");
    if (probabilities.rows() != n || probabilities.cols() != n || durations.rows() != n ||
        durations.cols() != n) {
        throw std::invalid_argument("matrix shapes must match the state count");
    }
    if (absorbing < 0 || absorbing >= n) throw std::invalid_argument("absorbing index out of range");

    for (Eigen::Index i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double p = probabilities(i, j);
            if (!(p >= 0.0) || p > 1.0 + kRowSumTol) {
                throw std::invalid_argument("transition probabilities must lie in [0, 1]");
            }
            if (probabilities(i, j) > 0.0 && !(durations(i, j) >= 0.0)) {
                throw std::invalid_argument("transition durations must be nonnegative");
            }
            row_sum += p;
        }
        if (i == absorbing) {
            if (row_sum != 0.0) throw std::invalid_argument("absorbing row of P must be all zeros");
            if (durations.row(i).cwiseAbs().sum() != 0.0) {
                throw std::invalid_argument("absorbing row of T must be all zeros");
            }
        } else if (std::abs(row_sum - 1.0) > kRowSumTol) {
            throw std::invalid_argument("row " + states[static_cast<std::size_t>(i)] +
                                        " of P must sum to 1");
        }
    }
}

TransitionModel estimate_transition_model(std::span<const TransitionRecord> logs,
                                          std::vector<std::string> states,
                                          std::string_view absorbing_state) {
    TransitionModel model;
    model.states = std::move(states);
    const auto n = static_cast<Eigen::Index>(model.states.size());
    model.absorbing = model.state_index(absorbing_state);
    model.probabilities = Eigen::MatrixXd::Zero(n, n);
    model.durations = Eigen::MatrixXd::Zero(n, n);

    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd total_duration = Eigen::MatrixXd::Zero(n, n);
    for (const auto& r : logs) {
        const Eigen::Index from = model.state_index(r.from_state);
        if (from == model.absorbing) continue;  // departures from the absorbing state are other episodes
        const Eigen::Index to = model.state_index(r.to_state);
        counts(from, to) += 1.0;
        total_duration(from, to) += r.duration;
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        if (i == model.absorbing) continue;
        const double row_total = counts.row(i).sum();
        if (row_total == 0.0) {
            throw UnreachableStateError("state '" + model.states[static_cast<std::size_t>(i)] +
                                        "' has no outgoing transitions in the logs");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (counts(i, j) == 0.0) continue;
            model.probabilities(i, j) = counts(i, j) / row_total;
            model.durations(i, j) = total_duration(i, j) / counts(i, j);
        }
    }
    model.validate();
    return model;
}

Eigen::VectorXd expected_time_to_absorption(const TransitionModel& m) {
    m.validate();
    const auto n = static_cast<Eigen::Index>(m.states.size());
    const Eigen::Index nt = n - 1;  // transient count

    // Q and the per-row expected transition time, with the absorbing
    // row/column removed.
    Eigen::MatrixXd q(nt, nt);
    Eigen::VectorXd rhs(nt);
    Eigen::Index ri = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i == m.absorbing) continue;
        rhs(ri) = m.probabilities.row(i).cwiseProduct(m.durations.row(i)).sum();
        Eigen::Index rj = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == m.absorbing) continue;
            q(ri, rj) = m.probabilities(i, j);
            ++rj;
        }
        ++ri;
    }

    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(nt, nt) - q;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const double rcond = lu.rcond();
    if (!(rcond > 1.0 / kConditionLimit)) {
        throw UnreachableStateError(
            "the absorbing state is not reachable from every transient state "
            "(I - Q is singular to working precision)");
    }
    const Eigen::VectorXd t_transient = lu.solve(rhs);

    Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
    ri = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i == m.absorbing) continue;
        t(i) = std::max(t_transient(ri), 0.0);
        ++ri;
    }
    return t;
}

double intervention_cost(const TransitionModel& m, std::string_view from_state) {
    const Eigen::Index idx = m.state_index(from_state);
    if (idx == m.absorbing) return 0.0;
    return expected_time_to_absorption(m)(idx);
}

}  // namespace survopt
