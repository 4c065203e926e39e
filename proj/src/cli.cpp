#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "survopt/cli_io.hpp"
#include "survopt/errors.hpp"
#include "survopt/estimation.hpp"
#include "survopt/feature_regression.hpp"
#include "survopt/joint_opt.hpp"
#include "survopt/markov_cost.hpp"
#include "survopt/simulation.hpp"
#include "survopt/threshold_opt.hpp"

namespace survopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::string> kFamilyNames = {"exponential", "weibull", "lomax", "loglogistic"};

/// Bad flag combinations detected after CLI11 parsing; exits with the
/// usage code rather than the data code.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Two-column output that renders as aligned `key = value` text or as a
/// single CSV record, per --format.
class Report {
  public:
    void add(std::string key, std::string value) {
        rows_.emplace_back(std::move(key), std::move(value));
    }
    void add(std::string key, double value) { add(std::move(key), format_number(value)); }
    void add(std::string key, std::int64_t value) { add(std::move(key), std::to_string(value)); }

    void print(std::ostream& out, const std::string& format) const {
        if (format == "csv") {
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                out << rows_[i].first << (i + 1 < rows_.size() ? "," : "");
            }
            out << '\n';
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                out << rows_[i].second << (i + 1 < rows_.size() ? "," : "");
            }
            out << '\n';
        } else {
            std::size_t width = 0;
            for (const auto& [key, value] : rows_) width = std::max(width, key.size());
            for (const auto& [key, value] : rows_) {
                out << key << std::string(width - key.size(), ' ') << " = " << value << '\n';
            }
        }
    }

  private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

struct DistFlags {
    std::string family;
    double shape = 0.0;
    double scale = 0.0;
    double rate = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--family", family, "Distribution family")
            ->required()
            ->check(CLI::IsMember(kFamilyNames));
        cmd->add_option("--shape", shape, "Shape parameter");
        cmd->add_option("--scale", scale, "Scale parameter");
        cmd->add_option("--rate", rate, "Rate parameter (exponential)");
    }

    Distribution build() const {
        const Family f = family_from_string(family);
        if (f == Family::Exponential) {
            if (!(rate > 0.0)) throw UsageError("exponential requires --rate > 0");
            return Distribution::exponential(rate);
        }
        if (!(shape > 0.0) || !(scale > 0.0)) {
            throw UsageError(family + " requires --shape > 0 and --scale > 0");
        }
        const double params[2] = {shape, scale};
        return Distribution::from_params(f, params, 2);
    }
};

std::vector<TransitionRecord> load_records(const std::string& path, std::ostream& err) {
    auto parsed = parse_transition_log(std::filesystem::path(path));
    for (const auto& e : parsed.row_errors) {
        err << path << ":" << e.line << ": " << e.message << '\n';
    }
    return std::move(parsed.records);
}

/// Observed durations for from->to plus censoring levels from every other
/// transition leaving `from` (the controller stopped waiting there).
CensoredSampleSet to_sample_set(std::span<const TransitionRecord> records,
                                const std::string& from, const std::string& to) {
    CensoredSampleSet s;
    for (const auto& r : records) {
        if (r.from_state != from) continue;
        if (r.to_state == to) {
            s.observed.push_back(r.duration);
        } else {
            s.censored.push_back({r.duration, 1});
        }
    }
    return s;
}

FitResult fit_family(Family family, const CensoredSampleSet& s) {
    return family == Family::Lomax ? fit_lomax_censored(s) : fit_generic_censored(family, s);
}

void describe_fit(Report& report, const FitResult& fit) {
    report.add("family", std::string(to_string(fit.dist.family())));
    if (fit.dist.family() == Family::Exponential) {
        report.add("rate", fit.dist.param(0));
    } else {
        report.add("shape", fit.dist.param(0));
        report.add("scale", fit.dist.param(1));
    }
    report.add("log_likelihood", fit.log_lik);
    report.add("converged", std::string(fit.converged ? "true" : "false"));
    report.add("fit_path", std::string(fit.path == FitPath::ClosedForm ? "closed_form" : "numeric"));
    if (fit.boundary_warning) report.add("warning", std::string("boundary_fit"));
}

void describe_threshold(Report& report, const ThresholdReport& t) {
    report.add("tau_hat", t.tau_hat);
    report.add("boundary", std::string(to_string(t.boundary_case)));
    report.add("edt_at_tau_hat", t.edt_at_tau_hat);
    report.add("edt_at_zero", t.edt_at_zero);
    report.add("edt_limit", t.edt_limit ? format_number(*t.edt_limit) : std::string("inf"));
    report.add("edt_at_baseline", t.edt_at_baseline);
    report.add("relative_savings", t.relative_savings);
}

int command_fit(const std::string& log_path, const std::string& family_name,
                const std::string& from, const std::string& to, int cluster_column,
                const std::string& model_file, double c_int, double baseline_tau,
                std::int64_t fitted_at, const std::string& format, std::ostream& out,
                std::ostream& err) {
    const Family family = family_from_string(family_name);
    const auto records = load_records(log_path, err);

    if (cluster_column <= 0) {
        const auto sample = to_sample_set(records, from, to);
        const auto fit = fit_family(family, sample);
        Report report;
        report.add("observed_n", static_cast<std::int64_t>(sample.observed.size()));
        report.add("censored_n", sample.censored_count());
        describe_fit(report, fit);
        if (c_int > 0.0) {
            describe_threshold(report, optimal_threshold(fit.dist, c_int, baseline_tau));
        }
        report.print(out, format);
        return 0;
    }

    // group by the cluster column and fit each cluster separately
    std::map<std::string, std::vector<TransitionRecord>> clusters;
    for (const auto& r : records) {
        const auto idx = static_cast<std::size_t>(cluster_column - 1);
        if (idx >= r.features.size()) {
            throw SchemaError("cluster column feature_" + std::to_string(cluster_column) +
                              " is missing from some records");
        }
        clusters[format_number(r.features[idx])].push_back(r);
    }
    std::vector<ModelFileRow> rows;
    for (const auto& [cluster_id, cluster_records] : clusters) {
        const auto sample = to_sample_set(cluster_records, from, to);
        const auto fit = fit_family(family, sample);
        const auto threshold = optimal_threshold(fit.dist, c_int, baseline_tau);
        ModelFileRow row;
        row.cluster_id = cluster_id;
        row.transition = from + "->" + to;
        row.family = std::string(to_string(family));
        row.param1 = fit.dist.param(0);
        row.param2 = fit.dist.param_count() > 1 ? fit.dist.param(1) : 0.0;
        row.tau_hat = threshold.tau_hat;
        row.c_int = c_int;
        row.baseline_tau = baseline_tau;
        row.relative_savings = threshold.relative_savings;
        row.fitted_at = fitted_at;
        rows.push_back(std::move(row));
    }
    if (model_file == "-") {
        emit_model_file(std::move(rows), out);
    } else {
        emit_model_file(std::move(rows), std::filesystem::path(model_file));
    }
    return 0;
}

int command_cost(const std::string& log_path, const std::string& absorbing,
                 const std::string& from_state, const std::string& format, std::ostream& out,
                 std::ostream& err) {
    const auto records = load_records(log_path, err);
    std::vector<std::string> states;
    for (const auto& r : records) {
        for (const auto& name : {r.from_state, r.to_state}) {
            if (std::find(states.begin(), states.end(), name) == states.end()) {
                states.push_back(name);
            }
        }
    }
    std::sort(states.begin(), states.end());
    const auto model = estimate_transition_model(records, states, absorbing);
    const auto t = expected_time_to_absorption(model);

    if (!from_state.empty()) {
        Report report;
        report.add("from_state", from_state);
        report.add("c_int", t(model.state_index(from_state)));
        report.print(out, format);
        return 0;
    }

    out << "state,time_to_" << absorbing << '\n';
    for (std::size_t i = 0; i < model.states.size(); ++i) {
        out << model.states[i] << ',' << format_number(t(static_cast<Eigen::Index>(i))) << '\n';
    }
    out << "from,to,probability,mean_duration\n";
    for (std::size_t i = 0; i < model.states.size(); ++i) {
        for (std::size_t j = 0; j < model.states.size(); ++j) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            if (model.probabilities(ii, jj) == 0.0) continue;
            out << model.states[i] << ',' << model.states[j] << ','
                << format_number(model.probabilities(ii, jj)) << ','
                << format_number(model.durations(ii, jj)) << '\n';
        }
    }
    return 0;
}

int command_regress(const std::string& log_path, const std::string& family_name,
                    const std::string& from, const std::string& to, double c_int,
                    double baseline_tau, double u1, double u2, const std::string& format,
                    std::ostream& out, std::ostream& err) {
    const Family family = family_from_string(family_name);
    const auto records = load_records(log_path, err);

    RegressionDataset dataset;
    for (const auto& r : records) {
        if (r.from_state != from) continue;
        Eigen::VectorXd f(static_cast<Eigen::Index>(r.features.size()) + 1);
        f(0) = 1.0;
        for (std::size_t i = 0; i < r.features.size(); ++i) {
            f(static_cast<Eigen::Index>(i) + 1) = r.features[i];
        }
        if (r.to_state == to) {
            dataset.observed.push_back({r.duration, std::move(f)});
        } else {
            dataset.censored.push_back({r.duration, std::move(f)});
        }
    }

    RegressionFitOptions options;
    options.upper_bounds = Eigen::Vector2d(u1, u2);
    const auto result = fit_regression(family, dataset, options);

    Report report;
    report.add("observed_n", static_cast<std::int64_t>(dataset.observed.size()));
    report.add("censored_n", static_cast<std::int64_t>(dataset.censored.size()));
    report.add("global_shape", result.global_fit.param(0));
    report.add("global_scale", result.global_fit.param(1));
    report.add("upper_bound_1", result.model.upper_bounds(0));
    report.add("upper_bound_2", result.model.upper_bounds(1));
    report.add("log_likelihood", result.final_log_lik);
    report.add("iterations", static_cast<std::int64_t>(result.iterations));
    report.add("converged", std::string(result.converged ? "true" : "false"));
    for (Eigen::Index j = 0; j < result.model.weights.cols(); ++j) {
        report.add("w1_" + std::to_string(j), result.model.weights(0, j));
        report.add("w2_" + std::to_string(j), result.model.weights(1, j));
    }
    report.print(out, format);

    // per-distinct-feature-vector predictions (clusters in practice)
    std::map<std::string, Eigen::VectorXd> distinct;
    for (const auto* part : {&dataset.observed, &dataset.censored}) {
        for (const auto& p : *part) {
            std::string key;
            for (Eigen::Index i = 0; i < p.features.size(); ++i) {
                key += format_number(p.features(i)) + "|";
            }
            distinct.emplace(std::move(key), p.features);
        }
    }
    constexpr std::size_t kMaxReported = 64;
    if (distinct.size() <= kMaxReported) {
        out << "features,shape,scale" << (c_int > 0.0 ? ",tau_hat,boundary" : "") << '\n';
        for (const auto& [key, f] : distinct) {
            const auto d = predict_params(result.model, f);
            std::string shown = key;
            std::replace(shown.begin(), shown.end(), '|', ';');
            out << shown << ',' << format_number(d.param(0)) << ',' << format_number(d.param(1));
            if (c_int > 0.0) {
                const auto threshold = per_point_threshold(result.model, f, c_int, baseline_tau);
                out << ',' << format_number(threshold.tau_hat) << ','
                    << to_string(threshold.boundary_case);
            }
            out << '\n';
        }
    }
    return 0;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Censored survival fitting and waiting-threshold optimization"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    std::string format = "text";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "Fit a recovery distribution from transition logs");
    std::string fit_log;
    std::string fit_family_name;
    std::string fit_from = "Unhealthy";
    std::string fit_to = "Ready";
    int fit_cluster_column = 0;
    std::string fit_model_file;
    double fit_c_int = 0.0;
    double fit_baseline = kDefaultBaselineTau;
    std::int64_t fit_fitted_at = 0;
    fit->add_option("--log", fit_log, "Transition-log CSV path")->required();
    fit->add_option("--family", fit_family_name, "Distribution family")
        ->required()
        ->check(CLI::IsMember(kFamilyNames));
    fit->add_option("--from", fit_from, "Source state")->capture_default_str();
    fit->add_option("--to", fit_to, "Organic recovery target state")->capture_default_str();
    fit->add_option("--cluster-column", fit_cluster_column,
                    "1-based feature column holding the cluster id; fits per cluster");
    fit->add_option("--emit-model-file", fit_model_file,
                    "Write a model file to this path ('-' for stdout); needs --cluster-column and --c-int");
    fit->add_option("--c-int", fit_c_int, "Intervention cost for threshold reporting");
    fit->add_option("--baseline-tau", fit_baseline, "Deployed threshold")->capture_default_str();
    fit->add_option("--fitted-at", fit_fitted_at, "Epoch-seconds stamp for model files");

    // ---- optimize ----
    auto* optimize = app.add_subcommand("optimize", "Optimal waiting threshold for a distribution");
    DistFlags optimize_dist;
    optimize_dist.attach(optimize);
    std::string optimize_log;
    std::string optimize_from = "Unhealthy";
    std::string optimize_to = "Ready";
    double optimize_c_int = 0.0;
    double optimize_baseline = kDefaultBaselineTau;
    optimize->add_option("--log", optimize_log,
                         "Fit the family to this transition log instead of taking parameters");
    optimize->add_option("--from", optimize_from, "Source state (with --log)")
        ->capture_default_str();
    optimize->add_option("--to", optimize_to, "Recovery target state (with --log)")
        ->capture_default_str();
    optimize->add_option("--c-int", optimize_c_int, "Intervention cost (seconds)")->required();
    optimize->add_option("--baseline-tau", optimize_baseline, "Deployed threshold")
        ->capture_default_str();

    // ---- cost ----
    auto* cost = app.add_subcommand("cost", "Intervention cost from logs via hitting times");
    std::string cost_log;
    std::string cost_absorbing = "Ready";
    std::string cost_from;
    cost->add_option("--log", cost_log, "Transition-log CSV path")->required();
    cost->add_option("--absorbing", cost_absorbing, "Absorbing state")->capture_default_str();
    cost->add_option("--from-state", cost_from, "Report only this state's hitting time");

    // ---- regress ----
    auto* regress = app.add_subcommand("regress", "Feature regression of recovery parameters");
    std::string regress_log;
    std::string regress_family;
    std::string regress_from = "Unhealthy";
    std::string regress_to = "Ready";
    double regress_c_int = 0.0;
    double regress_baseline = kDefaultBaselineTau;
    double regress_u1 = 0.0;
    double regress_u2 = 0.0;
    regress->add_option("--log", regress_log, "Transition-log CSV with feature columns")->required();
    regress->add_option("--family", regress_family, "Two-parameter family")
        ->required()
        ->check(CLI::IsMember({"weibull", "lomax", "loglogistic"}));
    regress->add_option("--from", regress_from, "Source state")->capture_default_str();
    regress->add_option("--to", regress_to, "Organic recovery target state")->capture_default_str();
    regress->add_option("--c-int", regress_c_int, "Report per-point thresholds at this cost");
    regress->add_option("--baseline-tau", regress_baseline, "Deployed threshold")
        ->capture_default_str();
    regress->add_option("--upper-bound-1", regress_u1, "Sigmoid cap for the shape (default 10x global fit)");
    regress->add_option("--upper-bound-2", regress_u2, "Sigmoid cap for the scale (default 10x global fit)");

    // ---- joint ----
    auto* joint = app.add_subcommand("joint", "Jointly optimize the coupled thresholds");
    std::string joint_config;
    std::vector<double> joint_init;
    bool joint_dump = false;
    joint->add_option("--config", joint_config, "Scenario config path")->required();
    joint->add_option("--init", joint_init, "Starting thresholds tau1 tau2")->expected(2);
    joint->add_flag("--dump-config", joint_dump, "Print the canonical config and exit");

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "Generate synthetic transition logs");
    std::string sim_config;
    double sim_tau1 = 0.0;
    double sim_tau2 = kInf;
    std::int64_t sim_n = 0;
    std::uint64_t sim_seed = 0;
    std::string sim_out = "-";
    std::vector<double> sim_features;
    bool sim_dump = false;
    simulate->add_option("--config", sim_config, "Scenario config path")->required();
    simulate->add_option("--tau1", sim_tau1, "Unhealthy threshold")->required();
    simulate->add_option("--tau2", sim_tau2, "PoweringOn threshold (default: never)");
    simulate->add_option("--n", sim_n, "Number of episodes")->required();
    simulate->add_option("--seed", sim_seed, "Random seed")->required();
    simulate->add_option("--out", sim_out, "Output path ('-' for stdout)")->capture_default_str();
    simulate->add_option("--feature", sim_features, "Feature value attached to every record (repeatable)");
    simulate->add_flag("--dump-config", sim_dump, "Print the canonical config and exit");

    // ---- abtest ----
    auto* abtest = app.add_subcommand("abtest", "Randomized threshold experiment with a t-test");
    std::string ab_config;
    double ab_treatment = 0.0;
    double ab_control = 0.0;
    double ab_prob = 0.35;
    std::int64_t ab_n = 0;
    std::uint64_t ab_seed = 0;
    bool ab_dump = false;
    abtest->add_option("--config", ab_config, "Scenario config path")->required();
    abtest->add_option("--tau-treatment", ab_treatment, "Treatment threshold")->required();
    abtest->add_option("--tau-control", ab_control, "Control threshold")->required();
    abtest->add_option("--assignment-prob", ab_prob, "P(episode gets the treatment threshold)")
        ->capture_default_str();
    abtest->add_option("--n", ab_n, "Number of episodes")->required();
    abtest->add_option("--seed", ab_seed, "Random seed")->required();
    abtest->add_flag("--dump-config", ab_dump, "Print the canonical config and exit");

    // ---- curve ----
    auto* curve = app.add_subcommand("curve", "Expected-downtime or cost-vs-threshold plot data");
    std::string curve_kind = "downtime";
    DistFlags curve_dist;
    std::string curve_config;
    double curve_c_int = 0.0;
    double curve_tau_max = 0.0;
    int curve_points = 200;
    std::string curve_out = "-";
    curve->add_option("--kind", curve_kind, "downtime: E[DT](tau); cint: C_int(tau)")
        ->check(CLI::IsMember({"downtime", "cint"}))
        ->capture_default_str();
    curve_dist.family = "lomax";
    curve->add_option("--family", curve_dist.family, "Distribution family (downtime kind)")
        ->check(CLI::IsMember(kFamilyNames));
    curve->add_option("--shape", curve_dist.shape, "Shape parameter");
    curve->add_option("--scale", curve_dist.scale, "Scale parameter");
    curve->add_option("--rate", curve_dist.rate, "Rate parameter (exponential)");
    curve->add_option("--config", curve_config, "Scenario config path (cint kind)");
    curve->add_option("--c-int", curve_c_int, "Intervention cost (downtime) or base cost (cint)")
        ->required();
    curve->add_option("--tau-max", curve_tau_max, "Upper end of the threshold grid")->required();
    curve->add_option("--points", curve_points, "Grid size")->capture_default_str();
    curve->add_option("--out", curve_out, "Output path ('-' for stdout)")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        err << "run with --help for usage\n";
        return 1;
    }

    try {
        if (fit->parsed()) {
            if (!fit_model_file.empty() && (fit_cluster_column <= 0 || !(fit_c_int > 0.0))) {
                err << "--emit-model-file requires --cluster-column and --c-int\n";
                return 1;
            }
            return command_fit(fit_log, fit_family_name, fit_from, fit_to, fit_cluster_column,
                               fit_model_file, fit_c_int, fit_baseline, fit_fitted_at, format, out,
                               err);
        }
        if (optimize->parsed()) {
            Report report;
            if (optimize_log.empty()) {
                const auto d = optimize_dist.build();
                describe_threshold(report,
                                   optimal_threshold(d, optimize_c_int, optimize_baseline));
            } else {
                const auto records = load_records(optimize_log, err);
                const auto sample = to_sample_set(records, optimize_from, optimize_to);
                const auto fit = fit_family(family_from_string(optimize_dist.family), sample);
                describe_fit(report, fit);
                describe_threshold(
                    report, optimal_threshold(fit.dist, optimize_c_int, optimize_baseline));
            }
            report.print(out, format);
            return 0;
        }
        if (cost->parsed()) {
            return command_cost(cost_log, cost_absorbing, cost_from, format, out, err);
        }
        if (regress->parsed()) {
            return command_regress(regress_log, regress_family, regress_from, regress_to,
                                   regress_c_int, regress_baseline, regress_u1, regress_u2, format,
                                   out, err);
        }
        if (joint->parsed()) {
            const auto config = load_scenario_config(std::filesystem::path(joint_config));
            if (joint_dump) {
                out << dump_scenario_config(config);
                return 0;
            }
            const JointOptResult result =
                joint_init.empty()
                    ? joint_optimize(config.scenario)
                    : joint_optimize(config.scenario, {joint_init[0], joint_init[1]});
            Report report;
            report.add("tau1_hat", result.tau1);
            report.add("tau2_hat", result.tau2);
            report.add("downtime", result.downtime);
            report.add("converged", std::string(result.converged ? "true" : "false"));
            report.add("iterations", static_cast<std::int64_t>(result.iterations));
            report.print(out, format);
            return 0;
        }
        if (simulate->parsed()) {
            const auto config = load_scenario_config(std::filesystem::path(sim_config));
            if (sim_dump) {
                out << dump_scenario_config(config);
                return 0;
            }
            const auto records = generate_logs(config.scenario, {sim_tau1, sim_tau2}, sim_n,
                                               sim_seed, sim_features);
            if (sim_out == "-") {
                write_transition_log(records, out);
            } else {
                write_transition_log(records, std::filesystem::path(sim_out));
            }
            return 0;
        }
        if (abtest->parsed()) {
            const auto config = load_scenario_config(std::filesystem::path(ab_config));
            if (ab_dump) {
                out << dump_scenario_config(config);
                return 0;
            }
            const auto result =
                ab_experiment(config.scenario, ab_treatment, ab_control, ab_prob, ab_n, ab_seed);
            Report report;
            report.add("treatment_mean", result.treatment_mean);
            report.add("control_mean", result.control_mean);
            report.add("treatment_n", result.treatment_n);
            report.add("control_n", result.control_n);
            report.add("t_stat", result.t_stat);
            report.add("p_value", result.p_value);
            report.add("assignment_prob", result.assignment_prob);
            report.print(out, format);
            return 0;
        }
        if (curve->parsed()) {
            if (!(curve_tau_max > 0.0) || curve_points < 2) {
                err << "curve requires --tau-max > 0 and --points >= 2\n";
                return 1;
            }
            std::vector<double> grid(static_cast<std::size_t>(curve_points));
            for (int i = 0; i < curve_points; ++i) {
                grid[static_cast<std::size_t>(i)] =
                    curve_tau_max * static_cast<double>(i) / (curve_points - 1);
            }
            std::vector<std::pair<double, double>> points;
            std::string value_column;
            if (curve_kind == "downtime") {
                points = downtime_curve(curve_dist.build(), curve_c_int, grid);
                value_column = "expected_downtime";
            } else {
                if (curve_config.empty()) {
                    err << "curve --kind cint requires --config\n";
                    return 1;
                }
                const auto config = load_scenario_config(std::filesystem::path(curve_config));
                points = intervention_cost_vs_tau(config.scenario, curve_c_int, grid);
                value_column = "c_int";
            }
            std::ostringstream body;
            body << "tau," << value_column << '\n';
            for (const auto& [tau, value] : points) {
                body << format_number(tau) << ',' << format_number(value) << '\n';
            }
            if (curve_out == "-") {
                out << body.str();
            } else {
                std::ofstream file(curve_out, std::ios::binary);
                if (!file) throw Error("cannot open " + curve_out + " for writing");
                file << body.str();
            }
            return 0;
        }
    } catch (const UsageError& e) {
        err << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << "no subcommand given; run with --help for usage\n";
    return 1;
}

}  // namespace survopt
