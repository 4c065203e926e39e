#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "survopt/joint_opt.hpp"
#include "survopt/transition_record.hpp"

namespace survopt {

/// Transition-log CSV header, without feature columns.
inline constexpr std::string_view kLogHeaderPrefix =
    "node_id,from_state,to_state,duration_seconds,timestamp";

/// Canonical float rendering used across all emitted files: 12 significant
/// digits, shortest form.
std::string format_number(double value);

struct RowError {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string message;
};

struct ParsedLog {
    std::vector<TransitionRecord> records;
    std::vector<RowError> row_errors;
    std::size_t feature_count = 0;
};

/// Parse a transition-log CSV. Malformed rows are collected with their
/// line numbers and skipped; a missing required column throws SchemaError.
/// Columns beyond `timestamp` are read positionally as features.
ParsedLog parse_transition_log(std::istream& in);
ParsedLog parse_transition_log(const std::filesystem::path& path);

void write_transition_log(std::span<const TransitionRecord> records, std::ostream& out);
void write_transition_log(std::span<const TransitionRecord> records,
                          const std::filesystem::path& path);

/// One fitted (cluster, transition) entry of a model file.
struct ModelFileRow {
    std::string cluster_id;
    std::string transition;  // "Unhealthy->PoweringOn"
    std::string family;
    double param1 = 0.0;
    double param2 = 0.0;
    double tau_hat = 0.0;
    double c_int = 0.0;
    double baseline_tau = 0.0;
    double relative_savings = 0.0;
    std::int64_t fitted_at = 0;
};

/// Emit the per-cluster model file: rows sorted by (cluster_id, transition),
/// floats at 12 significant digits, LF line endings, so that reruns over
/// identical inputs diff clean. Throws std::invalid_argument on duplicate
/// (cluster, transition) keys.
void emit_model_file(std::vector<ModelFileRow> rows, std::ostream& out);
void emit_model_file(std::vector<ModelFileRow> rows, const std::filesystem::path& path);

/// Scenario file: `key = value` lines with `#` comments. Recognized keys:
/// family1, shape1, scale1 (or rate1), family2, shape2, scale2 (or rate2),
/// p, B, C_HI, baseline_tau. Missing optional keys default to p=0, B=0,
/// C_HI=0, baseline_tau=600.
struct ScenarioConfig {
    CoupledScenario scenario;
    double baseline_tau = 600.0;
};

ScenarioConfig load_scenario_config(std::istream& in);
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

/// Canonical text form; loading and dumping a dumped config is a fixed
/// point byte for byte.
std::string dump_scenario_config(const ScenarioConfig& config);

/// Entry point behind the `survopt` binary. Returns 0 on success, 1 on
/// usage errors, 2 on data errors.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace survopt
