#include "survopt/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "survopt/errors.hpp"

namespace survopt {

namespace {

const std::vector<std::string> kRequiredColumns = {"node_id", "from_state", "to_state",
                                                   "duration_seconds", "timestamp"};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    std::size_t consumed = 0;
    try {
        out = std::stod(text, &consumed);
    } catch (const std::exception&) {
        return false;
    }
    return consumed == text.size();
}

bool parse_int64(const std::string& text, std::int64_t& out) {
    if (text.empty()) return false;
    std::size_t consumed = 0;
    try {
        out = std::stoll(text, &consumed);
    } catch (const std::exception&) {
        return false;
    }
    return consumed == text.size();
}

std::string strip(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

ParsedLog parse_transition_log(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty input: missing header line");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_csv_line(line);
    if (header.size() < kRequiredColumns.size()) {
        throw SchemaError("header has " + std::to_string(header.size()) +
                          " columns; expected at least " +
                          std::to_string(kRequiredColumns.size()));
    }
    for (std::size_t i = 0; i < kRequiredColumns.size(); ++i) {
        if (header[i] != kRequiredColumns[i]) {
            throw SchemaError("column " + std::to_string(i + 1) + " must be '" +
                              kRequiredColumns[i] + "', found '" + header[i] + "'");
        }
    }

    ParsedLog parsed;
    parsed.feature_count = header.size() - kRequiredColumns.size();

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            parsed.row_errors.push_back({line_no, "expected " + std::to_string(header.size()) +
                                                      " fields, found " +
                                                      std::to_string(fields.size())});
            continue;
        }
        TransitionRecord record;
        record.node_id = fields[0];
        record.from_state = fields[1];
        record.to_state = fields[2];
        if (!parse_double(fields[3], record.duration) || !(record.duration >= 0.0)) {
            parsed.row_errors.push_back({line_no, "bad duration '" + fields[3] + "'"});
            continue;
        }
        if (!parse_int64(fields[4], record.timestamp)) {
            parsed.row_errors.push_back({line_no, "bad timestamp '" + fields[4] + "'"});
            continue;
        }
        bool ok = true;
        record.features.reserve(parsed.feature_count);
        for (std::size_t i = kRequiredColumns.size(); i < fields.size(); ++i) {
            double value = 0.0;
            if (!parse_double(fields[i], value)) {
                parsed.row_errors.push_back(
                    {line_no, "bad feature value '" + fields[i] + "' in column " + header[i]});
                ok = false;
                break;
            }
            record.features.push_back(value);
        }
        if (ok) parsed.records.push_back(std::move(record));
    }
    return parsed;
}

ParsedLog parse_transition_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path.string());
    return parse_transition_log(in);
}

void write_transition_log(std::span<const TransitionRecord> records, std::ostream& out) {
    const std::size_t feature_count = records.empty() ? 0 : records.front().features.size();
    out << kLogHeaderPrefix;
    for (std::size_t i = 1; i <= feature_count; ++i) out << ",feature_" << i;
    out << '\n';
    for (const auto& r : records) {
        out << r.node_id << ',' << r.from_state << ',' << r.to_state << ','
            << format_number(r.duration) << ',' << r.timestamp;
        for (const double f : r.features) out << ',' << format_number(f);
        out << '\n';
    }
}

void write_transition_log(std::span<const TransitionRecord> records,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_transition_log(records, out);
}

void emit_model_file(std::vector<ModelFileRow> rows, std::ostream& out) {
    std::sort(rows.begin(), rows.end(), [](const ModelFileRow& a, const ModelFileRow& b) {
        return std::tie(a.cluster_id, a.transition) < std::tie(b.cluster_id, b.transition);
    });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].cluster_id == rows[i - 1].cluster_id &&
            rows[i].transition == rows[i - 1].transition) {
            throw std::invalid_argument("duplicate model-file key: " + rows[i].cluster_id + "/" +
                                        rows[i].transition);
        }
    }
    out << "cluster_id,transition,family,param1,param2,tau_hat,c_int,baseline_tau,"
           "relative_savings,fitted_at\n";
    for (const auto& r : rows) {
        out << r.cluster_id << ',' << r.transition << ',' << r.family << ','
            << format_number(r.param1) << ',' << format_number(r.param2) << ','
            << format_number(r.tau_hat) << ',' << format_number(r.c_int) << ','
            << format_number(r.baseline_tau) << ',' << format_number(r.relative_savings) << ','
            << r.fitted_at << '\n';
    }
}

void emit_model_file(std::vector<ModelFileRow> rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    emit_model_file(std::move(rows), out);
}

ScenarioConfig load_scenario_config(std::istream& in) {
    std::map<std::string, std::string> values;
    static const std::set<std::string> known = {"family1", "shape1", "scale1", "rate1",
                                                "family2", "shape2", "scale2", "rate2",
                                                "p",       "B",      "C_HI",   "baseline_tau"};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const std::string trimmed = strip(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = strip(trimmed.substr(0, eq));
        const std::string value = strip(trimmed.substr(eq + 1));
        if (!known.contains(key)) {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
        if (values.contains(key)) throw ConfigError("duplicate configuration key '" + key + "'");
        values[key] = value;
    }

    auto number = [&](const std::string& key, double fallback, bool required) {
        const auto it = values.find(key);
        if (it == values.end()) {
            if (required) throw ConfigError("missing required key '" + key + "'");
            return fallback;
        }
        double out = 0.0;
        if (!parse_double(it->second, out)) {
            throw ConfigError("key '" + key + "' has non-numeric value '" + it->second + "'");
        }
        return out;
    };

    auto distribution = [&](int which, bool required) -> Distribution {
        const std::string suffix = std::to_string(which);
        const auto family_it = values.find("family" + suffix);
        if (family_it == values.end()) {
            for (const auto& param : {"shape", "scale", "rate"}) {
                if (values.contains(param + suffix)) {
                    throw ConfigError(std::string(param) + suffix + " given without family" +
                                      suffix);
                }
            }
            if (required) throw ConfigError("missing required key 'family" + suffix + "'");
            // an absent second distribution defaults to a unit exponential;
            // it only matters when tau2 / bounce paths are exercised
            return Distribution::exponential(1.0);
        }
        const Family family = family_from_string(family_it->second);
        if (family == Family::Exponential) {
            return Distribution::exponential(number("rate" + suffix, 0.0, true));
        }
        const double shape = number("shape" + suffix, 0.0, true);
        const double scale = number("scale" + suffix, 0.0, true);
        const double params[2] = {shape, scale};
        return Distribution::from_params(family, params, 2);
    };

    const Distribution dist1 = distribution(1, true);
    const Distribution dist2 = distribution(2, false);
    const double p = number("p", 0.0, false);
    if (!(p >= 0.0) || p >= 1.0) throw ConfigError("p must lie in [0, 1)");
    const double bounce_time = number("B", 0.0, false);
    if (!(bounce_time >= 0.0)) throw ConfigError("B must be nonnegative");
    const double hi_cost = number("C_HI", 0.0, false);
    if (!(hi_cost >= 0.0)) throw ConfigError("C_HI must be nonnegative");
    const double baseline_tau = number("baseline_tau", 600.0, false);
    if (!(baseline_tau >= 0.0)) throw ConfigError("baseline_tau must be nonnegative");

    return {CoupledScenario{dist1, dist2, p, bounce_time, hi_cost}, baseline_tau};
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    return load_scenario_config(in);
}

std::string dump_scenario_config(const ScenarioConfig& config) {
    std::ostringstream out;
    auto emit_dist = [&](const Distribution& d, int which) {
        const std::string suffix = std::to_string(which);
        out << "family" << suffix << " = " << to_string(d.family()) << '\n';
        if (d.family() == Family::Exponential) {
            out << "rate" << suffix << " = " << format_number(d.param(0)) << '\n';
        } else {
            out << "shape" << suffix << " = " << format_number(d.param(0)) << '\n';
            out << "scale" << suffix << " = " << format_number(d.param(1)) << '\n';
        }
    };
    emit_dist(config.scenario.organic_recovery, 1);
    emit_dist(config.scenario.reboot_recovery, 2);
    out << "p = " << format_number(config.scenario.bounce_prob) << '\n';
    out << "B = " << format_number(config.scenario.bounce_time) << '\n';
    out << "C_HI = " << format_number(config.scenario.hi_cost) << '\n';
    out << "baseline_tau = " << format_number(config.baseline_tau) << '\n';
    return out.str();
}

}  // namespace survopt
