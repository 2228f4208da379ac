#include "seqmeas/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "seqmeas/errors.hpp"

namespace seqmeas {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string &path, const std::string &what) {
    throw ConfigError("config field '" + path + "': " + what);
}

const json &member(const json &node, const std::string &path, const char *key) {
    auto it = node.find(key);
    if (it == node.end()) {
        fail(path + "." + key, "missing");
    }
    return *it;
}

double as_number(const json &node, const std::string &path) {
    if (!node.is_number()) {
        fail(path, "expected a number");
    }
    return node.get<double>();
}

std::uint64_t as_count(const json &node, const std::string &path) {
    if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<std::int64_t>() >= 0)) {
        fail(path, "expected a non-negative integer");
    }
    return node.get<std::uint64_t>();
}

Complex as_complex(const json &node, const std::string &path) {
    if (!node.is_array() || node.size() != 2) {
        fail(path, "expected an [re, im] pair");
    }
    return {as_number(node[0], path + "[0]"), as_number(node[1], path + "[1]")};
}

std::vector<Complex> as_amplitudes(const json &node, const std::string &path) {
    if (!node.is_array() || node.empty()) {
        fail(path, "expected a non-empty array of [re, im] pairs");
    }
    std::vector<Complex> out;
    out.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(as_complex(node[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

ResolutionConfig parse_resolution(const json &node, const std::string &path) {
    if (!node.is_object()) {
        fail(path, "expected an object");
    }
    ResolutionConfig out;
    const json &true_values = member(node, path, "true_values");
    if (!true_values.is_array() || true_values.empty()) {
        fail(path + ".true_values", "expected a non-empty array of numbers");
    }
    for (std::size_t i = 0; i < true_values.size(); ++i) {
        out.true_values.push_back(as_number(true_values[i], path + ".true_values[" + std::to_string(i) + "]"));
    }
    const json &reported = member(node, path, "reported_values");
    if (!reported.is_array() || reported.empty()) {
        fail(path + ".reported_values", "expected a non-empty array of numbers");
    }
    for (std::size_t i = 0; i < reported.size(); ++i) {
        out.reported_values.push_back(
            as_number(reported[i], path + ".reported_values[" + std::to_string(i) + "]"));
    }
    const json &rows = member(node, path, "amplitudes");
    if (!rows.is_array() || rows.size() != out.reported_values.size()) {
        fail(path + ".amplitudes", "expected one row per reported value");
    }
    out.amplitudes.resize(static_cast<Eigen::Index>(out.reported_values.size()),
                          static_cast<Eigen::Index>(out.true_values.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string row_path = path + ".amplitudes[" + std::to_string(r) + "]";
        const json &row = rows[r];
        if (!row.is_array() || row.size() != out.true_values.size()) {
            fail(row_path, "expected one [re, im] pair per true value");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            out.amplitudes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                as_complex(row[c], row_path + "[" + std::to_string(c) + "]");
        }
    }
    return out;
}

/// Checks the raw amplitude norm, renormalizing only on request.
StateVector make_state(const std::vector<Complex> &amplitudes, const std::string &what,
                       bool normalize) {
    if (!normalize) {
        double norm_sq = 0.0;
        for (const Complex &a : amplitudes) {
            norm_sq += std::norm(a);
        }
        const double norm = std::sqrt(norm_sq);
        if (std::abs(norm - 1.0) > 1e-9) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.12g", norm);
            throw ValidationError(what + " not normalized (norm " + buf + "); pass --normalize to rescale");
        }
    }
    return StateVector::from_amplitudes(amplitudes);
}

std::string format_full(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void append_amplitudes(std::string &out, const Eigen::VectorXcd &amps) {
    out += '[';
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += '[';
        out += format_full(amps(i).real());
        out += ", ";
        out += format_full(amps(i).imag());
        out += ']';
    }
    out += ']';
}

} // namespace

ScenarioConfig parse_scenario_config(const std::string &json_text) {
    json root = json::parse(json_text, nullptr, false);
    if (root.is_discarded()) {
        throw ConfigError("config is not valid JSON");
    }
    if (!root.is_object()) {
        throw ConfigError("config root: expected an object");
    }

    ScenarioConfig out;
    const json &dim = member(root, "", "dimension");
    if (!dim.is_number_integer() || dim.get<std::int64_t>() < 1) {
        fail(".dimension", "expected a positive integer");
    }
    out.dimension = dim.get<int>();

    out.initial_state = as_amplitudes(member(root, "", "initial_state"), ".initial_state");

    const json &states = member(root, "", "measurement_states");
    if (!states.is_array() || states.empty()) {
        fail(".measurement_states", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::string path = ".measurement_states[" + std::to_string(i) + "]";
        const json &entry = states[i];
        if (!entry.is_object()) {
            fail(path, "expected an object with 'label' and 'amplitudes'");
        }
        const json &label = member(entry, path, "label");
        if (!label.is_string()) {
            fail(path + ".label", "expected a string");
        }
        out.measurement_states.emplace_back(
            label.get<std::string>(),
            as_amplitudes(member(entry, path, "amplitudes"), path + ".amplitudes"));
    }

    if (auto it = root.find("resolution_matrix"); it != root.end()) {
        out.resolution_matrix = parse_resolution(*it, ".resolution_matrix");
    }

    if (auto it = root.find("options"); it != root.end()) {
        const json &options = *it;
        if (!options.is_object()) {
            fail(".options", "expected an object");
        }
        if (auto opt = options.find("tolerance"); opt != options.end()) {
            out.tolerance = as_number(*opt, ".options.tolerance");
            if (!(out.tolerance > 0.0)) {
                fail(".options.tolerance", "expected a positive number");
            }
        }
        if (auto opt = options.find("mode"); opt != options.end()) {
            if (!opt->is_string()) {
                fail(".options.mode", "expected \"exact\" or \"sample\"");
            }
            const std::string mode = opt->get<std::string>();
            if (mode == "exact") {
                out.mode = SampleMode::kExact;
            } else if (mode == "sample") {
                out.mode = SampleMode::kSampled;
            } else {
                fail(".options.mode", "expected \"exact\" or \"sample\", got \"" + mode + "\"");
            }
        }
        if (auto opt = options.find("samples"); opt != options.end()) {
            out.samples = as_count(*opt, ".options.samples");
            if (out.samples == 0) {
                fail(".options.samples", "expected a positive integer");
            }
        }
        if (auto opt = options.find("seed"); opt != options.end()) {
            out.seed = as_count(*opt, ".options.seed");
        }
    }
    return out;
}

ScenarioConfig load_scenario_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario_config(text.str());
}

Scenario build_scenario(const ScenarioConfig &config, bool normalize) {
    if (static_cast<int>(config.initial_state.size()) != config.dimension) {
        throw DimensionMismatchError("initial state has " + std::to_string(config.initial_state.size()) +
                                     " amplitudes, config dimension is " +
                                     std::to_string(config.dimension));
    }
    StateVector initial = make_state(config.initial_state, "initial state", normalize);

    std::vector<MeasurementDevice::Entry> entries;
    entries.reserve(config.measurement_states.size());
    for (const auto &[label, amplitudes] : config.measurement_states) {
        if (static_cast<int>(amplitudes.size()) != config.dimension) {
            throw DimensionMismatchError("measurement state '" + label + "' has " +
                                         std::to_string(amplitudes.size()) +
                                         " amplitudes, config dimension is " +
                                         std::to_string(config.dimension));
        }
        entries.push_back({label, make_state(amplitudes, "measurement state '" + label + "'", normalize)});
    }

    ScenarioOptions options;
    options.tolerance = config.tolerance;
    options.mode = config.mode;
    options.samples = config.samples;
    options.seed = config.seed;
    return Scenario{"scenario", std::move(initial), MeasurementDevice(std::move(entries)), options};
}

OrthonormalBasisMeasurement build_basis(const ScenarioConfig &config, bool normalize) {
    if (!config.resolution_matrix) {
        throw ConfigError("config field '.resolution_matrix': missing");
    }
    const ResolutionConfig &res = *config.resolution_matrix;
    if (res.true_values.size() != config.measurement_states.size()) {
        throw DimensionMismatchError("resolution matrix lists " + std::to_string(res.true_values.size()) +
                                     " true values for " + std::to_string(config.measurement_states.size()) +
                                     " measurement states");
    }
    std::vector<StateVector> eigenstates;
    eigenstates.reserve(config.measurement_states.size());
    for (const auto &[label, amplitudes] : config.measurement_states) {
        if (static_cast<int>(amplitudes.size()) != config.dimension) {
            throw DimensionMismatchError("measurement state '" + label + "' has " +
                                         std::to_string(amplitudes.size()) +
                                         " amplitudes, config dimension is " +
                                         std::to_string(config.dimension));
        }
        eigenstates.push_back(make_state(amplitudes, "measurement state '" + label + "'", normalize));
    }
    return OrthonormalBasisMeasurement(std::move(eigenstates), res.true_values);
}

ResolutionMatrix build_resolution(const ResolutionConfig &config) {
    return ResolutionMatrix(config.true_values, config.reported_values, config.amplitudes);
}

std::string scenario_to_config_json(const Scenario &scenario) {
    std::string out = "{\n";
    out += "  \"dimension\": " + std::to_string(scenario.initial_state.dim()) + ",\n";
    out += "  \"initial_state\": ";
    append_amplitudes(out, scenario.initial_state.amplitudes());
    out += ",\n  \"measurement_states\": [\n";
    const auto &entries = scenario.device.states();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        out += "    {\"label\": " + json(entries[i].label).dump() + ", \"amplitudes\": ";
        append_amplitudes(out, entries[i].state.amplitudes());
        out += i + 1 < entries.size() ? "},\n" : "}\n";
    }
    out += "  ],\n  \"options\": {";
    out += "\"tolerance\": " + format_full(scenario.options.tolerance);
    out += ", \"mode\": ";
    out += scenario.options.mode == SampleMode::kExact ? "\"exact\"" : "\"sample\"";
    out += ", \"samples\": " + std::to_string(scenario.options.samples);
    if (scenario.options.seed) {
        out += ", \"seed\": " + std::to_string(*scenario.options.seed);
    }
    out += "}\n}\n";
    return out;
}

} // namespace seqmeas
