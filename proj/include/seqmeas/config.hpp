#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqmeas/imprecise.hpp"
#include "seqmeas/scenarios.hpp"

namespace seqmeas {

/// Raw resolution-matrix block of a scenario config; validated when the
/// ResolutionMatrix is built, not at parse time.
struct ResolutionConfig {
    std::vector<double> true_values;
    std::vector<double> reported_values;
    Eigen::MatrixXcd amplitudes; // rows: reported values
};

/// Parsed scenario configuration. Parsing checks structure only (field
/// presence, types, shapes of [re, im] pairs); normalization and dimension
/// checks happen when the config is turned into domain objects.
struct ScenarioConfig {
    int dimension = 0;
    std::vector<Complex> initial_state;
    std::vector<std::pair<std::string, std::vector<Complex>>> measurement_states;
    std::optional<ResolutionConfig> resolution_matrix;
    double tolerance = kZeroTolerance;
    SampleMode mode = SampleMode::kExact;
    std::uint64_t samples = 1'000'000;
    std::optional<std::uint64_t> seed;
};

/// Parses a UTF-8 JSON document; malformed input raises ConfigError naming
/// the offending field.
ScenarioConfig parse_scenario_config(const std::string &json_text);

/// Reads and parses a config file; unreadable files raise ConfigError.
ScenarioConfig load_scenario_config(const std::string &path);

/// Domain validation: amplitude counts must match `dimension`, and every
/// state must be normalized unless `normalize` opts into renormalization.
Scenario build_scenario(const ScenarioConfig &config, bool normalize = false);

/// Basis for imprecise measurement: the config's measurement states, in
/// order, with the resolution matrix's true values as eigenvalues.
OrthonormalBasisMeasurement build_basis(const ScenarioConfig &config, bool normalize = false);

/// Builds the resolution matrix; column-normalization violations raise
/// ValidationError naming the offending column.
ResolutionMatrix build_resolution(const ResolutionConfig &config);

/// Serializes a scenario back into the config format (full precision).
std::string scenario_to_config_json(const Scenario &scenario);

} // namespace seqmeas
