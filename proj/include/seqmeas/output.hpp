#pragma once

#include <string>
#include <utility>
#include <vector>

#include "seqmeas/measure.hpp"

namespace seqmeas {

/// Everything cmd_imprecise reports: the P(ā) table, the post-measurement
/// state of the selected report, and the resolution quality metric.
struct ImpreciseReport {
    std::vector<double> true_values;
    std::vector<std::pair<double, double>> table; // (reported value, probability), ascending
    double metric = 0.0;                          // orthogonality metric of Y
    double reported = 0.0;                        // the selected ā
    StateVector post_state;
};

/// Shortest-round-trip style serialization at 12 significant digits; every
/// emitter below uses this one formatter so JSON and CSV agree byte for byte.
std::string format_number(double value);

std::string json_escape(const std::string &text);

/// Deterministic JSON: keys sorted, two-space indent, trailing newline.
std::string distribution_to_json(const OutcomeDistribution &dist);

/// One row per outcome: labels joined by ';', probability, then the final
/// state amplitudes flattened as re/im column pairs.
std::string distribution_to_csv(const OutcomeDistribution &dist);

std::string imprecise_report_to_json(const ImpreciseReport &report);

/// One row per reported value; the selected row carries the post state.
std::string imprecise_report_to_csv(const ImpreciseReport &report);

/// Writes `content` to `path`, failing with a domain error when unwritable.
void write_text_file(const std::string &path, const std::string &content);

} // namespace seqmeas
