#pragma once

#include <string>

#include "seqmeas/measure.hpp"

namespace seqmeas {

/// Renders a two-dimensional scenario as an SVG 1.1 vector diagram: the
/// initial state as a distinguished black arrow, each device state as a
/// labeled colored arrow, and each distinct final state as a shorter dashed
/// arrow annotated with its total probability. Requires every drawn state to
/// be real (after phase canonicalization) and two-dimensional; anything else
/// raises ValidationError.
std::string render_scenario_svg(const std::string &title, const StateVector &initial,
                                const MeasurementDevice &device,
                                const OutcomeDistribution &dist);

} // namespace seqmeas
