#pragma once

#include "seqmeas/measure.hpp"

namespace seqmeas {

/// Naive reference implementation of the sequential measurement rule for
/// differential testing. Recurses over every permutation and fork using plain
/// std::complex arithmetic; it shares only the input/output data types with
/// measure_exact, none of its computation. Capped at 6 device states.
OutcomeDistribution brute_force_oracle(const StateVector &psi, const MeasurementDevice &device);

} // namespace seqmeas
