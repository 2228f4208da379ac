#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqmeas/measure.hpp"

namespace seqmeas {

struct ScenarioOptions {
    double tolerance = kZeroTolerance;
    SampleMode mode = SampleMode::kExact;
    std::uint64_t samples = 1'000'000;
    std::optional<std::uint64_t> seed;
};

/// A reproducible measurement setup: initial state, device, run options.
struct Scenario {
    std::string name;
    StateVector initial_state;
    MeasurementDevice device;
    ScenarioOptions options;
};

/// Parameters for the example builders; every example accepts the defaults.
struct ExampleParams {
    double rotation_deg = 10.0;       // second-state rotation (examples 3.3, 3.4)
    double extra_rotation_deg = 20.0; // third-state rotation (example 3.4)
    int random_states = 4;            // device size (example 3.5)
    std::uint64_t seed = 1;           // device generator seed (example 3.5)
};

/// Builds one of the canonical two-dimensional examples:
///   3.1  orthogonal pair a1=(1,0), a2=(0,1)
///   3.2  3.1 plus a duplicate a3=(0,1)
///   3.3  a2 rotated towards (1,0) by rotation_deg
///   3.4  3.3 plus a3 rotated by extra_rotation_deg
///   3.5  `random_states` Haar-random states from `seed`
/// The initial state is (√3/2, 1/2) throughout. Unknown ids are rejected.
Scenario build_example(const std::string &id, const ExampleParams &params = {});

/// Plane rotation of a real two-dimensional state by `degrees`, turning (0,1)
/// towards (1,0); the result is phase-canonical, so rotate_2d((1,0), 90) is
/// reported as (0,1).
StateVector rotate_2d(const StateVector &v, double degrees);

/// Runs the scenario with its own options (exact or sampled).
OutcomeDistribution run_scenario(const Scenario &scenario, const MeasureOptions &options = {});

/// One stage of a measurement chain: an optional unitary evolution segment
/// (Hamiltonian + duration) applied to the incoming state, then a device.
struct ChainStage {
    MeasurementDevice device;
    std::optional<std::pair<HermitianOperator, double>> evolution;
};

struct ChainStageResult {
    OutcomeDistribution distribution;
    std::size_t selected; // index of the outcome the chain followed
    StateVector posterior;
};

struct ChainOptions {
    SampleMode mode = SampleMode::kExact; // per-stage distribution mode
    std::uint64_t samples = 100'000;      // per stage, sampled mode only
    std::uint64_t seed = 1;               // drives outcome selection (and sampling)
    MeasureOptions measure;
};

/// Runs devices in succession: each stage measures the previous stage's
/// posterior state, records the full per-stage distribution, and follows one
/// outcome selected with the stage distribution's own probabilities.
std::vector<ChainStageResult> chain_run(const StateVector &psi,
                                        const std::vector<ChainStage> &stages,
                                        const ChainOptions &options = {});

} // namespace seqmeas
