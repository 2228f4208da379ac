#include "seqmeas/scenarios.hpp"

#include <cmath>

#include "seqmeas/rng.hpp"

namespace seqmeas {

namespace {

StateVector basis_state_2d(double x, double y) {
    Eigen::VectorXcd amps(2);
    amps << Complex(x, 0.0), Complex(y, 0.0);
    return StateVector(std::move(amps));
}

StateVector initial_state_2d() {
    return basis_state_2d(std::sqrt(3.0) / 2.0, 0.5);
}

} // namespace

StateVector rotate_2d(const StateVector &v, double degrees) {
    if (v.dim() != 2) {
        throw DimensionMismatchError("rotate_2d requires a two-dimensional state");
    }
    if (std::abs(v.amplitude(0).imag()) > 1e-12 || std::abs(v.amplitude(1).imag()) > 1e-12) {
        throw ValidationError("rotate_2d requires real amplitudes");
    }
    const double theta = degrees * M_PI / 180.0;
    const double x = v.amplitude(0).real();
    const double y = v.amplitude(1).real();
    Eigen::VectorXcd rotated(2);
    rotated << Complex(std::cos(theta) * x + std::sin(theta) * y, 0.0),
        Complex(-std::sin(theta) * x + std::cos(theta) * y, 0.0);
    return phase_canonical(StateVector(std::move(rotated)));
}

Scenario build_example(const std::string &id, const ExampleParams &params) {
    const StateVector x_axis = basis_state_2d(1.0, 0.0);
    const StateVector y_axis = basis_state_2d(0.0, 1.0);

    std::vector<MeasurementDevice::Entry> states;
    if (id == "3.1") {
        states = {{"a1", x_axis}, {"a2", y_axis}};
    } else if (id == "3.2") {
        states = {{"a1", x_axis}, {"a2", y_axis}, {"a3", y_axis}};
    } else if (id == "3.3") {
        states = {{"a1", x_axis}, {"a2", rotate_2d(y_axis, params.rotation_deg)}};
    } else if (id == "3.4") {
        states = {{"a1", x_axis},
                  {"a2", rotate_2d(y_axis, params.rotation_deg)},
                  {"a3", rotate_2d(y_axis, params.extra_rotation_deg)}};
    } else if (id == "3.5") {
        if (params.random_states < 1) {
            throw ValidationError("example 3.5 requires at least one random state");
        }
        std::mt19937_64 rng(params.seed);
        for (int i = 0; i < params.random_states; ++i) {
            states.push_back({"a" + std::to_string(i + 1), random_state(2, rng)});
        }
    } else {
        throw ValidationError("unknown example id '" + id +
                              "' (expected 3.1, 3.2, 3.3, 3.4 or 3.5)");
    }

    ScenarioOptions options;
    if (id == "3.5") {
        options.seed = params.seed;
    }
    return Scenario{"example-" + id, initial_state_2d(), MeasurementDevice(std::move(states)),
                    std::move(options)};
}

OutcomeDistribution run_scenario(const Scenario &scenario, const MeasureOptions &options) {
    MeasureOptions effective = options;
    effective.zero_tolerance = scenario.options.tolerance;
    if (scenario.options.mode == SampleMode::kSampled) {
        return measure_sampled(scenario.initial_state, scenario.device, scenario.options.samples,
                               scenario.options.seed.value_or(1), effective);
    }
    return measure_exact(scenario.initial_state, scenario.device, effective);
}

std::vector<ChainStageResult> chain_run(const StateVector &psi,
                                        const std::vector<ChainStage> &stages,
                                        const ChainOptions &options) {
    std::mt19937_64 rng(options.seed);
    StateVector current = psi;
    std::vector<ChainStageResult> trace;
    trace.reserve(stages.size());
    for (std::size_t k = 0; k < stages.size(); ++k) {
        const ChainStage &stage = stages[k];
        detail::require_same_dim(current.dim(), stage.device.dim(), "chain_run");
        if (stage.evolution) {
            current = evolve_unitary(current, stage.evolution->first, stage.evolution->second);
        }
        OutcomeDistribution dist =
            options.mode == SampleMode::kSampled
                ? measure_sampled(current, stage.device, options.samples,
                                  derive_seed(options.seed, k), options.measure)
                : measure_exact(current, stage.device, options.measure);

        // Follow one outcome, drawn with the stage's own probabilities.
        const double draw = uniform_unit(rng) * dist.total_probability();
        std::size_t selected = dist.outcomes().size() - 1;
        double cumulative = 0.0;
        for (std::size_t i = 0; i < dist.outcomes().size(); ++i) {
            cumulative += dist.outcomes()[i].probability;
            if (draw < cumulative) {
                selected = i;
                break;
            }
        }
        StateVector posterior = dist.outcomes()[selected].final_state;
        trace.push_back(ChainStageResult{std::move(dist), selected, posterior});
        current = std::move(posterior);
    }
    return trace;
}

} // namespace seqmeas
