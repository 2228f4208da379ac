#include "seqmeas/cli.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seqmeas/config.hpp"
#include "seqmeas/errors.hpp"
#include "seqmeas/imprecise.hpp"
#include "seqmeas/output.hpp"
#include "seqmeas/scenarios.hpp"
#include "seqmeas/svg.hpp"

namespace seqmeas {
namespace {

/// SEQMEAS_SEED provides the seed when neither flag nor config carries one.
std::optional<std::uint64_t> env_seed() {
    const char *raw = std::getenv("SEQMEAS_SEED");
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    std::uint64_t value = 0;
    for (const char *p = raw; *p != '\0'; ++p) {
        if (!std::isdigit(static_cast<unsigned char>(*p)) || value > (UINT64_MAX - 9) / 10) {
            throw ConfigError("SEQMEAS_SEED must be a non-negative integer, got '" +
                              std::string(raw) + "'");
        }
        value = value * 10 + static_cast<std::uint64_t>(*p - '0');
    }
    return value;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag,
                           const std::optional<std::uint64_t> &config) {
    if (flag) {
        return *flag;
    }
    if (config) {
        return *config;
    }
    if (auto env = env_seed()) {
        return *env;
    }
    return 1;
}

struct OutputFlags {
    std::string format = "json";
    std::string out_path;
    std::string svg_path;
};

void add_output_flags(CLI::App &cmd, OutputFlags &flags, bool with_svg = true) {
    cmd.add_option("--format", flags.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd.add_option("--out", flags.out_path, "write the distribution to this file");
    if (with_svg) {
        cmd.add_option("--svg", flags.svg_path, "also write a vector diagram to this file");
    }
}

void emit_distribution(const OutputFlags &flags, const Scenario &scenario,
                       const OutcomeDistribution &dist, std::ostream &out) {
    const std::string text =
        flags.format == "csv" ? distribution_to_csv(dist) : distribution_to_json(dist);
    if (flags.out_path.empty()) {
        out << text;
    } else {
        write_text_file(flags.out_path, text);
    }
    if (!flags.svg_path.empty()) {
        write_text_file(flags.svg_path, render_scenario_svg(scenario.name, scenario.initial_state,
                                                            scenario.device, dist));
    }
}

/// Options shared by `example` and `measure` that adjust how a scenario runs.
struct RunFlags {
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    int threads = 0;

    void add_to(CLI::App &cmd) {
        cmd.add_option_function<std::uint64_t>(
               "--samples", [this](std::uint64_t v) { samples = v; },
               "sample count (implies --mode sample)")
            ->check(CLI::PositiveNumber);
        cmd.add_option_function<std::uint64_t>(
            "--seed", [this](std::uint64_t v) { seed = v; },
            "random seed (default: config, then SEQMEAS_SEED, then 1)");
        cmd.add_option_function<std::string>(
               "--mode", [this](const std::string &v) { mode = v; }, "exact or sample")
            ->check(CLI::IsMember({"exact", "sample"}));
        cmd.add_option("--threads", threads, "worker threads (0 = all cores)")
            ->check(CLI::NonNegativeNumber);
    }

    /// Folds the command-line overrides into the scenario options.
    void apply(Scenario &scenario) const {
        if (mode) {
            scenario.options.mode = *mode == "sample" ? SampleMode::kSampled : SampleMode::kExact;
        }
        if (samples) {
            scenario.options.samples = *samples;
            if (!mode) {
                scenario.options.mode = SampleMode::kSampled;
            }
        }
        scenario.options.seed = resolve_seed(seed, scenario.options.seed);
    }
};

int cmd_example(const std::string &id, const ExampleParams &params, const RunFlags &run,
                const OutputFlags &output, std::ostream &out) {
    ExampleParams effective = params;
    effective.seed = resolve_seed(run.seed, std::nullopt);
    Scenario scenario = build_example(id, effective);
    run.apply(scenario);

    MeasureOptions measure;
    measure.threads = run.threads;
    const OutcomeDistribution dist = run_scenario(scenario, measure);
    emit_distribution(output, scenario, dist, out);
    return 0;
}

int cmd_measure(const std::string &config_path, bool normalize, const RunFlags &run,
                const OutputFlags &output, std::ostream &out) {
    const ScenarioConfig config = load_scenario_config(config_path);
    Scenario scenario = build_scenario(config, normalize);
    run.apply(scenario);

    MeasureOptions measure;
    measure.threads = run.threads;
    const OutcomeDistribution dist = run_scenario(scenario, measure);
    emit_distribution(output, scenario, dist, out);
    return 0;
}

int cmd_imprecise(const std::string &config_path, double reported, bool normalize,
                  const OutputFlags &output, std::ostream &out) {
    const ScenarioConfig config = load_scenario_config(config_path);
    if (!config.resolution_matrix) {
        throw ConfigError("config field '.resolution_matrix': missing (required by imprecise)");
    }
    const Scenario scenario = build_scenario(config, normalize);
    const OrthonormalBasisMeasurement basis = build_basis(config, normalize);
    const ResolutionMatrix y = build_resolution(*config.resolution_matrix);

    ImpreciseReport report{
        y.true_values(),
        {},
        orthogonality_metric(y),
        reported,
        phase_canonical(imprecise_collapse(scenario.initial_state, basis, y, reported)),
    };
    for (const auto &[value, probability] : imprecise_distribution(scenario.initial_state, basis, y)) {
        report.table.emplace_back(value, probability);
    }

    const std::string text =
        output.format == "csv" ? imprecise_report_to_csv(report) : imprecise_report_to_json(report);
    if (output.out_path.empty()) {
        out << text;
    } else {
        write_text_file(output.out_path, text);
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"sequential quantum measurement simulator"};
    app.require_subcommand(1);

    std::string example_id;
    ExampleParams params;
    RunFlags example_run;
    OutputFlags example_output;
    CLI::App *example = app.add_subcommand("example", "run a built-in example scenario");
    example->add_option("id", example_id, "example id: 3.1, 3.2, 3.3, 3.4 or 3.5")->required();
    example->add_option("--rotation", params.rotation_deg, "second-state rotation in degrees")
        ->capture_default_str();
    example
        ->add_option("--extra-rotation", params.extra_rotation_deg,
                     "third-state rotation in degrees (example 3.4)")
        ->capture_default_str();
    example->add_option("--count", params.random_states, "device size (example 3.5)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    example_run.add_to(*example);
    add_output_flags(*example, example_output);

    std::string measure_config;
    bool measure_normalize = false;
    RunFlags measure_run;
    OutputFlags measure_output;
    CLI::App *measure = app.add_subcommand("measure", "run a scenario from a config file");
    measure->add_option("config", measure_config, "path to a scenario config (JSON)")->required();
    measure->add_flag("--normalize", measure_normalize, "rescale non-normalized input states");
    measure_run.add_to(*measure);
    add_output_flags(*measure, measure_output);

    std::string imprecise_config;
    double imprecise_reported = 0.0;
    bool imprecise_normalize = false;
    OutputFlags imprecise_output;
    CLI::App *imprecise =
        app.add_subcommand("imprecise", "imprecise measurement via a resolution matrix");
    imprecise->add_option("config", imprecise_config, "path to a scenario config (JSON)")
        ->required();
    imprecise->add_option("--reported", imprecise_reported, "the reported value a-bar")->required();
    imprecise->add_flag("--normalize", imprecise_normalize, "rescale non-normalized input states");
    add_output_flags(*imprecise, imprecise_output, /*with_svg=*/false);

    try {
        std::vector<const char *> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("seqmeas");
        for (const std::string &arg : args) {
            argv.push_back(arg.c_str());
        }
        app.parse(static_cast<int>(argv.size()), argv.data());

        if (example->parsed()) {
            return cmd_example(example_id, params, example_run, example_output, out);
        }
        if (measure->parsed()) {
            return cmd_measure(measure_config, measure_normalize, measure_run, measure_output, out);
        }
        return cmd_imprecise(imprecise_config, imprecise_reported, imprecise_normalize,
                             imprecise_output, out);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        err << "run with --help for usage\n";
        return 2;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace seqmeas
