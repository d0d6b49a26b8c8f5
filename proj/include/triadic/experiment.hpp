#pragma once

// Experiment runner: a flat key = value config selects one experiment, the
// runner dispatches into the model hierarchy and writes CSV/JSON artifacts.

#include "triadic/micro_sim.hpp"
#include "triadic/model.hpp"
#include "triadic/path_record.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace triadic {

enum class Experiment {
    MicroPath,
    MicroSpy,
    MicroPij,
    MacroPath,
    MacroSteady,
    MacroExit,
    SdePath,
    SdeMfpt,
    OdeTrace,
    MeanField,
    CompareModels,
};

/// Kebab-case names, also used as CLI subcommands ("micro-path", ...).
const char* to_string(Experiment experiment);
std::optional<Experiment> experiment_from_string(std::string_view name);
const std::vector<Experiment>& all_experiments();

inline constexpr std::uint64_t kDefaultSeed = 20210915;

struct ExperimentConfig {
    Experiment experiment = Experiment::MacroSteady;

    int n = 30;
    // Node-count range for the exit-time scans; n_min = 0 means "just n".
    int n_min = 0;
    int n_max = 0;
    int n_step = 10;

    double c1 = 0.025;
    double c2 = 0.25;
    double c3 = 0.91;

    InitialSpec init{InitialSpec::Kind::ErdosRenyi, 0.3, 0};
    double y0 = 0.2;

    double t_end = 1e4;
    double burn_in = 0.0;
    RecordStride record = RecordStride::time(1.0);

    std::uint64_t seed = kDefaultSeed;
    std::size_t n_paths = 100;
    unsigned threads = 1;

    double sde_dt = 0.01;
    std::size_t grid_points = 2048;
    double ode_step = 0.01;
    std::size_t euler_steps = 200;
    double pij_dt = 1.0;
    std::vector<double> snapshot_times{0.0, 2500.0, 5000.0, 7500.0};

    std::string output = "out";

    [[nodiscard]] ModelParams params() const { return {n, c1, c2, c3}; }
    /// n_min..n_max by n_step, or just {n}.
    [[nodiscard]] std::vector<int> node_counts() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Applies one key = value setting. Throws Error(InvalidArgument) for an
/// unknown key or unparsable value.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses "key = value" lines; '#' starts a comment, blank lines ignored.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Canonical text form: every key, fixed order, round-trip number format.
std::string serialize_config(const ExperimentConfig& config);

/// Every violated constraint, empty when the config is runnable.
std::vector<std::string> validate(const ExperimentConfig& config);

/// Runs the experiment, writes artifacts into config.output (created if
/// needed) and returns the JSON summary text, also written as summary.json.
/// Throws Error on validation, I/O, or degenerate-regime failures.
std::string run(const ExperimentConfig& config);

}  // namespace triadic
