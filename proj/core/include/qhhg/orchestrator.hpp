#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qhhg/observables.hpp"
#include "qhhg/spectra.hpp"

namespace qhhg {

enum class FieldStyle { Elliptical, Collinear };

struct ExperimentConfig {
    enum class Type { Spectrum, PhiSweep, EllipticitySweep, G2Report, ToyG2, DepletionSweep };

    Type type = Type::Spectrum;

    std::vector<int> harmonics;  // reported orders; default odd 3..33

    // phi-sweep
    int phi_points = 24;  // uniform grid over [-pi, pi)

    // ellipticity-sweep
    std::vector<double> ellipticity_grid{0.1, 0.5, 0.9};
    std::vector<double> phi_values;  // default {0, pi}

    // depletion-sweep
    int harmonic = 13;
    std::vector<double> epsbar_grid{0.0, 0.03, 0.053};
    std::vector<double> isq_grid{1e-5, 5e-5};

    bool depletion = false;  // spectrum / g2-report runs; forced on for depletion-sweep

    // toy-g2
    std::vector<double> toy_p_grid;       // default 0..8 step 0.25
    std::vector<double> toy_mean_values;  // default {0, 1, 2}
    double toy_sigma = 1.0;
    double toy_eps_crit = 0.0;  // 0 disables the depleted variant
    double toy_suppression_exponent = 2.0;
};

struct OutputConfig {
    std::filesystem::path directory = "out";
    bool csv = true;
    bool svg = false;
};

struct RunConfig {
    DriverConfig driver{};
    int n_t = 4096;
    double max_excursion = 0.0;      // a.u.; 0 = 1.5 optical periods
    double regularization = 1e-4;
    bool hann_window = false;
    double window_half_width = 0.5;  // harmonic window, units of omega_l
    int q_max = 64;
    int n_samples = 140;
    ExperimentConfig experiment{};
    OutputConfig output{};

    SfaGrid make_grid() const;
    AccumulateOptions make_accumulate_options() const;
    void validate();
};

RunConfig default_run_config();
/// Strict JSON parse (unknown keys rejected); missing sections keep defaults.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string canonical_config_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

struct RunOptions {
    int threads = 0;     // 0 keeps the current setting
    bool resume = false; // skip parameter points with completed point files
};

struct RunSummary {
    std::vector<std::filesystem::path> files;
    int points_total = 0;
    int points_computed = 0;
    int points_reused = 0;
    double wall_seconds = 0.0;
};

/// Runs the configured experiment, writing CSV outputs, a run manifest and
/// optional SVG plots under config.output.directory. Parameter points are
/// written incrementally (point files) and assembled in index order, so
/// outputs are identical for any thread count and resumed runs reproduce
/// fresh ones byte for byte.
RunSummary run_experiment(const RunConfig& config, const RunOptions& options = {});

/// One full pipeline pass: quadrature samples -> field realizations ->
/// dipoles -> accumulated spectrum. Shared by the experiment drivers and the
/// test suites.
SpectrumSet compute_ensemble_spectrum(const DriverConfig& driver, const SfaGrid& grid,
                                      int n_samples, const DipoleOptions& dipole_options,
                                      const AccumulateOptions& accumulate_options,
                                      FieldStyle style = FieldStyle::Elliptical);

void set_worker_threads(int n);

}  // namespace qhhg
