#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "qhhg/orchestrator.hpp"
#include "qhhg/version.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    int samples = 0;
    int threads = 0;
    bool resume = false;
    bool svg = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "run configuration file (JSON)");
    cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
    cmd->add_option("--samples", flags.samples, "quadrature sample count (overrides config)");
    cmd->add_option("--threads", flags.threads, "worker thread count");
    cmd->add_flag("--resume", flags.resume, "skip parameter points with completed point files");
    cmd->add_flag("--svg", flags.svg, "emit SVG plots alongside the CSV outputs");
}

int run(qhhg::ExperimentConfig::Type type, const CommonFlags& flags) {
    qhhg::RunConfig cfg =
        flags.config_path.empty() ? qhhg::default_run_config() : qhhg::load_run_config(flags.config_path);
    cfg.experiment.type = type;  // the subcommand wins over the config file
    if (!flags.out_dir.empty()) cfg.output.directory = flags.out_dir;
    if (flags.samples > 0) cfg.n_samples = flags.samples;
    if (flags.svg) cfg.output.svg = true;

    qhhg::RunOptions options;
    options.threads = flags.threads;
    options.resume = flags.resume;

    const qhhg::RunSummary summary = qhhg::run_experiment(cfg, options);
    std::printf("%d/%d parameter points computed (%d reused), %.2f s\n", summary.points_computed,
                summary.points_total, summary.points_reused, summary.wall_seconds);
    for (const auto& f : summary.files) std::printf("  wrote %s\n", f.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qhhg — high-harmonic generation driven by squeezed elliptical light"};
    app.set_version_flag("--version", std::string("qhhg ") + qhhg::version);
    app.require_subcommand(1);

    struct Entry {
        const char* name;
        const char* help;
        qhhg::ExperimentConfig::Type type;
    };
    const Entry entries[] = {
        {"spectrum", "ensemble harmonic spectrum and per-order report", qhhg::ExperimentConfig::Type::Spectrum},
        {"phi-sweep", "normalized intensity difference vs squeezing angle", qhhg::ExperimentConfig::Type::PhiSweep},
        {"ellipticity-sweep", "harmonic observables vs driver ellipticity", qhhg::ExperimentConfig::Type::EllipticitySweep},
        {"g2-report", "per-order second-order autocorrelation report", qhhg::ExperimentConfig::Type::G2Report},
        {"toy-g2", "analytic toy-model photon statistics tables", qhhg::ExperimentConfig::Type::ToyG2},
        {"depletion-sweep", "g2 vs field strength and squeezing with ADK depletion", qhhg::ExperimentConfig::Type::DepletionSweep},
    };

    CommonFlags flags[std::size(entries)];
    for (std::size_t i = 0; i < std::size(entries); ++i)
        add_common(app.add_subcommand(entries[i].name, entries[i].help), flags[i]);

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < std::size(entries); ++i)
            if (app.got_subcommand(entries[i].name)) return run(entries[i].type, flags[i]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
