// dasis: optimize delay-augmented stacked surfaces and sweep BER curves.
//
//   dasis run       --config cfg.json [--seed S] [--out-dir D] [--threads T] [--snr-def received|transmit]
//   dasis validate  --config cfg.json
//   dasis optimize  --config cfg.json          (surface documents only)
//   dasis sweep     --config cfg.json --surface out/da-sis_81.surface.json
//   dasis baseline  --config cfg.json          (digital pipelines only)

#include "dasis/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace
{

struct CommonFlags
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> outDir;
    int threads = 0;
    std::optional<std::string> snrDef;
};

void addCommonFlags(CLI::App *cmd, CommonFlags &flags, bool runFlags)
{
    cmd->add_option("--config", flags.config, "Experiment config (JSON)")->required();
    if (!runFlags)
        return;
    cmd->add_option("--seed", flags.seed, "Root seed; overrides the config");
    cmd->add_option("--out-dir", flags.outDir, "Output directory; overrides the config");
    cmd->add_option("--threads", flags.threads, "Worker threads (0 = hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--snr-def", flags.snrDef, "SNR axis")->check(CLI::IsMember({"received", "transmit"}));
}

dasis::RunOptions runOptions(const CommonFlags &flags)
{
    dasis::RunOptions options;
    options.threads = flags.threads;
    options.seed = flags.seed;
    if (flags.outDir)
        options.outputDir = *flags.outDir;
    if (flags.snrDef)
        options.snrDefinition = dasis::parseSnrDefinition(*flags.snrDef);
    return options;
}

void printWritten(const std::vector<std::filesystem::path> &paths)
{
    for (const auto &p : paths)
        std::cout << "wrote " << p.string() << "\n";
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Delay-augmented stacked intelligent surface equalizer experiments"};
    app.require_subcommand(1);

    CommonFlags runFlags, validateFlags, optimizeFlags, sweepFlags, baselineFlags;
    std::string surfacePath;

    auto *run = app.add_subcommand("run", "Optimize every surface, sweep every pipeline, write CSVs and a plot script");
    addCommonFlags(run, runFlags, true);
    auto *validate = app.add_subcommand("validate", "Check a config without running it; prints a JSON report");
    addCommonFlags(validate, validateFlags, false);
    auto *optimize = app.add_subcommand("optimize", "Optimize the surface pipelines and write their documents");
    addCommonFlags(optimize, optimizeFlags, true);
    auto *sweep = app.add_subcommand("sweep", "Sweep a stored surface document");
    addCommonFlags(sweep, sweepFlags, true);
    sweep->add_option("--surface", surfacePath, "Surface document written by optimize/run")->required();
    auto *baseline = app.add_subcommand("baseline", "Sweep the digital pipelines only");
    addCommonFlags(baseline, baselineFlags, true);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*validate)
        {
            const auto report = dasis::validateConfigFile(validateFlags.config);
            std::cout << report.toJson().dump(2) << "\n";
            return report.ok() ? 0 : 1;
        }
        if (*run)
            printWritten(dasis::runExperiment(dasis::loadExperimentConfig(runFlags.config), runOptions(runFlags)));
        else if (*optimize)
            printWritten(dasis::runExperiment(dasis::loadExperimentConfig(optimizeFlags.config),
                                              runOptions(optimizeFlags), dasis::RunMode::SurfacesOnly));
        else if (*baseline)
            printWritten(dasis::runExperiment(dasis::loadExperimentConfig(baselineFlags.config),
                                              runOptions(baselineFlags), dasis::RunMode::DigitalOnly));
        else if (*sweep)
            printWritten({dasis::sweepSurfaceFile(dasis::loadExperimentConfig(sweepFlags.config), surfacePath,
                                                  runOptions(sweepFlags))});
    }
    catch (const std::exception &e)
    {
        std::cerr << "dasis: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
