#pragma once

#include "dasis/channel.hpp"
#include "dasis/geometry.hpp"
#include "dasis/montecarlo.hpp"
#include "dasis/optimizer.hpp"
#include "dasis/sis.hpp"
#include "dasis/sis_io.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dasis
{

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// "da-sis:N" | "da-sis" | "zf-iir" | "fir:K" | "zf-iir-noiseless" | "no-eq"
struct PipelineSpec
{
    enum class Kind
    {
        Surface,
        ZfIir,
        Fir,
        ZfIirNoiseless,
        NoEqualization
    };

    Kind kind = Kind::NoEqualization;
    int elements = 0; // Surface; 0 = geometry default
    int firTaps = 0;  // Fir

    static PipelineSpec parse(const std::string &text);
    std::string label() const;
    bool isSurface() const { return kind == Kind::Surface; }
    bool needsStableInverse() const;
};

// Everything needed to reproduce one run. Values are stored as read; the
// invariants are checked by validateConfig so they can be reported together.
struct ExperimentConfig
{
    std::uint64_t seed = 1;
    std::filesystem::path outputDir = "out";

    GeometryOptions geometry;

    double kappa = 15.0;
    CVector taps;                   // temporal taps, from {modulus, phase} pairs
    std::uint64_t channelSeed = 0;  // stream offset under the root seed

    OptimizerHyperparams optimizer; // optimizer.seed is a stream offset as well
    double designSnrDb = 10.0;      // noise variance 10^(-x/10) used by the surrogate

    std::vector<double> snrGridDb;
    SnrDefinition snrDefinition = SnrDefinition::Received;
    StopRule stop;
    int blockLength = 128;
    bool fadingAverage = false;

    std::vector<std::string> pipelines;
};

// Paper setup: 28 GHz, L = 2, kappa = 15, three-tap channel, all seven curves.
ExperimentConfig defaultExperimentConfig();

// Throws ConfigError; JSON syntax errors carry line and column.
ExperimentConfig parseExperimentConfig(const std::string &text);
ExperimentConfig loadExperimentConfig(const std::filesystem::path &path);
nlohmann::json toJson(const ExperimentConfig &config);

struct ValidationCheck
{
    std::string name;
    bool pass = true;
    std::string message;
};

struct ValidationReport
{
    std::vector<ValidationCheck> checks;

    bool ok() const;
    nlohmann::json toJson() const;
};

ValidationReport validateConfig(const ExperimentConfig &config);
// Parse failures become a failing "parse" entry.
ValidationReport validateConfigFile(const std::filesystem::path &path);

// Geometry, propagation operators and channel realization for one surface size.
struct SurfaceSetup
{
    SisGeometry geometry;
    SurfaceModel model;
    ChannelRealization channel;
};

SurfaceSetup makeSurfaceSetup(const ExperimentConfig &config, int elements);
int surfaceElements(const ExperimentConfig &config, const PipelineSpec &spec);
double designNoiseVariance(const ExperimentConfig &config);
std::uint64_t optimizerSeed(const ExperimentConfig &config, int elements);
std::uint64_t curveSeed(const ExperimentConfig &config, const std::string &label);
MonteCarloOptions monteCarloOptions(const ExperimentConfig &config, int threads);

std::unique_ptr<Pipeline> makeDigitalPipeline(const ExperimentConfig &config, const PipelineSpec &spec);
std::unique_ptr<Pipeline> makeSurfacePipeline(const ExperimentConfig &config, const SurfaceSetup &setup,
                                              const SisConfig &surface, const std::string &label);

SurfaceDocument optimizeSurface(const ExperimentConfig &config, const PipelineSpec &spec, int threads);
BerCurve sweepSurface(const ExperimentConfig &config, const SurfaceDocument &surface, int threads);

// Curve label -> file stem, e.g. "da-sis:81" -> "da-sis_81".
std::string fileStem(const std::string &label);

// Python/matplotlib script plotting every CSV on a log-BER axis.
std::string plotScript(const std::vector<std::string> &csvFiles, SnrDefinition definition);

enum class RunMode
{
    All,
    SurfacesOnly, // optimize: write surface documents only
    DigitalOnly   // baseline: digital pipelines only
};

struct RunOptions
{
    int threads = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> outputDir;
    std::optional<SnrDefinition> snrDefinition;
};

void applyOverrides(ExperimentConfig &config, const RunOptions &options);

// Validates, runs, then writes every artifact (atomic per file). Returns the
// paths written. Throws ConfigError when validation fails.
std::vector<std::filesystem::path> runExperiment(ExperimentConfig config, const RunOptions &options,
                                                 RunMode mode = RunMode::All);

// Re-sweeps a stored surface document; writes its CSV.
std::filesystem::path sweepSurfaceFile(ExperimentConfig config, const std::filesystem::path &surfacePath,
                                       const RunOptions &options);

} // namespace dasis
