#pragma once

#include "dasis/channel.hpp"
#include "dasis/equalizers.hpp"
#include "dasis/sis.hpp"
#include "dasis/types.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dasis
{

// bit 0 -> +1, bit 1 -> -1
CVector bpskModulate(const std::vector<std::uint8_t> &bits);

// bit k = 0 iff Re(conj(gain) * series[k + offset]) >= 0
std::vector<std::uint8_t> bpskDetect(const CVector &series, Complex referenceGain, Eigen::Index timingOffset,
                                     Eigen::Index numSymbols);

struct DetectionReference
{
    Eigen::Index offset = 0;
    Complex gain{1.0, 0.0};
};

// Dominant tap of an effective response (ties -> smallest index).
DetectionReference referenceFromResponse(const CVector &response);

struct BlockOutput
{
    CVector series;
    DetectionReference reference;
};

// One link from modulated symbols to the detector input.
class Pipeline
{
public:
    virtual ~Pipeline() = default;

    virtual std::string label() const = 0;

    // Average noise-free power per detection sample at the point where receiver
    // noise enters (sum of |response|^2 for i.i.d. unit-power symbols).
    virtual double receivedSignalPower() const = 0;

    virtual BlockOutput run(const CVector &symbols, double noiseVariance, Rng &rng) const = 0;
};

// x -> gain * x + noise. No ISI; used for calibration.
class AwgnPipeline final : public Pipeline
{
public:
    explicit AwgnPipeline(Complex gain = {1.0, 0.0}, std::string label = "awgn");

    std::string label() const override { return label_; }
    double receivedSignalPower() const override { return std::norm(gain_); }
    BlockOutput run(const CVector &symbols, double noiseVariance, Rng &rng) const override;

private:
    Complex gain_;
    std::string label_;
};

// Surface-assisted link: channel -> layers -> antenna -> noise -> detector.
class SurfacePipeline final : public Pipeline
{
public:
    enum class Evaluation
    {
        EffectiveResponse, // y = g * x, g from effectiveResponse
        FullCascade        // convolveChannel + propagate every block
    };

    // Fading-averaged mode redraws the spatial channel for every block.
    struct Fading
    {
        SisGeometry geometry;
        double kappa = 15.0;
    };

    SurfacePipeline(SisConfig config, SurfaceModel model, ChannelRealization channel, std::string label,
                    Evaluation evaluation = Evaluation::EffectiveResponse, std::optional<Fading> fading = std::nullopt);

    std::string label() const override { return label_; }
    double receivedSignalPower() const override;
    BlockOutput run(const CVector &symbols, double noiseVariance, Rng &rng) const override;

    const CVector &response() const { return response_; }

private:
    SisConfig config_;
    SurfaceModel model_;
    ChannelRealization channel_;
    std::string label_;
    Evaluation evaluation_;
    std::optional<Fading> fading_;
    CVector response_;
};

// Digital receiver without a surface; unit spatial gain.
class DigitalPipeline final : public Pipeline
{
public:
    enum class Kind
    {
        NoEqualization,
        ZfIir,
        Fir,
        ZfIirNoiseless
    };

    DigitalPipeline(Kind kind, TemporalTaps taps, int firTaps = 0);

    std::string label() const override;
    double receivedSignalPower() const override;
    BlockOutput run(const CVector &symbols, double noiseVariance, Rng &rng) const override;

    Kind kind() const { return kind_; }

private:
    Kind kind_;
    TemporalTaps taps_;
    FirFilter fir_;
    DetectionReference reference_;
};

enum class SnrDefinition
{
    Received, // signal power at the detection samples / noise variance
    Transmit  // unit symbol power / noise variance
};

SnrDefinition parseSnrDefinition(const std::string &text);
std::string toString(SnrDefinition def);

double noiseVarianceFor(const Pipeline &pipeline, double snrDb, SnrDefinition definition);

struct StopRule
{
    std::int64_t minErrors = 100;
    std::int64_t maxBits = 10'000'000;
};

struct MonteCarloOptions
{
    StopRule stop;
    int blockLength = 128;
    SnrDefinition snrDefinition = SnrDefinition::Received;
    int threads = 0; // 0 = hardware concurrency
};

struct BerPoint
{
    double snrDb = 0.0;
    double ber = 0.0;
    std::int64_t bitsSimulated = 0;
    std::int64_t bitErrors = 0;
    double ciHalfWidth = 0.0; // 95% normal approximation
};

struct BerCurve
{
    std::string label;
    std::vector<BerPoint> points;
};

// Blocks are seeded from (seed, block index) and the stopping block is found by
// an in-order scan, so the result does not depend on the thread count.
BerPoint estimateBer(const Pipeline &pipeline, double snrDb, const MonteCarloOptions &options, std::uint64_t seed);

// Seed used by snrSweep for the grid point at snrDb.
std::uint64_t sweepPointSeed(std::uint64_t rootSeed, double snrDb);

BerCurve snrSweep(const Pipeline &pipeline, const std::vector<double> &snrGridDb, const MonteCarloOptions &options,
                  std::uint64_t rootSeed);

// Header "label,snr_db,ber,bits,errors,ci", one row per point, %.17g reals.
std::string curveToCsv(const BerCurve &curve);
void writeCurveCsv(const std::filesystem::path &path, const BerCurve &curve);

// Linear interpolation of log10(BER) between the first bracketing grid points.
// Empty if the curve never reaches the target.
std::optional<double> snrAtBer(const BerCurve &curve, double targetBer);

} // namespace dasis
