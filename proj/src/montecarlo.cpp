#include "dasis/montecarlo.hpp"

#include "dasis/file_io.hpp"
#include "dasis/parallel.hpp"
#include "dasis/random.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

namespace dasis
{

CVector bpskModulate(const std::vector<std::uint8_t> &bits)
{
    CVector s(static_cast<Eigen::Index>(bits.size()));
    for (std::size_t k = 0; k < bits.size(); ++k)
        s(static_cast<Eigen::Index>(k)) = bits[k] ? -1.0 : 1.0;
    return s;
}

std::vector<std::uint8_t> bpskDetect(const CVector &series, Complex referenceGain, Eigen::Index timingOffset,
                                     Eigen::Index numSymbols)
{
    require(referenceGain != Complex(0.0, 0.0), "bpskDetect: reference gain is zero");
    require(timingOffset >= 0 && numSymbols >= 0 && timingOffset + numSymbols <= series.size(),
            "bpskDetect: timing offset + symbol count exceeds the series length");
    const Complex rotate = std::conj(referenceGain);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(numSymbols));
    for (Eigen::Index k = 0; k < numSymbols; ++k)
        bits[static_cast<std::size_t>(k)] = (rotate * series(k + timingOffset)).real() >= 0.0 ? 0 : 1;
    return bits;
}

DetectionReference referenceFromResponse(const CVector &response)
{
    const Eigen::Index t = dominantTap(response);
    require(response(t) != Complex(0.0, 0.0), "referenceFromResponse: all-zero response");
    return {t, response(t)};
}

// ---------------------------------------------------------------------------

AwgnPipeline::AwgnPipeline(Complex gain, std::string label) : gain_(gain), label_(std::move(label))
{
    require(gain_ != Complex(0.0, 0.0), "AwgnPipeline: gain must be nonzero");
}

BlockOutput AwgnPipeline::run(const CVector &symbols, double noiseVariance, Rng &rng) const
{
    BlockOutput out{gain_ * symbols, {0, gain_}};
    addAwgnInPlace(out.series, noiseVariance, rng);
    return out;
}

// ---------------------------------------------------------------------------

SurfacePipeline::SurfacePipeline(SisConfig config, SurfaceModel model, ChannelRealization channel, std::string label,
                                 Evaluation evaluation, std::optional<Fading> fading)
    : config_(std::move(config)), model_(std::move(model)), channel_(std::move(channel)), label_(std::move(label)),
      evaluation_(evaluation), fading_(std::move(fading))
{
    response_ = effectiveResponse(config_, model_, channel_);
    referenceFromResponse(response_);
}

double SurfacePipeline::receivedSignalPower() const
{
    return response_.squaredNorm();
}

BlockOutput SurfacePipeline::run(const CVector &symbols, double noiseVariance, Rng &rng) const
{
    const ChannelRealization *channel = &channel_;
    ChannelRealization redrawn;
    CVector response = response_;
    if (fading_)
    {
        redrawn = buildVectorChannel(ricianSpatialChannel(fading_->geometry, fading_->kappa, rng), channel_.temporal,
                                     fading_->kappa);
        channel = &redrawn;
        response = effectiveResponse(config_, model_, redrawn);
    }

    BlockOutput out;
    if (evaluation_ == Evaluation::FullCascade)
        out.series = propagate(config_, model_, convolveChannel(*channel, symbols));
    else
        out.series = convolve(response, symbols);
    out.reference = referenceFromResponse(response);
    addAwgnInPlace(out.series, noiseVariance, rng);
    return out;
}

// ---------------------------------------------------------------------------

DigitalPipeline::DigitalPipeline(Kind kind, TemporalTaps taps, int firTaps) : kind_(kind), taps_(std::move(taps))
{
    switch (kind_)
    {
    case Kind::NoEqualization:
        reference_ = referenceFromResponse(taps_.taps);
        break;
    case Kind::ZfIir:
    case Kind::ZfIirNoiseless:
        require(hasStableInverse(taps_), "DigitalPipeline: zero-forcing inverse of the taps is unstable");
        reference_ = {0, Complex(1.0, 0.0)};
        break;
    case Kind::Fir:
        fir_ = firFromIir(taps_, firTaps);
        reference_ = referenceFromResponse(convolve(fir_.taps, taps_.taps));
        break;
    }
}

std::string DigitalPipeline::label() const
{
    switch (kind_)
    {
    case Kind::NoEqualization:
        return "no-eq";
    case Kind::ZfIir:
        return "zf-iir";
    case Kind::Fir:
        return "fir:" + std::to_string(fir_.taps.size());
    case Kind::ZfIirNoiseless:
        return "zf-iir-noiseless";
    }
    return "digital";
}

double DigitalPipeline::receivedSignalPower() const
{
    return taps_.taps.squaredNorm();
}

BlockOutput DigitalPipeline::run(const CVector &symbols, double noiseVariance, Rng &rng) const
{
    BlockOutput out;
    out.reference = reference_;
    CVector received = convolve(taps_.taps, symbols);
    switch (kind_)
    {
    case Kind::NoEqualization:
        addAwgnInPlace(received, noiseVariance, rng);
        out.series = std::move(received);
        break;
    case Kind::ZfIir:
        addAwgnInPlace(received, noiseVariance, rng);
        out.series = zfIirEqualize(received, taps_);
        break;
    case Kind::Fir:
        addAwgnInPlace(received, noiseVariance, rng);
        out.series = applyFir(received, fir_);
        break;
    case Kind::ZfIirNoiseless:
        out.series = noiselessZfPipeline(received, taps_, noiseVariance, rng);
        break;
    }
    return out;
}

// ---------------------------------------------------------------------------

SnrDefinition parseSnrDefinition(const std::string &text)
{
    if (text == "received")
        return SnrDefinition::Received;
    if (text == "transmit")
        return SnrDefinition::Transmit;
    throw InvalidArgument("snr definition must be \"received\" or \"transmit\", got \"" + text + "\"");
}

std::string toString(SnrDefinition def)
{
    return def == SnrDefinition::Received ? "received" : "transmit";
}

double noiseVarianceFor(const Pipeline &pipeline, double snrDb, SnrDefinition definition)
{
    const double reference = definition == SnrDefinition::Received ? pipeline.receivedSignalPower() : 1.0;
    return reference / std::pow(10.0, snrDb / 10.0);
}

namespace
{

std::int64_t runBlock(const Pipeline &pipeline, int blockLength, double noiseVariance, std::uint64_t seed,
                      std::uint64_t block)
{
    Rng rng = makeRng(seed, {block});
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(blockLength));
    for (auto &b : bits)
        b = static_cast<std::uint8_t>(rng() >> 63);
    const BlockOutput out = pipeline.run(bpskModulate(bits), noiseVariance, rng);
    const auto decided = bpskDetect(out.series, out.reference.gain, out.reference.offset, blockLength);
    std::int64_t errors = 0;
    for (std::size_t k = 0; k < bits.size(); ++k)
        errors += bits[k] != decided[k];
    return errors;
}

constexpr std::size_t kBlocksPerBatch = 256;

} // namespace

BerPoint estimateBer(const Pipeline &pipeline, double snrDb, const MonteCarloOptions &options, std::uint64_t seed)
{
    require(options.blockLength >= 1, "estimateBer: block length must be >= 1");
    require(options.stop.minErrors >= 1, "estimateBer: minErrors must be >= 1");
    require(options.stop.maxBits >= options.blockLength, "estimateBer: maxBits must be >= block length");

    const double noiseVariance = noiseVarianceFor(pipeline, snrDb, options.snrDefinition);
    const auto maxBlocks = static_cast<std::uint64_t>(options.stop.maxBits / options.blockLength);

    std::int64_t errors = 0;
    std::uint64_t blocksUsed = 0;
    std::vector<std::int64_t> batch;
    bool done = false;
    for (std::uint64_t first = 0; !done && first < maxBlocks; first += kBlocksPerBatch)
    {
        const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(kBlocksPerBatch, maxBlocks - first));
        batch.assign(count, 0);
        parallelFor(count, options.threads, [&](std::size_t i) {
            batch[i] = runBlock(pipeline, options.blockLength, noiseVariance, seed, first + i);
        });
        for (std::size_t i = 0; i < count; ++i)
        {
            errors += batch[i];
            blocksUsed = first + i + 1;
            if (errors >= options.stop.minErrors)
            {
                done = true;
                break;
            }
        }
    }

    BerPoint p;
    p.snrDb = snrDb;
    p.bitErrors = errors;
    p.bitsSimulated = static_cast<std::int64_t>(blocksUsed) * options.blockLength;
    p.ber = static_cast<double>(p.bitErrors) / static_cast<double>(p.bitsSimulated);
    p.ciHalfWidth = 1.96 * std::sqrt(p.ber * (1.0 - p.ber) / static_cast<double>(p.bitsSimulated));
    return p;
}

std::uint64_t sweepPointSeed(std::uint64_t rootSeed, double snrDb)
{
    return deriveSeed(rootSeed, {std::bit_cast<std::uint64_t>(snrDb)});
}

BerCurve snrSweep(const Pipeline &pipeline, const std::vector<double> &snrGridDb, const MonteCarloOptions &options,
                  std::uint64_t rootSeed)
{
    require(!snrGridDb.empty(), "snrSweep: empty SNR grid");
    for (std::size_t i = 1; i < snrGridDb.size(); ++i)
        require(snrGridDb[i] > snrGridDb[i - 1], "snrSweep: SNR grid must be strictly ascending");

    BerCurve curve;
    curve.label = pipeline.label();
    for (double snr : snrGridDb)
        curve.points.push_back(estimateBer(pipeline, snr, options, sweepPointSeed(rootSeed, snr)));
    return curve;
}

namespace
{
std::string formatReal(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

std::string curveToCsv(const BerCurve &curve)
{
    std::string out = "label,snr_db,ber,bits,errors,ci\n";
    for (const auto &p : curve.points)
    {
        out += curve.label + "," + formatReal(p.snrDb) + "," + formatReal(p.ber) + "," + std::to_string(p.bitsSimulated) +
               "," + std::to_string(p.bitErrors) + "," + formatReal(p.ciHalfWidth) + "\n";
    }
    return out;
}

void writeCurveCsv(const std::filesystem::path &path, const BerCurve &curve)
{
    writeFileAtomic(path, curveToCsv(curve));
}

std::optional<double> snrAtBer(const BerCurve &curve, double targetBer)
{
    const auto &pts = curve.points;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        if (pts[i].ber > targetBer)
            continue;
        if (i == 0)
            return pts[0].snrDb;
        // zero-error points are floored at half an error so the log stays finite
        const double lo = std::max(pts[i].ber, 0.5 / static_cast<double>(pts[i].bitsSimulated));
        const double y0 = std::log10(pts[i - 1].ber);
        const double y1 = std::log10(std::min(lo, targetBer));
        const double yt = std::log10(targetBer);
        if (y0 == y1)
            return pts[i].snrDb;
        const double frac = (y0 - yt) / (y0 - y1);
        return pts[i - 1].snrDb + frac * (pts[i].snrDb - pts[i - 1].snrDb);
    }
    return std::nullopt;
}

} // namespace dasis
