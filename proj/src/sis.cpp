#include "dasis/sis.hpp"

#include <cmath>
#include <string>

namespace dasis
{

SisConfig SisConfig::zeros(int numLayers, int elementsPerLayer)
{
    require(numLayers >= 1 && elementsPerLayer >= 1, "SisConfig: dimensions must be positive");
    SisConfig c;
    c.phases.assign(static_cast<std::size_t>(numLayers), RVector::Zero(elementsPerLayer));
    c.delayBits.assign(static_cast<std::size_t>(numLayers), DelayBits(static_cast<std::size_t>(elementsPerLayer), 0));
    return c;
}

void SisConfig::validate() const
{
    require(!phases.empty(), "SisConfig: no layers");
    require(phases.size() == delayBits.size(), "SisConfig: phase and delay layer counts differ");
    const auto n = static_cast<std::size_t>(elementsPerLayer());
    require(n >= 1, "SisConfig: empty layer");
    for (std::size_t l = 0; l < phases.size(); ++l)
    {
        const std::string where = "SisConfig layer " + std::to_string(l + 1) + ": ";
        require(static_cast<std::size_t>(phases[l].size()) == n, where + "phase count mismatch");
        require(delayBits[l].size() == n, where + "delay bit count mismatch");
        for (Eigen::Index i = 0; i < phases[l].size(); ++i)
            require(phases[l](i) >= 0.0 && phases[l](i) < kTwoPi, where + "phase outside [0, 2 pi)");
        for (auto b : delayBits[l])
            require(b == 0 || b == 1, where + "delay bit must be 0 or 1");
    }
}

void SisConfig::validateAgainst(const SisGeometry &geometry) const
{
    validate();
    require(numLayers() == geometry.numLayers, "SisConfig: layer count does not match geometry");
    require(elementsPerLayer() == geometry.elementsPerLayer, "SisConfig: element count does not match geometry");
}

bool SisConfig::operator==(const SisConfig &other) const
{
    if (phases.size() != other.phases.size() || delayBits != other.delayBits)
        return false;
    for (std::size_t l = 0; l < phases.size(); ++l)
        if (phases[l].size() != other.phases[l].size() || phases[l] != other.phases[l])
            return false;
    return true;
}

double wrapPhase(double angle)
{
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2 pi
    if (r >= kTwoPi)
        r = 0.0;
    return r;
}

SurfaceModel makeSurfaceModel(const SisGeometry &geometry)
{
    geometry.validate();
    SurfaceModel model;
    for (int l = 2; l <= geometry.numLayers; ++l)
        model.interLayer.push_back(interLayerMatrix(geometry, l).entries);
    model.combining = combiningVector(geometry);
    return model;
}

SignalBlock padInput(const SignalBlock &received, int numLayers)
{
    require(numLayers >= 1, "padInput: numLayers must be >= 1");
    SignalBlock out = SignalBlock::Zero(received.rows(), received.cols() + numLayers);
    out.leftCols(received.cols()) = received;
    return out;
}

SignalBlock applyDelayBits(const SignalBlock &block, const DelayBits &bits)
{
    require(static_cast<Eigen::Index>(bits.size()) == block.rows(), "applyDelayBits: bit count does not match rows");
    const Eigen::Index width = block.cols();
    SignalBlock out = block;
    for (Eigen::Index n = 0; n < block.rows(); ++n)
    {
        const auto bit = bits[static_cast<std::size_t>(n)];
        require(bit == 0 || bit == 1, "applyDelayBits: bits must be 0 or 1");
        if (bit == 0)
            continue;
        if (width == 0)
            continue;
        if (block(n, width - 1) != Complex(0.0, 0.0))
            throw GuardBudgetError("applyDelayBits: row " + std::to_string(n) +
                                   " would shift a nonzero sample past the final slot");
        out.row(n).tail(width - 1) = block.row(n).head(width - 1);
        out(n, 0) = Complex(0.0, 0.0);
    }
    return out;
}

namespace
{

void scaleRowsByPhase(SignalBlock &block, const RVector &phases)
{
    for (Eigen::Index n = 0; n < block.rows(); ++n)
        block.row(n) *= std::polar(1.0, phases(n));
}

void checkLayerShapes(const SignalBlock &block, const RVector &phases, const DelayBits &bits)
{
    require(phases.size() == block.rows(), "applyLayer: phase count does not match rows");
    require(static_cast<Eigen::Index>(bits.size()) == block.rows(), "applyLayer: bit count does not match rows");
}

} // namespace

SignalBlock applyLayer(const SignalBlock &block, const CMatrix &interLayer, const RVector &phases, const DelayBits &bits)
{
    checkLayerShapes(block, phases, bits);
    require(interLayer.cols() == block.rows(), "applyLayer: propagation matrix does not match rows");
    SignalBlock delayed = applyDelayBits(block, bits);
    scaleRowsByPhase(delayed, phases);
    return interLayer * delayed;
}

CVector propagate(const SisConfig &config, const SurfaceModel &model, const SignalBlock &received)
{
    config.validate();
    const int layers = config.numLayers();
    require(model.numLayers() == layers, "propagate: model and config layer counts differ");
    require(model.elementsPerLayer() == config.elementsPerLayer(), "propagate: model and config element counts differ");
    require(received.rows() == config.elementsPerLayer(), "propagate: received block has wrong row count");

    SignalBlock x = padInput(received, layers);
    for (int l = layers; l >= 2; --l)
        x = applyLayer(x, model.layerMatrix(l), config.layerPhases(l), config.layerBits(l));

    checkLayerShapes(x, config.layerPhases(1), config.layerBits(1));
    SignalBlock z = applyDelayBits(x, config.layerBits(1));
    scaleRowsByPhase(z, config.layerPhases(1));
    return z.transpose() * model.combining;
}

CVector propagate(const SisConfig &config, const SisGeometry &geometry, const SignalBlock &received)
{
    config.validateAgainst(geometry);
    return propagate(config, makeSurfaceModel(geometry), received);
}

CVector effectiveResponse(const SisConfig &config, const SurfaceModel &model, const ChannelRealization &channel)
{
    const CVector impulse = CVector::Ones(1);
    return propagate(config, model, convolveChannel(channel, impulse));
}

CVector effectiveResponse(const SisConfig &config, const SisGeometry &geometry, const ChannelRealization &channel)
{
    config.validateAgainst(geometry);
    return effectiveResponse(config, makeSurfaceModel(geometry), channel);
}

Eigen::Index dominantTap(const CVector &response)
{
    require(response.size() >= 1, "dominantTap: empty response");
    Eigen::Index best = 0;
    double bestMag = std::abs(response(0));
    for (Eigen::Index t = 1; t < response.size(); ++t)
    {
        const double m = std::abs(response(t));
        if (m > bestMag)
        {
            bestMag = m;
            best = t;
        }
    }
    return best;
}

} // namespace dasis
