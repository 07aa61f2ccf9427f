#include "dasis/channel.hpp"

#include "dasis/random.hpp"

#include <cmath>

namespace dasis
{

TemporalTaps::TemporalTaps(CVector values) : taps(std::move(values))
{
    require(taps.size() >= 1, "TemporalTaps: at least one tap is required");
    require(taps(0) != Complex(0.0, 0.0), "TemporalTaps: leading tap must be nonzero");
}

TemporalTaps defaultTemporalTaps()
{
    CVector taps(3);
    taps << Complex(1.0, 0.0), -0.9 * std::polar(1.0, kPi / 6.0), 0.81 * std::polar(1.0, kPi / 4.0);
    return TemporalTaps(taps);
}

CVector ricianSpatialChannel(const SisGeometry &geometry, double kappa, Rng &rng)
{
    require(kappa >= 0.0, "ricianSpatialChannel: kappa must be >= 0");
    const auto outer = elementPositions(geometry, geometry.numLayers);
    const double losWeight = std::sqrt(kappa / (kappa + 1.0));
    const double scatterWeight = std::sqrt(1.0 / (kappa + 1.0));

    CVector h(static_cast<Eigen::Index>(outer.size()));
    for (std::size_t n = 0; n < outer.size(); ++n)
    {
        const double d = (outer[n] - geometry.txPosition).norm();
        const Complex los = std::polar(1.0, kTwoPi * d / geometry.wavelength);
        h(static_cast<Eigen::Index>(n)) = losWeight * los + scatterWeight * complexGaussian(rng, 1.0);
    }
    return h;
}

ChannelRealization buildVectorChannel(const CVector &spatial, const TemporalTaps &temporal, double kappa)
{
    require(spatial.size() >= 1, "buildVectorChannel: empty spatial vector");
    require(temporal.size() >= 1, "buildVectorChannel: empty temporal taps");
    ChannelRealization ch;
    ch.spatial = spatial;
    ch.temporal = temporal;
    ch.kappa = kappa;
    ch.tapMatrix = spatial * temporal.taps.transpose();
    return ch;
}

SignalBlock convolveChannel(const ChannelRealization &channel, const CVector &symbols)
{
    require(symbols.size() >= 1, "convolveChannel: empty symbol sequence");
    const Eigen::Index n = channel.elements();
    const Eigen::Index c = channel.taps();
    const Eigen::Index m = symbols.size();

    SignalBlock out = SignalBlock::Zero(n, m + c - 1);
    for (Eigen::Index tap = 0; tap < c; ++tap)
        out.middleCols(tap, m) += channel.tapMatrix.col(tap) * symbols.transpose();
    return out;
}

CVector convolve(const CVector &a, const CVector &b)
{
    require(a.size() >= 1 && b.size() >= 1, "convolve: empty input");
    CVector out = CVector::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i, b.size()) += a(i) * b;
    return out;
}

void addAwgnInPlace(CVector &samples, double noiseVariance, Rng &rng)
{
    require(noiseVariance >= 0.0, "addAwgn: noise variance must be >= 0");
    if (noiseVariance == 0.0)
        return;
    std::normal_distribution<double> normal(0.0, std::sqrt(noiseVariance / 2.0));
    for (Eigen::Index k = 0; k < samples.size(); ++k)
    {
        const double re = normal(rng);
        const double im = normal(rng);
        samples(k) += Complex(re, im);
    }
}

CVector addAwgn(const CVector &samples, double noiseVariance, Rng &rng)
{
    CVector out = samples;
    addAwgnInPlace(out, noiseVariance, rng);
    return out;
}

} // namespace dasis
