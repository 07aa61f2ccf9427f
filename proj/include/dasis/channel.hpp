#pragma once

#include "dasis/geometry.hpp"
#include "dasis/types.hpp"

namespace dasis
{

// Symbol-spaced multipath taps c_0 .. c_{C-1}; c_0 != 0.
struct TemporalTaps
{
    CVector taps;

    TemporalTaps() = default;
    explicit TemporalTaps(CVector values);

    Eigen::Index size() const { return taps.size(); }
    Complex operator[](Eigen::Index i) const { return taps(i); }
};

// [1, -0.9 e^{j pi/6}, 0.81 e^{j pi/4}]
TemporalTaps defaultTemporalTaps();

// Transmitter -> outermost layer channel: spatial (per element) x temporal.
struct ChannelRealization
{
    CMatrix tapMatrix; // N x C, tapMatrix(n, c) = spatial(n) * taps[c]
    CVector spatial;
    TemporalTaps temporal;
    double kappa = 0.0;

    Eigen::Index elements() const { return tapMatrix.rows(); }
    Eigen::Index taps() const { return tapMatrix.cols(); }
};

// Rician spatial vector sqrt(k/(k+1)) h_LOS + sqrt(1/(k+1)) h_NLOS with unit
// average power per element. h_LOS carries the spherical-wave phase
// 2 pi d_n / lambda from the transmitter to element n of layer L.
CVector ricianSpatialChannel(const SisGeometry &geometry, double kappa, Rng &rng);

ChannelRealization buildVectorChannel(const CVector &spatial, const TemporalTaps &temporal, double kappa = 0.0);

// Row-wise full linear convolution of the tap matrix with the symbols:
// N x (M + C - 1).
SignalBlock convolveChannel(const ChannelRealization &channel, const CVector &symbols);

// Full linear convolution of two sequences.
CVector convolve(const CVector &a, const CVector &b);

// Adds circularly-symmetric complex Gaussian noise with E|n|^2 = noiseVariance.
CVector addAwgn(const CVector &samples, double noiseVariance, Rng &rng);
void addAwgnInPlace(CVector &samples, double noiseVariance, Rng &rng);

} // namespace dasis
