#pragma once

#include "dasis/channel.hpp"
#include "dasis/types.hpp"

namespace dasis
{

struct FirFilter
{
    CVector taps;
};

// Zeros of c_0 + c_1 z^-1 + ... + c_{C-1} z^-(C-1), via the companion matrix.
CVector tapPolynomialRoots(const TemporalTaps &taps);

inline constexpr double kStabilityMargin = 1e-9;

// True iff every zero has modulus < 1 - kStabilityMargin.
bool hasStableInverse(const TemporalTaps &taps);

// Causal recursion y[k] = (x[k] - sum_{i>=1} c_i y[k-i]) / c_0, zero initial
// state. Throws UnstableInverseError if the inverse is not stable.
CVector zfIirEqualize(const CVector &series, const TemporalTaps &taps);

// First K samples of the impulse response of 1 / c(z).
FirFilter firFromIir(const TemporalTaps &taps, int numTaps);

// Causal FIR filtering; output has the input length.
CVector applyFir(const CVector &series, const FirFilter &filter);

// Equalizes the clean series, then adds the noise.
CVector noiselessZfPipeline(const CVector &cleanSeries, const TemporalTaps &taps, double noiseVariance, Rng &rng);

} // namespace dasis
