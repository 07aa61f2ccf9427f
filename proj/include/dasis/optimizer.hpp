#pragma once

#include "dasis/channel.hpp"
#include "dasis/sis.hpp"
#include "dasis/types.hpp"

#include <cstdint>
#include <vector>

namespace dasis
{

struct OptimizerHyperparams
{
    int maskDraws = 50;         // outer random-search budget
    int maxIters = 500;         // gradient steps per draw
    double learningRate = 0.1;  // per element: the applied step is learningRate * N
    double lrDecay = 0.5;       // applied after 10 iterations without improvement
    double tolerance = 1e-6;    // relative improvement over 20 iterations
    std::uint64_t seed = 1;

    void validate() const;
};

// Inverse post-detection SINR of an effective response:
//   (sum_{t != t*} |g_t|^2 + noiseVariance) / |g_t*|^2,  t* = argmax |g_t|.
double surrogateLoss(const CVector &response, double noiseVariance);
double surrogateLoss(const SisConfig &config, const SurfaceModel &model, const ChannelRealization &channel,
                     double noiseVariance);

// d(surrogateLoss)/d(theta_{l,n}) by a forward pass through the layer cascade
// followed by an adjoint pass, with the dominant tap held fixed. Layer-major:
// entry (l - 1) * N + n. Throws TiedDominantTapError if the dominant tap does
// not beat the runner-up by more than 1e-12.
RVector phaseGradient(const SisConfig &config, const SurfaceModel &model, const ChannelRealization &channel,
                      double noiseVariance);

// Central differences of surrogateLoss; fallback for tied dominant taps.
RVector finiteDifferenceGradient(const SisConfig &config, const SurfaceModel &model, const ChannelRealization &channel,
                                 double noiseVariance, double step = 1e-6);

struct DescentResult
{
    SisConfig config;
    double loss = 0.0;
    int iterations = 0;
};

// Gradient descent over phases with the delay bits fixed. Returns the best
// iterate seen.
DescentResult gradientDescentPhases(const SisConfig &start, const SurfaceModel &model,
                                    const ChannelRealization &channel, double noiseVariance,
                                    const OptimizerHyperparams &hyper);

// Fair-coin bits per element per layer (index 0 = layer 1).
std::vector<DelayBits> randomDelayDraw(int numLayers, int elementsPerLayer, Rng &rng);

// Random delay bits plus uniform phases for draw `index` of seed.
SisConfig randomStart(int numLayers, int elementsPerLayer, std::uint64_t seed, int index);

struct OptimizationResult
{
    SisConfig bestConfig;
    double bestLoss = 0.0;
    std::vector<double> lossTrace; // final loss of every draw, in draw order
    int draws = 0;
};

// Random search over delay bits, gradient descent over phases for each draw.
// Draws run in parallel; every draw is seeded from (hyper.seed, draw index).
OptimizationResult hybridOptimize(const SurfaceModel &model, const ChannelRealization &channel, double noiseVariance,
                                  const OptimizerHyperparams &hyper, int threads = 0);

} // namespace dasis
