#pragma once

#include "dasis/channel.hpp"
#include "dasis/geometry.hpp"
#include "dasis/types.hpp"

#include <vector>

namespace dasis
{

// Per-layer phases and delay bits; index 0 holds layer 1 (innermost).
struct SisConfig
{
    std::vector<RVector> phases;      // radians in [0, 2 pi)
    std::vector<DelayBits> delayBits; // 0 or 1

    static SisConfig zeros(int numLayers, int elementsPerLayer);

    int numLayers() const { return static_cast<int>(phases.size()); }
    int elementsPerLayer() const { return phases.empty() ? 0 : static_cast<int>(phases.front().size()); }

    const RVector &layerPhases(int layer) const { return phases.at(static_cast<std::size_t>(layer - 1)); }
    RVector &layerPhases(int layer) { return phases.at(static_cast<std::size_t>(layer - 1)); }
    const DelayBits &layerBits(int layer) const { return delayBits.at(static_cast<std::size_t>(layer - 1)); }
    DelayBits &layerBits(int layer) { return delayBits.at(static_cast<std::size_t>(layer - 1)); }

    void validate() const;
    void validateAgainst(const SisGeometry &geometry) const;

    bool operator==(const SisConfig &other) const;
};

// Wraps an angle into [0, 2 pi).
double wrapPhase(double angle);

// Fixed propagation operators of one geometry: H_l for l = 2..L and the
// layer-1 -> antenna combining vector. Also used directly with stub matrices.
struct SurfaceModel
{
    std::vector<CMatrix> interLayer; // interLayer[l - 2] = H_l
    CVector combining;

    int numLayers() const { return static_cast<int>(interLayer.size()) + 1; }
    int elementsPerLayer() const { return static_cast<int>(combining.size()); }
    const CMatrix &layerMatrix(int layer) const { return interLayer.at(static_cast<std::size_t>(layer - 2)); }
};

SurfaceModel makeSurfaceModel(const SisGeometry &geometry);

// Appends numLayers zero columns (guard slots).
SignalBlock padInput(const SignalBlock &received, int numLayers);

// Bit-0 rows unchanged, bit-1 rows shifted one slot later with a zero in slot 0.
// Throws GuardBudgetError if a bit-1 row has a nonzero final sample.
SignalBlock applyDelayBits(const SignalBlock &block, const DelayBits &bits);

// H diag(e^{j theta}) delay(block).
SignalBlock applyLayer(const SignalBlock &block, const CMatrix &interLayer, const RVector &phases, const DelayBits &bits);

// Noise-free antenna time series of length M + C - 1 + L for a received block
// N x (M + C - 1).
CVector propagate(const SisConfig &config, const SurfaceModel &model, const SignalBlock &received);
CVector propagate(const SisConfig &config, const SisGeometry &geometry, const SignalBlock &received);

// End-to-end symbol-rate impulse response (length C + L) of channel + surface +
// combining for a fixed configuration.
CVector effectiveResponse(const SisConfig &config, const SurfaceModel &model, const ChannelRealization &channel);
CVector effectiveResponse(const SisConfig &config, const SisGeometry &geometry, const ChannelRealization &channel);

// Index of the largest-magnitude tap; ties go to the smallest index.
Eigen::Index dominantTap(const CVector &response);

} // namespace dasis
