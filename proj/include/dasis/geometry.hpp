#pragma once

#include "dasis/types.hpp"

#include <vector>

namespace dasis
{

// Physical layout of the stacked surface and the two antennas.
//
// Layers are parallel square grids whose normal points along +y (from the
// transmitter towards the receiver). Layer 1 is innermost, one layer spacing in
// front of the receive antenna; layer L is outermost. sisCenter is the centre
// of layer L.
struct SisGeometry
{
    int numLayers = 2;
    int elementsPerLayer = 4;
    double elementSpacing = 0.0; // [m]
    double layerSpacing = 0.0;   // [m]
    double wavelength = 0.0;     // [m]
    double elementArea = 0.0;    // [m^2]
    Point3 txPosition = Point3::Zero();
    Point3 rxPosition = Point3::Zero();
    Point3 sisCenter = Point3::Zero();

    int gridSide() const;
    void validate() const;
    bool operator==(const SisGeometry &) const = default;
};

struct GeometryOptions
{
    double carrierHz = 28e9;
    int numLayers = 2;
    int elementsPerLayer = 4;
    double layerSpacingWavelengths = 0.75;
    double elementSpacingWavelengths = 0.5;
    Point3 txPosition{0.0, 0.0, 0.0};
    Point3 rxPosition{0.0, 100.0, -15.0};
};

// Builds a geometry with element area (spacing)^2 and the surface placed
// numLayers * layerSpacing in front of the receive antenna.
SisGeometry makeGeometry(const GeometryOptions &options = {});

inline const Point3 kSurfaceNormal{0.0, 1.0, 0.0};

// Row-major centred grid of layer `layer` (1-based).
std::vector<Point3> elementPositions(const SisGeometry &geometry, int layer);

// Rayleigh-Sommerfeld coupling from a radiating element at src to a point dst:
//   w = (A cos(chi) / d) (1 / (2 pi d) - j / lambda) exp(j 2 pi d / lambda)
// chi is measured from the surface normal.
Complex rsCoefficient(const Point3 &src, const Point3 &dst, double wavelength, double elementArea);

struct PropagationMatrix
{
    CMatrix entries; // (n, nbar): source element nbar -> destination element n
    int sourceLayer = 0;
    int destLayer = 0;
};

// H_l, coupling layer `layer` to layer `layer - 1`; 2 <= layer <= numLayers.
PropagationMatrix interLayerMatrix(const SisGeometry &geometry, int layer);

// Coupling from each layer-1 element to the receive antenna.
CVector combiningVector(const SisGeometry &geometry);

// Traversal delay h sqrt(eps_r) / c of a dielectric slab.
double materialDelay(double thickness, double relativePermittivity);

} // namespace dasis
