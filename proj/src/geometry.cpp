#include "dasis/geometry.hpp"

#include <cmath>
#include <string>

namespace dasis
{

int SisGeometry::gridSide() const
{
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(elementsPerLayer))));
    return side;
}

void SisGeometry::validate() const
{
    require(numLayers >= 1, "geometry: numLayers must be >= 1");
    require(elementsPerLayer >= 1, "geometry: elementsPerLayer must be >= 1");
    const int side = gridSide();
    require(side * side == elementsPerLayer,
            "geometry: elementsPerLayer = " + std::to_string(elementsPerLayer) + " is not a perfect square");
    require(elementSpacing > 0.0, "geometry: elementSpacing must be > 0");
    require(layerSpacing > 0.0, "geometry: layerSpacing must be > 0");
    require(wavelength > 0.0, "geometry: wavelength must be > 0");
    require(elementArea > 0.0, "geometry: elementArea must be > 0");
}

SisGeometry makeGeometry(const GeometryOptions &options)
{
    require(options.carrierHz > 0.0, "geometry: carrier frequency must be > 0");
    SisGeometry g;
    g.numLayers = options.numLayers;
    g.elementsPerLayer = options.elementsPerLayer;
    g.wavelength = kSpeedOfLight / options.carrierHz;
    g.layerSpacing = options.layerSpacingWavelengths * g.wavelength;
    g.elementSpacing = options.elementSpacingWavelengths * g.wavelength;
    g.elementArea = g.elementSpacing * g.elementSpacing;
    g.txPosition = options.txPosition;
    g.rxPosition = options.rxPosition;
    g.sisCenter = options.rxPosition - (g.numLayers * g.layerSpacing) * kSurfaceNormal;
    g.validate();
    return g;
}

std::vector<Point3> elementPositions(const SisGeometry &geometry, int layer)
{
    geometry.validate();
    require(layer >= 1 && layer <= geometry.numLayers,
            "elementPositions: layer " + std::to_string(layer) + " out of range");

    const int side = geometry.gridSide();
    const double half = 0.5 * (side - 1);
    const Point3 centre = geometry.sisCenter + ((geometry.numLayers - layer) * geometry.layerSpacing) * kSurfaceNormal;

    std::vector<Point3> positions;
    positions.reserve(static_cast<std::size_t>(geometry.elementsPerLayer));
    for (int row = 0; row < side; ++row)
    {
        for (int col = 0; col < side; ++col)
        {
            const Point3 offset{(col - half) * geometry.elementSpacing, 0.0, (row - half) * geometry.elementSpacing};
            positions.push_back(centre + offset);
        }
    }
    return positions;
}

Complex rsCoefficient(const Point3 &src, const Point3 &dst, double wavelength, double elementArea)
{
    const Point3 delta = dst - src;
    const double d = delta.norm();
    require(d > 0.0, "rsCoefficient: source and destination coincide");
    require(wavelength > 0.0, "rsCoefficient: wavelength must be > 0");

    const double cosChi = delta.dot(kSurfaceNormal) / d;
    const Complex radial(1.0 / (kTwoPi * d), -1.0 / wavelength);
    return (elementArea * cosChi / d) * radial * std::polar(1.0, kTwoPi * d / wavelength);
}

PropagationMatrix interLayerMatrix(const SisGeometry &geometry, int layer)
{
    require(layer >= 2 && layer <= geometry.numLayers,
            "interLayerMatrix: layer " + std::to_string(layer) + " must be in [2, numLayers]");
    const auto src = elementPositions(geometry, layer);
    const auto dst = elementPositions(geometry, layer - 1);
    const auto n = static_cast<Eigen::Index>(src.size());

    PropagationMatrix h;
    h.sourceLayer = layer;
    h.destLayer = layer - 1;
    h.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            h.entries(i, j) = rsCoefficient(src[static_cast<std::size_t>(j)], dst[static_cast<std::size_t>(i)],
                                            geometry.wavelength, geometry.elementArea);
    return h;
}

CVector combiningVector(const SisGeometry &geometry)
{
    const auto src = elementPositions(geometry, 1);
    CVector w(static_cast<Eigen::Index>(src.size()));
    for (std::size_t n = 0; n < src.size(); ++n)
        w(static_cast<Eigen::Index>(n)) = rsCoefficient(src[n], geometry.rxPosition, geometry.wavelength, geometry.elementArea);
    return w;
}

double materialDelay(double thickness, double relativePermittivity)
{
    require(thickness >= 0.0, "materialDelay: thickness must be >= 0");
    require(relativePermittivity >= 1.0, "materialDelay: relative permittivity must be >= 1");
    return thickness * std::sqrt(relativePermittivity) / kSpeedOfLight;
}

} // namespace dasis
