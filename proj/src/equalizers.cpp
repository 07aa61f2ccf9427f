#include "dasis/equalizers.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace dasis
{

CVector tapPolynomialRoots(const TemporalTaps &taps)
{
    require(taps.size() >= 1, "tapPolynomialRoots: no taps");
    const Eigen::Index degree = taps.size() - 1;
    if (degree == 0)
        return CVector(0);

    // z^{C-1} + (c_1/c_0) z^{C-2} + ... + c_{C-1}/c_0
    CMatrix companion = CMatrix::Zero(degree, degree);
    for (Eigen::Index i = 0; i < degree; ++i)
        companion(0, i) = -taps[i + 1] / taps[0];
    for (Eigen::Index i = 1; i < degree; ++i)
        companion(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
    return solver.eigenvalues();
}

bool hasStableInverse(const TemporalTaps &taps)
{
    const CVector roots = tapPolynomialRoots(taps);
    for (Eigen::Index i = 0; i < roots.size(); ++i)
        if (std::abs(roots(i)) >= 1.0 - kStabilityMargin)
            return false;
    return true;
}

namespace
{

void requireStable(const TemporalTaps &taps)
{
    if (hasStableInverse(taps))
        return;
    std::ostringstream msg;
    msg << "channel taps have a zero on or outside the unit circle (|z| >= 1 - " << kStabilityMargin
        << "); zero-forcing inverse is unstable";
    throw UnstableInverseError(msg.str());
}

CVector recursiveInverse(const CVector &series, const TemporalTaps &taps)
{
    const Eigen::Index c = taps.size();
    const Complex lead = taps[0];
    CVector y(series.size());
    for (Eigen::Index k = 0; k < series.size(); ++k)
    {
        Complex acc = series(k);
        for (Eigen::Index i = 1; i < c && i <= k; ++i)
            acc -= taps[i] * y(k - i);
        y(k) = acc / lead;
    }
    return y;
}

} // namespace

CVector zfIirEqualize(const CVector &series, const TemporalTaps &taps)
{
    requireStable(taps);
    return recursiveInverse(series, taps);
}

FirFilter firFromIir(const TemporalTaps &taps, int numTaps)
{
    require(numTaps >= 1, "firFromIir: need at least one tap");
    CVector impulse = CVector::Zero(numTaps);
    impulse(0) = 1.0;
    return FirFilter{zfIirEqualize(impulse, taps)};
}

CVector applyFir(const CVector &series, const FirFilter &filter)
{
    require(filter.taps.size() >= 1, "applyFir: empty filter");
    const Eigen::Index n = series.size();
    CVector y = CVector::Zero(n);
    for (Eigen::Index i = 0; i < filter.taps.size() && i < n; ++i)
        y.tail(n - i) += filter.taps(i) * series.head(n - i);
    return y;
}

CVector noiselessZfPipeline(const CVector &cleanSeries, const TemporalTaps &taps, double noiseVariance, Rng &rng)
{
    CVector y = zfIirEqualize(cleanSeries, taps);
    addAwgnInPlace(y, noiseVariance, rng);
    return y;
}

} // namespace dasis
