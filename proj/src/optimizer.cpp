#include "dasis/optimizer.hpp"

#include "dasis/parallel.hpp"
#include "dasis/random.hpp"

#include <cmath>
#include <limits>

namespace dasis
{

void OptimizerHyperparams::validate() const
{
    require(maskDraws >= 1, "optimizer: maskDraws must be >= 1");
    require(maxIters >= 1, "optimizer: maxIters must be >= 1");
    require(learningRate > 0.0, "optimizer: learningRate must be > 0");
    require(lrDecay > 0.0 && lrDecay <= 1.0, "optimizer: lrDecay must be in (0, 1]");
    require(tolerance > 0.0 && tolerance < 1.0, "optimizer: tolerance must be in (0, 1)");
}

double surrogateLoss(const CVector &response, double noiseVariance)
{
    require(noiseVariance >= 0.0, "surrogateLoss: noise variance must be >= 0");
    const Eigen::Index t = dominantTap(response);
    const double peak = std::norm(response(t));
    require(peak > 0.0, "surrogateLoss: effective response is all zero");
    const double isi = response.squaredNorm() - peak;
    return (std::max(isi, 0.0) + noiseVariance) / peak;
}

double surrogateLoss(const SisConfig &config, const SurfaceModel &model, const ChannelRealization &channel,
                     double noiseVariance)
{
    return surrogateLoss(effectiveResponse(config, model, channel), noiseVariance);
}

namespace
{

void rotateRows(SignalBlock &block, const RVector &phases)
{
    for (Eigen::Index n = 0; n < block.rows(); ++n)
        block.row(n) *= std::polar(1.0, phases(n));
}

// Adjoint of applyDelayBits: bit-1 rows move one slot earlier.
void delayAdjoint(SignalBlock &adjoint, const DelayBits &bits)
{
    const Eigen::Index width = adjoint.cols();
    for (Eigen::Index n = 0; n < adjoint.rows(); ++n)
    {
        if (!bits[static_cast<std::size_t>(n)] || width == 0)
            continue;
        adjoint.row(n).head(width - 1) = adjoint.row(n).tail(width - 1).eval();
        adjoint(n, width - 1) = Complex(0.0, 0.0);
    }
}

} // namespace

RVector phaseGradient(const SisConfig &config, const SurfaceModel &model, const ChannelRealization &channel,
                      double noiseVariance)
{
    config.validate();
    const int layers = config.numLayers();
    const Eigen::Index n = config.elementsPerLayer();
    require(model.numLayers() == layers && model.elementsPerLayer() == n, "phaseGradient: model/config mismatch");
    require(channel.elements() == n, "phaseGradient: channel/config mismatch");

    // Forward pass on the impulse response, keeping each layer's phased output.
    std::vector<SignalBlock> phased(static_cast<std::size_t>(layers + 1));
    SignalBlock x = padInput(channel.tapMatrix, layers);
    for (int l = layers; l >= 1; --l)
    {
        SignalBlock z = applyDelayBits(x, config.layerBits(l));
        rotateRows(z, config.layerPhases(l));
        if (l >= 2)
            x = model.layerMatrix(l) * z;
        phased[static_cast<std::size_t>(l)] = std::move(z);
    }
    const CVector g = phased[1].transpose() * model.combining;

    const Eigen::Index top = dominantTap(g);
    const double peak = std::norm(g(top));
    require(peak > 0.0, "phaseGradient: effective response is all zero");
    double runnerUp = 0.0;
    for (Eigen::Index t = 0; t < g.size(); ++t)
        if (t != top)
            runnerUp = std::max(runnerUp, std::abs(g(t)));
    if (std::abs(g(top)) - runnerUp <= 1e-12)
        throw TiedDominantTapError("phaseGradient: dominant tap is not unique");

    // dL = 2 Re(sum_t u_t dg_t)
    const double isi = g.squaredNorm() - peak;
    CVector u = g.conjugate() / peak;
    u(top) = -(isi + noiseVariance) / (peak * peak) * std::conj(g(top));

    RVector grad(layers * n);
    SignalBlock adjoint = model.combining * u.transpose();
    for (int l = 1; l <= layers; ++l)
    {
        const SignalBlock &z = phased[static_cast<std::size_t>(l)];
        grad.segment((l - 1) * n, n) = -2.0 * adjoint.cwiseProduct(z).rowwise().sum().imag();
        if (l == layers)
            break;
        rotateRows(adjoint, config.layerPhases(l));
        delayAdjoint(adjoint, config.layerBits(l));
        adjoint = model.layerMatrix(l + 1).transpose() * adjoint;
    }
    return grad;
}

RVector finiteDifferenceGradient(const SisConfig &config, const SurfaceModel &model, const ChannelRealization &channel,
                                 double noiseVariance, double step)
{
    const int layers = config.numLayers();
    const Eigen::Index n = config.elementsPerLayer();
    RVector grad(layers * n);
    SisConfig probe = config;
    for (int l = 1; l <= layers; ++l)
    {
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double theta = config.layerPhases(l)(i);
            probe.layerPhases(l)(i) = wrapPhase(theta + step);
            const double up = surrogateLoss(probe, model, channel, noiseVariance);
            probe.layerPhases(l)(i) = wrapPhase(theta - step);
            const double down = surrogateLoss(probe, model, channel, noiseVariance);
            probe.layerPhases(l)(i) = theta;
            grad((l - 1) * n + i) = (up - down) / (2.0 * step);
        }
    }
    return grad;
}

DescentResult gradientDescentPhases(const SisConfig &start, const SurfaceModel &model,
                                    const ChannelRealization &channel, double noiseVariance,
                                    const OptimizerHyperparams &hyper)
{
    hyper.validate();
    start.validate();
    constexpr int kStallWindow = 10;
    constexpr int kToleranceWindow = 20;

    const Eigen::Index n = start.elementsPerLayer();
    double step = hyper.learningRate * static_cast<double>(n);

    DescentResult best{start, surrogateLoss(start, model, channel, noiseVariance), 0};
    SisConfig current = start;
    double currentLoss = best.loss;
    std::vector<double> history{best.loss};
    int stall = 0;

    for (int it = 1; it <= hyper.maxIters; ++it)
    {
        RVector grad;
        try
        {
            grad = phaseGradient(current, model, channel, noiseVariance);
        }
        catch (const TiedDominantTapError &)
        {
            grad = finiteDifferenceGradient(current, model, channel, noiseVariance);
        }
        best.iterations = it;

        if (grad.lpNorm<Eigen::Infinity>() <= 1e-12 * std::max(1.0, currentLoss))
            break;

        for (int l = 1; l <= current.numLayers(); ++l)
        {
            RVector &phases = current.layerPhases(l);
            for (Eigen::Index i = 0; i < n; ++i)
                phases(i) = wrapPhase(phases(i) - step * grad((l - 1) * n + i));
        }

        currentLoss = surrogateLoss(current, model, channel, noiseVariance);
        if (currentLoss < best.loss)
        {
            best.loss = currentLoss;
            best.config = current;
            stall = 0;
        }
        else if (++stall >= kStallWindow)
        {
            step *= hyper.lrDecay;
            stall = 0;
        }

        history.push_back(best.loss);
        if (history.size() > kToleranceWindow)
        {
            const double before = history[history.size() - 1 - kToleranceWindow];
            if (before - best.loss < hyper.tolerance * before)
                break;
        }
    }
    return best;
}

std::vector<DelayBits> randomDelayDraw(int numLayers, int elementsPerLayer, Rng &rng)
{
    require(numLayers >= 1 && elementsPerLayer >= 1, "randomDelayDraw: dimensions must be positive");
    std::vector<DelayBits> bits(static_cast<std::size_t>(numLayers),
                                DelayBits(static_cast<std::size_t>(elementsPerLayer), 0));
    for (auto &layer : bits)
        for (auto &b : layer)
            b = static_cast<std::uint8_t>(rng() >> 63);
    return bits;
}

SisConfig randomStart(int numLayers, int elementsPerLayer, std::uint64_t seed, int index)
{
    Rng rng = makeRng(seed, {static_cast<std::uint64_t>(index)});
    SisConfig config = SisConfig::zeros(numLayers, elementsPerLayer);
    config.delayBits = randomDelayDraw(numLayers, elementsPerLayer, rng);
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    for (auto &layer : config.phases)
        for (Eigen::Index i = 0; i < layer.size(); ++i)
            layer(i) = wrapPhase(uniform(rng));
    return config;
}

OptimizationResult hybridOptimize(const SurfaceModel &model, const ChannelRealization &channel, double noiseVariance,
                                  const OptimizerHyperparams &hyper, int threads)
{
    hyper.validate();
    const int layers = model.numLayers();
    const int n = model.elementsPerLayer();

    std::vector<DescentResult> results(static_cast<std::size_t>(hyper.maskDraws));
    parallelFor(results.size(), threads, [&](std::size_t r) {
        const SisConfig start = randomStart(layers, n, hyper.seed, static_cast<int>(r));
        results[r] = gradientDescentPhases(start, model, channel, noiseVariance, hyper);
    });

    OptimizationResult out;
    out.draws = hyper.maskDraws;
    out.bestLoss = std::numeric_limits<double>::infinity();
    for (const auto &r : results)
    {
        out.lossTrace.push_back(r.loss);
        if (r.loss < out.bestLoss)
        {
            out.bestLoss = r.loss;
            out.bestConfig = r.config;
        }
    }
    return out;
}

} // namespace dasis
