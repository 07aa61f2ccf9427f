#include "dasis/channel.hpp"
#include "dasis/geometry.hpp"
#include "dasis/random.hpp"
#include "dasis/sis.hpp"
#include "dasis/sis_io.hpp"

#include <doctest.h>

#include <cmath>

using namespace dasis;

namespace
{

CMatrix randomMatrix(Eigen::Index rows, Eigen::Index cols, Rng &rng)
{
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m(i) = complexGaussian(rng, 1.0);
    return m;
}

SisConfig randomConfig(int layers, int n, Rng &rng)
{
    SisConfig c = SisConfig::zeros(layers, n);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    for (int l = 1; l <= layers; ++l)
        for (int i = 0; i < n; ++i)
        {
            c.layerPhases(l)(i) = wrapPhase(phase(rng));
            c.layerBits(l)[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng() & 1u);
        }
    return c;
}

SurfaceModel randomModel(int layers, int n, Rng &rng)
{
    SurfaceModel m;
    for (int l = 2; l <= layers; ++l)
        m.interLayer.push_back(randomMatrix(n, n, rng));
    m.combining = randomMatrix(n, 1, rng).col(0);
    return m;
}

SurfaceModel identityModel(int layers, int n)
{
    SurfaceModel m;
    for (int l = 2; l <= layers; ++l)
        m.interLayer.push_back(CMatrix::Identity(n, n));
    m.combining = CVector::Ones(n);
    return m;
}

// Row-selection masks and J x J time-shift matrices written out explicitly.
// D0 keeps every slot; D1 moves slot t to slot t + 1.
CMatrix maskMatrix(const DelayBits &bits, std::uint8_t which)
{
    const auto n = static_cast<Eigen::Index>(bits.size());
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        if (bits[static_cast<std::size_t>(i)] == which)
            m(i, i) = 1.0;
    return m;
}

CMatrix shiftMatrix(Eigen::Index width, int shift)
{
    CMatrix d = CMatrix::Zero(width, width);
    for (Eigen::Index t = 0; t + shift < width; ++t)
        d(t, t + shift) = 1.0;
    return d;
}

SignalBlock layerOracle(const SignalBlock &x, const CMatrix &h, const RVector &phases, const DelayBits &bits)
{
    const Eigen::Index j = x.cols();
    const CMatrix delayed = maskMatrix(bits, 0) * x * shiftMatrix(j, 0) + maskMatrix(bits, 1) * x * shiftMatrix(j, 1);
    CMatrix theta = CMatrix::Zero(phases.size(), phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        theta(i, i) = std::polar(1.0, phases(i));
    return h * (theta * delayed);
}

// Antenna output as a sum over every element path (n_L, ..., n_1) of the
// product of couplings, each path delayed by the sum of its bits.
CVector pathSumOracle(const SisConfig &c, const SurfaceModel &m, const SignalBlock &received)
{
    const int layers = c.numLayers();
    const int n = c.elementsPerLayer();
    const Eigen::Index width = received.cols() + layers;
    CVector y = CVector::Zero(width);
    std::vector<int> path(static_cast<std::size_t>(layers), 0); // path[l-1] = element on layer l
    const auto total = static_cast<long>(std::pow(n, layers));
    for (long code = 0; code < total; ++code)
    {
        long rest = code;
        for (int l = 1; l <= layers; ++l)
        {
            path[static_cast<std::size_t>(l - 1)] = static_cast<int>(rest % n);
            rest /= n;
        }
        Complex gain = m.combining(path[0]);
        int delay = 0;
        for (int l = 1; l <= layers; ++l)
        {
            const int e = path[static_cast<std::size_t>(l - 1)];
            gain *= std::polar(1.0, c.layerPhases(l)(e));
            delay += c.layerBits(l)[static_cast<std::size_t>(e)];
            if (l >= 2)
                gain *= m.layerMatrix(l)(path[static_cast<std::size_t>(l - 2)], e);
        }
        const int source = path[static_cast<std::size_t>(layers - 1)];
        for (Eigen::Index t = 0; t < received.cols(); ++t)
            y(t + delay) += gain * received(source, t);
    }
    return y;
}

CVector randomSymbols(Eigen::Index m, Rng &rng)
{
    CVector x(m);
    for (auto &v : x)
        v = (rng() >> 63) ? -1.0 : 1.0;
    return x;
}

} // namespace

TEST_SUITE("sis")
{

TEST_CASE("configuration")
{
    const SisConfig z = SisConfig::zeros(2, 4);
    CHECK(z.numLayers() == 2);
    CHECK(z.elementsPerLayer() == 4);
    CHECK_NOTHROW(z.validate());

    SisConfig bad = z;
    bad.layerPhases(1)(0) = kTwoPi;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = z;
    bad.layerBits(2)[1] = 2;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = z;
    bad.delayBits.pop_back();
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);

    GeometryOptions o;
    o.elementsPerLayer = 9;
    CHECK_THROWS_AS(z.validateAgainst(makeGeometry(o)), InvalidArgument);

    CHECK(wrapPhase(-0.5) == doctest::Approx(kTwoPi - 0.5));
    CHECK(wrapPhase(kTwoPi) == 0.0);
    CHECK(wrapPhase(7.0 * kPi) == doctest::Approx(kPi));
    for (double a : {-1e-18, -kTwoPi, 1e6, -3.0})
    {
        const double w = wrapPhase(a);
        CHECK(w >= 0.0);
        CHECK(w < kTwoPi);
    }
}

TEST_CASE("padding")
{
    Rng rng(1);
    const SignalBlock x = randomMatrix(3, 4, rng);
    const SignalBlock p = padInput(x, 2);
    REQUIRE(p.cols() == 6);
    CHECK(p.leftCols(4) == x);
    CHECK(p.rightCols(2).isZero(0.0));

    SignalBlock row(1, 2);
    row << Complex(1.5, 0), Complex(0, -2);
    SignalBlock expected(1, 3);
    expected << Complex(1.5, 0), Complex(0, -2), 0.0;
    CHECK(padInput(row, 1) == expected);
}

TEST_CASE("delay bits")
{
    SUBCASE("all zero bits leave the block unchanged")
    {
        Rng rng(2);
        const SignalBlock x = padInput(randomMatrix(4, 5, rng), 1);
        CHECK(applyDelayBits(x, DelayBits(4, 0)) == x);
    }

    SUBCASE("single shift")
    {
        SignalBlock x(1, 3);
        x << Complex(2, 1), Complex(-1, 0), 0.0;
        SignalBlock expected(1, 3);
        expected << 0.0, Complex(2, 1), Complex(-1, 0);
        CHECK(applyDelayBits(x, {1}) == expected);
    }

    SUBCASE("two rows against the explicit mask and shift matrices")
    {
        SignalBlock x(2, 3);
        x << 1.0, 2.0, 0.0, 3.0, 4.0, 0.0;
        SignalBlock expected(2, 3);
        expected << 1.0, 2.0, 0.0, 0.0, 3.0, 4.0;
        const DelayBits bits{0, 1};
        CHECK(applyDelayBits(x, bits) == expected);
        const CMatrix oracle = maskMatrix(bits, 0) * x * shiftMatrix(3, 0) + maskMatrix(bits, 1) * x * shiftMatrix(3, 1);
        CHECK(oracle == expected);
    }

    SUBCASE("a bit-1 row with a nonzero final sample exceeds the guard")
    {
        SignalBlock x(2, 3);
        x << 1.0, 2.0, 3.0, 1.0, 0.0, 0.0;
        CHECK_THROWS_AS(applyDelayBits(x, {1, 0}), GuardBudgetError);
        CHECK_NOTHROW(applyDelayBits(x, {0, 1}));
    }
}

TEST_CASE("single layer")
{
    SignalBlock x(1, 3);
    x << Complex(0.5, 1), Complex(-2, 0.25), 0.0;
    const CMatrix one = CMatrix::Identity(1, 1);

    CHECK(applyLayer(x, one, RVector::Zero(1), {0}) == x);
    const SignalBlock negated = applyLayer(x, one, RVector::Constant(1, kPi), {0});
    CHECK((negated + x).norm() < 1e-15);

    // random layers against the literal matrix expression
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial)
    {
        const int n = 1 + static_cast<int>(rng() % 4);
        const Eigen::Index j = 2 + static_cast<Eigen::Index>(rng() % 7);
        SignalBlock block = randomMatrix(n, j, rng);
        block.col(j - 1).setZero();
        const CMatrix h = randomMatrix(n, n, rng);
        const SisConfig c = randomConfig(1, n, rng);
        const SignalBlock got = applyLayer(block, h, c.layerPhases(1), c.layerBits(1));
        const SignalBlock want = layerOracle(block, h, c.layerPhases(1), c.layerBits(1));
        CHECK(got == want);
    }
}

TEST_CASE("propagation")
{
    SUBCASE("transparent single element")
    {
        const SurfaceModel m = identityModel(1, 1);
        SignalBlock x(1, 3);
        x << Complex(1, 2), Complex(-3, 0.5), Complex(0, 4);
        const CVector y = propagate(SisConfig::zeros(1, 1), m, x);
        REQUIRE(y.size() == 4);
        CHECK(y.head(3) == x.row(0).transpose());
        CHECK(y(3) == Complex(0, 0));
    }

    SUBCASE("a delayed path is a pure one-symbol delay")
    {
        SurfaceModel m = identityModel(1, 1);
        m.combining(0) = Complex(0.25, -0.5);
        SisConfig c = SisConfig::zeros(1, 1);
        c.layerBits(1)[0] = 1;
        SignalBlock x(1, 1);
        x << Complex(3, 1);
        const CVector y = propagate(c, m, x);
        REQUIRE(y.size() == 2);
        CHECK(y(0) == Complex(0, 0));
        CHECK(std::abs(y(1) - Complex(3, 1) * Complex(0.25, -0.5)) < 1e-15);
    }

    SUBCASE("matches the path-sum operator")
    {
        Rng rng(4);
        for (int trial = 0; trial < 20; ++trial)
        {
            const int layers = 1 + trial % 3;
            const int n = trial % 2 ? 4 : 3;
            const SurfaceModel m = randomModel(layers, n, rng);
            const SisConfig c = randomConfig(layers, n, rng);
            const SignalBlock x = randomMatrix(n, 5, rng);
            const CVector y = propagate(c, m, x);
            const CVector want = pathSumOracle(c, m, x);
            CHECK((y - want).norm() <= 1e-12 * want.norm());
        }
    }

    SUBCASE("linear in the input")
    {
        Rng rng(5);
        const SurfaceModel m = randomModel(2, 4, rng);
        const SisConfig c = randomConfig(2, 4, rng);
        const SignalBlock a = randomMatrix(4, 10, rng), b = randomMatrix(4, 10, rng);
        const Complex s(0.3, -1.2), t(-0.7, 0.1);
        const CVector lhs = propagate(c, m, s * a + t * b);
        const CVector rhs = s * propagate(c, m, a) + t * propagate(c, m, b);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }

    SUBCASE("delays add up along a chain")
    {
        for (int layers = 1; layers <= 4; ++layers)
            for (unsigned mask = 0; mask < (1u << layers); ++mask)
            {
                SisConfig c = SisConfig::zeros(layers, 1);
                int expected = 0;
                for (int l = 1; l <= layers; ++l)
                {
                    c.layerBits(l)[0] = (mask >> (l - 1)) & 1u;
                    expected += c.layerBits(l)[0];
                }
                SignalBlock impulse = SignalBlock::Zero(1, 1);
                impulse(0, 0) = 1.0;
                const CVector y = propagate(c, identityModel(layers, 1), impulse);
                CHECK(y.size() == 1 + layers);
                CHECK(y(expected) == Complex(1, 0));
                CHECK(std::abs(y.sum() - Complex(1, 0)) == 0.0);
            }
    }

    SUBCASE("no sample ever leaves the guard window")
    {
        Rng rng(6);
        for (int trial = 0; trial < 200; ++trial)
        {
            const int layers = 1 + trial % 4;
            const SurfaceModel m = randomModel(layers, 4, rng);
            SisConfig c = randomConfig(layers, 4, rng);
            if (trial % 5 == 0)
                for (auto &b : c.delayBits)
                    std::fill(b.begin(), b.end(), 1);
            CHECK_NOTHROW(propagate(c, m, randomMatrix(4, 3, rng)));
        }
    }
}

TEST_CASE("effective response")
{
    const TemporalTaps taps = defaultTemporalTaps();

    SUBCASE("transparent surface returns the taps")
    {
        const ChannelRealization ch = buildVectorChannel(CVector::Ones(1), taps);
        const CVector g = effectiveResponse(SisConfig::zeros(1, 1), identityModel(1, 1), ch);
        REQUIRE(g.size() == 4);
        CHECK(g.head(3) == taps.taps);
        CHECK(g(3) == Complex(0, 0));

        SisConfig delayed = SisConfig::zeros(1, 1);
        delayed.layerBits(1)[0] = 1;
        const CVector d = effectiveResponse(delayed, identityModel(1, 1), ch);
        CHECK(d(0) == Complex(0, 0));
        CHECK(d.tail(3) == taps.taps);
    }

    SUBCASE("time invariance on the physical geometry")
    {
        GeometryOptions o;
        o.elementsPerLayer = 4;
        const SisGeometry geo = makeGeometry(o);
        const SurfaceModel m = makeSurfaceModel(geo);
        Rng rng(7);
        for (int trial = 0; trial < 100; ++trial)
        {
            const ChannelRealization ch = buildVectorChannel(ricianSpatialChannel(geo, 15.0, rng), taps, 15.0);
            const SisConfig c = randomConfig(2, 4, rng);
            const CVector x = randomSymbols(trial < 50 ? 20 : 64, rng);
            const CVector lhs = convolve(effectiveResponse(c, m, ch), x);
            const CVector rhs = propagate(c, m, convolveChannel(ch, x));
            REQUIRE(lhs.size() == rhs.size());
            CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());
        }
    }

    SUBCASE("a common phase on one layer rotates the whole response")
    {
        Rng rng(8);
        const SurfaceModel m = randomModel(2, 4, rng);
        const ChannelRealization ch = buildVectorChannel(randomMatrix(4, 1, rng).col(0), taps);
        const SisConfig c = randomConfig(2, 4, rng);
        const CVector g = effectiveResponse(c, m, ch);
        for (int l = 1; l <= 2; ++l)
        {
            SisConfig shifted = c;
            const double phi = 1.234;
            for (Eigen::Index i = 0; i < 4; ++i)
                shifted.layerPhases(l)(i) = wrapPhase(shifted.layerPhases(l)(i) + phi);
            const CVector h = effectiveResponse(shifted, m, ch);
            CHECK((h - std::polar(1.0, phi) * g).norm() < 1e-12 * g.norm());
            CHECK((h.cwiseAbs() - g.cwiseAbs()).norm() < 1e-12 * g.norm());
        }
    }

    SUBCASE("geometry overload matches the model overload")
    {
        GeometryOptions o;
        o.elementsPerLayer = 9;
        const SisGeometry geo = makeGeometry(o);
        Rng rng(9);
        const ChannelRealization ch = buildVectorChannel(ricianSpatialChannel(geo, 15.0, rng), taps);
        const SisConfig c = randomConfig(2, 9, rng);
        CHECK(effectiveResponse(c, geo, ch) == effectiveResponse(c, makeSurfaceModel(geo), ch));
    }
}

TEST_CASE("dominant tap")
{
    CVector g(4);
    g << Complex(0.1, 0), Complex(0, -2), Complex(1.2, 1.6), Complex(0.5, 0);
    CHECK(dominantTap(g) == 1); // |g1| = |g2| = 2, smallest index wins
    g(2) = Complex(1.2, 1.61);
    CHECK(dominantTap(g) == 2);
    CHECK_THROWS_AS(dominantTap(CVector()), InvalidArgument);
}

TEST_CASE("surface documents")
{
    Rng rng(10);
    SurfaceDocument doc;
    doc.config = randomConfig(2, 9, rng);
    doc.metadata = {{"label", "da-sis:9"}, {"loss", 0.125}};

    const std::string text = serializeSurface(doc);
    const SurfaceDocument back = parseSurface(text);
    CHECK(back.config == doc.config);
    for (int l = 1; l <= 2; ++l)
        CHECK(back.config.layerPhases(l) == doc.config.layerPhases(l)); // bit-exact doubles
    CHECK(back.metadata == doc.metadata);
    CHECK(serializeSurface(back) == text);

    const auto j = nlohmann::json::parse(text);
    CHECK(j.at("format") == "dasis-surface");
    CHECK(j.at("layers").at(0).at("layer") == 1);

    auto broken = j;
    broken["format"] = "other";
    CHECK_THROWS_AS(parseSurface(broken.dump()), InvalidArgument);
    broken = j;
    broken["layers"][0]["delay_bits"][0] = 3;
    CHECK_THROWS_AS(parseSurface(broken.dump()), InvalidArgument);
    broken = j;
    broken["layers"][1]["phases"].erase(0);
    CHECK_THROWS_AS(parseSurface(broken.dump()), InvalidArgument);
    CHECK_THROWS(parseSurface("{not json"));
}

}
