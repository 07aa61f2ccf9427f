#include "dasis/channel.hpp"
#include "dasis/montecarlo.hpp"
#include "dasis/random.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace dasis;

namespace
{

double qFunction(double x)
{
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double bpskTheory(double ebN0Db)
{
    return qFunction(std::sqrt(2.0 * std::pow(10.0, ebN0Db / 10.0)));
}

MonteCarloOptions fixedBits(std::int64_t bits, int threads = 1)
{
    MonteCarloOptions o;
    o.stop = {std::numeric_limits<std::int64_t>::max(), bits};
    o.threads = threads;
    return o;
}

// Exposes a response with a known dominant tap for the detector.
class ScaledIdentity final : public Pipeline
{
public:
    std::string label() const override { return "scaled"; }
    double receivedSignalPower() const override { return 4.0; }
    BlockOutput run(const CVector &symbols, double, Rng &) const override
    {
        return {Complex(0.0, 2.0) * symbols, {0, Complex(0.0, 2.0)}};
    }
};

} // namespace

TEST_SUITE("montecarlo")
{

TEST_CASE("BPSK mapping")
{
    CHECK(bpskModulate({0}) == CVector::Constant(1, 1.0));
    CHECK(bpskModulate({1}) == CVector::Constant(1, -1.0));
    CVector expected(4);
    expected << 1.0, -1.0, -1.0, 1.0;
    CHECK(bpskModulate({0, 1, 1, 0}) == expected);
}

TEST_CASE("BPSK detection")
{
    CVector s(2);
    s << 2.3, -0.7;
    CHECK(bpskDetect(s, 1.0, 0, 2) == std::vector<std::uint8_t>{0, 1});
    CHECK(bpskDetect(CVector::Constant(1, Complex(0, 5)), Complex(0, 1), 0, 1) == std::vector<std::uint8_t>{0});
    CHECK(bpskDetect(CVector::Constant(1, Complex(0, 5)), Complex(0, -1), 0, 1) == std::vector<std::uint8_t>{1});

    CVector shifted(3);
    shifted << 9.0, -1.0, 1.0;
    CHECK(bpskDetect(shifted, 1.0, 1, 2) == std::vector<std::uint8_t>{1, 0});

    Rng rng(1);
    std::vector<std::uint8_t> bits(1000);
    for (auto &b : bits)
        b = static_cast<std::uint8_t>(rng() & 1u);
    CHECK(bpskDetect(bpskModulate(bits), 1.0, 0, 1000) == bits);

    CHECK_THROWS_AS(bpskDetect(s, 0.0, 0, 2), InvalidArgument);
    CHECK_THROWS_AS(bpskDetect(s, 1.0, 1, 2), InvalidArgument);
}

TEST_CASE("detection reference")
{
    CVector g(3);
    g << 0.2, Complex(0, -1.5), 0.4;
    const DetectionReference r = referenceFromResponse(g);
    CHECK(r.offset == 1);
    CHECK(r.gain == Complex(0, -1.5));
}

TEST_CASE("SNR definitions")
{
    const DigitalPipeline noEq(DigitalPipeline::Kind::NoEqualization, defaultTemporalTaps());
    CHECK(noEq.receivedSignalPower() == doctest::Approx(2.4661));
    CHECK(noiseVarianceFor(noEq, 10.0, SnrDefinition::Received) == doctest::Approx(0.24661));
    CHECK(noiseVarianceFor(noEq, 10.0, SnrDefinition::Transmit) == doctest::Approx(0.1));
    CHECK((parseSnrDefinition("transmit") == SnrDefinition::Transmit));
    CHECK((toString(SnrDefinition::Received) == "received"));
    CHECK_THROWS_AS(parseSnrDefinition("rx"), InvalidArgument);
}

TEST_CASE("noise-free links are error free")
{
    const AwgnPipeline identity;
    MonteCarloOptions o = fixedBits(100'000);
    const BerPoint p = estimateBer(identity, 300.0, o, 1);
    CHECK(p.bitErrors == 0);
    CHECK(p.ber == 0.0);
    CHECK(p.bitsSimulated == 100'000 / 128 * 128);

    const BerPoint rotated = estimateBer(ScaledIdentity(), 0.0, o, 1);
    CHECK(rotated.bitErrors == 0);
}

TEST_CASE("uncoded BPSK over AWGN matches the Q-function")
{
    const AwgnPipeline awgn;

    SUBCASE("1e-5 region within 3x")
    {
        MonteCarloOptions o;
        o.stop = {100, 100'000'000};
        const BerPoint p = estimateBer(awgn, 9.6, o, 42);
        const double theory = bpskTheory(9.6);
        CHECK(theory == doctest::Approx(1.0e-5).epsilon(0.1));
        CHECK(p.bitErrors >= 100);
        CHECK(p.ber < 3.0 * theory);
        CHECK(p.ber > theory / 3.0);
    }

    SUBCASE("1e-2 region within 10%")
    {
        // Eb/N0 where Q(sqrt(2 x)) = 1e-2
        const double snr = 4.3232;
        const double theory = bpskTheory(snr);
        CHECK(theory == doctest::Approx(1.0e-2).epsilon(0.01));
        MonteCarloOptions o;
        o.stop = {10'000, 100'000'000};
        const BerPoint p = estimateBer(awgn, snr, o, 43);
        CHECK(std::abs(p.ber - theory) < 0.1 * theory);
    }

    SUBCASE("gain and phase do not matter on the received axis")
    {
        const AwgnPipeline rotated(std::polar(3.0, 1.1));
        const BerPoint p = estimateBer(rotated, 4.0, fixedBits(1'000'000), 44);
        CHECK(std::abs(p.ber - bpskTheory(4.0)) < 5.0 * p.ciHalfWidth);
    }
}

TEST_CASE("confidence intervals are calibrated")
{
    const AwgnPipeline awgn;
    const double snr = 2.0;
    const double theory = bpskTheory(snr);
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const BerPoint p = estimateBer(awgn, snr, fixedBits(128 * 80), 1000 + seed);
        if (std::abs(p.ber - theory) <= p.ciHalfWidth)
            ++covered;
        CHECK(p.bitErrors <= p.bitsSimulated);
    }
    CHECK(covered >= 90);
}

TEST_CASE("stop rule")
{
    const AwgnPipeline awgn;
    MonteCarloOptions o;
    o.stop = {50, 10'000'000};
    const BerPoint p = estimateBer(awgn, 0.0, o, 5);
    // stops inside the first block that reaches the error target
    CHECK(p.bitErrors >= 50);
    CHECK(p.bitErrors < 50 + 128);
    CHECK(p.bitsSimulated % 128 == 0);

    o.stop = {1'000'000, 1000};
    CHECK(estimateBer(awgn, 0.0, o, 5).bitsSimulated == 896);

    o.stop = {0, 1000};
    CHECK_THROWS_AS(estimateBer(awgn, 0.0, o, 5), InvalidArgument);
}

TEST_CASE("determinism")
{
    const DigitalPipeline zf(DigitalPipeline::Kind::ZfIir, defaultTemporalTaps());
    const std::vector<double> grid{0.0, 4.0, 8.0};
    MonteCarloOptions one;
    one.stop = {200, 2'000'000};
    one.threads = 1;
    MonteCarloOptions many = one;
    many.threads = 8;
    const std::string a = curveToCsv(snrSweep(zf, grid, one, 77));
    CHECK(a == curveToCsv(snrSweep(zf, grid, one, 77)));
    CHECK(a == curveToCsv(snrSweep(zf, grid, many, 77)));
    CHECK(a != curveToCsv(snrSweep(zf, grid, one, 78)));

    // a point does not depend on the rest of the grid
    const BerCurve sub = snrSweep(zf, {4.0}, one, 77);
    CHECK(sub.points[0].ber == snrSweep(zf, grid, one, 77).points[1].ber);
    CHECK(sub.points[0].ber == estimateBer(zf, 4.0, one, sweepPointSeed(77, 4.0)).ber);
}

TEST_CASE("SNR sweep")
{
    const AwgnPipeline awgn;
    MonteCarloOptions o;
    o.threads = 1;
    const BerCurve curve = snrSweep(awgn, {0, 2, 4, 6, 8, 10}, o, 3);
    CHECK(curve.label == "awgn");
    REQUIRE(curve.points.size() == 6);
    for (std::size_t i = 1; i < curve.points.size(); ++i)
        CHECK(curve.points[i].ber < curve.points[i - 1].ber);

    CHECK_THROWS_AS(snrSweep(awgn, {}, o, 3), InvalidArgument);
    CHECK_THROWS_AS(snrSweep(awgn, {2.0, 1.0}, o, 3), InvalidArgument);
    CHECK_THROWS_AS(snrSweep(awgn, {2.0, 2.0}, o, 3), InvalidArgument);
}

TEST_CASE("error floor without equalization")
{
    const DigitalPipeline noEq(DigitalPipeline::Kind::NoEqualization, defaultTemporalTaps());
    MonteCarloOptions o;
    o.threads = 1;
    const BerPoint a = estimateBer(noEq, 60.0, o, 9);
    const BerPoint b = estimateBer(noEq, 80.0, o, 10);
    CHECK(a.ber > 1e-3);
    CHECK(b.ber > 1e-3);
    CHECK(std::max(a.ber, b.ber) < 2.0 * std::min(a.ber, b.ber));
}

TEST_CASE("digital pipelines")
{
    const TemporalTaps c = defaultTemporalTaps();
    CHECK(DigitalPipeline(DigitalPipeline::Kind::Fir, c, 20).label() == "fir:20");
    CHECK(DigitalPipeline(DigitalPipeline::Kind::ZfIir, c).label() == "zf-iir");
    CHECK(DigitalPipeline(DigitalPipeline::Kind::ZfIirNoiseless, c).label() == "zf-iir-noiseless");
    CHECK_THROWS(DigitalPipeline(DigitalPipeline::Kind::ZfIir, TemporalTaps(CVector::Ones(2))));

    // noise-free zero forcing recovers every bit
    const MonteCarloOptions o = fixedBits(50'000);
    CHECK(estimateBer(DigitalPipeline(DigitalPipeline::Kind::ZfIir, c), 300.0, o, 1).bitErrors == 0);
    CHECK(estimateBer(DigitalPipeline(DigitalPipeline::Kind::ZfIirNoiseless, c), 300.0, o, 1).bitErrors == 0);
}

TEST_CASE("CSV output")
{
    BerCurve curve{"fir:4", {{0.5, 0.25, 1280, 320, 0.0237}, {10.0, 0.0, 10'000'000, 0, 0.0}}};
    CHECK(curveToCsv(curve) == "label,snr_db,ber,bits,errors,ci\n"
                               "fir:4,0.5,0.25,1280,320,0.023699999999999999\n"
                               "fir:4,10,0,10000000,0,0\n");
}

TEST_CASE("SNR at a target BER")
{
    BerCurve c{"x", {{0.0, 1e-1, 1000, 100, 0}, {10.0, 1e-3, 100000, 100, 0}, {20.0, 1e-5, 10000000, 100, 0}}};
    CHECK(*snrAtBer(c, 1e-2) == doctest::Approx(5.0));
    CHECK(*snrAtBer(c, 1e-3) == doctest::Approx(10.0));
    CHECK(*snrAtBer(c, 1e-4) == doctest::Approx(15.0));
    CHECK(*snrAtBer(c, 0.5) == doctest::Approx(0.0));
    CHECK_FALSE(snrAtBer(c, 1e-6).has_value());

    // a zero-error point counts as half an error
    BerCurve z{"z", {{0.0, 1e-2, 10000, 100, 0}, {10.0, 0.0, 1000000, 0, 0}}};
    CHECK(*snrAtBer(z, 1e-3) == doctest::Approx(10.0 * 1.0 / (std::log10(2e6) - 2.0)));
}

}
