#include "dasis/experiment.hpp"

#include "dasis/file_io.hpp"
#include "dasis/random.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace dasis
{

using nlohmann::json;

// ---------------------------------------------------------------------------
// Pipeline names

PipelineSpec PipelineSpec::parse(const std::string &text)
{
    auto number = [&](const std::string &digits) {
        std::size_t used = 0;
        int value = 0;
        try
        {
            value = std::stoi(digits, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used != digits.size() || digits.empty())
            throw ConfigError("pipeline \"" + text + "\": expected an integer after ':'");
        return value;
    };

    PipelineSpec spec;
    if (text == "da-sis")
        spec.kind = Kind::Surface;
    else if (text.rfind("da-sis:", 0) == 0)
    {
        spec.kind = Kind::Surface;
        spec.elements = number(text.substr(7));
    }
    else if (text == "zf-iir")
        spec.kind = Kind::ZfIir;
    else if (text == "zf-iir-noiseless")
        spec.kind = Kind::ZfIirNoiseless;
    else if (text == "no-eq")
        spec.kind = Kind::NoEqualization;
    else if (text.rfind("fir:", 0) == 0)
    {
        spec.kind = Kind::Fir;
        spec.firTaps = number(text.substr(4));
    }
    else
        throw ConfigError("unknown pipeline \"" + text + "\"");
    return spec;
}

std::string PipelineSpec::label() const
{
    switch (kind)
    {
    case Kind::Surface:
        return elements > 0 ? "da-sis:" + std::to_string(elements) : "da-sis";
    case Kind::ZfIir:
        return "zf-iir";
    case Kind::Fir:
        return "fir:" + std::to_string(firTaps);
    case Kind::ZfIirNoiseless:
        return "zf-iir-noiseless";
    case Kind::NoEqualization:
        return "no-eq";
    }
    return "unknown";
}

bool PipelineSpec::needsStableInverse() const
{
    return kind == Kind::ZfIir || kind == Kind::Fir || kind == Kind::ZfIirNoiseless;
}

// ---------------------------------------------------------------------------
// Config document

ExperimentConfig defaultExperimentConfig()
{
    ExperimentConfig c;
    c.taps = defaultTemporalTaps().taps;
    for (int snr = -10; snr <= 30; snr += 2)
        c.snrGridDb.push_back(snr);
    for (int snr = 40; snr <= 80; snr += 10)
        c.snrGridDb.push_back(snr);
    c.geometry.elementsPerLayer = 81;
    c.optimizer.seed = 0;
    c.pipelines = {"da-sis:4", "da-sis:81", "zf-iir", "fir:4", "fir:20", "zf-iir-noiseless", "no-eq"};
    return c;
}

namespace
{

// Reads an object's members, remembering which were consumed so leftovers can
// be reported as unknown keys.
class Section
{
public:
    Section(const json &node, std::string path) : node_(node), path_(std::move(path))
    {
        if (!node_.is_object())
            throw ConfigError(path_ + ": expected an object");
    }

    bool has(const std::string &key) const { return node_.contains(key); }

    template <class T>
    T get(const std::string &key, const T &fallback)
    {
        seen_.insert(key);
        if (!node_.contains(key))
            return fallback;
        try
        {
            return node_.at(key).get<T>();
        }
        catch (const json::exception &e)
        {
            throw ConfigError(path_ + "." + key + ": " + e.what());
        }
    }

    const json &child(const std::string &key)
    {
        seen_.insert(key);
        return node_.at(key);
    }

    void finish() const
    {
        for (auto it = node_.begin(); it != node_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(path_ + ": unknown key \"" + it.key() + "\"");
    }

    const std::string &path() const { return path_; }

private:
    const json &node_;
    std::string path_;
    std::set<std::string> seen_;
};

Point3 readPoint(Section &s, const std::string &key, const Point3 &fallback)
{
    const auto v = s.get<std::vector<double>>(key, {fallback.x(), fallback.y(), fallback.z()});
    if (v.size() != 3)
        throw ConfigError(s.path() + "." + key + ": expected [x, y, z]");
    return {v[0], v[1], v[2]};
}

std::vector<double> readGrid(const json &node)
{
    if (node.is_array())
        return node.get<std::vector<double>>();
    Section range(node, "sweep.snr_db");
    const double start = range.get<double>("start", 0.0);
    const double stop = range.get<double>("stop", 0.0);
    const double step = range.get<double>("step", 1.0);
    range.finish();
    if (!(step > 0.0))
        throw ConfigError("sweep.snr_db.step must be > 0");
    std::vector<double> grid;
    for (int i = 0; start + i * step <= stop + 1e-9 * step; ++i)
        grid.push_back(start + i * step);
    return grid;
}

} // namespace

ExperimentConfig parseExperimentConfig(const std::string &text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    ExperimentConfig c = defaultExperimentConfig();
    try
    {
        Section top(doc, "config");
        c.seed = top.get<std::uint64_t>("seed", c.seed);
        c.outputDir = top.get<std::string>("output_dir", c.outputDir.string());

        if (top.has("geometry"))
        {
            Section g(top.child("geometry"), "geometry");
            c.geometry.carrierHz = g.get<double>("frequency_hz", c.geometry.carrierHz);
            c.geometry.numLayers = g.get<int>("num_layers", c.geometry.numLayers);
            c.geometry.elementsPerLayer = g.get<int>("elements_per_layer", c.geometry.elementsPerLayer);
            c.geometry.layerSpacingWavelengths =
                g.get<double>("layer_spacing_wavelengths", c.geometry.layerSpacingWavelengths);
            c.geometry.elementSpacingWavelengths =
                g.get<double>("element_spacing_wavelengths", c.geometry.elementSpacingWavelengths);
            c.geometry.txPosition = readPoint(g, "tx_position", c.geometry.txPosition);
            c.geometry.rxPosition = readPoint(g, "rx_position", c.geometry.rxPosition);
            g.finish();
        }

        if (top.has("channel"))
        {
            Section ch(top.child("channel"), "channel");
            c.kappa = ch.get<double>("kappa", c.kappa);
            c.channelSeed = ch.get<std::uint64_t>("seed", c.channelSeed);
            if (ch.has("taps"))
            {
                const json &taps = ch.child("taps");
                if (!taps.is_array())
                    throw ConfigError("channel.taps: expected an array of {modulus, phase}");
                c.taps.resize(static_cast<Eigen::Index>(taps.size()));
                for (std::size_t i = 0; i < taps.size(); ++i)
                {
                    Section tap(taps[i], "channel.taps[" + std::to_string(i) + "]");
                    const double modulus = tap.get<double>("modulus", 0.0);
                    const double phase = tap.get<double>("phase", 0.0);
                    tap.finish();
                    c.taps(static_cast<Eigen::Index>(i)) = std::polar(1.0, phase) * modulus;
                }
            }
            ch.finish();
        }

        if (top.has("optimizer"))
        {
            Section o(top.child("optimizer"), "optimizer");
            c.optimizer.maskDraws = o.get<int>("mask_draws", c.optimizer.maskDraws);
            c.optimizer.maxIters = o.get<int>("max_iters", c.optimizer.maxIters);
            c.optimizer.learningRate = o.get<double>("learning_rate", c.optimizer.learningRate);
            c.optimizer.lrDecay = o.get<double>("lr_decay", c.optimizer.lrDecay);
            c.optimizer.tolerance = o.get<double>("tolerance", c.optimizer.tolerance);
            c.optimizer.seed = o.get<std::uint64_t>("seed", c.optimizer.seed);
            c.designSnrDb = o.get<double>("design_snr_db", c.designSnrDb);
            o.finish();
        }

        if (top.has("sweep"))
        {
            Section s(top.child("sweep"), "sweep");
            if (s.has("snr_db"))
                c.snrGridDb = readGrid(s.child("snr_db"));
            c.snrDefinition = parseSnrDefinition(s.get<std::string>("snr_definition", toString(c.snrDefinition)));
            c.stop.minErrors = s.get<std::int64_t>("min_errors", c.stop.minErrors);
            c.stop.maxBits = static_cast<std::int64_t>(s.get<double>("max_bits", static_cast<double>(c.stop.maxBits)));
            c.blockLength = s.get<int>("block_length", c.blockLength);
            c.fadingAverage = s.get<bool>("fading_average", c.fadingAverage);
            s.finish();
        }

        if (top.has("pipelines"))
            c.pipelines = top.get<std::vector<std::string>>("pipelines", {});
        top.finish();
    }
    catch (const InvalidArgument &e)
    {
        throw ConfigError(e.what());
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

ExperimentConfig loadExperimentConfig(const std::filesystem::path &path)
{
    std::string text;
    try
    {
        text = readFile(path);
    }
    catch (const std::exception &e)
    {
        throw ConfigError(e.what());
    }
    return parseExperimentConfig(text);
}

json toJson(const ExperimentConfig &c)
{
    json taps = json::array();
    for (Eigen::Index i = 0; i < c.taps.size(); ++i)
        taps.push_back({{"modulus", std::abs(c.taps(i))}, {"phase", std::arg(c.taps(i))}});
    const auto point = [](const Point3 &p) { return std::vector<double>{p.x(), p.y(), p.z()}; };
    return {{"seed", c.seed},
            {"output_dir", c.outputDir.string()},
            {"geometry",
             {{"frequency_hz", c.geometry.carrierHz},
              {"num_layers", c.geometry.numLayers},
              {"elements_per_layer", c.geometry.elementsPerLayer},
              {"layer_spacing_wavelengths", c.geometry.layerSpacingWavelengths},
              {"element_spacing_wavelengths", c.geometry.elementSpacingWavelengths},
              {"tx_position", point(c.geometry.txPosition)},
              {"rx_position", point(c.geometry.rxPosition)}}},
            {"channel", {{"kappa", c.kappa}, {"seed", c.channelSeed}, {"taps", taps}}},
            {"optimizer",
             {{"mask_draws", c.optimizer.maskDraws},
              {"max_iters", c.optimizer.maxIters},
              {"learning_rate", c.optimizer.learningRate},
              {"lr_decay", c.optimizer.lrDecay},
              {"tolerance", c.optimizer.tolerance},
              {"seed", c.optimizer.seed},
              {"design_snr_db", c.designSnrDb}}},
            {"sweep",
             {{"snr_db", c.snrGridDb},
              {"snr_definition", toString(c.snrDefinition)},
              {"min_errors", c.stop.minErrors},
              {"max_bits", c.stop.maxBits},
              {"block_length", c.blockLength},
              {"fading_average", c.fadingAverage}}},
            {"pipelines", c.pipelines}};
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::ok() const
{
    for (const auto &c : checks)
        if (!c.pass)
            return false;
    return true;
}

json ValidationReport::toJson() const
{
    json list = json::array();
    for (const auto &c : checks)
        list.push_back({{"check", c.name}, {"pass", c.pass}, {"message", c.message}});
    return {{"ok", ok()}, {"checks", list}};
}

namespace
{

bool isPerfectSquare(int n)
{
    if (n < 1)
        return false;
    const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return r * r == n;
}

} // namespace

ValidationReport validateConfig(const ExperimentConfig &c)
{
    ValidationReport report;
    auto check = [&](std::string name, bool pass, std::string message) {
        report.checks.push_back({std::move(name), pass, pass ? "ok" : std::move(message)});
    };

    check("geometry.frequency", c.geometry.carrierHz > 0.0, "frequency must be > 0");
    check("geometry.num_layers", c.geometry.numLayers >= 1, "num_layers must be >= 1");
    check("geometry.spacing", c.geometry.layerSpacingWavelengths > 0.0 && c.geometry.elementSpacingWavelengths > 0.0,
          "layer and element spacing must be > 0");
    check("geometry.positions", (c.geometry.rxPosition - c.geometry.txPosition).norm() > 0.0,
          "transmitter and receiver coincide");
    check("channel.kappa", c.kappa >= 0.0, "kappa must be >= 0");

    const bool tapsUsable = c.taps.size() >= 1 && c.taps(0) != Complex(0.0, 0.0);
    check("channel.taps", tapsUsable, "need at least one tap and a nonzero leading tap");

    std::string optimizerMessage;
    try
    {
        c.optimizer.validate();
    }
    catch (const std::exception &e)
    {
        optimizerMessage = e.what();
    }
    check("optimizer", optimizerMessage.empty(), optimizerMessage);

    bool ascending = !c.snrGridDb.empty();
    for (std::size_t i = 1; i < c.snrGridDb.size(); ++i)
        ascending = ascending && c.snrGridDb[i] > c.snrGridDb[i - 1];
    check("sweep.snr_db", ascending, "SNR grid must be non-empty and strictly ascending");
    check("sweep.block_length", c.blockLength >= 1, "block_length must be >= 1");
    check("sweep.stop_rule", c.stop.minErrors >= 1 && c.stop.maxBits >= c.blockLength,
          "min_errors must be >= 1 and max_bits >= block_length");

    check("pipelines", !c.pipelines.empty(), "no pipelines requested");
    std::set<std::string> labels;
    for (const auto &name : c.pipelines)
    {
        PipelineSpec spec;
        try
        {
            spec = PipelineSpec::parse(name);
        }
        catch (const std::exception &e)
        {
            check("pipeline " + name, false, e.what());
            continue;
        }
        const std::string label = spec.isSurface() ? "da-sis:" + std::to_string(surfaceElements(c, spec)) : spec.label();
        check("pipeline " + name + " unique", labels.insert(label).second, "duplicate curve " + label);
        if (spec.isSurface())
        {
            const int n = surfaceElements(c, spec);
            check("pipeline " + name + " elements", isPerfectSquare(n),
                  "N = " + std::to_string(n) + " is not a perfect square");
        }
        if (spec.kind == PipelineSpec::Kind::Fir)
            check("pipeline " + name + " taps", spec.firTaps >= 1, "FIR length must be >= 1");
        if (spec.needsStableInverse())
            check("pipeline " + name + " stable inverse", tapsUsable && hasStableInverse(TemporalTaps(c.taps)),
                  "channel taps have a zero on or outside the unit circle; the zero-forcing inverse is unstable");
    }
    return report;
}

ValidationReport validateConfigFile(const std::filesystem::path &path)
{
    try
    {
        return validateConfig(loadExperimentConfig(path));
    }
    catch (const std::exception &e)
    {
        ValidationReport report;
        report.checks.push_back({"parse", false, e.what()});
        return report;
    }
}

// ---------------------------------------------------------------------------
// Building blocks

int surfaceElements(const ExperimentConfig &config, const PipelineSpec &spec)
{
    return spec.elements > 0 ? spec.elements : config.geometry.elementsPerLayer;
}

SurfaceSetup makeSurfaceSetup(const ExperimentConfig &config, int elements)
{
    GeometryOptions options = config.geometry;
    options.elementsPerLayer = elements;
    SurfaceSetup s;
    s.geometry = makeGeometry(options);
    s.model = makeSurfaceModel(s.geometry);
    // Same stream for every N, so surfaces of different size see matched draws.
    Rng rng = makeRng(config.seed, {hashLabel("channel"), config.channelSeed});
    s.channel = buildVectorChannel(ricianSpatialChannel(s.geometry, config.kappa, rng), TemporalTaps(config.taps),
                                   config.kappa);
    return s;
}

double designNoiseVariance(const ExperimentConfig &config)
{
    return std::pow(10.0, -config.designSnrDb / 10.0);
}

std::uint64_t optimizerSeed(const ExperimentConfig &config, int elements)
{
    return deriveSeed(config.seed, {hashLabel("optimizer"), config.optimizer.seed, static_cast<std::uint64_t>(elements)});
}

std::uint64_t curveSeed(const ExperimentConfig &config, const std::string &label)
{
    return deriveSeed(config.seed, {hashLabel("sweep"), hashLabel(label)});
}

MonteCarloOptions monteCarloOptions(const ExperimentConfig &config, int threads)
{
    MonteCarloOptions mc;
    mc.stop = config.stop;
    mc.blockLength = config.blockLength;
    mc.snrDefinition = config.snrDefinition;
    mc.threads = threads;
    return mc;
}

std::unique_ptr<Pipeline> makeDigitalPipeline(const ExperimentConfig &config, const PipelineSpec &spec)
{
    const TemporalTaps taps(config.taps);
    switch (spec.kind)
    {
    case PipelineSpec::Kind::ZfIir:
        return std::make_unique<DigitalPipeline>(DigitalPipeline::Kind::ZfIir, taps);
    case PipelineSpec::Kind::Fir:
        return std::make_unique<DigitalPipeline>(DigitalPipeline::Kind::Fir, taps, spec.firTaps);
    case PipelineSpec::Kind::ZfIirNoiseless:
        return std::make_unique<DigitalPipeline>(DigitalPipeline::Kind::ZfIirNoiseless, taps);
    case PipelineSpec::Kind::NoEqualization:
        return std::make_unique<DigitalPipeline>(DigitalPipeline::Kind::NoEqualization, taps);
    case PipelineSpec::Kind::Surface:
        break;
    }
    throw InvalidArgument("makeDigitalPipeline: " + spec.label() + " is not a digital pipeline");
}

std::unique_ptr<Pipeline> makeSurfacePipeline(const ExperimentConfig &config, const SurfaceSetup &setup,
                                              const SisConfig &surface, const std::string &label)
{
    surface.validateAgainst(setup.geometry);
    std::optional<SurfacePipeline::Fading> fading;
    if (config.fadingAverage)
        fading = SurfacePipeline::Fading{setup.geometry, config.kappa};
    return std::make_unique<SurfacePipeline>(surface, setup.model, setup.channel, label,
                                             SurfacePipeline::Evaluation::EffectiveResponse, fading);
}

SurfaceDocument optimizeSurface(const ExperimentConfig &config, const PipelineSpec &spec, int threads)
{
    const int elements = surfaceElements(config, spec);
    const SurfaceSetup setup = makeSurfaceSetup(config, elements);
    OptimizerHyperparams hyper = config.optimizer;
    hyper.seed = optimizerSeed(config, elements);
    const double noise = designNoiseVariance(config);
    const OptimizationResult result = hybridOptimize(setup.model, setup.channel, noise, hyper, threads);

    SurfaceDocument doc;
    doc.config = result.bestConfig;
    doc.metadata = {{"label", "da-sis:" + std::to_string(elements)},
                    {"elements_per_layer", elements},
                    {"loss", result.bestLoss},
                    {"draws", result.draws},
                    {"loss_trace", result.lossTrace},
                    {"seed", hyper.seed},
                    {"root_seed", config.seed},
                    {"design_snr_db", config.designSnrDb},
                    {"design_noise_variance", noise},
                    {"hyperparams",
                     {{"mask_draws", hyper.maskDraws},
                      {"max_iters", hyper.maxIters},
                      {"learning_rate", hyper.learningRate},
                      {"lr_decay", hyper.lrDecay},
                      {"tolerance", hyper.tolerance}}}};
    return doc;
}

BerCurve sweepSurface(const ExperimentConfig &config, const SurfaceDocument &surface, int threads)
{
    const int elements = surface.config.elementsPerLayer();
    const std::string label = surface.metadata.value("label", "da-sis:" + std::to_string(elements));
    const SurfaceSetup setup = makeSurfaceSetup(config, elements);
    const auto pipeline = makeSurfacePipeline(config, setup, surface.config, label);
    return snrSweep(*pipeline, config.snrGridDb, monteCarloOptions(config, threads), curveSeed(config, label));
}

std::string fileStem(const std::string &label)
{
    std::string stem = label;
    for (char &ch : stem)
        if (ch == ':' || ch == '/' || ch == ' ')
            ch = '_';
    return stem;
}

std::string plotScript(const std::vector<std::string> &csvFiles, SnrDefinition definition)
{
    std::ostringstream py;
    py << "#!/usr/bin/env python3\n"
       << "# BER versus SNR for every curve of one run.\n"
       << "import csv, os, sys\n"
       << "import matplotlib\n"
       << "matplotlib.use('Agg')\n"
       << "import matplotlib.pyplot as plt\n\n"
       << "HERE = os.path.dirname(os.path.abspath(__file__))\n"
       << "FILES = [\n";
    for (const auto &f : csvFiles)
        py << "    '" << f << "',\n";
    py << "]\n\n"
       << "fig, ax = plt.subplots(figsize=(7, 5))\n"
       << "for name in FILES:\n"
       << "    with open(os.path.join(HERE, name)) as fh:\n"
       << "        rows = list(csv.DictReader(fh))\n"
       << "    pts = [(float(r['snr_db']), float(r['ber'])) for r in rows if float(r['ber']) > 0]\n"
       << "    if not pts:\n"
       << "        continue\n"
       << "    ax.semilogy([p[0] for p in pts], [p[1] for p in pts], marker='o', label=rows[0]['label'])\n"
       << "ax.set_xlabel('" << (definition == SnrDefinition::Received ? "Received" : "Transmit") << " SNR [dB]')\n"
       << "ax.set_ylabel('BER')\n"
       << "ax.grid(True, which='both', alpha=0.3)\n"
       << "ax.legend()\n"
       << "out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, 'ber.png')\n"
       << "fig.savefig(out, dpi=150, bbox_inches='tight')\n"
       << "print(out)\n";
    return py.str();
}

// ---------------------------------------------------------------------------
// Runs

void applyOverrides(ExperimentConfig &config, const RunOptions &options)
{
    if (options.seed)
        config.seed = *options.seed;
    if (options.outputDir)
        config.outputDir = *options.outputDir;
    if (options.snrDefinition)
        config.snrDefinition = *options.snrDefinition;
}

namespace
{

void requireValid(const ExperimentConfig &config)
{
    const ValidationReport report = validateConfig(config);
    if (report.ok())
        return;
    std::string message = "invalid config:";
    for (const auto &c : report.checks)
        if (!c.pass)
            message += "\n  " + c.name + ": " + c.message;
    throw ConfigError(message);
}

} // namespace

std::vector<std::filesystem::path> runExperiment(ExperimentConfig config, const RunOptions &options, RunMode mode)
{
    applyOverrides(config, options);
    requireValid(config);

    struct Artifact
    {
        std::filesystem::path path;
        std::string content;
    };
    std::vector<Artifact> artifacts;
    std::vector<std::string> csvFiles;
    const MonteCarloOptions mc = monteCarloOptions(config, options.threads);

    // Everything is computed before the first write so a failure leaves no
    // artifacts from this run behind.
    for (const auto &name : config.pipelines)
    {
        const PipelineSpec spec = PipelineSpec::parse(name);
        if (spec.isSurface())
        {
            if (mode == RunMode::DigitalOnly)
                continue;
            const SurfaceDocument doc = optimizeSurface(config, spec, options.threads);
            const std::string label = doc.metadata.at("label").get<std::string>();
            artifacts.push_back({config.outputDir / (fileStem(label) + ".surface.json"), serializeSurface(doc)});
            if (mode == RunMode::SurfacesOnly)
                continue;
            const BerCurve curve = sweepSurface(config, doc, options.threads);
            csvFiles.push_back(fileStem(label) + ".csv");
            artifacts.push_back({config.outputDir / csvFiles.back(), curveToCsv(curve)});
        }
        else
        {
            if (mode == RunMode::SurfacesOnly)
                continue;
            const auto pipeline = makeDigitalPipeline(config, spec);
            const BerCurve curve = snrSweep(*pipeline, config.snrGridDb, mc, curveSeed(config, pipeline->label()));
            csvFiles.push_back(fileStem(pipeline->label()) + ".csv");
            artifacts.push_back({config.outputDir / csvFiles.back(), curveToCsv(curve)});
        }
    }
    if (!csvFiles.empty())
        artifacts.push_back({config.outputDir / "plot_ber.py", plotScript(csvFiles, config.snrDefinition)});

    std::vector<std::filesystem::path> written;
    for (const auto &a : artifacts)
    {
        writeFileAtomic(a.path, a.content);
        written.push_back(a.path);
    }
    return written;
}

std::filesystem::path sweepSurfaceFile(ExperimentConfig config, const std::filesystem::path &surfacePath,
                                       const RunOptions &options)
{
    applyOverrides(config, options);
    requireValid(config);
    const SurfaceDocument doc = loadSurface(surfacePath);
    const BerCurve curve = sweepSurface(config, doc, options.threads);
    const std::filesystem::path out = config.outputDir / (fileStem(curve.label) + ".csv");
    writeCurveCsv(out, curve);
    return out;
}

} // namespace dasis
