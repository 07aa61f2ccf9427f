#include "dasis/sis_io.hpp"

#include "dasis/file_io.hpp"

namespace dasis
{

using nlohmann::json;

namespace
{
constexpr const char *kFormat = "dasis-surface";
constexpr int kVersion = 1;
} // namespace

json toJson(const SisConfig &config)
{
    config.validate();
    json layers = json::array();
    for (int l = 1; l <= config.numLayers(); ++l)
    {
        const RVector &p = config.layerPhases(l);
        std::vector<double> phases(p.data(), p.data() + p.size());
        std::vector<int> bits(config.layerBits(l).begin(), config.layerBits(l).end());
        layers.push_back({{"layer", l}, {"phases", phases}, {"delay_bits", bits}});
    }
    return {{"format", kFormat},
            {"version", kVersion},
            {"num_layers", config.numLayers()},
            {"elements_per_layer", config.elementsPerLayer()},
            {"layers", layers}};
}

SisConfig sisConfigFromJson(const json &doc)
{
    require(doc.is_object(), "surface document: expected a JSON object");
    require(doc.value("format", std::string{}) == kFormat, "surface document: missing or wrong \"format\"");
    require(doc.value("version", 0) == kVersion, "surface document: unsupported version");
    const int numLayers = doc.at("num_layers").get<int>();
    const int elements = doc.at("elements_per_layer").get<int>();
    const json &layers = doc.at("layers");
    require(layers.is_array() && static_cast<int>(layers.size()) == numLayers,
            "surface document: \"layers\" must hold num_layers entries");

    SisConfig config = SisConfig::zeros(numLayers, elements);
    for (int l = 1; l <= numLayers; ++l)
    {
        const json &layer = layers.at(static_cast<std::size_t>(l - 1));
        require(layer.value("layer", l) == l, "surface document: layers must be listed innermost first");
        const auto phases = layer.at("phases").get<std::vector<double>>();
        const auto bits = layer.at("delay_bits").get<std::vector<int>>();
        require(static_cast<int>(phases.size()) == elements && static_cast<int>(bits.size()) == elements,
                "surface document: layer " + std::to_string(l) + " has the wrong element count");
        for (int n = 0; n < elements; ++n)
        {
            config.layerPhases(l)(n) = phases[static_cast<std::size_t>(n)];
            const int b = bits[static_cast<std::size_t>(n)];
            require(b == 0 || b == 1, "surface document: delay bits must be 0 or 1");
            config.layerBits(l)[static_cast<std::size_t>(n)] = static_cast<std::uint8_t>(b);
        }
    }
    config.validate();
    return config;
}

std::string serializeSurface(const SurfaceDocument &doc)
{
    json j = toJson(doc.config);
    if (!doc.metadata.empty())
        j["metadata"] = doc.metadata;
    return j.dump(2) + "\n";
}

SurfaceDocument parseSurface(const std::string &text)
{
    const json j = json::parse(text);
    SurfaceDocument doc;
    doc.config = sisConfigFromJson(j);
    if (j.contains("metadata"))
        doc.metadata = j.at("metadata");
    return doc;
}

void saveSurface(const std::filesystem::path &path, const SurfaceDocument &doc)
{
    writeFileAtomic(path, serializeSurface(doc));
}

SurfaceDocument loadSurface(const std::filesystem::path &path)
{
    return parseSurface(readFile(path));
}

} // namespace dasis
