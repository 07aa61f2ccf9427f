#pragma once

#include "dasis/sis.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace dasis
{

// Surface document: layer count, element count, and per layer (innermost first)
// the phase array in radians and the delay-bit array. An optional "metadata"
// object carries optimizer results.
//
//   {"format": "dasis-surface", "version": 1, "num_layers": 2,
//    "elements_per_layer": 4,
//    "layers": [{"layer": 1, "phases": [...], "delay_bits": [...]}, ...],
//    "metadata": {...}}
struct SurfaceDocument
{
    SisConfig config;
    nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json toJson(const SisConfig &config);
SisConfig sisConfigFromJson(const nlohmann::json &doc);

std::string serializeSurface(const SurfaceDocument &doc);
SurfaceDocument parseSurface(const std::string &text);

void saveSurface(const std::filesystem::path &path, const SurfaceDocument &doc);
SurfaceDocument loadSurface(const std::filesystem::path &path);

} // namespace dasis
