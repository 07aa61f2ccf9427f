#pragma once

#include "dasis/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace dasis
{

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mixSeed(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for stream (root, i0, i1, ...). Order of the indices matters.
constexpr std::uint64_t deriveSeed(std::uint64_t root, std::initializer_list<std::uint64_t> indices)
{
    std::uint64_t s = mixSeed(root);
    for (std::uint64_t i : indices)
        s = mixSeed(s ^ mixSeed(i + 0x632BE59BD9B4E019ull));
    return s;
}

// FNV-1a; stable across platforms, used to key streams by curve label.
constexpr std::uint64_t hashLabel(std::string_view text)
{
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : text)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

inline Rng makeRng(std::uint64_t root, std::initializer_list<std::uint64_t> indices = {})
{
    return Rng(deriveSeed(root, indices));
}

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline Complex complexGaussian(Rng &rng, double variance)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

} // namespace dasis
