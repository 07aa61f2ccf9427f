#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dasis
{

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Point3 = Eigen::Vector3d;

// One bit per element; 0 = no delay, 1 = one symbol of delay.
using DelayBits = std::vector<std::uint8_t>;

// N x T complex samples, one row per surface element, one column per symbol slot.
using SignalBlock = CMatrix;

using Rng = std::mt19937_64;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A bit-1 row would push a nonzero sample past the last symbol slot.
class GuardBudgetError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// The causal inverse of the channel taps is not stable.
class UnstableInverseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// The two largest effective-response taps are equal in magnitude.
class TiedDominantTapError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string &message)
{
    if (!condition)
        throw InvalidArgument(message);
}

} // namespace dasis
