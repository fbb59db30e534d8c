#pragma once

#include <cmath>
#include <cstdint>

#include "yma/quaternion.hpp"

namespace yma {

// Counter-based generator: every draw is a hash of (seed, stream, counter), so any
// sub-computation can be reproduced without replaying earlier draws.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    static std::uint64_t mix(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() { return mix(mix(seed_ ^ mix(stream_ + 0x632be59bd9b4e019ULL)) + counter_++); }
    // [0, 1)
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double normal()
    {
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    ImQ imq(double scale = 1.0) { return {scale * normal(), scale * normal(), scale * normal()}; }
    Quat quat(double scale = 1.0) { return {scale * normal(), scale * normal(), scale * normal(), scale * normal()}; }
    Quat unit_quat()
    {
        Quat q = quat();
        return q * (1.0 / norm(q));
    }
    Rng split(std::uint64_t sub) const { return Rng(mix(seed_ + sub), mix(stream_ ^ (sub * 0x9e3779b97f4a7c15ULL))); }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_, stream_, counter_ = 0;
};

} // namespace yma
