#pragma once

#include "thzcoh/materials.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace thzcoh::fixture {

inline MaterialParams ruby_rt() { return find_material("ruby-rt"); }
inline MaterialParams ruby_lt() { return find_material("ruby-lt"); }

/// 1 cm long, 1 cm x 0.1 cm emitting face, pumped through 1 cm x 0.1 cm over 1 cm.
inline CrystalGeometry rt_geometry() { return {1e-2, 1e-5, 1e-5, 1e-2, std::nullopt}; }

/// 1 cm long, 0.1 cm x 0.05 cm emitting face, pumped through 1 cm x 0.1 cm over 0.05 cm.
inline CrystalGeometry lt_geometry() { return {1e-2, 5e-7, 1e-5, 5e-4, std::nullopt}; }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

/// Seeded uniform draws for property tests.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

private:
    std::mt19937_64 engine_;
};

} // namespace thzcoh::fixture
