#pragma once

#include <cstdint>
#include <random>

namespace feo {

// Uniform double in [0,1) from the top 53 bits of the generator output.
// std::uniform_real_distribution is implementation-defined; this mapping is
// reproducible across standard libraries.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

inline int uniform_int(std::mt19937_64& gen, int lo, int hi) {
    return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
}

} // namespace feo
