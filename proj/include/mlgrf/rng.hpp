#ifndef MLGRF_RNG_HPP
#define MLGRF_RNG_HPP

#include <array>
#include <cstdint>

#include "mlgrf/common.hpp"

namespace mlgrf
{

/**
   Address of an independent random stream.

   Draws are a pure function of the key: the same key always yields the
   same variates, no matter how calls are interleaved across threads, and
   distinct keys yield statistically independent streams. The campaign
   seed and sample index form the cipher key of a counter-based generator;
   level and draw indices select disjoint counter blocks.
*/
struct StreamKey
{
    std::uint64_t seed = 0;
    std::uint64_t sample = 0;
    std::uint64_t level = 0;
    std::uint64_t draw = 0;
};

/// One block of the Philox-4x64 keystream (10 rounds).
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

/// Percent point function of the standard normal (Wichura's algorithm),
/// accurate to near machine precision over (0,1).
double inverse_normal_cdf(double p);

/// n i.i.d. standard normal variates, deterministic in the key.
Vector draw_standard_normal(const StreamKey& key, std::size_t n);

/// n i.i.d. uniforms on the open interval (0,1), deterministic in the key.
Vector draw_uniform(const StreamKey& key, std::size_t n);

} // namespace mlgrf

#endif
