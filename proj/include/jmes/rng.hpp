#pragma once

// Counter-based generator: Philox4x64 with 10 rounds.  A (seed, stream)
// key and a block counter map to four 64-bit words; nothing is stateful,
// so any sample index can be generated independently and in parallel.
// Constants match the reference implementation (multipliers
// 0xD2E7470EE14C6C93 / 0xCA5A826395121157, Weyl keys 0x9E3779B97F4A7C15 /
// 0xBB67AE8584CAA73B), verified against an independent implementation.

#include <array>
#include <cstdint>

namespace jmes::rng {

inline constexpr const char* kGeneratorName = "philox4x64-10";

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

// Map a 64-bit word to the open interval (0,1): 53 mantissa bits, offset
// half a step so 0 and 1 are unreachable.
inline double to_open_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

// A stream of uniform pairs indexed by sample number.  Pair 2k and 2k+1
// share one Philox block (words 0-1 and 2-3).
class UniformPairStream {
  public:
    UniformPairStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{seed, stream} {}

    // (u1, u2) for the i-th sample, reproducible for any evaluation order.
    std::array<double, 2> pair(std::uint64_t i) const {
        const auto block = philox4x64({i >> 1, 0, 0, 0}, key_);
        const unsigned off = static_cast<unsigned>(i & 1) * 2;
        return {to_open_unit(block[off]), to_open_unit(block[off + 1])};
    }

  private:
    std::array<std::uint64_t, 2> key_;
};

}  // namespace jmes::rng
