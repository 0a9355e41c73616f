#pragma once

#include <array>
#include <cstdint>

namespace maxent {

/**
 * Philox4x32-10 counter-based generator.
 *
 * Every draw is a pure function of (key, counter), so a stream of random
 * numbers can be addressed directly by (seed, episode, step, purpose) without
 * carrying generator state between trajectories.
 */
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * counter[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * counter[2];
            counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0], static_cast<std::uint32_t>(p1),
                       static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return counter;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// Purposes that get disjoint random streams within one (episode, step) cell.
enum class Stream : std::uint32_t { Environment = 0, Action = 1, Component = 2 };

/// Uniform doubles in [0, 1) addressed by (seed, episode, step, stream).
class KeyedUniform {
public:
    explicit KeyedUniform(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    double operator()(std::uint64_t episode, std::uint32_t step, Stream stream) const {
        const auto out = Philox4x32::generate({static_cast<std::uint32_t>(episode),
                                               static_cast<std::uint32_t>(episode >> 32), step,
                                               static_cast<std::uint32_t>(stream)},
                                              key_);
        const std::uint64_t bits = (std::uint64_t{out[0]} << 32) | out[1];
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

private:
    Philox4x32::Key key_;
};

} // namespace maxent
