#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace shadowmt {

/// Philox4x32-10 block function (Salmon et al. counter-based generator).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

/// Independent stream for one (seed, stream index) pair. Draw k of the stream
/// is the Philox block at counter (k, stream), key seed, so any subset of
/// streams can be generated in any order with identical results.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)), stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    /// Uniform in the open interval (0, 1).
    double uniform() {
        const auto b = next_block();
        return to_unit(b[0], b[1]);
    }

    /// Standard normal; Box-Muller on 32-bit uniforms, four per block.
    double normal() {
        if (spare_count_ == 0) {
            const auto b = next_block();
            for (int i = 0; i < 4; i += 2) {
                const double u1 = (b[i] + 0.5) * 0x1.0p-32, u2 = (b[i + 1] + 0.5) * 0x1.0p-32;
                const double r = std::sqrt(-2.0 * std::log(u1));
                const double t = 2.0 * std::numbers::pi * u2;
                spare_[i] = r * std::cos(t);
                spare_[i + 1] = r * std::sin(t);
            }
            spare_count_ = 4;
        }
        return spare_[4 - spare_count_--];
    }

private:
    std::array<std::uint32_t, 4> next_block() {
        const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(counter_),
                                               static_cast<std::uint32_t>(counter_ >> 32), stream_lo_, stream_hi_};
        ++counter_;
        return philox4x32(ctr, key_);
    }

    static double to_unit(std::uint32_t a, std::uint32_t b) {
        const std::uint64_t bits = ((std::uint64_t{a} << 32) | b) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t counter_ = 0;
    std::array<double, 4> spare_{};
    int spare_count_ = 0;
};

} // namespace shadowmt
