#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace v2i {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A block is
// a pure function of (counter, key), so any partition of the trial space
// across threads reproduces the exact same draws.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }
};

// Stream of doubles for one (seed, trial) pair. Each Philox block yields two
// uniforms in (0, 1]; the block index inside the trial is the third counter
// word, so a trial may consume any number of draws without touching its
// neighbours' streams.
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          base_{static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)} {}

    double next_u01() {
        if (have_ == 0) refill();
        return buffer_[--have_];
    }

    double next_exponential(double rate) { return -std::log(next_u01()) / rate; }

  private:
    void refill() {
        const auto out = Philox4x32::block({base_[0], base_[1], block_index_++, 0}, key_);
        buffer_[1] = to_u01(out[0], out[1]);
        buffer_[0] = to_u01(out[2], out[3]);
        have_ = 2;
    }

    static double to_u01(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t r = (std::uint64_t{hi} << 32) | lo;
        return static_cast<double>((r >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> base_;
    std::uint32_t block_index_ = 0;
    double buffer_[2] = {0.0, 0.0};
    int have_ = 0;
};

}  // namespace v2i
