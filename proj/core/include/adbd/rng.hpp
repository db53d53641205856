#pragma once

#include <array>
#include <cstdint>

namespace adbd {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Stateless: the output is a pure function of key and
// counter, so draws can be addressed directly instead of sequenced.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

// Counter-based stream keyed by (seed, stream_a, stream_b). Two streams with
// different keys never share draws, and a stream's n-th draw does not depend
// on how many draws other streams made. Typical keys are
// (seed, sample_index, timestep).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_a = 0, std::uint64_t stream_b = 0) noexcept;

    std::uint32_t next_u32() noexcept;
    std::uint64_t next_u64() noexcept;
    // Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    // Uniform in (0, 1], safe for log().
    double uniform_open0() noexcept;
    double normal() noexcept;
    // Uniform integer in [0, n) by rejection; n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept;

    // Derive an independent child stream; used for hierarchical keys.
    CounterRng split(std::uint64_t tag) const noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_{};
    std::uint64_t stream_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int cursor_ = 4;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

// SplitMix64 finalizer, used to fold several integers into one key.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace adbd
