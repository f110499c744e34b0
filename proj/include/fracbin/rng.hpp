#pragma once

#include <cstdint>

namespace fracbin {

// Identifies one reproducible random stream: identical (seed, stream)
// yields bit-identical draws regardless of scheduling or thread count.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27; z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

}  // namespace detail

// Counter-based generator: output_i = mix(key + i * phi). There is no
// hidden state beyond the counter, so any position in the stream can be
// addressed directly and streams never interleave.
class CounterRng {
public:
    explicit CounterRng(RngSeed s)
        : key_(detail::mix64(detail::mix64(s.seed) ^
                             (s.stream + 0xD1B54A32D192ED03ull))) {}

    std::uint64_t next_u64() {
        const std::uint64_t out = detail::mix64(key_ + ctr_ * 0x9E3779B97F4A7C15ull);
        ++ctr_;
        return out;
    }

    // Uniform draw strictly inside (0,1); safe under log and tan.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    void jump_to(std::uint64_t counter) { ctr_ = counter; }
    std::uint64_t counter() const { return ctr_; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace fracbin
