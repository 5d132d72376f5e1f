// Counter-based deterministic random stream: draw i of a given seed is the
// same value on every platform, thread count and call order.
#pragma once

#include <cstdint>

namespace gradwave {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(detail::splitmix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    std::uint64_t word(std::uint64_t index) const {
        return detail::splitmix64(key_ ^ detail::splitmix64(index * 0x9e3779b97f4a7c15ULL + key_));
    }

    // Uniform in [0, 1), 53 mantissa bits.
    double uniform01(std::uint64_t index) const {
        return static_cast<double>(word(index) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
};

}  // namespace gradwave
