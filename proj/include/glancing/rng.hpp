#pragma once

// Philox4x32-10 (Salmon et al., SC'11).  Every draw is a pure function of
// (key, counter), so a trial's random numbers do not depend on which thread
// runs it or in what order.

#include <array>
#include <cmath>
#include <cstdint>

namespace glancing {

class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block bijection(Block c, Key k) {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                k[0] += 0x9E3779B9u;
                k[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * c[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * c[2];
            c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        }
        return c;
    }
};

// Stream of doubles for one (seed, stream id) pair.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

    std::uint64_t next_u64() {
        if (have_ == 0) {
            const Philox4x32::Block c{static_cast<std::uint32_t>(ctr_), static_cast<std::uint32_t>(ctr_ >> 32),
                                      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
            buf_ = Philox4x32::bijection(c, key_);
            ++ctr_;
            have_ = 2;
        }
        const int i = 2 - have_;
        --have_;
        return (static_cast<std::uint64_t>(buf_[2 * i + 1]) << 32) | buf_[2 * i];
    }
    // uniform on [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    // standard normal by Box-Muller (uses two uniforms per call, no caching)
    double normal() {
        const double u1 = 1.0 - uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

private:
    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t ctr_ = 0;
    Philox4x32::Block buf_{};
    int have_ = 0;
};

}  // namespace glancing
