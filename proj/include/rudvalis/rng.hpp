// Deterministic RNG streams. Each (master seed, stream index) pair yields an
// independent mt19937_64 stream; the seeding path goes through splitmix64 so
// nearby indices do not produce correlated states. Deck shuffling uses a
// hand-rolled Fisher-Yates on top of next_below() because std::shuffle and
// std::uniform_int_distribution are implementation-defined and would break
// byte-identical reproducibility across standard libraries.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rudvalis {

inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0) {
        std::uint64_t s = master_seed ^ (0xA0761D6478BD642Full * (stream_index + 1));
        splitmix64(s);
        const std::uint64_t a = splitmix64(s);
        const std::uint64_t b = splitmix64(s);
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        eng_.seed(seq);
    }

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0,1) with 53 random bits
    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in {0,...,bound-1}, rejection-free bias is < 2^-32 for bound <= 2^32;
    // use the standard multiply-shift reduction on fresh 64-bit draws
    std::uint32_t next_below(std::uint32_t bound) {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(eng_()) * bound) >> 64);
    }

private:
    std::mt19937_64 eng_;
};

// Fisher-Yates; returns a uniform permutation of {1,...,n} (order[i] = card at slot i)
inline std::vector<int> random_permutation(int n, RngStream& rng) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i + 1;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(i + 1)));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

} // namespace rudvalis
