#pragma once

#include <cstdint>
#include <vector>

namespace digame {

// splitmix64 finalizer. Used both to seed the main generator and to derive
// per-run seeds from (base, n, b, rep) tuples so that results do not depend
// on scheduling.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a,
                              std::uint64_t b, std::uint64_t c) noexcept {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

// xoshiro256** with splitmix64 seeding. We avoid std:: distributions on
// purpose: their output is implementation-defined, and reports must be
// byte-identical for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) noexcept {
        std::uint64_t x = seed;
        for (auto& w : s_) {
            x = splitmix64(x);
            w = x;
        }
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, bound). Lemire reduction with rejection; unbiased.
    std::uint64_t below(std::uint64_t bound) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t t = (0 - bound) % bound;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::int32_t below_i(std::int64_t bound) noexcept {
        return static_cast<std::int32_t>(below(static_cast<std::uint64_t>(bound)));
    }

    // Uniform double in [0, 1).
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) noexcept {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // Partial Fisher-Yates: after the call, v[0..k) is a uniform k-subset of
    // the original contents, in uniform random order.
    template <typename T>
    void partial_shuffle(std::vector<T>& v, std::size_t k) noexcept {
        if (k > v.size()) k = v.size();
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + below(v.size() - i);
            std::swap(v[i], v[j]);
        }
    }

    // Uniform k-subset of {0, ..., m-1}.
    std::vector<std::int32_t> k_subset(std::int32_t m, std::int32_t k) {
        std::vector<std::int32_t> all(static_cast<std::size_t>(m));
        for (std::int32_t i = 0; i < m; ++i) all[static_cast<std::size_t>(i)] = i;
        partial_shuffle(all, static_cast<std::size_t>(k));
        all.resize(static_cast<std::size_t>(k));
        return all;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4]{};
};

}  // namespace digame
