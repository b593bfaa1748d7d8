#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bnpool {

// Reproducible random source. A stream is identified by a 64-bit key;
// substreams are derived with a splitmix64 hash, so any (seed, path of split
// indices) pair names the same sequence on every platform. Raw bits come from
// std::mt19937_64 (fully specified by the standard); uniform doubles take the
// top 53 bits, so no implementation-defined distribution code is involved.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : key_(seed), engine_(seed) {}

    std::uint64_t key() const { return key_; }

    // Independent child stream; deterministic in (key, stream).
    SeededRng split(std::uint64_t stream) const {
        return SeededRng(mix(key_, stream));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform index in [0, n); n > 0.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(next_unit() * static_cast<double>(n)) % n;
    }

    // Draws from a probability row by inverse CDF; falls back to the last
    // positive entry when rounding leaves residual mass.
    int next_categorical(std::span<const double> row) {
        const double u = next_unit();
        double cum = 0.0;
        int last_positive = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] > 0.0) last_positive = static_cast<int>(i);
            cum += row[i];
            if (u < cum) return static_cast<int>(i);
        }
        return last_positive;
    }

    // Fisher-Yates permutation of 0..n-1.
    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            const auto j = next_index(static_cast<std::size_t>(i) + 1);
            std::swap(p[static_cast<std::size_t>(i)], p[j]);
        }
        return p;
    }

    static std::uint64_t mix(std::uint64_t key, std::uint64_t stream) {
        std::uint64_t z = key + 0x9E3779B97F4A7C15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
};

} // namespace bnpool
