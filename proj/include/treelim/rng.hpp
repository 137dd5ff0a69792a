#pragma once
// Deterministic randomness. All sampling goes through this wrapper so that a
// run is reproducible from its 64-bit seed alone; replicate sub-seeds are
// derived by hashing (seed, n, replicate) so parallel and serial execution of
// an experiment grid agree.

#include <cstdint>
#include <random>
#include <vector>

#include "treelim/errors.hpp"

namespace treelim {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(mix64(seed) ^ a) ^ b);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // uniform on [0, n), unbiased (rejects the short tail of 2^64 / n)
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) throw Error("Rng::bounded: empty range");
        const std::uint64_t min = (-n) % n;  // 2^64 mod n
        std::uint64_t x;
        do {
            x = next();
        } while (x < min);
        return x % n;
    }

    // inclusive range
    int uniform_int(int lo, int hi) {
        if (lo > hi) throw Error("Rng::uniform_int: empty range");
        return lo + static_cast<int>(bounded(static_cast<std::uint64_t>(hi) - lo + 1));
    }

    // [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[bounded(i)]);
        }
    }

    // index into a nonnegative weight vector (need not be normalized)
    std::size_t categorical(const std::vector<double>& weights) {
        if (weights.empty()) throw Error("Rng::categorical: no weights");
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0)) throw Error("Rng::categorical: weights sum to zero");
        double u = uniform01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            if (u < weights[i]) return i;
            u -= weights[i];
        }
        return weights.size() - 1;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace treelim
