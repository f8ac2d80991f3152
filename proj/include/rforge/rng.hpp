#pragma once

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace rforge {

// Deterministic PRNG used for every random choice in the library.
// splitmix64 core: portable, byte-identical results on every platform,
// unlike std:: distributions whose output is implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed), state_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Rejection sampling to avoid modulo bias.
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do { x = next(); } while (x >= limit);
        return x % n;
    }

    int below_int(int n) { return static_cast<int>(below(static_cast<uint64_t>(n))); }

    // Uniform in [0,1) with 53 bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    // Named substream: derived from the root seed, not from evolving state,
    // so stages can be re-run in isolation.
    Rng stream(std::string_view name) const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (char c : name) {
            h ^= static_cast<uint64_t>(static_cast<unsigned char>(c));
            h *= 0x100000001b3ull;
        }
        return Rng(mix(seed_ ^ mix(h)));
    }

    Rng stream(std::string_view name, uint64_t index) const {
        Rng r = stream(name);
        return Rng(mix(r.seed_ ^ mix(index * 0x9e3779b97f4a7c15ull + 1)));
    }

    // Sorted k-subset of [0,n), uniform over subsets (partial Fisher-Yates).
    std::vector<int> subset(int n, int k);

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    uint64_t seed() const { return seed_; }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t seed_;
    uint64_t state_;
};

inline std::vector<int> Rng::subset(int n, int k) {
    // sparse Fisher-Yates: only touched positions are stored
    std::vector<std::pair<int, int>> swaps;  // (pos, value) overlay
    auto get = [&](int i) {
        for (auto& [p, v] : swaps)
            if (p == i) return v;
        return i;
    };
    auto set = [&](int i, int val) {
        for (auto& [p, v] : swaps)
            if (p == i) { v = val; return; }
        swaps.emplace_back(i, val);
    };
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        int j = i + below_int(n - i);
        int vi = get(i), vj = get(j);
        out.push_back(vj);
        set(j, vi);
        set(i, vj);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace rforge
