#ifndef TOPOREG_RNG_HPP
#define TOPOREG_RNG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace toporeg {

// Deterministic splitmix64 stream. Hand-rolled so that results are identical
// across standard libraries and platforms; everything stochastic in the
// library (subsampling, walks, negative samples, generators) draws from this.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n); multiply-shift keeps the draw platform-independent.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
    }

    // Box-Muller; draws two uniforms per call so the stream advance is fixed.
    double normal() {
        double u1 = 1.0 - uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Independent stream keyed by (seed of this rng, tag); never affected by
    // draws already made, so split trees are reproducible.
    Rng child(std::uint64_t tag) const {
        std::uint64_t z = seed_ ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), returned ascending so that subclouds
    // preserve the original point order (keeps tie-breaking stable).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < k && i < n; ++i) {
            std::size_t j = i + uniform_index(n - i);
            std::swap(idx[i], idx[j]);
        }
        idx.resize(std::min(k, n));
        std::sort(idx.begin(), idx.end());
        return idx;
    }

    // k draws with replacement from [0, n), deduplicated and ascending; see
    // sampling notes in topo_loss.hpp.
    std::vector<std::size_t> sample_with_replacement(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = uniform_index(n);
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        return idx;
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace toporeg

#endif
