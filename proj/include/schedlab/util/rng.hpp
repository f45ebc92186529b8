#ifndef SCHEDLAB_UTIL_RNG_HPP
#define SCHEDLAB_UTIL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace schedlab {

// splitmix64 finalizer; stateless mix of a single word.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a over raw bytes.
inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
    return fnv1a(s.data(), s.size(), h);
}

// Incremental 64-bit hash used for state fingerprints and exogenous-stream audits.
class Hash64 {
public:
    void add_bytes(const void* data, size_t n) { h_ = fnv1a(data, n, h_); }
    void add_u64(uint64_t v) { add_bytes(&v, sizeof v); }
    void add_f64(double v) { add_bytes(&v, sizeof v); }
    uint64_t value() const { return h_; }

private:
    uint64_t h_ = 0xcbf29ce484222325ULL;
};

// Every seed in a run is a pure function of (master seed, component tag, index).
inline uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index) {
    return mix64(mix64(master ^ fnv1a(tag)) ^ index);
}

// Uniform in [0, 1) from the top 53 bits of the engine output. mt19937_64 output
// is specified by the standard, so streams reproduce across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace detail {
inline uint32_t poisson_knuth(double rate, std::mt19937_64& rng) {
    const double limit = std::exp(-rate);
    uint32_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(rng);
    } while (p > limit);
    return k - 1;
}
}  // namespace detail

// Poisson sample. Knuth's product method, split for large rates so exp(-rate)
// never underflows (sum of independent Poissons is Poisson).
inline uint32_t draw_poisson(double rate, std::mt19937_64& rng) {
    if (rate <= 0.0) return 0;
    uint32_t total = 0;
    while (rate > 30.0) {
        total += detail::poisson_knuth(30.0, rng);
        rate -= 30.0;
    }
    return total + detail::poisson_knuth(rate, rng);
}

}  // namespace schedlab

#endif
