#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ifb {

// SplitMix64 finalizer: a bijection on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for one work item, folded from the base seed and an index tuple:
//   s0 = mix64(base); s_{k+1} = mix64(s_k ^ mix64(index_k + (k + 1) * golden))
// The position term keeps (a, b) and (b, a) apart.
std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::initializer_list<std::uint64_t> indices);

// Standard normal stream.
//
// Uniform bits come from std::mt19937_64, whose output sequence is fixed by
// the C++ standard; normals come from the Marsaglia polar method implemented
// here (std::normal_distribution is implementation-defined and would tie the
// sample sequence to the standard library vendor).
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double operator()();

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline double draw_gaussian(GaussianStream& stream) { return stream(); }

}  // namespace ifb
