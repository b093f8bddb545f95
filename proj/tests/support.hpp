#pragma once

#include <complex>
#include <cstdint>

#include "pbsq/types.hpp"

namespace testutil {

// Deterministic xorshift generator so property-style sweeps are reproducible
// without seeding machinery.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    double uniform() { return double(next() >> 11) / double(1ull << 53); }  // [0,1)
    double sym() { return 2.0 * uniform() - 1.0; }                          // [-1,1)
    pbsq::Complex complex_sym() { return {sym(), sym()}; }
};

inline pbsq::ComplexMatrix random_matrix(Eigen::Index dim, std::uint64_t seed,
                                         double norm_target = 1.0) {
    Rng rng(seed);
    pbsq::ComplexMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = rng.complex_sym();
    return a * (norm_target / a.norm());
}

inline pbsq::FockVector random_vector(Eigen::Index dim, std::uint64_t seed) {
    Rng rng(seed);
    pbsq::FockVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.complex_sym();
    return v;
}

}  // namespace testutil
