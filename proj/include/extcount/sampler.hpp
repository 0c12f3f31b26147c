#pragma once

#include <cstdint>

#include "extcount/host_graph.hpp"

namespace extcount {

// 64-bit finalizer from the splitmix64 generator (Steele-Lea-Flood
// constants); stateless avalanche hash used for all seed derivation.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Documented stream split: the RNG stream for (cell, trial) under a base seed.
inline uint64_t trial_seed(uint64_t base_seed, uint64_t cell_index, uint64_t trial_index) {
    return mix64(base_seed ^ mix64(cell_index ^ mix64(trial_index)));
}

struct SamplerConfig {
    long n = 0;
    double p = 0;       // in [0, 1]
    uint64_t seed = 0;  // direct engine seed (already stream-split)
};

// Binomial random host on n labeled vertices, each pair an edge independently
// with probability p.  Deterministic function of (n, p, seed): the engine is
// std::mt19937_64 and uniforms are (x >> 11) * 2^-53.  Pairs are visited in
// row-major order; p > 0.1 draws every pair, smaller p uses geometric skips.
// The regime depends on p only, so equal seeds give equal graphs.
HostGraph sample_gnp(const SamplerConfig& cfg);

}  // namespace extcount
