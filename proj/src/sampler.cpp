#include "extcount/sampler.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace extcount {

namespace {

inline double unit_double(std::mt19937_64& eng) {
    return (eng() >> 11) * 0x1.0p-53;  // [0, 1), 53 bits
}

}  // namespace

HostGraph sample_gnp(const SamplerConfig& cfg) {
    if (cfg.p < 0 || cfg.p > 1) throw std::invalid_argument("p must lie in [0, 1]");
    if (cfg.n < 0) throw std::invalid_argument("n must be nonnegative");
    HostGraph g(cfg.n);
    if (cfg.n < 2 || cfg.p == 0) return g;
    std::mt19937_64 eng(cfg.seed);
    const long n = cfg.n;
    if (cfg.p > 0.1) {
        // dense regime: one draw per pair, row-major
        for (long a = 1; a <= n; a++)
            for (long b = a + 1; b <= n; b++)
                if (unit_double(eng) < cfg.p) g.add_edge(a, b);
        return g;
    }
    // sparse regime: geometric skips over the same row-major pair sequence
    const double log1mp = std::log1p(-cfg.p);
    const unsigned __int128 total = (unsigned __int128)n * (n - 1) / 2;
    unsigned __int128 pos = 0;
    // row offsets: pair index k in [0, total) maps to (a, b) with
    // offset(a) = (a-1)*n - a*(a+1)/2 counting pairs of rows before a
    auto pair_of = [&](unsigned __int128 k) -> std::pair<long, long> {
        long lo = 1, hi = n - 1;
        while (lo < hi) {  // find a: largest with offset(a) <= k
            long mid = lo + (hi - lo + 1) / 2;
            unsigned __int128 off =
                (unsigned __int128)(mid - 1) * n - (unsigned __int128)mid * (mid - 1) / 2;
            if (off <= k)
                lo = mid;
            else
                hi = mid - 1;
        }
        unsigned __int128 off =
            (unsigned __int128)(lo - 1) * n - (unsigned __int128)lo * (lo - 1) / 2;
        return {lo, lo + 1 + (long)(k - off)};
    };
    bool first = true;
    while (true) {
        double u = unit_double(eng);
        double skip = std::floor(std::log1p(-u) / log1mp);
        if (skip > 1e18) break;
        pos += first ? (unsigned __int128)skip : (unsigned __int128)skip + 1;
        first = false;
        if (pos >= total) break;
        auto [a, b] = pair_of(pos);
        g.add_edge(a, b);
    }
    return g;
}

}  // namespace extcount
