#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "extcount/pattern_graph.hpp"
#include "extcount/rational.hpp"

namespace extcount {

// Exact probability law of an integer statistic of the binomial random host.
struct ExactLaw {
    std::map<long, Rat> pmf;  // value -> exact probability

    Rat prob(long v) const;
    Rat mean() const;
    Rat variance() const;
    Rat cdf(long v) const;  // P(value <= v)
    bool sums_to_one() const;
};

enum class LawTarget {
    FixedRoot,     // pinned-copy count at roots (1, 2, ..., v_G)
    MaxOverRoots,  // max of the count over all ordered root tuples
    DisjointEvent, // indicator of "exactly r pairwise-disjoint pinned copies"
};

// Host-exhaustive distribution: iterates every labeled host on n vertices
// and weights by p^(edges) (1-p)^(missing), all exact.  The per-host counts
// are integer tables indexed by host edge count, so one enumeration serves
// any number of p values.
//
// Feasibility: C(n,2) <= 28 pairs.  FixedRoot/MaxOverRoots run a Gray-code
// sweep with incremental count updates at n in {7, 8}; DisjointEvent needs
// the full copy structure per host and is limited to n <= 6.
class ExactEnumeration {
  public:
    // Auto picks full recount for n <= 6, the Gray-code sweep above; tests can
    // force either on sizes where both apply.
    enum class Sweep { Auto, FullRecount, Incremental };

    ExactEnumeration(const RootedGraph& rg, long n, LawTarget target, uint64_t r = 0,
                     int threads = 1, Sweep sweep = Sweep::Auto);

    ExactLaw law(const Rat& p) const;

    long n() const { return n_; }
    // value -> per-edge-count host tallies (testing / inspection)
    const std::map<long, std::vector<uint64_t>>& tables() const { return tables_; }

  private:
    long n_;
    int pair_count_;
    std::map<long, std::vector<uint64_t>> tables_;
};

// One-call convenience wrapper.
ExactLaw exact_distribution(const RootedGraph& rg, long n, const Rat& p, LawTarget target,
                            uint64_t r = 0, int threads = 1);

}  // namespace extcount
