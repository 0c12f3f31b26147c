#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "extcount/host_graph.hpp"
#include "extcount/pattern_graph.hpp"

namespace extcount {

using RootTuple = std::vector<long>;  // distinct host vertices, one per root label

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Backtracking counter for pinned copies of (pattern minus root-internal
// edges).  The vertex visit order is fixed at construction: repeatedly take
// the vertex with the most pattern edges into the already-placed set, break
// ties by higher pattern degree, then by lower label.
class ExtensionCounter {
  public:
    explicit ExtensionCounter(const RootedGraph& rg);

    const RootedGraph& rooted() const { return rg_; }

    // Ordered embeddings pinned at x (distinct host vertices, x[i] hosts root
    // label i+1).  Non-root images are distinct and avoid the pinned set.
    uint64_t count_ordered(const HostGraph& host, const RootTuple& x) const;

    // Unordered pinned copies; ordered count divided by the automorphism
    // count, divisibility enforced (throws std::logic_error on failure).
    uint64_t count_unordered(const HostGraph& host, const RootTuple& x) const;

    // Ordered counts for every root placement at once (single enumeration
    // pass).  Supported for root_count == 1: result[v] = count at root v,
    // index 0 unused.
    std::vector<uint64_t> count_all_roots(const HostGraph& host) const;

    uint64_t aut() const { return aut_; }

  private:
    RootedGraph rg_;
    uint64_t aut_;
    // visit orders: rooted (roots pre-placed) and global (all vertices free)
    std::vector<int> order_rooted_, order_global_;
    // per level, pattern neighbors (by label) already placed when the level runs
    std::vector<std::vector<int>> prev_rooted_, prev_global_;

    friend struct CountingImpl;
};

struct ExtremaResult {
    uint64_t min_count = 0, max_count = 0;
    RootTuple argmin, argmax;  // first tuple attaining each, in iteration order
};

// Min/max unordered count over all ordered root tuples.  Requires n >= v_G.
ExtremaResult extension_extrema(const HostGraph& host, const RootedGraph& rg);

// All unordered pinned copies at x, each reported as the sorted set of
// non-root host vertices it uses.  Two distinct copies may use the same
// vertex set (different edge images); both entries are kept.  Throws
// CapExceeded once more than `cap` copies exist.
std::vector<std::vector<long>> list_extensions(const HostGraph& host, const RootedGraph& rg,
                                               const RootTuple& x, uint64_t cap = 1000000);

// True iff there are exactly r pinned copies at x and their non-root vertex
// sets are pairwise disjoint.
bool disjoint_event_check(const HostGraph& host, const RootedGraph& rg, const RootTuple& x,
                          uint64_t r);

// Per-vertex copy participation for an unrooted pattern K: result[v] = number
// of unordered copies of K in the host containing v (index 0 unused).  Single
// global enumeration pass; root markings on K are ignored.
std::vector<uint64_t> per_vertex_copy_counts(const HostGraph& host, const PatternGraph& k);

}  // namespace extcount
