#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace extcount {

// Host graph on vertices 1..n.  Two storage modes, chosen by n alone:
// packed bit rows up to kBitsetMax vertices, sorted adjacency lists above.
struct HostGraph {
    static constexpr long kBitsetMax = 4096;

    long n = 0;
    bool bitset_mode = true;
    long words = 0;                       // 64-bit words per row (bitset mode)
    std::vector<uint64_t> rows;           // (n+1) * words, row v at v*words
    std::vector<std::vector<int>> lists;  // sorted neighbor lists (list mode)
    long edge_count = 0;

    explicit HostGraph(long n_ = 0);

    const uint64_t* row(long v) const { return rows.data() + v * words; }
    uint64_t* row(long v) { return rows.data() + v * words; }

    bool has_edge(long a, long b) const;
    void add_edge(long a, long b);  // idempotent; throws on bad labels / self-loop

    static HostGraph complete(long n);
    static HostGraph from_edges(long n, const std::vector<std::pair<long, long>>& edges);
    // First line "n", then one "a b" pair per line, '#' comments, 1-based.
    static HostGraph parse(const std::string& text);

    long degree(long v) const;
    std::vector<int> neighbors(long v) const;
};

}  // namespace extcount
