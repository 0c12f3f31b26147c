#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace extcount {

// Small labeled graph, vertices 1..n, n <= 16.  Used for the pattern side
// (the host side lives in host_graph.hpp and scales to thousands of vertices).
struct PatternGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // a < b, sorted lexicographically
    std::vector<uint32_t> adj;               // adj[v] bit u set iff {u,v} edge; index 0 unused

    static constexpr int kMaxVertices = 16;

    PatternGraph() = default;
    PatternGraph(int n_, std::vector<std::pair<int, int>> edges_);

    bool has_edge(int a, int b) const { return a != b && (adj[a] >> b) & 1u; }
    int degree(int v) const;
    int edge_count_within(uint32_t mask) const;  // edges with both ends in mask
};

// Mask helpers: vertex v corresponds to bit (1u << v), labels 1-based.
inline uint32_t vmask(int v) { return 1u << v; }
uint32_t full_mask(int n);
std::vector<int> mask_to_labels(uint32_t mask);
uint32_t labels_to_mask(const std::vector<int>& labels);

// Pattern with a distinguished root segment: roots are labels 1..root_count,
// and the rooted pair is (induced subgraph on the roots, whole pattern).
// Construction requires 0 <= root_count < n; edges lying inside the root set
// are carried but never constrain counting (counting matches the pattern
// minus its root-internal edges).
struct RootedGraph {
    PatternGraph h;
    int root_count = 0;

    RootedGraph() = default;
    RootedGraph(PatternGraph h_, int root_count_);

    int vg() const { return root_count; }
    int vh() const { return h.n; }
    uint32_t roots_mask() const { return full_mask(root_count); }
    int eg() const { return h.edge_count_within(roots_mask()); }
    int eh() const { return (int)h.edges.size(); }
    // Edges of the pattern minus the root-internal edges; the object counting
    // is about copies of this graph with roots pinned.
    std::vector<std::pair<int, int>> free_edges() const;
    bool is_root(int v) const { return v >= 1 && v <= root_count; }
};

struct ParseError : std::runtime_error {
    enum Kind {
        kMalformedHeader,
        kMalformedEdge,
        kLabelOutOfRange,
        kSelfLoop,
        kDuplicateEdge,
        kRootCountOutOfRange,
        kNoFreeEdge,  // every edge inside the root set (nothing to count)
        kTooManyVertices,
    };
    Kind kind;
    ParseError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Text format: first line "<root_count> <vertex_count>", then edges "a-b"
// separated by whitespace/newlines, '#' starts a comment.  Serialization is
// canonical (sorted edges), so parse(serialize(g)) == g byte for byte.
RootedGraph parse_rooted_graph(const std::string& text);
std::string serialize_rooted_graph(const RootedGraph& rg);

// Built-in study patterns.  Throws std::invalid_argument for unknown names.
RootedGraph builtin_fixture(const std::string& name);
std::vector<std::string> builtin_fixture_names();

// Number of automorphisms of (pattern minus root-internal edges) that fix
// every root label individually.  Non-root vertices may permute.
uint64_t automorphism_count(const RootedGraph& rg);

// Induced sub-rooted-graph: pattern restricted to `mask` (which must contain
// all roots), vertices relabeled with roots first, then the remaining mask
// vertices in ascending label order.  Root count is unchanged.
RootedGraph induced_sub(const RootedGraph& rg, uint32_t mask);

// Re-rooted graph: same pattern, roots become exactly the vertices in `mask`
// (must contain the current roots), relabeled mask-first ascending.  The
// result may have no free edge; it is still usable for density/scale
// computations, but not parseable from text.
RootedGraph reroot(const RootedGraph& rg, uint32_t mask);

}  // namespace extcount
