#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "extcount/pattern_graph.hpp"
#include "extcount/rational.hpp"

namespace extcount {

// Exact fraction on machine ints; numerators/denominators here are bounded by
// edge and vertex counts of 16-vertex patterns, so no overflow anywhere.
struct Frac {
    long num = 0;
    long den = 1;  // den > 0
    friend bool operator==(const Frac& a, const Frac& b) {
        return a.num * b.den == b.num * a.den;
    }
    friend bool operator<(const Frac& a, const Frac& b) {
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator<=(const Frac& a, const Frac& b) { return !(b < a); }
    Rat to_rat() const {
        Rat q(num, den);
        q.canonicalize();
        return q;
    }
};

// One vertex subset V(G) subseteq S subseteq V(H) of the rooted pair, with the
// induced edge count and the relative density (e_S - e_G) / (v_S - v_G)
// (defined only when S has more vertices than the root set).
struct LatticeNode {
    uint32_t subset = 0;  // vertex mask, always contains the roots
    int vcount = 0;
    int ecount = 0;
    Frac density;  // meaningful iff vcount > root count
};

// All 2^(v_H - v_G) nodes, subsets ordered by increasing mask value.
std::vector<LatticeNode> enumerate_lattice(const RootedGraph& rg);

// Relative density of one subset (must strictly contain the root set).
Rat density(const RootedGraph& rg, uint32_t subset);

// max density over all subsets strictly containing the roots (proper and
// improper alike).
Rat m_value(const RootedGraph& rg);

// Strictly balanced: every proper intermediate subset sits strictly below the
// overall density.  Equivalent to "the only max-density subset is V(H)".
bool is_strictly_balanced(const RootedGraph& rg);

// Grounded: some root has a pattern edge to a non-root.
bool is_grounded(const RootedGraph& rg);
// Same question restricted to the induced subgraph on `subset`.
bool is_grounded_subset(const RootedGraph& rg, uint32_t subset);

enum class TheoremCase {
    StrBalGrounded,
    StrBalUngrounded,
    UniqueGroundedPrimal,
    NoGroundedPrimal,
    GeneralOnly,
};
std::string theorem_case_name(TheoremCase c);   // wire names: ThmStrBalGrounded, ...
std::string applicable_case_name(int which);    // 0..4 -> same five wire names

struct ClassificationReport {
    Rat m;                           // max relative density
    bool strictly_balanced = false;
    bool grounded = false;
    std::vector<LatticeNode> primal_subsets;  // density == m, ascending mask
    LatticeNode j_max;               // union of all primal subsets (checked primal)
    bool has_grounded_primal = false;
    bool unique_primal = false;
    TheoremCase theorem_case = TheoremCase::GeneralOnly;
    std::vector<int> applicable_cases;  // every case whose hypothesis holds (0..4)
};

// Full structural classification.  Internally verifies that the union of the
// primal subsets is itself primal and throws std::logic_error if not (that
// closure property is what the downstream analysis leans on).
ClassificationReport classify(const RootedGraph& rg);

// max relative density of (roots := mask, pattern); undefined (throws) when
// mask == V(H).  Tolerates pairs with no free edge.
Rat m_value_rooted_at(const RootedGraph& rg, uint32_t mask);

// Unrooted density analysis of a pattern K: d_S = e_S / v_S over nonempty
// subsets.  Requires at least one vertex and one edge.
struct UnrootedAnalysis {
    Rat max_density;                      // max over nonempty S
    std::vector<uint32_t> primal_subsets; // achieving the max, ascending mask
    bool balanced = false;                // V(K) itself achieves the max
    uint32_t g_min = 0;                   // smallest primal; ties -> lexicographically
                                          // smallest label set
    int g_min_vcount = 0;
};
UnrootedAnalysis unrooted_analysis(const PatternGraph& k);

std::string classification_json(const RootedGraph& rg, const ClassificationReport& rep);

}  // namespace extcount
