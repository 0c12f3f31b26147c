#include "extcount/lattice.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace extcount {

namespace {

// Iterate subsets of `free` (as submasks), ascending.
struct SubmaskIter {
    uint32_t free, cur = 0;
    bool done = false;
    explicit SubmaskIter(uint32_t f) : free(f) {}
    uint32_t next() {
        uint32_t r = cur;
        if (cur == free)
            done = true;
        else
            cur = (cur - free) & free;  // next submask
        return r;
    }
};

}  // namespace

std::vector<LatticeNode> enumerate_lattice(const RootedGraph& rg) {
    uint32_t roots = rg.roots_mask();
    uint32_t free = full_mask(rg.vh()) & ~roots;
    int eg = rg.eg(), vg = rg.vg();
    std::vector<LatticeNode> nodes;
    nodes.reserve(1u << std::popcount(free));
    SubmaskIter it(free);
    while (!it.done) {
        uint32_t sub = it.next();
        LatticeNode node;
        node.subset = roots | sub;
        node.vcount = std::popcount(node.subset);
        node.ecount = rg.h.edge_count_within(node.subset);
        if (node.vcount > vg) node.density = Frac{node.ecount - eg, node.vcount - vg};
        nodes.push_back(node);
    }
    std::sort(nodes.begin(), nodes.end(),
              [](const LatticeNode& a, const LatticeNode& b) { return a.subset < b.subset; });
    return nodes;
}

Rat density(const RootedGraph& rg, uint32_t subset) {
    uint32_t roots = rg.roots_mask();
    if ((subset & roots) != roots)
        throw std::invalid_argument("density: subset must contain the root set");
    if ((subset & ~full_mask(rg.vh())) != 0)
        throw std::invalid_argument("density: subset uses labels outside the pattern");
    int vj = std::popcount(subset);
    if (vj <= rg.vg())
        throw std::invalid_argument("density: subset must strictly contain the root set");
    Rat d(rg.h.edge_count_within(subset) - rg.eg(), vj - rg.vg());
    d.canonicalize();
    return d;
}

namespace {

Frac max_density_over(const std::vector<LatticeNode>& nodes, int vg) {
    bool any = false;
    Frac best{0, 1};
    for (auto& n : nodes) {
        if (n.vcount <= vg) continue;
        if (!any || best < n.density) best = n.density, any = true;
    }
    if (!any) throw std::invalid_argument("no subset strictly contains the roots");
    return best;
}

}  // namespace

Rat m_value(const RootedGraph& rg) {
    auto nodes = enumerate_lattice(rg);
    return max_density_over(nodes, rg.vg()).to_rat();
}

bool is_strictly_balanced(const RootedGraph& rg) {
    auto nodes = enumerate_lattice(rg);
    int vg = rg.vg(), vh = rg.vh();
    Frac overall{rg.eh() - rg.eg(), vh - vg};
    for (auto& n : nodes) {
        if (n.vcount <= vg || n.vcount == vh) continue;
        if (!(n.density < overall)) return false;
    }
    return true;
}

bool is_grounded(const RootedGraph& rg) { return is_grounded_subset(rg, full_mask(rg.vh())); }

bool is_grounded_subset(const RootedGraph& rg, uint32_t subset) {
    uint32_t roots = rg.roots_mask() & subset;
    uint32_t nonroots = subset & ~rg.roots_mask();
    for (int v : mask_to_labels(roots))
        if (rg.h.adj[v] & nonroots) return true;
    return false;
}

std::string theorem_case_name(TheoremCase c) {
    switch (c) {
        case TheoremCase::StrBalGrounded: return "ThmStrBalGrounded";
        case TheoremCase::StrBalUngrounded: return "ThmStrBalUngrounded";
        case TheoremCase::UniqueGroundedPrimal: return "ThmUniqueGroundedPrimal";
        case TheoremCase::NoGroundedPrimal: return "ThmNoGroundedPrimal";
        case TheoremCase::GeneralOnly: return "GeneralOnly";
    }
    return "?";
}

std::string applicable_case_name(int which) {
    return theorem_case_name(static_cast<TheoremCase>(which));
}

ClassificationReport classify(const RootedGraph& rg) {
    ClassificationReport rep;
    auto nodes = enumerate_lattice(rg);
    int vg = rg.vg(), vh = rg.vh();
    Frac m = max_density_over(nodes, vg);
    rep.m = m.to_rat();
    rep.grounded = is_grounded(rg);

    uint32_t union_mask = 0;
    for (auto& n : nodes) {
        if (n.vcount <= vg) continue;
        if (n.density == m) {
            rep.primal_subsets.push_back(n);
            union_mask |= n.subset;
        }
    }
    rep.unique_primal = rep.primal_subsets.size() == 1;
    rep.strictly_balanced =
        rep.unique_primal && rep.primal_subsets[0].subset == full_mask(vh);
    for (auto& n : rep.primal_subsets)
        if (is_grounded_subset(rg, n.subset)) rep.has_grounded_primal = true;

    // the union of max-density subsets must itself have max density; the
    // downstream split of the pattern at that subset relies on it
    bool union_found = false;
    for (auto& n : nodes) {
        if (n.subset == union_mask && n.vcount > vg) {
            if (!(n.density == m))
                throw std::logic_error("union of max-density subsets is not max-density");
            rep.j_max = n;
            union_found = true;
        }
    }
    if (!union_found) throw std::logic_error("max-density union not located in the lattice");

    if (rep.strictly_balanced && rep.grounded)
        rep.theorem_case = TheoremCase::StrBalGrounded;
    else if (rep.strictly_balanced)
        rep.theorem_case = TheoremCase::StrBalUngrounded;
    else if (rep.unique_primal && rep.has_grounded_primal)
        rep.theorem_case = TheoremCase::UniqueGroundedPrimal;
    else if (!rep.has_grounded_primal)
        rep.theorem_case = TheoremCase::NoGroundedPrimal;
    else
        rep.theorem_case = TheoremCase::GeneralOnly;

    if (rep.strictly_balanced && rep.grounded)
        rep.applicable_cases.push_back((int)TheoremCase::StrBalGrounded);
    if (rep.strictly_balanced && !rep.grounded)
        rep.applicable_cases.push_back((int)TheoremCase::StrBalUngrounded);
    if (rep.unique_primal && rep.has_grounded_primal)
        rep.applicable_cases.push_back((int)TheoremCase::UniqueGroundedPrimal);
    if (!rep.has_grounded_primal)
        rep.applicable_cases.push_back((int)TheoremCase::NoGroundedPrimal);
    rep.applicable_cases.push_back((int)TheoremCase::GeneralOnly);
    return rep;
}

Rat m_value_rooted_at(const RootedGraph& rg, uint32_t mask) {
    if ((mask & ~full_mask(rg.vh())) != 0 || mask == 0)
        throw std::invalid_argument("bad root mask");
    if (std::popcount(mask) >= rg.vh())
        throw std::invalid_argument("root mask must be a proper vertex subset");
    int vg = std::popcount(mask);
    int eg = rg.h.edge_count_within(mask);
    uint32_t free = full_mask(rg.vh()) & ~mask;
    bool any = false;
    Frac best{0, 1};
    SubmaskIter it(free);
    while (!it.done) {
        uint32_t sub = it.next();
        if (sub == 0) continue;
        uint32_t subset = mask | sub;
        Frac d{rg.h.edge_count_within(subset) - eg, std::popcount(subset) - vg};
        if (!any || best < d) best = d, any = true;
    }
    return best.to_rat();
}

UnrootedAnalysis unrooted_analysis(const PatternGraph& k) {
    if (k.n < 1) throw std::invalid_argument("unrooted analysis: empty pattern");
    if (k.edges.empty()) throw std::invalid_argument("unrooted analysis: pattern has no edges");
    UnrootedAnalysis res;
    uint32_t full = full_mask(k.n);
    bool any = false;
    Frac best{0, 1};
    for (uint32_t s = 1; s <= full; s++) {
        if (s & ~full) continue;
        Frac d{k.edge_count_within(s), std::popcount(s)};
        if (!any || best < d) best = d, any = true;
    }
    res.max_density = best.to_rat();
    for (uint32_t s = 1; s <= full; s++) {
        if (s & ~full) continue;
        Frac d{k.edge_count_within(s), std::popcount(s)};
        if (d == best) res.primal_subsets.push_back(s);
    }
    res.balanced = !res.primal_subsets.empty() && res.primal_subsets.back() == full;
    // smallest primal; ties broken by lexicographically smallest label sequence,
    // which for equal-size sets is the numerically smaller mask
    uint32_t gmin = res.primal_subsets[0];
    for (uint32_t s : res.primal_subsets) {
        int cs = std::popcount(s), cg = std::popcount(gmin);
        if (cs < cg || (cs == cg && s < gmin)) gmin = s;
    }
    res.g_min = gmin;
    res.g_min_vcount = std::popcount(gmin);
    return res;
}

namespace {

nlohmann::json node_json(const LatticeNode& n) {
    nlohmann::json j;
    j["vertex_subset"] = mask_to_labels(n.subset);
    j["induced_edge_count"] = n.ecount;
    j["density"] = rat_str(n.density.to_rat());
    return j;
}

}  // namespace

std::string classification_json(const RootedGraph& rg, const ClassificationReport& rep) {
    nlohmann::json j;
    j["root_count"] = rg.vg();
    j["vertex_count"] = rg.vh();
    j["edge_count"] = rg.eh();
    j["root_edge_count"] = rg.eg();
    j["m_value"] = rat_str(rep.m);
    j["strictly_balanced"] = rep.strictly_balanced;
    j["grounded"] = rep.grounded;
    j["primal_subsets"] = nlohmann::json::array();
    for (auto& n : rep.primal_subsets) j["primal_subsets"].push_back(node_json(n));
    j["j_max"] = node_json(rep.j_max);
    j["has_grounded_primal"] = rep.has_grounded_primal;
    j["unique_primal"] = rep.unique_primal;
    j["theorem_case"] = theorem_case_name(rep.theorem_case);
    j["applicable_cases"] = nlohmann::json::array();
    for (int c : rep.applicable_cases) j["applicable_cases"].push_back(applicable_case_name(c));
    return j.dump(2);
}

}  // namespace extcount
