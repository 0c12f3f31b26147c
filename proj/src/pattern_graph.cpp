#include "extcount/pattern_graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

namespace extcount {

PatternGraph::PatternGraph(int n_, std::vector<std::pair<int, int>> edges_)
    : n(n_), edges(std::move(edges_)) {
    if (n < 0 || n > kMaxVertices) throw std::invalid_argument("pattern vertex count out of range");
    adj.assign(n + 1, 0);
    for (auto& [a, b] : edges) {
        if (a > b) std::swap(a, b);
        if (a < 1 || b > n) throw std::invalid_argument("pattern edge label out of range");
        if (a == b) throw std::invalid_argument("pattern self-loop");
        if (adj[a] & vmask(b)) throw std::invalid_argument("duplicate pattern edge");
        adj[a] |= vmask(b);
        adj[b] |= vmask(a);
    }
    std::sort(edges.begin(), edges.end());
}

int PatternGraph::degree(int v) const { return std::popcount(adj[v]); }

int PatternGraph::edge_count_within(uint32_t mask) const {
    int c = 0;
    for (auto& [a, b] : edges)
        if ((mask & vmask(a)) && (mask & vmask(b))) c++;
    return c;
}

uint32_t full_mask(int n) { return n == 0 ? 0u : ((vmask(n) << 1) - 2); }

std::vector<int> mask_to_labels(uint32_t mask) {
    std::vector<int> out;
    for (int v = 1; v < 32; v++)
        if (mask & vmask(v)) out.push_back(v);
    return out;
}

uint32_t labels_to_mask(const std::vector<int>& labels) {
    uint32_t m = 0;
    for (int v : labels) m |= vmask(v);
    return m;
}

RootedGraph::RootedGraph(PatternGraph h_, int root_count_) : h(std::move(h_)), root_count(root_count_) {
    if (root_count < 0 || root_count >= h.n)
        throw std::invalid_argument("root count must satisfy 0 <= roots < vertices");
}

std::vector<std::pair<int, int>> RootedGraph::free_edges() const {
    std::vector<std::pair<int, int>> out;
    for (auto& e : h.edges)
        if (!(is_root(e.first) && is_root(e.second))) out.push_back(e);
    return out;
}

namespace {

// strip comments, turn '-' separation into tokens
std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> toks;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) toks.push_back(t);
    }
    return toks;
}

bool parse_int(const std::string& s, int& out) {
    if (s.empty()) return false;
    long v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
        if (v > 1000000) return false;
    }
    out = (int)v;
    return true;
}

}  // namespace

RootedGraph parse_rooted_graph(const std::string& text) {
    auto toks = tokenize(text);
    if (toks.size() < 2)
        throw ParseError(ParseError::kMalformedHeader, "expected header '<roots> <vertices>'");
    int vg = 0, vh = 0;
    if (!parse_int(toks[0], vg) || !parse_int(toks[1], vh))
        throw ParseError(ParseError::kMalformedHeader,
                         "header must be two integers '<roots> <vertices>'");
    if (vh < 1 || vh > PatternGraph::kMaxVertices)
        throw ParseError(ParseError::kTooManyVertices,
                         "vertex count must be between 1 and 16, got " + std::to_string(vh));
    if (vg < 0 || vg >= vh)
        throw ParseError(ParseError::kRootCountOutOfRange,
                         "root count must satisfy 0 <= roots < vertices, got " +
                             std::to_string(vg) + " of " + std::to_string(vh));
    std::vector<std::pair<int, int>> edges;
    std::vector<uint32_t> seen(vh + 1, 0);
    for (size_t i = 2; i < toks.size(); i++) {
        const std::string& t = toks[i];
        auto dash = t.find('-');
        int a = 0, b = 0;
        if (dash == std::string::npos || !parse_int(t.substr(0, dash), a) ||
            !parse_int(t.substr(dash + 1), b))
            throw ParseError(ParseError::kMalformedEdge, "bad edge token '" + t + "' (want a-b)");
        if (a < 1 || a > vh || b < 1 || b > vh)
            throw ParseError(ParseError::kLabelOutOfRange,
                             "edge '" + t + "' uses a label outside 1.." + std::to_string(vh));
        if (a == b) throw ParseError(ParseError::kSelfLoop, "self-loop '" + t + "'");
        if (a > b) std::swap(a, b);
        if (seen[a] & vmask(b))
            throw ParseError(ParseError::kDuplicateEdge, "duplicate edge '" + t + "'");
        seen[a] |= vmask(b);
        edges.emplace_back(a, b);
    }
    RootedGraph rg(PatternGraph(vh, std::move(edges)), vg);
    if (rg.eh() <= rg.eg())
        throw ParseError(ParseError::kNoFreeEdge,
                         "every edge lies inside the root set; nothing to count");
    return rg;
}

std::string serialize_rooted_graph(const RootedGraph& rg) {
    std::ostringstream out;
    out << rg.vg() << " " << rg.vh() << "\n";
    bool first = true;
    for (auto& [a, b] : rg.h.edges) {
        out << (first ? "" : " ") << a << "-" << b;
        first = false;
    }
    if (!first) out << "\n";
    return out.str();
}

namespace {

RootedGraph make_fixture(int vg, int vh, std::vector<std::pair<int, int>> edges) {
    return RootedGraph(PatternGraph(vh, std::move(edges)), vg);
}

const std::map<std::string, RootedGraph>& fixture_table() {
    static const std::map<std::string, RootedGraph> table = [] {
        std::map<std::string, RootedGraph> t;
        // one root on a triangle
        RootedGraph tri = make_fixture(1, 3, {{1, 2}, {1, 3}, {2, 3}});
        t.emplace("tri_root", tri);
        t.emplace("fig1a", tri);
        // isolated root plus a detached triangle
        t.emplace("fig1b", make_fixture(1, 4, {{2, 3}, {2, 4}, {3, 4}}));
        // rooted triangle with a pendant vertex
        t.emplace("fig1c", make_fixture(1, 4, {{1, 2}, {1, 3}, {2, 3}, {3, 4}}));
        // root, a 5-edge path, then a K4 hanging off the far end
        t.emplace("fig1d", make_fixture(1, 9,
                                        {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6},
                                         {6, 7}, {6, 8}, {6, 9}, {7, 8}, {7, 9}, {8, 9}}));
        // rooted K4 with one extra vertex adjacent to 2 and 3
        t.emplace("fig2e", make_fixture(1, 5,
                                        {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {2, 5},
                                         {3, 4}, {3, 5}}));
        // fig2e plus a second such vertex
        t.emplace("fig2f", make_fixture(1, 6,
                                        {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {2, 5},
                                         {2, 6}, {3, 4}, {3, 5}, {3, 6}}));
        // path of length three between two roots
        t.emplace("path3", make_fixture(2, 4, {{1, 3}, {2, 4}, {3, 4}}));
        return t;
    }();
    return table;
}

}  // namespace

RootedGraph builtin_fixture(const std::string& name) {
    auto& t = fixture_table();
    auto it = t.find(name);
    if (it == t.end()) throw std::invalid_argument("unknown fixture '" + name + "'");
    return it->second;
}

std::vector<std::string> builtin_fixture_names() {
    std::vector<std::string> names;
    for (auto& [k, v] : fixture_table()) names.push_back(k);
    return names;
}

namespace {

// Adjacency of the pattern minus root-internal edges.
std::vector<uint32_t> free_adjacency(const RootedGraph& rg) {
    std::vector<uint32_t> adj(rg.vh() + 1, 0);
    for (auto& [a, b] : rg.free_edges()) {
        adj[a] |= vmask(b);
        adj[b] |= vmask(a);
    }
    return adj;
}

struct AutCounter {
    int vh, vg;
    std::vector<uint32_t> adj;     // free adjacency
    std::vector<int> order;        // non-root vertices, most-constrained first
    std::vector<int> image;        // image[v], 0 = unset
    std::vector<char> used;
    uint64_t count = 0;

    void rec(size_t level) {
        if (level == order.size()) {
            count++;
            return;
        }
        int v = order[level];
        for (int w = vg + 1; w <= vh; w++) {
            if (used[w]) continue;
            // adjacency to roots must match exactly (roots are fixed)
            uint32_t rmask = full_mask(vg);
            if ((adj[v] & rmask) != (adj[w] & rmask)) continue;
            bool ok = true;
            for (int u = vg + 1; u <= vh && ok; u++) {
                if (!image[u] || u == v) continue;
                bool e1 = (adj[v] >> u) & 1u;
                bool e2 = (adj[w] >> image[u]) & 1u;
                if (e1 != e2) ok = false;
            }
            if (!ok) continue;
            image[v] = w;
            used[w] = 1;
            rec(level + 1);
            image[v] = 0;
            used[w] = 0;
        }
    }
};

}  // namespace

uint64_t automorphism_count(const RootedGraph& rg) {
    AutCounter ac;
    ac.vh = rg.vh();
    ac.vg = rg.vg();
    ac.adj = free_adjacency(rg);
    // visit order: largest free degree first (cheap pruning), then label
    for (int v = ac.vg + 1; v <= ac.vh; v++) ac.order.push_back(v);
    std::sort(ac.order.begin(), ac.order.end(), [&](int a, int b) {
        int da = std::popcount(ac.adj[a]), db = std::popcount(ac.adj[b]);
        if (da != db) return da > db;
        return a < b;
    });
    ac.image.assign(ac.vh + 1, 0);
    ac.used.assign(ac.vh + 1, 0);
    for (int r = 1; r <= ac.vg; r++) ac.image[r] = r;
    ac.rec(0);
    return ac.count;
}

namespace {

RootedGraph relabel_mask_first(const RootedGraph& rg, uint32_t mask, bool induced_only,
                               int new_root_count) {
    if ((mask & rg.roots_mask()) != rg.roots_mask())
        throw std::invalid_argument("mask must contain all roots");
    if ((mask & ~full_mask(rg.vh())) != 0)
        throw std::invalid_argument("mask uses labels outside the pattern");
    std::vector<int> newlabel(rg.vh() + 1, 0);
    int next = 1;
    for (int v = 1; v <= rg.vh(); v++)
        if (mask & vmask(v)) newlabel[v] = next++;
    for (int v = 1; v <= rg.vh(); v++)
        if (!(mask & vmask(v))) newlabel[v] = next++;
    std::vector<std::pair<int, int>> edges;
    for (auto& [a, b] : rg.h.edges) {
        if (induced_only && !((mask & vmask(a)) && (mask & vmask(b)))) continue;
        int na = newlabel[a], nb = newlabel[b];
        if (na > nb) std::swap(na, nb);
        edges.emplace_back(na, nb);
    }
    int nvert = induced_only ? std::popcount(mask) : rg.vh();
    return RootedGraph(PatternGraph(nvert, std::move(edges)), new_root_count);
}

}  // namespace

RootedGraph induced_sub(const RootedGraph& rg, uint32_t mask) {
    // roots are the lowest labels, so mask-ascending relabeling keeps them first
    return relabel_mask_first(rg, mask, true, rg.vg());
}

RootedGraph reroot(const RootedGraph& rg, uint32_t mask) {
    int k = std::popcount(mask);
    if (k >= rg.vh()) throw std::invalid_argument("reroot mask must be a proper subset");
    return relabel_mask_first(rg, mask, false, k);
}

}  // namespace extcount
