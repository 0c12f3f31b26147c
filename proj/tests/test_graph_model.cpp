#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "extcount/pattern_graph.hpp"

using namespace extcount;

namespace {

// Independent automorphism oracle: try every permutation of the non-root
// labels and test free-edge preservation directly.
uint64_t aut_by_enumeration(const RootedGraph& rg) {
    int vg = rg.vg(), vh = rg.vh();
    std::set<std::pair<int, int>> free;
    for (auto e : rg.free_edges()) free.insert(e);
    std::vector<int> perm(vh - vg);
    std::iota(perm.begin(), perm.end(), vg + 1);
    uint64_t count = 0;
    do {
        auto img = [&](int v) { return v <= vg ? v : perm[v - vg - 1]; };
        bool ok = true;
        for (auto [a, b] : free) {
            int x = img(a), y = img(b);
            if (x > y) std::swap(x, y);
            if (!free.count({x, y})) {
                ok = false;
                break;
            }
        }
        if (ok) count++;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

RootedGraph random_rooted(std::mt19937& rng, int max_vh = 7) {
    for (;;) {
        int vh = 2 + (int)(rng() % (max_vh - 1));
        int vg = (int)(rng() % vh);  // 0 .. vh-1
        std::vector<std::pair<int, int>> edges;
        for (int a = 1; a <= vh; a++)
            for (int b = a + 1; b <= vh; b++)
                if (rng() % 2) edges.emplace_back(a, b);
        RootedGraph rg(PatternGraph(vh, edges), vg);
        if (rg.eh() > rg.eg()) return rg;  // at least one free edge
    }
}

uint64_t factorial(int k) {
    uint64_t f = 1;
    for (int i = 2; i <= k; i++) f *= i;
    return f;
}

}  // namespace

TEST_CASE("pattern adjacency basics") {
    PatternGraph g(4, {{1, 2}, {2, 3}, {1, 3}});
    CHECK(g.n == 4);
    CHECK(g.edges.size() == 3);
    // canonical storage: sorted lexicographically
    CHECK(g.edges[0] == std::pair<int, int>(1, 2));
    CHECK(g.edges[1] == std::pair<int, int>(1, 3));
    CHECK(g.edges[2] == std::pair<int, int>(2, 3));
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 1));
    CHECK(!g.has_edge(1, 4));
    CHECK(!g.has_edge(2, 2));
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(4) == 0);
    CHECK(g.edge_count_within(labels_to_mask({1, 2, 3})) == 3);
    CHECK(g.edge_count_within(labels_to_mask({1, 2})) == 1);
    CHECK(g.edge_count_within(labels_to_mask({1, 4})) == 0);
}

TEST_CASE("mask helpers round-trip") {
    std::vector<int> labels = {1, 3, 6};
    CHECK(mask_to_labels(labels_to_mask(labels)) == labels);
    CHECK(full_mask(3) == (vmask(1) | vmask(2) | vmask(3)));
    CHECK(mask_to_labels(0).empty());
}

TEST_CASE("rooted accessors") {
    RootedGraph rg = builtin_fixture("path3");
    CHECK(rg.vg() == 2);
    CHECK(rg.vh() == 4);
    CHECK(rg.eg() == 0);
    CHECK(rg.eh() == 3);
    CHECK(rg.is_root(1));
    CHECK(rg.is_root(2));
    CHECK(!rg.is_root(3));
    CHECK(rg.free_edges().size() == 3);

    // root-internal edges are carried but excluded from the free list
    RootedGraph tri2(PatternGraph(3, {{1, 2}, {1, 3}, {2, 3}}), 2);
    CHECK(tri2.eg() == 1);
    auto free = tri2.free_edges();
    REQUIRE(free.size() == 2);
    CHECK(free[0] == std::pair<int, int>(1, 3));
    CHECK(free[1] == std::pair<int, int>(2, 3));
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS(PatternGraph(17, {}));
    CHECK_THROWS(PatternGraph(3, {{1, 1}}));
    CHECK_THROWS(PatternGraph(3, {{1, 4}}));
    CHECK_THROWS(PatternGraph(3, {{1, 2}, {2, 1}}));
    CHECK_THROWS(RootedGraph(PatternGraph(3, {{1, 2}}), 3));
    CHECK_THROWS(RootedGraph(PatternGraph(3, {{1, 2}}), -1));
}

TEST_CASE("parser diagnostics are distinct") {
    auto kind_of = [](const std::string& text) {
        try {
            parse_rooted_graph(text);
        } catch (const ParseError& e) {
            return e.kind;
        }
        FAIL("expected a parse error");
        return ParseError::kMalformedHeader;
    };
    CHECK(kind_of("") == ParseError::kMalformedHeader);
    CHECK(kind_of("x 3 1-2") == ParseError::kMalformedHeader);
    CHECK(kind_of("1") == ParseError::kMalformedHeader);
    CHECK(kind_of("1 17 1-2") == ParseError::kTooManyVertices);
    CHECK(kind_of("0 0") == ParseError::kTooManyVertices);
    CHECK(kind_of("3 3 1-2") == ParseError::kRootCountOutOfRange);
    CHECK(kind_of("-1 3 1-2") == ParseError::kMalformedHeader);  // signs are not numerals here
    CHECK(kind_of("1 3 12") == ParseError::kMalformedEdge);
    CHECK(kind_of("1 3 1-x") == ParseError::kMalformedEdge);
    CHECK(kind_of("1 3 1-4") == ParseError::kLabelOutOfRange);
    CHECK(kind_of("1 3 0-2") == ParseError::kLabelOutOfRange);
    CHECK(kind_of("1 3 2-2") == ParseError::kSelfLoop);
    CHECK(kind_of("1 3 1-2 2-1") == ParseError::kDuplicateEdge);
    CHECK(kind_of("2 3 1-2") == ParseError::kNoFreeEdge);
}

TEST_CASE("parser accepts comments and loose whitespace") {
    RootedGraph a = parse_rooted_graph("1 3 1-2 1-3 2-3");
    RootedGraph b = parse_rooted_graph("# triangle with one root\n 1   3\n1-2\t1-3 # inline\n2-3\n");
    CHECK(serialize_rooted_graph(a) == serialize_rooted_graph(b));
    CHECK(a.vg() == 1);
    CHECK(a.vh() == 3);
    // edge order in the input never matters
    RootedGraph c = parse_rooted_graph("1 3 2-3 1-3 1-2");
    CHECK(serialize_rooted_graph(a) == serialize_rooted_graph(c));
}

TEST_CASE("serialize/parse round-trip on random graphs") {
    std::mt19937 rng(20240811);
    for (int it = 0; it < 200; it++) {
        RootedGraph g = random_rooted(rng);
        std::string s = serialize_rooted_graph(g);
        RootedGraph h = parse_rooted_graph(s);
        CHECK(h.vg() == g.vg());
        CHECK(h.vh() == g.vh());
        CHECK(h.h.edges == g.h.edges);
        CHECK(serialize_rooted_graph(h) == s);
    }
}

TEST_CASE("built-in fixtures exist and are valid") {
    auto names = builtin_fixture_names();
    for (const char* want :
         {"tri_root", "fig1a", "fig1b", "fig1c", "fig1d", "fig2e", "fig2f", "path3"})
        CHECK(std::find(names.begin(), names.end(), want) != names.end());
    for (const auto& name : names) {
        RootedGraph rg = builtin_fixture(name);
        CHECK(rg.eh() > rg.eg());
        CHECK(rg.vg() >= 1);
        // every fixture survives a serialize/parse round trip
        CHECK(serialize_rooted_graph(parse_rooted_graph(serialize_rooted_graph(rg))) ==
              serialize_rooted_graph(rg));
    }
    CHECK_THROWS_AS(builtin_fixture("nosuch"), std::invalid_argument);
    CHECK(serialize_rooted_graph(builtin_fixture("fig1a")) ==
          serialize_rooted_graph(builtin_fixture("tri_root")));
}

TEST_CASE("automorphism counts of the study patterns") {
    CHECK(automorphism_count(builtin_fixture("tri_root")) == 2);
    CHECK(automorphism_count(builtin_fixture("fig1b")) == 6);
    CHECK(automorphism_count(builtin_fixture("fig1c")) == 1);
    CHECK(automorphism_count(builtin_fixture("fig1d")) == 6);
    CHECK(automorphism_count(builtin_fixture("fig2e")) == 2);
    CHECK(automorphism_count(builtin_fixture("fig2f")) == 4);
    CHECK(automorphism_count(builtin_fixture("path3")) == 1);
}

TEST_CASE("automorphism count matches whole-group enumeration") {
    for (const auto& name : builtin_fixture_names()) {
        RootedGraph rg = builtin_fixture(name);
        if (rg.vh() - rg.vg() > 8) continue;
        CHECK(automorphism_count(rg) == aut_by_enumeration(rg));
    }
    std::mt19937 rng(987123);
    for (int it = 0; it < 120; it++) {
        RootedGraph rg = random_rooted(rng);
        INFO(serialize_rooted_graph(rg));
        CHECK(automorphism_count(rg) == aut_by_enumeration(rg));
    }
}

TEST_CASE("automorphism count divides the free-vertex factorial") {
    std::mt19937 rng(5550123);
    for (int it = 0; it < 120; it++) {
        RootedGraph rg = random_rooted(rng);
        uint64_t a = automorphism_count(rg);
        CHECK(a >= 1);
        CHECK(factorial(rg.vh() - rg.vg()) % a == 0);
    }
}

TEST_CASE("automorphism count is invariant under non-root relabeling") {
    std::mt19937 rng(77001);
    for (int it = 0; it < 60; it++) {
        RootedGraph rg = random_rooted(rng);
        int vg = rg.vg(), vh = rg.vh();
        std::vector<int> perm(vh + 1);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin() + vg + 1, perm.begin() + vh + 1, rng);
        std::vector<std::pair<int, int>> edges;
        for (auto [a, b] : rg.h.edges) {
            int x = perm[a], y = perm[b];
            if (x > y) std::swap(x, y);
            edges.emplace_back(x, y);
        }
        RootedGraph relabeled(PatternGraph(vh, edges), vg);
        CHECK(automorphism_count(relabeled) == automorphism_count(rg));
    }
}

TEST_CASE("induced sub-pattern keeps roots and relabels the rest") {
    RootedGraph fig1d = builtin_fixture("fig1d");
    uint32_t mask = labels_to_mask({1, 6, 7, 8, 9});
    RootedGraph sub = induced_sub(fig1d, mask);
    CHECK(sub.vg() == 1);
    CHECK(sub.vh() == 5);
    CHECK(sub.eh() == 6);  // the complete part, root isolated
    CHECK(sub.eg() == 0);
    CHECK(automorphism_count(sub) == 24);

    RootedGraph fig1c = builtin_fixture("fig1c");
    RootedGraph tri = induced_sub(fig1c, labels_to_mask({1, 2, 3}));
    CHECK(serialize_rooted_graph(tri) == serialize_rooted_graph(builtin_fixture("tri_root")));
    CHECK_THROWS(induced_sub(fig1c, labels_to_mask({2, 3})));  // must contain the roots
}

TEST_CASE("rerooting moves the root set and relabels mask-first") {
    RootedGraph tri = builtin_fixture("tri_root");
    RootedGraph two = reroot(tri, labels_to_mask({1, 2}));
    CHECK(two.vg() == 2);
    CHECK(two.vh() == 3);
    CHECK(two.eg() == 1);
    CHECK(two.free_edges().size() == 2);

    RootedGraph fig1c = builtin_fixture("fig1c");
    RootedGraph moved = reroot(fig1c, labels_to_mask({1, 3}));
    CHECK(moved.vg() == 2);
    std::vector<std::pair<int, int>> want = {{1, 2}, {1, 3}, {2, 3}, {2, 4}};
    CHECK(moved.h.edges == want);
    CHECK_THROWS(reroot(fig1c, labels_to_mask({2, 3})));  // must contain current roots
}

TEST_CASE("free edge list drops exactly the root-internal edges") {
    std::mt19937 rng(34567);
    for (int it = 0; it < 60; it++) {
        RootedGraph rg = random_rooted(rng);
        auto free = rg.free_edges();
        CHECK((int)free.size() == rg.eh() - rg.eg());
        for (auto [a, b] : free) CHECK(!(rg.is_root(a) && rg.is_root(b)));
    }
}
