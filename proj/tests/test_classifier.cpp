#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "extcount/lattice.hpp"
#include "extcount/pattern_graph.hpp"

using namespace extcount;

namespace {

int popcount(uint32_t m) { return __builtin_popcount(m); }

// Independent oracle: max relative density by direct subset enumeration.
Rat m_by_enumeration(const RootedGraph& rg) {
    uint32_t roots = rg.roots_mask();
    uint32_t free = full_mask(rg.vh()) & ~roots;
    Rat best(-1);
    for (uint32_t t = free;; t = (t - 1) & free) {
        if (t != 0) {
            uint32_t s = t | roots;
            Rat d(rg.h.edge_count_within(s) - rg.eg(), popcount(s) - rg.vg());
            d.canonicalize();
            if (d > best) best = d;
        }
        if (t == 0) break;
    }
    return best;
}

RootedGraph random_rooted(std::mt19937& rng, int max_vh = 7) {
    for (;;) {
        int vh = 2 + (int)(rng() % (max_vh - 1));
        int vg = 1 + (int)(rng() % (vh - 1));
        std::vector<std::pair<int, int>> edges;
        for (int a = 1; a <= vh; a++)
            for (int b = a + 1; b <= vh; b++)
                if (rng() % 2) edges.emplace_back(a, b);
        RootedGraph rg(PatternGraph(vh, edges), vg);
        if (rg.eh() > rg.eg()) return rg;
    }
}

}  // namespace

TEST_CASE("relative density on hand-checked subsets") {
    RootedGraph tri = builtin_fixture("tri_root");
    CHECK(density(tri, labels_to_mask({1, 2, 3})) == Rat(3, 2));
    CHECK(density(tri, labels_to_mask({1, 2})) == Rat(1));
    CHECK_THROWS(density(tri, labels_to_mask({1})));     // nothing added
    CHECK_THROWS(density(tri, labels_to_mask({2, 3})));  // must contain the root

    RootedGraph fig1c = builtin_fixture("fig1c");
    CHECK(density(fig1c, labels_to_mask({1, 2, 3, 4})) == Rat(4, 3));
    CHECK(density(fig1c, labels_to_mask({1, 4})) == Rat(0));
}

TEST_CASE("lattice enumeration lists every root-containing subset") {
    RootedGraph fig1c = builtin_fixture("fig1c");
    auto nodes = enumerate_lattice(fig1c);
    REQUIRE(nodes.size() == 8u);  // 2^(4-1)
    for (size_t i = 0; i < nodes.size(); i++) {
        CHECK((nodes[i].subset & fig1c.roots_mask()) == fig1c.roots_mask());
        CHECK(nodes[i].vcount == popcount(nodes[i].subset));
        CHECK(nodes[i].ecount == fig1c.h.edge_count_within(nodes[i].subset));
        if (i) CHECK(nodes[i - 1].subset < nodes[i].subset);
        if (nodes[i].vcount > fig1c.vg())
            CHECK(nodes[i].density.to_rat() == density(fig1c, nodes[i].subset));
    }
}

TEST_CASE("max density matches subset enumeration") {
    for (const auto& name : builtin_fixture_names())
        CHECK(m_value(builtin_fixture(name)) == m_by_enumeration(builtin_fixture(name)));
    std::mt19937 rng(402211);
    for (int it = 0; it < 150; it++) {
        RootedGraph rg = random_rooted(rng);
        INFO(serialize_rooted_graph(rg));
        CHECK(m_value(rg) == m_by_enumeration(rg));
    }
}

TEST_CASE("classification of the study patterns") {
    auto rep = [](const char* name) { return classify(builtin_fixture(name)); };

    ClassificationReport a = rep("fig1a");
    CHECK(a.m == Rat(3, 2));
    CHECK(a.strictly_balanced);
    CHECK(a.grounded);
    CHECK(a.unique_primal);
    REQUIRE(a.primal_subsets.size() == 1u);
    CHECK(a.primal_subsets[0].subset == labels_to_mask({1, 2, 3}));
    CHECK(a.theorem_case == TheoremCase::StrBalGrounded);

    ClassificationReport b = rep("fig1b");
    CHECK(b.m == Rat(1));
    CHECK(b.strictly_balanced);
    CHECK(!b.grounded);
    CHECK(b.theorem_case == TheoremCase::StrBalUngrounded);

    ClassificationReport c = rep("fig1c");
    CHECK(c.m == Rat(3, 2));
    CHECK(!c.strictly_balanced);
    CHECK(c.grounded);
    CHECK(c.unique_primal);
    CHECK(c.has_grounded_primal);
    REQUIRE(c.primal_subsets.size() == 1u);
    CHECK(c.primal_subsets[0].subset == labels_to_mask({1, 2, 3}));
    CHECK(c.theorem_case == TheoremCase::UniqueGroundedPrimal);

    ClassificationReport d = rep("fig1d");
    CHECK(d.m == Rat(3, 2));
    CHECK(!d.strictly_balanced);
    CHECK(d.grounded);  // the root touches the path
    CHECK(!d.has_grounded_primal);
    CHECK(d.unique_primal);
    REQUIRE(d.primal_subsets.size() == 1u);
    CHECK(d.primal_subsets[0].subset == labels_to_mask({1, 6, 7, 8, 9}));
    CHECK(d.theorem_case == TheoremCase::NoGroundedPrimal);

    ClassificationReport e = rep("fig2e");
    CHECK(e.m == Rat(2));
    CHECK(!e.strictly_balanced);
    CHECK(!e.unique_primal);
    CHECK(e.has_grounded_primal);
    REQUIRE(e.primal_subsets.size() == 2u);
    CHECK(e.primal_subsets[0].subset == labels_to_mask({1, 2, 3, 4}));
    CHECK(e.primal_subsets[1].subset == labels_to_mask({1, 2, 3, 4, 5}));
    CHECK(e.theorem_case == TheoremCase::GeneralOnly);

    ClassificationReport f = rep("fig2f");
    CHECK(f.m == Rat(2));
    CHECK(!f.unique_primal);
    CHECK(f.has_grounded_primal);
    CHECK(f.primal_subsets.size() == 4u);
    CHECK(f.theorem_case == TheoremCase::GeneralOnly);
    CHECK(f.j_max.subset == full_mask(6));

    ClassificationReport p3 = rep("path3");
    CHECK(p3.m == Rat(3, 2));
    CHECK(p3.strictly_balanced);
    CHECK(p3.grounded);
    CHECK(p3.theorem_case == TheoremCase::StrBalGrounded);
}

TEST_CASE("case names use the wire spellings") {
    CHECK(theorem_case_name(TheoremCase::StrBalGrounded) == "ThmStrBalGrounded");
    CHECK(theorem_case_name(TheoremCase::StrBalUngrounded) == "ThmStrBalUngrounded");
    CHECK(theorem_case_name(TheoremCase::UniqueGroundedPrimal) == "ThmUniqueGroundedPrimal");
    CHECK(theorem_case_name(TheoremCase::NoGroundedPrimal) == "ThmNoGroundedPrimal");
    CHECK(theorem_case_name(TheoremCase::GeneralOnly) == "GeneralOnly");
    for (int i = 0; i < 5; i++)
        CHECK(applicable_case_name(i) == theorem_case_name((TheoremCase)i));
}

TEST_CASE("selected case is the first applicable one") {
    std::mt19937 rng(66700);
    for (int it = 0; it < 100; it++) {
        RootedGraph rg = random_rooted(rng);
        ClassificationReport rep = classify(rg);
        REQUIRE(!rep.applicable_cases.empty());
        CHECK(rep.applicable_cases.front() == (int)rep.theorem_case);
        CHECK(std::is_sorted(rep.applicable_cases.begin(), rep.applicable_cases.end()));
        // the unconditional fallback is always applicable
        CHECK(rep.applicable_cases.back() == (int)TheoremCase::GeneralOnly);
    }
}

TEST_CASE("strict balance means the whole pattern is the unique primal") {
    std::mt19937 rng(13570);
    for (int it = 0; it < 150; it++) {
        RootedGraph rg = random_rooted(rng);
        ClassificationReport rep = classify(rg);
        bool unique_improper = rep.primal_subsets.size() == 1 &&
                               rep.primal_subsets[0].subset == full_mask(rg.vh());
        CHECK(is_strictly_balanced(rg) == unique_improper);
        CHECK(rep.strictly_balanced == unique_improper);
    }
}

TEST_CASE("primal bookkeeping: union, density, groundedness") {
    std::mt19937 rng(90121);
    for (int it = 0; it < 150; it++) {
        RootedGraph rg = random_rooted(rng);
        ClassificationReport rep = classify(rg);
        REQUIRE(!rep.primal_subsets.empty());
        uint32_t uni = 0;
        bool any_grounded = false;
        for (const auto& node : rep.primal_subsets) {
            CHECK(density(rg, node.subset) == rep.m);
            uni |= node.subset;
            any_grounded = any_grounded || is_grounded_subset(rg, node.subset);
        }
        CHECK(rep.j_max.subset == uni);
        CHECK(density(rg, uni) == rep.m);  // primality is closed under union
        CHECK(rep.has_grounded_primal == any_grounded);
        CHECK(rep.unique_primal == (rep.primal_subsets.size() == 1));
        CHECK(rep.m == m_value(rg));
    }
}

TEST_CASE("groundedness of subsets") {
    RootedGraph fig1d = builtin_fixture("fig1d");
    CHECK(is_grounded(fig1d));
    CHECK(is_grounded_subset(fig1d, labels_to_mask({1, 2})));
    CHECK(!is_grounded_subset(fig1d, labels_to_mask({1, 6, 7, 8, 9})));
    CHECK(!is_grounded(builtin_fixture("fig1b")));
    CHECK(is_grounded(builtin_fixture("path3")));
}

TEST_CASE("classification is invariant under non-root relabeling") {
    std::mt19937 rng(31415);
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
        ClassificationReport r1 = classify(rg);
        ClassificationReport r2 = classify(RootedGraph(PatternGraph(vh, edges), vg));
        CHECK(r1.m == r2.m);
        CHECK(r1.strictly_balanced == r2.strictly_balanced);
        CHECK(r1.grounded == r2.grounded);
        CHECK(r1.primal_subsets.size() == r2.primal_subsets.size());
        CHECK(r1.has_grounded_primal == r2.has_grounded_primal);
        CHECK(r1.theorem_case == r2.theorem_case);
    }
}

TEST_CASE("max density after moving the roots") {
    RootedGraph tri = builtin_fixture("tri_root");
    CHECK(m_value_rooted_at(tri, labels_to_mask({1, 2})) == Rat(2));
    CHECK_THROWS(m_value_rooted_at(tri, full_mask(3)));
    // agreement with explicitly rerooted patterns
    RootedGraph fig2e = builtin_fixture("fig2e");
    uint32_t k4 = labels_to_mask({1, 2, 3, 4});
    CHECK(m_value_rooted_at(fig2e, k4) == m_value(reroot(fig2e, k4)));
}

TEST_CASE("unrooted density analysis on small patterns") {
    PatternGraph triangle(3, {{1, 2}, {1, 3}, {2, 3}});
    UnrootedAnalysis t = unrooted_analysis(triangle);
    CHECK(t.max_density == Rat(1));
    CHECK(t.balanced);
    CHECK(t.g_min == full_mask(3));
    CHECK(t.g_min_vcount == 3);
    REQUIRE(t.primal_subsets.size() == 1u);

    PatternGraph k4(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    UnrootedAnalysis k = unrooted_analysis(k4);
    CHECK(k.max_density == Rat(3, 2));
    CHECK(k.balanced);
    CHECK(k.g_min_vcount == 4);

    PatternGraph path(3, {{1, 2}, {2, 3}});
    UnrootedAnalysis p = unrooted_analysis(path);
    CHECK(p.max_density == Rat(2, 3));
    CHECK(p.balanced);

    // triangle with a pendant: the whole graph ties the triangle at density 1,
    // so it is balanced but the smallest primal is the triangle
    PatternGraph pend(4, {{1, 2}, {1, 3}, {2, 3}, {3, 4}});
    UnrootedAnalysis q = unrooted_analysis(pend);
    CHECK(q.max_density == Rat(1));
    CHECK(q.balanced);
    CHECK(q.g_min == labels_to_mask({1, 2, 3}));
    CHECK(q.g_min_vcount == 3);

    // two disjoint triangles: three primal subsets, smallest is the first triangle
    PatternGraph two(6, {{1, 2}, {1, 3}, {2, 3}, {4, 5}, {4, 6}, {5, 6}});
    UnrootedAnalysis u = unrooted_analysis(two);
    CHECK(u.max_density == Rat(1));
    CHECK(u.balanced);
    CHECK(u.primal_subsets.size() == 3u);
    CHECK(u.g_min == labels_to_mask({1, 2, 3}));

    CHECK_THROWS(unrooted_analysis(PatternGraph(3, {})));  // needs an edge
}

TEST_CASE("structured report carries the full classification") {
    RootedGraph tri = builtin_fixture("tri_root");
    auto j = nlohmann::json::parse(classification_json(tri, classify(tri)));
    CHECK(j["root_count"] == 1);
    CHECK(j["vertex_count"] == 3);
    CHECK(j["edge_count"] == 3);
    CHECK(j["root_edge_count"] == 0);
    CHECK(j["m_value"] == "3/2");
    CHECK(j["strictly_balanced"] == true);
    CHECK(j["grounded"] == true);
    CHECK(j["unique_primal"] == true);
    CHECK(j["has_grounded_primal"] == true);
    CHECK(j["theorem_case"] == "ThmStrBalGrounded");
    REQUIRE(j["primal_subsets"].size() == 1u);
    CHECK(j["primal_subsets"][0]["vertex_subset"] == std::vector<int>({1, 2, 3}));
    CHECK(j["primal_subsets"][0]["density"] == "3/2");
    CHECK(j["primal_subsets"][0]["induced_edge_count"] == 3);
    CHECK(j["j_max"]["vertex_subset"] == std::vector<int>({1, 2, 3}));
    CHECK(j["applicable_cases"][0] == "ThmStrBalGrounded");
}
