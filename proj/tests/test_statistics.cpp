#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "extcount/lattice.hpp"
#include "extcount/pattern_graph.hpp"
#include "extcount/rational.hpp"
#include "extcount/theory.hpp"

using namespace extcount;

namespace {

const std::vector<Rat> kPs = {Rat(1, 4), Rat(1, 2), Rat(9, 10)};

// Exact binomial point mass, computed directly from big-integer binomials.
double binref_by_rationals(const RootedGraph& rg, long n, const Rat& p, const Rat& eps) {
    Int N = count_in_complete_graph(rg, n);
    Rat q = rat_pow(p, rg.eh() - rg.eg());
    Int r = ceil_rat((Rat(1) + eps) * mu_exact(rg, n, p));
    Int rest = N - r;
    Rat mass = Rat(binom(N.get_si(), r.get_si())) * rat_pow(q, r.get_ui()) *
               rat_pow(Rat(1) - q, rest.get_ui());
    return mass.get_d();
}

}  // namespace

TEST_CASE("hand-checked scales: rooted triangle at n = 5, p = 1/2") {
    RootedGraph tri = builtin_fixture("tri_root");
    Rat p(1, 2);
    CHECK(count_in_complete_graph(tri, 5) == 6);
    CHECK(mu_exact(tri, 5, p) == Rat(3, 4));
    CHECK(nu_exact(tri, 5, p) == Rat(3, 2));
    PhiResult phi = phi_exact(tri, 5, p);
    CHECK(phi.value == Rat(3, 4));
    CHECK(phi.argmin == labels_to_mask({1, 2, 3}));
    CHECK(!phi.degenerate);
    CHECK(sigma_sq_order(tri, 5, p) == Rat(3, 8));
}

TEST_CASE("hand-checked scales: two-rooted path at n = 6, p = 1/2") {
    RootedGraph p3 = builtin_fixture("path3");
    Rat p(1, 2);
    CHECK(count_in_complete_graph(p3, 6) == 12);  // automorphism-free pattern
    CHECK(mu_exact(p3, 6, p) == Rat(3, 2));
    PhiResult phi = phi_exact(p3, 6, p);
    CHECK(phi.value == Rat(3, 2));
    CHECK(phi.argmin == full_mask(4));
}

TEST_CASE("complete-host count needs enough vertices") {
    RootedGraph tri = builtin_fixture("tri_root");
    CHECK(count_in_complete_graph(tri, 3) == 1);
    CHECK_THROWS(count_in_complete_graph(tri, 2));
    RootedGraph fig1d = builtin_fixture("fig1d");
    CHECK_THROWS(count_in_complete_graph(fig1d, 8));
    // falling factorial over the automorphism count, spot-checked
    CHECK(count_in_complete_graph(fig1d, 9) == falling_factorial(8, 8) / 6);
}

TEST_CASE("ordered expectation is the automorphism multiple of the unordered one") {
    for (const auto& name : builtin_fixture_names()) {
        RootedGraph rg = builtin_fixture(name);
        uint64_t aut = automorphism_count(rg);
        for (long n = rg.vh(); n <= rg.vh() + 4; n++)
            for (const Rat& p : kPs)
                CHECK(nu_exact(rg, n, p) == Rat((unsigned long)aut) * mu_exact(rg, n, p));
    }
}

TEST_CASE("ordered expectations factor through every intermediate subset") {
    for (const auto& name : builtin_fixture_names()) {
        RootedGraph rg = builtin_fixture(name);
        uint32_t roots = rg.roots_mask(), full = full_mask(rg.vh());
        uint32_t free = full & ~roots;
        for (uint32_t t = (free - 1) & free; t != 0; t = (t - 1) & free) {
            uint32_t mask = t | roots;  // strictly between the roots and everything
            RootedGraph lower = induced_sub(rg, mask);
            RootedGraph upper = reroot(rg, mask);
            for (long n : {(long)rg.vh(), (long)rg.vh() + 3})
                for (const Rat& p : kPs) {
                    INFO(name << " mask=" << mask << " n=" << n);
                    CHECK(nu_exact(lower, n, p) * nu_exact(upper, n, p) == nu_exact(rg, n, p));
                }
        }
    }
}

TEST_CASE("expected count is monotone in p and in n") {
    RootedGraph fig2e = builtin_fixture("fig2e");
    Rat prev(-1);
    for (const Rat& p : {Rat(0), Rat(1, 8), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)}) {
        Rat m = mu_exact(fig2e, 9, p);
        CHECK(m >= prev);
        prev = m;
    }
    prev = Rat(-1);
    for (long n = 5; n <= 12; n++) {
        Rat m = mu_exact(fig2e, n, Rat(1, 3));
        CHECK(m > prev);
        prev = m;
    }
    CHECK(mu_exact(fig2e, 9, Rat(0)) == 0);
    CHECK(mu_exact(fig2e, 9, Rat(1)) == count_in_complete_graph(fig2e, 9));
}

TEST_CASE("asymptotic surrogate ignores automorphisms and falling factorials") {
    RootedGraph tri = builtin_fixture("tri_root");
    CHECK(mu_asymp(tri, 100, 0.5) == 1250.0);  // 100^2 * (1/2)^3
    RootedGraph p3 = builtin_fixture("path3");
    CHECK(mu_asymp(p3, 10, 0.5) == doctest::Approx(100.0 * 0.125).epsilon(1e-12));
    // surrogate >= exact expectation, always
    for (const auto& name : builtin_fixture_names()) {
        RootedGraph rg = builtin_fixture(name);
        for (long n = rg.vh(); n <= rg.vh() + 3; n++)
            CHECK(mu_asymp(rg, n, 0.5) >= mu_exact(rg, n, Rat(1, 2)).get_d());
    }
}

TEST_CASE("bottleneck scale: minimum location moves with p") {
    RootedGraph tri = builtin_fixture("tri_root");
    // dense: the single-edge subset is cheapest
    PhiResult dense = phi_exact(tri, 10, Rat(3, 4));
    CHECK(dense.value == Rat(27, 4));
    CHECK(dense.argmin == labels_to_mask({1, 2}));
    // sparse: the full triangle is cheapest
    PhiResult sparse = phi_exact(tri, 10, Rat(1, 4));
    CHECK(sparse.value == Rat(9, 16));
    CHECK(sparse.argmin == labels_to_mask({1, 2, 3}));
    // exact tie at p = 1/2: fewest vertices wins, then lexicographic order
    PhiResult tie = phi_exact(tri, 10, Rat(1, 2));
    CHECK(tie.value == Rat(9, 2));
    CHECK(tie.argmin == labels_to_mask({1, 2}));

    PhiResult zero = phi_exact(tri, 10, Rat(0));
    CHECK(zero.degenerate);
    CHECK(zero.value == 0);
}

TEST_CASE("bottleneck scale never exceeds the expectation") {
    for (const auto& name : builtin_fixture_names()) {
        RootedGraph rg = builtin_fixture(name);
        for (long n = rg.vh(); n <= rg.vh() + 3; n++)
            for (const Rat& p : kPs) CHECK(phi_exact(rg, n, p).value <= mu_exact(rg, n, p));
    }
}

TEST_CASE("variance surrogate") {
    RootedGraph tri = builtin_fixture("tri_root");
    CHECK(sigma_sq_order(tri, 5, Rat(1, 2)) == Rat(3, 8));
    CHECK(sigma_sq_order(tri, 5, Rat(1)) == 0);  // no randomness left
    CHECK_THROWS(sigma_sq_order(tri, 5, Rat(0)));
}

TEST_CASE("deviation target count r*") {
    CHECK(r_star(Rat(3, 4), Rat(1, 2)) == 2);   // ceil(9/8)
    CHECK(r_star(Rat(8), Rat(1, 4)) == 10);     // lands exactly on an integer
    CHECK(r_star(Rat(8), Rat(1)) == 16);
    CHECK(r_star(Rat(0), Rat(1, 2)) == 0);
    CHECK_THROWS(r_star(Rat(1), Rat(0)));
    CHECK_THROWS(r_star(Rat(1), Rat(3, 2)));  // the band construction needs eps <= 1
    CHECK_THROWS(r_star(Rat(-1), Rat(1, 2)));
}

TEST_CASE("binomial reference against exact rational evaluation") {
    RootedGraph tri = builtin_fixture("tri_root");
    // frozen: C(10,2) (1/8)^2 (7/8)^8 = 259416045 / 2^30
    double want = 259416045.0 / 1073741824.0;
    CHECK(binomial_reference(tri, 6, Rat(1, 2), Rat(1, 2)) ==
          doctest::Approx(want).epsilon(1e-9));
    RootedGraph p3 = builtin_fixture("path3");
    CHECK(binomial_reference(p3, 6, Rat(1, 2), Rat(1, 4)) ==
          doctest::Approx(0.271296687918948).epsilon(1e-9));
    // sweep: log-space evaluation tracks the exact value everywhere
    for (const auto& name : builtin_fixture_names()) {
        RootedGraph rg = builtin_fixture(name);
        for (long n = rg.vh(); n <= rg.vh() + 2; n++)
            for (const Rat& p : {Rat(1, 4), Rat(1, 2)})
                for (const Rat& eps : {Rat(1, 4), Rat(1)}) {
                    Int N = count_in_complete_graph(rg, n);
                    if (r_star(mu_exact(rg, n, p), eps) > N) continue;
                    INFO(name << " n=" << n);
                    double got = binomial_reference(rg, n, p, eps);
                    double want2 = binref_by_rationals(rg, n, p, eps);
                    CHECK(got == doctest::Approx(want2).epsilon(1e-9));
                }
    }
}

TEST_CASE("binomial reference degenerate probabilities") {
    RootedGraph tri = builtin_fixture("tri_root");
    // p = 0: zero copies almost surely, and r* = 0
    CHECK(binomial_reference(tri, 6, Rat(0), Rat(1, 2)) == 1.0);
    // p = 1: the count is pinned at N but r* > N, so the event is infeasible
    CHECK_THROWS(binomial_reference(tri, 6, Rat(1), Rat(1, 2)));
}

TEST_CASE("threshold quantities match their definitions") {
    RootedGraph tri = builtin_fixture("tri_root");
    Rat p(1, 2), eps(1, 4);
    ThresholdQuantities t = threshold_quantities(tri, 100, p, eps);
    double mu = mu_exact(tri, 100, p).get_d();
    double phi = phi_exact(tri, 100, p).value.get_d();
    CHECK(t.eps2_mu == doctest::Approx(0.0625 * mu).epsilon(1e-12));
    CHECK(t.eps2_phi == doctest::Approx(0.0625 * phi).epsilon(1e-12));
    CHECK(t.eps2_mu_over_logn == doctest::Approx(t.eps2_mu / std::log(100.0)).epsilon(1e-12));
    CHECK(t.eps2_phi_over_logn == doctest::Approx(t.eps2_phi / std::log(100.0)).epsilon(1e-12));
    CHECK_THROWS(threshold_quantities(tri, 1, p, eps));
}
