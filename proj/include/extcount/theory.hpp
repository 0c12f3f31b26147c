#pragma once

#include <cstdint>
#include <string>

#include "extcount/lattice.hpp"
#include "extcount/pattern_graph.hpp"
#include "extcount/rational.hpp"

namespace extcount {

// Number of pinned copies in the complete host on n vertices:
// (n - v_G)(n - v_G - 1)...(n - v_H + 1) / aut, exact.  Requires n >= v_H.
Int count_in_complete_graph(const RootedGraph& rg, long n);

// Expected pinned-copy count in the binomial random host:
// mu = count_in_complete_graph * p^(free edge count), exact rational.
Rat mu_exact(const RootedGraph& rg, long n, const Rat& p);

// Ordered variant (injective vertex sequences): nu = falling factorial * p^k.
// Always nu == aut * mu exactly.
Rat nu_exact(const RootedGraph& rg, long n, const Rat& p);

// n^(v_H - v_G) * p^(e_H - e_G) as a double; the asymptotic surrogate for mu.
double mu_asymp(const RootedGraph& rg, long n, double p);

struct PhiResult {
    Rat value;            // min of mu over intermediate subsets with extra edges
    uint32_t argmin = 0;  // subset attaining it (fewest vertices, then lex smallest)
    bool degenerate = false;  // p == 0 (value forced to 0)
};

// min over root-containing subsets J with e_J > e_G of mu(roots, J); the
// bottleneck scale that controls variance and lower tails.
PhiResult phi_exact(const RootedGraph& rg, long n, const Rat& p);

// (1 - p) mu^2 / phi, the variance surrogate.  Requires p in (0, 1].
Rat sigma_sq_order(const RootedGraph& rg, long n, const Rat& p);

// ceil((1 + eps) mu), exact.
Int r_star(const Rat& mu, const Rat& eps);

// Binomial point mass C(N, r) q^r (1-q)^(N-r) with N = count_in_complete_graph
// and q = p^(free edge count), evaluated in log space (double).  This is the
// reference scale for the probability of seeing exactly r* disjoint copies.
// Requires r_star <= N; p == 1 and p == 0 degenerate to exact indicators.
double binomial_reference(const RootedGraph& rg, long n, const Rat& p, const Rat& eps);

struct ThresholdQuantities {
    double eps2_mu = 0;
    double eps2_phi = 0;
    double eps2_mu_over_logn = 0;
    double eps2_phi_over_logn = 0;
};

// The scales whose comparison to log n (natural log) decides concentration.
// Requires n >= 2.
ThresholdQuantities threshold_quantities(const RootedGraph& rg, long n, const Rat& p,
                                         const Rat& eps);

}  // namespace extcount
