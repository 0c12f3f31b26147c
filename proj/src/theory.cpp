#include "extcount/theory.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace extcount {

Int count_in_complete_graph(const RootedGraph& rg, long n) {
    if (n < rg.vh())
        throw std::invalid_argument("host too small: n < pattern vertex count");
    Int ff = falling_factorial(n - rg.vg(), rg.vh() - rg.vg());
    Int aut(automorphism_count(rg));
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), ff.get_mpz_t(), aut.get_mpz_t());
    if (r != 0) throw std::logic_error("automorphism count does not divide the ordered count");
    return q;
}

static void check_p(const Rat& p) {
    if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
}

Rat mu_exact(const RootedGraph& rg, long n, const Rat& p) {
    check_p(p);
    return Rat(count_in_complete_graph(rg, n)) * rat_pow(p, rg.eh() - rg.eg());
}

Rat nu_exact(const RootedGraph& rg, long n, const Rat& p) {
    check_p(p);
    if (n < rg.vh())
        throw std::invalid_argument("host too small: n < pattern vertex count");
    return Rat(falling_factorial(n - rg.vg(), rg.vh() - rg.vg())) *
           rat_pow(p, rg.eh() - rg.eg());
}

double mu_asymp(const RootedGraph& rg, long n, double p) {
    return std::pow((double)n, rg.vh() - rg.vg()) * std::pow(p, rg.eh() - rg.eg());
}

PhiResult phi_exact(const RootedGraph& rg, long n, const Rat& p) {
    check_p(p);
    if (n < rg.vh())
        throw std::invalid_argument("host too small: n < pattern vertex count");
    PhiResult res;
    if (p == 0) {
        res.value = 0;
        res.degenerate = true;
        res.argmin = full_mask(rg.vh());
        return res;
    }
    auto nodes = enumerate_lattice(rg);
    int eg = rg.eg();
    bool any = false;
    for (auto& node : nodes) {
        if (node.ecount <= eg) continue;  // no extra edges, no scale
        RootedGraph sub = induced_sub(rg, node.subset);
        Rat mu_j = mu_exact(sub, n, p);
        if (!any || mu_j < res.value ||
            (mu_j == res.value &&
             (node.vcount < std::popcount(res.argmin) ||
              (node.vcount == std::popcount(res.argmin) && node.subset < res.argmin)))) {
            res.value = mu_j;
            res.argmin = node.subset;
            any = true;
        }
    }
    if (!any) throw std::logic_error("no subset with extra edges (pattern has no free edge)");
    return res;
}

Rat sigma_sq_order(const RootedGraph& rg, long n, const Rat& p) {
    check_p(p);
    if (p == 0) throw std::invalid_argument("variance surrogate needs p > 0");
    Rat mu = mu_exact(rg, n, p);
    Rat phi = phi_exact(rg, n, p).value;
    return (Rat(1) - p) * mu * mu / phi;
}

Int r_star(const Rat& mu, const Rat& eps) {
    if (mu < 0) throw std::invalid_argument("mu must be nonnegative");
    if (eps <= 0 || eps > 1) throw std::invalid_argument("r* needs eps in (0, 1]");
    return ceil_rat((Rat(1) + eps) * mu);
}

double binomial_reference(const RootedGraph& rg, long n, const Rat& p, const Rat& eps) {
    check_p(p);
    Int N = count_in_complete_graph(rg, n);
    Rat q = rat_pow(p, rg.eh() - rg.eg());
    Int r = r_star(mu_exact(rg, n, p), eps);
    if (r > N) throw std::invalid_argument("r* exceeds the complete-graph count");
    if (q == 1) return r == N ? 1.0 : 0.0;
    if (q == 0) return r == 0 ? 1.0 : 0.0;
    double Nd = N.get_d(), rd = r.get_d(), qd = q.get_d();
    double log_pmf = std::lgamma(Nd + 1) - std::lgamma(rd + 1) - std::lgamma(Nd - rd + 1) +
                     rd * std::log(qd) + (Nd - rd) * std::log1p(-qd);
    return std::exp(log_pmf);
}

ThresholdQuantities threshold_quantities(const RootedGraph& rg, long n, const Rat& p,
                                         const Rat& eps) {
    if (n < 2) throw std::invalid_argument("threshold quantities need n >= 2");
    ThresholdQuantities t;
    double e2 = eps.get_d() * eps.get_d();
    double logn = std::log((double)n);
    t.eps2_mu = e2 * mu_exact(rg, n, p).get_d();
    t.eps2_phi = e2 * phi_exact(rg, n, p).value.get_d();
    t.eps2_mu_over_logn = t.eps2_mu / logn;
    t.eps2_phi_over_logn = t.eps2_phi / logn;
    return t;
}

}  // namespace extcount
