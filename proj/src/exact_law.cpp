#include "extcount/exact_law.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <thread>

#include "extcount/counting.hpp"
#include "extcount/host_graph.hpp"
#include "extcount/theory.hpp"

namespace extcount {

Rat ExactLaw::prob(long v) const {
    auto it = pmf.find(v);
    return it == pmf.end() ? Rat(0) : it->second;
}

Rat ExactLaw::mean() const {
    Rat m = 0;
    for (auto& [v, p] : pmf) m += Rat(v) * p;
    return m;
}

Rat ExactLaw::variance() const {
    Rat m = mean(), s = 0;
    for (auto& [v, p] : pmf) s += Rat(v) * Rat(v) * p;
    return s - m * m;
}

Rat ExactLaw::cdf(long v) const {
    Rat c = 0;
    for (auto& [val, p] : pmf) {
        if (val > v) break;
        c += p;
    }
    return c;
}

bool ExactLaw::sums_to_one() const {
    Rat s = 0;
    for (auto& [v, p] : pmf) s += p;
    return s == 1;
}

namespace {

struct PairTable {
    int n = 0, count = 0;
    int a[28], b[28];
    explicit PairTable(long n_) : n((int)n_) {
        for (int i = 1; i <= n; i++)
            for (int j = i + 1; j <= n; j++) {
                a[count] = i;
                b[count] = j;
                count++;
            }
    }
};

// Small-host counting engine on uint32 adjacency rows, with incremental
// recount of embeddings through one toggled host edge.
struct IncrementalCounter {
    const RootedGraph& rg;
    int n, vg, vh;
    bool roots_fixed;  // pins (1..vg) vs. free roots bucketed per tuple
    std::vector<uint32_t> fadj;                // pattern free adjacency
    std::vector<std::pair<int, int>> fedges;   // directed pairs, both orientations
    struct Order {
        std::vector<int> order;
        std::vector<std::vector<int>> prev;
    };
    std::vector<Order> comp;   // completion order per directed free edge
    Order full;                // all free pattern vertices (for recounts)
    uint32_t hadj[9] = {0};    // host adjacency rows
    uint32_t all = 0;
    std::vector<int64_t> y;    // per root tuple (ordered), or single slot
    int img[17] = {0};
    uint32_t used = 0;

    IncrementalCounter(const RootedGraph& rg_, long n_, bool fixed)
        : rg(rg_), n((int)n_), vg(rg_.vg()), vh(rg_.vh()), roots_fixed(fixed) {
        fadj.assign(vh + 1, 0);
        for (auto& [p, q] : rg.free_edges()) {
            fadj[p] |= vmask(q);
            fadj[q] |= vmask(p);
            fedges.emplace_back(p, q);
            fedges.emplace_back(q, p);
        }
        for (auto& [u, v] : fedges) {
            uint32_t pre = vmask(u) | vmask(v);
            if (roots_fixed) pre |= full_mask(vg);
            comp.push_back(make_order(pre));
        }
        full = make_order(roots_fixed ? full_mask(vg) : 0u);
        for (int v = 1; v <= n; v++) all |= vmask(v);
        y.assign(tuple_slots(), 0);
    }

    size_t tuple_slots() const {
        if (roots_fixed || vg == 0) return 1;
        size_t s = 1;
        for (int i = 0; i < vg; i++) s *= n;
        return s;  // ordered tuples indexed in base n (with gaps)
    }

    Order make_order(uint32_t preplaced) const {
        Order o;
        uint32_t placed = preplaced;
        int remaining = vh - std::popcount(preplaced & full_mask(vh));
        for (int step = 0; step < remaining; step++) {
            int best = -1, bc = -1, bd = -1;
            for (int v = 1; v <= vh; v++) {
                if (placed & vmask(v)) continue;
                int c = std::popcount(fadj[v] & placed);
                int d = rg.h.degree(v);
                if (c > bc || (c == bc && d > bd)) best = v, bc = c, bd = d;
            }
            o.order.push_back(best);
            o.prev.push_back(mask_to_labels(fadj[best] & placed));
            placed |= vmask(best);
        }
        return o;
    }

    size_t tuple_index() const {
        if (roots_fixed || vg == 0) return 0;
        size_t idx = 0;
        for (int i = 1; i <= vg; i++) idx = idx * n + (img[i] - 1);
        return idx;
    }

    void rec(const Order& o, size_t level, int sign) {
        if (level == o.order.size()) {
            y[tuple_index()] += sign;
            return;
        }
        int v = o.order[level];
        uint32_t cand = all & ~used;
        for (int u : o.prev[level]) cand &= hadj[img[u]];
        while (cand) {
            int w = std::countr_zero(cand);
            cand &= cand - 1;
            img[v] = w;
            used |= vmask(w);
            rec(o, level + 1, sign);
            used &= ~vmask(w);
            img[v] = 0;
        }
    }

    void recount_all() {
        std::fill(y.begin(), y.end(), 0);
        used = 0;
        std::fill(std::begin(img), std::end(img), 0);
        if (roots_fixed) {
            for (int r = 1; r <= vg; r++) {
                img[r] = r;
                used |= vmask(r);
            }
            // pinned root edges to other roots are root-internal: never constrain
            rec(full, 0, +1);
            used = 0;
            std::fill(std::begin(img), std::end(img), 0);
        } else {
            rec(full, 0, +1);
        }
    }

    // embeddings through host edge (a, b); the host bit for (a,b) must be set
    void delta(int a, int b, int sign) {
        for (size_t f = 0; f < fedges.size(); f++) {
            int u = fedges[f].first, v = fedges[f].second;
            // try img[u] = a, img[v] = b
            if (roots_fixed) {
                if (u <= vg && u != a) continue;
                if (v <= vg && v != b) continue;
                if (u > vg && a <= vg) continue;  // non-root image collides with a pin
                if (v > vg && b <= vg) continue;
            }
            // edges between {u, v} and preplaced roots must already hold
            bool ok = true;
            if (roots_fixed) {
                uint32_t ru = fadj[u] & full_mask(vg), rv = fadj[v] & full_mask(vg);
                while (ru && ok) {
                    int r = std::countr_zero(ru);
                    ru &= ru - 1;
                    if (r != v && !((hadj[r] >> a) & 1u)) ok = false;
                }
                while (rv && ok) {
                    int r = std::countr_zero(rv);
                    rv &= rv - 1;
                    if (r != u && !((hadj[r] >> b) & 1u)) ok = false;
                }
            }
            if (!ok) continue;
            used = 0;
            std::fill(std::begin(img), std::end(img), 0);
            img[u] = a;
            img[v] = b;
            used = vmask(a) | vmask(b);
            if (roots_fixed)
                for (int r = 1; r <= vg; r++) {
                    if (r == u || r == v) continue;
                    img[r] = r;
                    used |= vmask(r);
                }
            rec(comp[f], 0, sign);
        }
        used = 0;
        std::fill(std::begin(img), std::end(img), 0);
    }

    int64_t max_y() const {
        int64_t m = 0;
        if (roots_fixed || vg == 0) return y[0];
        // only distinct-coordinate tuples are meaningful; others stay zero
        for (size_t i = 0; i < y.size(); i++) m = std::max(m, y[i]);
        return m;
    }
};

using Tables = std::map<long, std::vector<uint64_t>>;

void merge_tables(Tables& into, const Tables& from) {
    for (auto& [v, vec] : from) {
        auto& dst = into[v];
        if (dst.size() < vec.size()) dst.resize(vec.size(), 0);
        for (size_t i = 0; i < vec.size(); i++) dst[i] += vec[i];
    }
}

uint64_t max_over_tuples(const ExtensionCounter& ec, const HostGraph& host) {
    const RootedGraph& rg = ec.rooted();
    uint64_t best = 0;
    RootTuple x(rg.vg());
    std::vector<char> used(host.n + 1, 0);
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == rg.vg()) {
            best = std::max(best, ec.count_unordered(host, x));
            return;
        }
        for (long v = 1; v <= host.n; v++) {
            if (used[v]) continue;
            used[v] = 1;
            x[pos] = v;
            self(self, pos + 1);
            used[v] = 0;
        }
    };
    rec(rec, 0);
    return best;
}

// Full recount sweep over one contiguous range of host bitmasks.
Tables sweep_full(const RootedGraph& rg, long n, LawTarget target, uint64_t r, uint64_t m0,
                  uint64_t m1) {
    PairTable pairs(n);
    ExtensionCounter ec(rg);
    RootTuple pins;
    for (int i = 1; i <= rg.vg(); i++) pins.push_back(i);
    Tables tables;
    for (uint64_t mask = m0; mask < m1; mask++) {
        HostGraph host(n);
        for (int k = 0; k < pairs.count; k++)
            if ((mask >> k) & 1ull) host.add_edge(pairs.a[k], pairs.b[k]);
        long value = 0;
        switch (target) {
            case LawTarget::FixedRoot:
                value = (long)ec.count_unordered(host, pins);
                break;
            case LawTarget::MaxOverRoots:
                value = (long)max_over_tuples(ec, host);
                break;
            case LawTarget::DisjointEvent:
                value = disjoint_event_check(host, rg, pins, r) ? 1 : 0;
                break;
        }
        auto& vec = tables[value];
        if (vec.empty()) vec.assign(pairs.count + 1, 0);
        vec[std::popcount(mask)]++;
    }
    return tables;
}

// Gray-code sweep with incremental updates over host indices [k0, k1).
Tables sweep_incremental(const RootedGraph& rg, long n, LawTarget target, uint64_t k0,
                         uint64_t k1) {
    if (k0 >= k1) return {};
    PairTable pairs(n);
    IncrementalCounter ic(rg, n, target == LawTarget::FixedRoot);
    uint64_t aut = automorphism_count(rg);
    uint64_t gray0 = k0 ^ (k0 >> 1);
    for (int k = 0; k < pairs.count; k++)
        if ((gray0 >> k) & 1ull) {
            ic.hadj[pairs.a[k]] |= vmask(pairs.b[k]);
            ic.hadj[pairs.b[k]] |= vmask(pairs.a[k]);
        }
    ic.recount_all();
    int edges = std::popcount(gray0);
    Tables tables;
    auto record = [&](int64_t ymax) {
        if (ymax % aut != 0)
            throw std::logic_error("ordered count not divisible by automorphisms");
        auto& vec = tables[(long)(ymax / (int64_t)aut)];
        if (vec.empty()) vec.assign(pairs.count + 1, 0);
        vec[edges]++;
    };
    record(ic.max_y());
    for (uint64_t k = k0 + 1; k < k1; k++) {
        int bit = std::countr_zero(k);
        int a = pairs.a[bit], b = pairs.b[bit];
        bool on = !((ic.hadj[a] >> b) & 1u);
        if (on) {
            ic.hadj[a] |= vmask(b);
            ic.hadj[b] |= vmask(a);
            ic.delta(a, b, +1);
            edges++;
        } else {
            ic.delta(a, b, -1);
            ic.hadj[a] &= ~vmask(b);
            ic.hadj[b] &= ~vmask(a);
            edges--;
        }
        record(ic.max_y());
    }
    return tables;
}

}  // namespace

ExactEnumeration::ExactEnumeration(const RootedGraph& rg, long n, LawTarget target, uint64_t r,
                                   int threads, Sweep sweep) {
    if (n < 1) throw std::invalid_argument("exact law needs n >= 1");
    n_ = n;
    pair_count_ = (int)(n * (n - 1) / 2);
    if (pair_count_ > 28)
        throw std::invalid_argument("exact law limited to hosts with at most 28 vertex pairs");
    bool incremental = sweep == Sweep::Auto ? n > 6 : sweep == Sweep::Incremental;
    if (target == LawTarget::DisjointEvent && incremental)
        throw std::invalid_argument("disjoint-copies law needs the full recount path (n <= 6)");
    if (target == LawTarget::MaxOverRoots && incremental && rg.vg() > 2)
        throw std::invalid_argument("max-law incremental path supports at most two roots");
    if (!incremental && n > 6)
        throw std::invalid_argument("full recount limited to n <= 6");
    uint64_t total = 1ull << pair_count_;
    int nt = std::max(1, std::min<int>(threads, 16));
    std::vector<Tables> parts(nt);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; t++) {
        uint64_t k0 = total / nt * t + std::min<uint64_t>(t, total % nt);
        uint64_t k1 = total / nt * (t + 1) + std::min<uint64_t>(t + 1, total % nt);
        pool.emplace_back([&, t, k0, k1] {
            parts[t] = incremental ? sweep_incremental(rg, n_, target, k0, k1)
                                   : sweep_full(rg, n_, target, r, k0, k1);
        });
    }
    for (auto& th : pool) th.join();
    for (int t = 0; t < nt; t++) merge_tables(tables_, parts[t]);
}

ExactLaw ExactEnumeration::law(const Rat& p) const {
    if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
    // weight per edge count: p^m (1-p)^(C-m)
    std::vector<Rat> weight(pair_count_ + 1);
    for (int m = 0; m <= pair_count_; m++)
        weight[m] = rat_pow(p, m) * rat_pow(Rat(1) - p, pair_count_ - m);
    ExactLaw law;
    for (auto& [v, vec] : tables_) {
        Rat prob = 0;
        for (int m = 0; m <= pair_count_ && m < (int)vec.size(); m++)
            if (vec[m]) prob += Rat((unsigned long)vec[m]) * weight[m];
        if (prob != 0) law.pmf[v] = prob;
    }
    return law;
}

ExactLaw exact_distribution(const RootedGraph& rg, long n, const Rat& p, LawTarget target,
                            uint64_t r, int threads) {
    return ExactEnumeration(rg, n, target, r, threads).law(p);
}

}  // namespace extcount
