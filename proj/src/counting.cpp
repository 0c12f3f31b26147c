#include "extcount/counting.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace extcount {

namespace {

std::vector<uint32_t> free_adjacency(const RootedGraph& rg) {
    std::vector<uint32_t> adj(rg.vh() + 1, 0);
    for (auto& [a, b] : rg.free_edges()) {
        adj[a] |= vmask(b);
        adj[b] |= vmask(a);
    }
    return adj;
}

// Static visit order: most free edges into the placed set, then higher
// pattern degree, then lower label.  `preplaced` is the root mask for rooted
// counting, 0 for the global pass.
void build_order(const RootedGraph& rg, uint32_t preplaced, std::vector<int>& order,
                 std::vector<std::vector<int>>& prev) {
    auto fadj = free_adjacency(rg);
    uint32_t placed = preplaced;
    order.clear();
    prev.clear();
    int total = rg.vh() - std::popcount(preplaced);
    for (int step = 0; step < total; step++) {
        int best = -1, best_con = -1, best_deg = -1;
        for (int v = 1; v <= rg.vh(); v++) {
            if (placed & vmask(v)) continue;
            int con = std::popcount(fadj[v] & placed);
            int deg = rg.h.degree(v);
            if (con > best_con || (con == best_con && deg > best_deg)) {
                best = v;
                best_con = con;
                best_deg = deg;
            }
        }
        order.push_back(best);
        prev.push_back(mask_to_labels(fadj[best] & placed));
        placed |= vmask(best);
    }
}

}  // namespace

// All traversal state for one counting call; separate engines per host mode.
struct CountingImpl {
    const HostGraph& host;
    const std::vector<int>& order;
    const std::vector<std::vector<int>>& prev;
    std::vector<long> img;  // pattern label -> host vertex (0 = unset)

    // candidate-set reuse: level l's constraint set may extend an earlier
    // level's, whose computed candidates are still valid on the current path;
    // base_[l] names that level (-1: none) and rem_[l] the leftover labels
    std::vector<int> base_;
    std::vector<std::vector<int>> rem_;

    // bitset engine
    std::vector<uint64_t> used, full, scratch;
    // list engine
    std::vector<std::vector<int>> buf;
    std::vector<int> tmp;

    // enumeration sinks
    uint64_t count = 0;
    int root_label = 0;          // global mode, root_count == 1
    uint64_t* bucket = nullptr;  // per-root or per-vertex tallies
    bool per_vertex = false;     // credit every image vertex (unrooted patterns)
    // full-embedding sink (listing); return false to abort
    bool (*on_embedding)(CountingImpl&, void*) = nullptr;
    void* sink_ctx = nullptr;
    bool aborted = false;

    CountingImpl(const HostGraph& h, const std::vector<int>& o,
                 const std::vector<std::vector<int>>& p, int vh)
        : host(h), order(o), prev(p), img(vh + 1, 0) {
        size_t levels = order.size();
        base_.assign(levels, -1);
        rem_.resize(levels);
        std::vector<std::pair<uint32_t, int>> stored;  // owned constraint sets
        for (size_t l = 0; l < levels; l++) {
            uint32_t s = 0;
            for (int r : prev[l]) s |= vmask(r);
            uint32_t covered = 0;
            for (auto& [m, lv] : stored)
                if ((m & ~s) == 0 && std::popcount(m) > std::popcount(covered)) {
                    covered = m;
                    base_[l] = lv;
                }
            rem_[l] = mask_to_labels(s & ~covered);
            if (prev[l].size() >= 2 && !rem_[l].empty()) stored.push_back({s, (int)l});
        }
        if (host.bitset_mode) {
            used.assign(host.words, 0);
            full.assign(host.words, 0);
            for (long v = 1; v <= host.n; v++) full[v >> 6] |= 1ull << (v & 63);
            scratch.assign((size_t)host.words * (levels + 1), 0);
        } else {
            buf.assign(levels + 1, {});
        }
    }

    void mark(long v, bool on) {
        if (on)
            used[v >> 6] |= 1ull << (v & 63);
        else
            used[v >> 6] &= ~(1ull << (v & 63));
    }

    void leaf_emit(long v, size_t level) {
        if (on_embedding) {
            img[order[level]] = v;
            if (!on_embedding(*this, sink_ctx)) aborted = true;
            img[order[level]] = 0;
            return;
        }
        count++;
        if (bucket) {
            if (per_vertex) {
                for (size_t l = 0; l < level; l++) bucket[img[order[l]]]++;
                bucket[v]++;
            } else {
                bucket[order[level] == root_label ? v : img[root_label]]++;
            }
        }
    }

    void rec_bitset(size_t level) {
        if (aborted) return;
        uint64_t* cand = scratch.data() + host.words * level;
        if (prev[level].empty()) {
            for (long w = 0; w < host.words; w++) cand[w] = full[w] & ~used[w];
        } else {
            // the base scratch was masked with an older (smaller) used set;
            // re-masking with the current one keeps it exact
            const auto& rm = rem_[level];
            size_t i = 0;
            const uint64_t* src;
            if (base_[level] >= 0) {
                src = scratch.data() + host.words * base_[level];
            } else {
                src = host.row(img[rm[0]]);
                i = 1;
            }
            for (long w = 0; w < host.words; w++) cand[w] = src[w] & ~used[w];
            for (; i < rm.size(); i++) {
                const uint64_t* ri = host.row(img[rm[i]]);
                for (long w = 0; w < host.words; w++) cand[w] &= ri[w];
            }
        }
        bool last = level + 1 == order.size();
        if (last && !on_embedding &&
            (!bucket || (!per_vertex && order[level] != root_label))) {
            // close the last level by popcount
            uint64_t c = 0;
            for (long w = 0; w < host.words; w++) c += __builtin_popcountll(cand[w]);
            count += c;
            if (bucket) bucket[img[root_label]] += c;
            return;
        }
        for (long w = 0; w < host.words && !aborted; w++) {
            uint64_t bits = cand[w];
            while (bits) {
                long v = w * 64 + __builtin_ctzll(bits);
                bits &= bits - 1;
                if (last) {
                    leaf_emit(v, level);
                    if (aborted) return;
                    continue;
                }
                img[order[level]] = v;
                mark(v, true);
                rec_bitset(level + 1);
                mark(v, false);
                img[order[level]] = 0;
                if (aborted) return;
            }
        }
    }

    bool used_list(long v) const {
        for (long u : img)
            if (u == v) return true;
        return false;
    }

    static void intersect_sorted(const std::vector<int>& a, const std::vector<int>& b,
                                 std::vector<int>& out) {
        const std::vector<int>*s = &a, *l = &b;
        if (s->size() > l->size()) std::swap(s, l);
        if (s->size() * 16 < l->size()) {
            for (int v : *s)
                if (std::binary_search(l->begin(), l->end(), v)) out.push_back(v);
        } else {
            std::set_intersection(s->begin(), s->end(), l->begin(), l->end(),
                                  std::back_inserter(out));
        }
    }

    void rec_lists(size_t level) {
        if (aborted) return;
        bool last = level + 1 == order.size();
        auto visit = [&](long v) {
            if (last) {
                leaf_emit(v, level);
                return;
            }
            img[order[level]] = v;
            rec_lists(level + 1);
            img[order[level]] = 0;
        };
        if (prev[level].empty()) {
            for (long v = 1; v <= host.n && !aborted; v++)
                if (!used_list(v)) visit(v);
            return;
        }
        const auto& rm = rem_[level];
        size_t i = 0;
        const std::vector<int>* cand;
        if (base_[level] >= 0) {
            cand = &buf[base_[level]];
        } else {
            cand = &host.lists[img[rm[0]]];
            i = 1;
        }
        // chained intersections land in buf[level] so deeper levels can reuse
        for (; i < rm.size(); i++) {
            tmp.clear();
            intersect_sorted(*cand, host.lists[img[rm[i]]], tmp);
            buf[level].swap(tmp);
            cand = &buf[level];
        }
        for (size_t k = 0; k < cand->size() && !aborted; k++) {
            long v = (*cand)[k];
            if (!used_list(v)) visit(v);
        }
    }

    void run() {
        if (order.empty()) {  // nothing free to place
            if (on_embedding) {
                if (!on_embedding(*this, sink_ctx)) aborted = true;
            } else {
                count = 1;
            }
            return;
        }
        if (host.bitset_mode)
            rec_bitset(0);
        else
            rec_lists(0);
    }
};

ExtensionCounter::ExtensionCounter(const RootedGraph& rg) : rg_(rg) {
    aut_ = automorphism_count(rg_);
    build_order(rg_, rg_.roots_mask(), order_rooted_, prev_rooted_);
    build_order(rg_, 0, order_global_, prev_global_);
}

static void check_tuple(const RootedGraph& rg, const HostGraph& host, const RootTuple& x) {
    if ((int)x.size() != rg.vg())
        throw std::invalid_argument("root tuple size must equal the root count");
    for (size_t i = 0; i < x.size(); i++) {
        if (x[i] < 1 || x[i] > host.n)
            throw std::invalid_argument("root tuple vertex out of range");
        for (size_t j = i + 1; j < x.size(); j++)
            if (x[i] == x[j]) throw std::invalid_argument("root tuple vertices must be distinct");
    }
}

uint64_t ExtensionCounter::count_ordered(const HostGraph& host, const RootTuple& x) const {
    check_tuple(rg_, host, x);
    if (host.n < rg_.vh()) return 0;
    CountingImpl impl(host, order_rooted_, prev_rooted_, rg_.vh());
    for (int i = 0; i < rg_.vg(); i++) {
        impl.img[i + 1] = x[i];
        if (host.bitset_mode) impl.mark(x[i], true);
    }
    impl.run();
    return impl.count;
}

uint64_t ExtensionCounter::count_unordered(const HostGraph& host, const RootTuple& x) const {
    uint64_t y = count_ordered(host, x);
    if (y % aut_ != 0) throw std::logic_error("ordered count not divisible by automorphisms");
    return y / aut_;
}

std::vector<uint64_t> ExtensionCounter::count_all_roots(const HostGraph& host) const {
    if (rg_.vg() != 1)
        throw std::invalid_argument("all-roots pass supports exactly one root");
    std::vector<uint64_t> counts(host.n + 1, 0);
    if (host.n < rg_.vh()) return counts;
    CountingImpl impl(host, order_global_, prev_global_, rg_.vh());
    impl.root_label = 1;
    impl.bucket = counts.data();
    impl.run();
    return counts;
}

ExtremaResult extension_extrema(const HostGraph& host, const RootedGraph& rg) {
    if (host.n < rg.vg()) throw std::invalid_argument("host smaller than the root set");
    ExtensionCounter ec(rg);
    ExtremaResult res;
    bool first = true;
    auto consider = [&](uint64_t c, const RootTuple& x) {
        if (first || c < res.min_count) res.min_count = c, res.argmin = x;
        if (first || c > res.max_count) res.max_count = c, res.argmax = x;
        first = false;
    };
    if (rg.vg() == 1) {
        auto counts = ec.count_all_roots(host);
        for (long v = 1; v <= host.n; v++) {
            uint64_t y = counts[v];
            if (y % ec.aut() != 0)
                throw std::logic_error("ordered count not divisible by automorphisms");
            consider(y / ec.aut(), {v});
        }
        return res;
    }
    RootTuple x(rg.vg());
    std::vector<char> used(host.n + 1, 0);
    // ordered tuples, lexicographic
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == rg.vg()) {
            consider(ec.count_unordered(host, x), x);
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
    return res;
}

namespace {

struct ListSink {
    const RootedGraph* rg;
    std::vector<std::pair<int, int>> fedges;
    uint64_t cap;
    bool capped = false;
    // copy key: sorted non-root vertex set, then normalized edge image list
    std::set<std::vector<long>> copies;

    bool emit(CountingImpl& impl) {
        std::vector<long> key;
        for (int v = rg->vg() + 1; v <= rg->vh(); v++) key.push_back(impl.img[v]);
        std::sort(key.begin(), key.end());
        key.push_back(-1);  // separator
        std::vector<std::pair<long, long>> eimg;
        for (auto& [a, b] : fedges) {
            long ia = impl.img[a], ib = impl.img[b];
            if (ia > ib) std::swap(ia, ib);
            eimg.emplace_back(ia, ib);
        }
        std::sort(eimg.begin(), eimg.end());
        for (auto& [a, b] : eimg) {
            key.push_back(a);
            key.push_back(b);
        }
        copies.insert(std::move(key));
        if (copies.size() > cap) {
            capped = true;
            return false;
        }
        return true;
    }
};

bool list_sink_cb(CountingImpl& impl, void* ctx) {
    return static_cast<ListSink*>(ctx)->emit(impl);
}

ListSink enumerate_copies(const HostGraph& host, const RootedGraph& rg, const RootTuple& x,
                          uint64_t cap) {
    ListSink sink{&rg, rg.free_edges(), cap};
    check_tuple(rg, host, x);
    if (host.n < rg.vh()) return sink;
    std::vector<int> order;
    std::vector<std::vector<int>> prev;
    build_order(rg, rg.roots_mask(), order, prev);
    CountingImpl impl(host, order, prev, rg.vh());
    for (int i = 0; i < rg.vg(); i++) {
        impl.img[i + 1] = x[i];
        if (host.bitset_mode) impl.mark(x[i], true);
    }
    impl.on_embedding = list_sink_cb;
    impl.sink_ctx = &sink;
    impl.run();
    return sink;
}

}  // namespace

std::vector<std::vector<long>> list_extensions(const HostGraph& host, const RootedGraph& rg,
                                               const RootTuple& x, uint64_t cap) {
    ListSink sink = enumerate_copies(host, rg, x, cap);
    if (sink.capped) throw CapExceeded("extension list exceeds cap");
    std::vector<std::vector<long>> out;
    int nfree = rg.vh() - rg.vg();
    for (auto& key : sink.copies)
        out.emplace_back(key.begin(), key.begin() + nfree);
    return out;
}

bool disjoint_event_check(const HostGraph& host, const RootedGraph& rg, const RootTuple& x,
                          uint64_t r) {
    ListSink sink = enumerate_copies(host, rg, x, r);  // abort once count > r
    if (sink.capped || sink.copies.size() != r) return false;
    int nfree = rg.vh() - rg.vg();
    std::vector<std::vector<long>> sets;
    for (auto& key : sink.copies)
        sets.emplace_back(key.begin(), key.begin() + nfree);
    for (size_t i = 0; i < sets.size(); i++)
        for (size_t j = i + 1; j < sets.size(); j++) {
            std::vector<long> inter;
            std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(),
                                  sets[j].end(), std::back_inserter(inter));
            if (!inter.empty()) return false;
        }
    return true;
}

std::vector<uint64_t> per_vertex_copy_counts(const HostGraph& host, const PatternGraph& k) {
    if (k.n < 1) throw std::invalid_argument("per-vertex counts: empty pattern");
    RootedGraph unrooted(k, 0);
    uint64_t aut = automorphism_count(unrooted);
    std::vector<uint64_t> counts(host.n + 1, 0);
    if (host.n < k.n) return counts;
    std::vector<int> order;
    std::vector<std::vector<int>> prev;
    build_order(unrooted, 0, order, prev);
    CountingImpl impl(host, order, prev, k.n);
    impl.bucket = counts.data();
    impl.per_vertex = true;
    impl.run();
    for (long v = 1; v <= host.n; v++) {
        if (counts[v] % aut != 0)
            throw std::logic_error("per-vertex tally not divisible by automorphisms");
        counts[v] /= aut;
    }
    return counts;
}

}  // namespace extcount
