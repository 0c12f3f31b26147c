#include "extcount/host_graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace extcount {

HostGraph::HostGraph(long n_) : n(n_) {
    if (n < 0) throw std::invalid_argument("host vertex count must be nonnegative");
    bitset_mode = n <= kBitsetMax;
    if (bitset_mode) {
        words = (n + 64) / 64;  // bits are 1-based like labels
        rows.assign((size_t)(n + 1) * words, 0);
    } else {
        lists.assign(n + 1, {});
    }
}

bool HostGraph::has_edge(long a, long b) const {
    if (a == b) return false;
    if (a < 1 || b < 1 || a > n || b > n) return false;
    if (bitset_mode) return (row(a)[b >> 6] >> (b & 63)) & 1u;
    const auto& l = lists[a];
    return std::binary_search(l.begin(), l.end(), (int)b);
}

void HostGraph::add_edge(long a, long b) {
    if (a < 1 || b < 1 || a > n || b > n) throw std::invalid_argument("host edge label out of range");
    if (a == b) throw std::invalid_argument("host self-loop");
    if (has_edge(a, b)) return;
    if (bitset_mode) {
        row(a)[b >> 6] |= 1ull << (b & 63);
        row(b)[a >> 6] |= 1ull << (a & 63);
    } else {
        auto& la = lists[a];
        la.insert(std::upper_bound(la.begin(), la.end(), (int)b), (int)b);
        auto& lb = lists[b];
        lb.insert(std::upper_bound(lb.begin(), lb.end(), (int)a), (int)a);
    }
    edge_count++;
}

HostGraph HostGraph::complete(long n) {
    HostGraph g(n);
    for (long a = 1; a <= n; a++)
        for (long b = a + 1; b <= n; b++) g.add_edge(a, b);
    return g;
}

HostGraph HostGraph::from_edges(long n, const std::vector<std::pair<long, long>>& edges) {
    HostGraph g(n);
    for (auto& [a, b] : edges) g.add_edge(a, b);
    return g;
}

HostGraph HostGraph::parse(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    long n = -1;
    std::vector<std::pair<long, long>> edges;
    while (std::getline(lines, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        if (n < 0) {
            if (ls >> n) {
                long a, b;
                while (ls >> a >> b) edges.emplace_back(a, b);
            }
            continue;
        }
        long a, b;
        while (ls >> a >> b) edges.emplace_back(a, b);
    }
    if (n < 0) throw std::invalid_argument("host file: missing vertex count line");
    return from_edges(n, edges);
}

long HostGraph::degree(long v) const {
    if (v < 1 || v > n) throw std::invalid_argument("degree: label out of range");
    if (!bitset_mode) return (long)lists[v].size();
    long d = 0;
    for (long w = 0; w < words; w++) d += __builtin_popcountll(row(v)[w]);
    return d;
}

std::vector<int> HostGraph::neighbors(long v) const {
    if (v < 1 || v > n) throw std::invalid_argument("neighbors: label out of range");
    if (!bitset_mode) return lists[v];
    std::vector<int> out;
    for (long w = 0; w < words; w++) {
        uint64_t bits = row(v)[w];
        while (bits) {
            int b = __builtin_ctzll(bits);
            out.push_back((int)(w * 64 + b));
            bits &= bits - 1;
        }
    }
    return out;
}

}  // namespace extcount
