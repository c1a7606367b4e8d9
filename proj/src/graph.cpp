#include "scdma/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "scdma/signature.hpp"

namespace scdma {

FactorGraph::FactorGraph(int n_code, int n_data, std::vector<Edge> edges)
    : n_code_(n_code), n_data_(n_data), edges_(std::move(edges)) {
    if (n_code_ <= 0 || n_data_ <= 0) throw std::invalid_argument("factor graph needs at least one node per side");
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("duplicate edge in factor graph");
    code_adj_.resize(n_code_);
    data_adj_.resize(n_data_);
    for (const Edge& e : edges_) {
        if (e.code < 0 || e.code >= n_code_ || e.data < 0 || e.data >= n_data_)
            throw std::invalid_argument("edge index out of range");
        code_adj_[e.code].push_back(e.data);
        data_adj_[e.data].push_back(e.code);
    }
    for (int n = 0; n < n_code_; ++n)
        if (code_adj_[n].empty()) throw std::invalid_argument("code node with degree 0 (all-zero resource row)");
    for (int k = 0; k < n_data_; ++k)
        if (data_adj_[k].empty()) throw std::invalid_argument("data node with degree 0 (all-zero user column)");
}

bool FactorGraph::has_edge(int code, int data) const {
    const auto& a = code_adj_[code];
    return std::binary_search(a.begin(), a.end(), data);
}

namespace {

// unified adjacency: node ids 0..N-1 code, N..N+K-1 data
std::vector<std::vector<int>> unified_adjacency(const FactorGraph& g) {
    std::vector<std::vector<int>> adj(g.n_code() + g.n_data());
    for (const Edge& e : g.edges()) {
        adj[e.code].push_back(g.n_code() + e.data);
        adj[g.n_code() + e.data].push_back(e.code);
    }
    return adj;
}

// counts directed closed walks that are simple cycles of exact `length`,
// starting and ending at `start`, visiting only nodes >= start
long long cycle_dfs(const std::vector<std::vector<int>>& adj, std::vector<char>& visited,
                    int start, int node, int remaining) {
    if (remaining == 0) return node == start ? 1 : 0;
    long long count = 0;
    for (int next : adj[node]) {
        if (next == start && remaining == 1) {
            ++count;
            continue;
        }
        if (next <= start || visited[next]) continue;
        visited[next] = 1;
        count += cycle_dfs(adj, visited, start, next, remaining - 1);
        visited[next] = 0;
    }
    return count;
}

}  // namespace

int FactorGraph::count_cycles(int length) const {
    if (length < 4 || length % 2 != 0) throw std::invalid_argument("cycle length must be even and >= 4");
    auto adj = unified_adjacency(*this);
    std::vector<char> visited(adj.size(), 0);
    long long total = 0;
    for (int start = 0; start < static_cast<int>(adj.size()); ++start)
        total += cycle_dfs(adj, visited, start, start, length);
    // each cycle found twice (both directions)
    return static_cast<int>(total / 2);
}

std::vector<std::vector<int>> FactorGraph::connected_components() const {
    auto adj = unified_adjacency(*this);
    std::vector<int> comp(adj.size(), -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < static_cast<int>(adj.size()); ++s) {
        if (comp[s] >= 0) continue;
        int id = static_cast<int>(out.size());
        out.emplace_back();
        std::queue<int> q;
        q.push(s);
        comp[s] = id;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            out[id].push_back(v);
            for (int w : adj[v])
                if (comp[w] < 0) {
                    comp[w] = id;
                    q.push(w);
                }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

bool FactorGraph::is_connected() const { return connected_components().size() == 1; }

bool FactorGraph::is_tree() const {
    return is_connected() &&
           static_cast<int>(edges_.size()) == n_code_ + n_data_ - 1;
}

std::vector<Edge> FactorGraph::spanning_tree_complement() const {
    if (!is_connected()) throw std::invalid_argument("spanning tree complement requires a connected graph");
    std::set<Edge> tree;
    std::vector<char> seen(n_code_ + n_data_, 0);
    std::queue<int> q;
    int root = n_code_;  // data node 0
    seen[root] = 1;
    q.push(root);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (v >= n_code_) {
            int k = v - n_code_;
            for (int n : data_adj_[k])
                if (!seen[n]) {
                    seen[n] = 1;
                    tree.insert({n, k});
                    q.push(n);
                }
        } else {
            for (int k : code_adj_[v])
                if (!seen[n_code_ + k]) {
                    seen[n_code_ + k] = 1;
                    tree.insert({v, k});
                    q.push(n_code_ + k);
                }
        }
    }
    std::vector<Edge> phi;
    for (const Edge& e : edges_)
        if (!tree.count(e)) phi.push_back(e);
    return phi;
}

DegreeProfile FactorGraph::delete_around_code_nodes(std::span<const int> alpha) const {
    std::vector<char> in_alpha(n_code_, 0);
    int alpha_size = 0;
    for (int n : alpha) {
        if (n < 0 || n >= n_code_) throw std::invalid_argument("alpha index out of range");
        if (!in_alpha[n]) ++alpha_size;
        in_alpha[n] = 1;
    }
    if (alpha_size == n_code_) throw std::invalid_argument("alpha must be a proper subset of code nodes");

    std::vector<char> data_removed(n_data_, 0);
    for (int n = 0; n < n_code_; ++n)
        if (in_alpha[n])
            for (int k : code_adj_[n]) data_removed[k] = 1;

    DegreeProfile p{0, 0};
    for (int n = 0; n < n_code_; ++n) {
        int deg = 0;
        for (int k : code_adj_[n])
            if (!data_removed[k]) ++deg;
        if (deg == 1) ++p.n1;
        else if (deg > 1) ++p.n2;
    }
    return p;
}

FactorGraph graph_from_signature(const SignatureMatrix& s) {
    std::vector<Edge> edges;
    for (int n = 0; n < s.rows(); ++n)
        for (int k = 0; k < s.cols(); ++k)
            if (!s.is_zero(n, k)) edges.push_back({n, k});
    return FactorGraph(s.rows(), s.cols(), std::move(edges));
}

}  // namespace scdma
