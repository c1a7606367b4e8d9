#pragma once

#include <compare>
#include <span>
#include <vector>

namespace scdma {

class SignatureMatrix;

// Edge between code node `code` (channel resource) and data node `data`
// (user). Indices are 0-based internally; the JSON interchange format and
// all CLI output use 1-based indices.
struct Edge {
    int code;
    int data;
    auto operator<=>(const Edge&) const = default;
};

struct DegreeProfile {
    int n1;  // code nodes of degree exactly 1
    int n2;  // code nodes of degree > 1
};

// Bipartite factor graph of an SCDMA code: N code nodes, K data nodes.
// Immutable after construction.
class FactorGraph {
public:
    FactorGraph(int n_code, int n_data, std::vector<Edge> edges);

    int n_code() const { return n_code_; }
    int n_data() const { return n_data_; }
    const std::vector<Edge>& edges() const { return edges_; }
    bool has_edge(int code, int data) const;

    // data-node neighbors of a code node, ascending
    const std::vector<int>& code_neighbors(int code) const { return code_adj_[code]; }
    // code-node neighbors of a data node, ascending
    const std::vector<int>& data_neighbors(int data) const { return data_adj_[data]; }

    // Number of distinct simple cycles of exactly the given (even) length,
    // each counted once. Exhaustive DFS; intended for desk-scale graphs.
    int count_cycles(int length) const;

    bool is_connected() const;
    bool is_tree() const;

    // Partition of unified node ids (code n -> n, data k -> n_code + k).
    std::vector<std::vector<int>> connected_components() const;

    // Edge set whose removal leaves a spanning tree. Deterministic: BFS
    // from data node 0, neighbors visited in index order. Throws if the
    // graph is disconnected.
    std::vector<Edge> spanning_tree_complement() const;

    // Deletes every data node adjacent to a code node indexed in alpha
    // (plus induced edges) and reports the code-node degree profile of the
    // remaining subgraph. alpha must be a proper subset of the code nodes.
    DegreeProfile delete_around_code_nodes(std::span<const int> alpha) const;

private:
    int n_code_, n_data_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> code_adj_, data_adj_;
};

// Graph of a signature matrix: edge (n,k) present iff s_{n,k} != 0.
FactorGraph graph_from_signature(const SignatureMatrix& s);

}  // namespace scdma
