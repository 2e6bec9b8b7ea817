#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "urwbpc/matrix.hpp"

namespace urwbpc {

using NodeId = std::size_t;

// Unordered pair stored with first < second.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    auto operator<=>(const Edge&) const = default;
};

// Immutable undirected graph. Self-loops are kept as per-node counts; a
// single loop adds 1 to both A_ii and D_ii.
class Graph {
public:
    Graph() = default;

    // Throws std::invalid_argument on out-of-range nodes, u == v pairs,
    // duplicate edges, or a loop vector of the wrong length.
    Graph(std::size_t n, std::vector<Edge> edges, std::vector<int> self_loops = {});

    std::size_t size() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    // Distinct neighbours, ascending; loops are not listed here.
    const std::vector<NodeId>& neighbors(NodeId i) const { return adjacency_[i]; }
    int self_loops(NodeId i) const { return loops_[i]; }
    const std::vector<int>& self_loop_counts() const { return loops_; }
    bool has_self_loops() const;

    int degree(NodeId i) const { return static_cast<int>(adjacency_[i].size()) + loops_[i]; }
    int max_degree() const;
    int degree_sum() const;
    std::vector<int> degrees() const;

    // k if every node has degree k (loops included).
    std::optional<int> regular_degree() const;

    bool has_edge(NodeId u, NodeId v) const;

    bool operator==(const Graph& other) const {
        return n_ == other.n_ && edges_ == other.edges_ && loops_ == other.loops_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> loops_;
    std::vector<std::vector<NodeId>> adjacency_;
};

Matrix adjacency(const Graph& g);
Matrix degree_matrix(const Graph& g);
Matrix laplacian(const Graph& g);

bool is_connected(const Graph& g);
// Any self-loop makes a graph non-bipartite.
bool is_bipartite(const Graph& g);
// Throws std::domain_error on a disconnected graph.
int diameter(const Graph& g);

// Small named graphs used throughout the tests and the CLI.
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t n);

}  // namespace urwbpc
