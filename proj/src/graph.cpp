#include "urwbpc/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace urwbpc {

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::vector<int> self_loops)
    : n_(n), edges_(std::move(edges)), loops_(std::move(self_loops)), adjacency_(n) {
    if (n == 0) throw std::invalid_argument("Graph: node count must be at least 1");
    if (loops_.empty()) loops_.assign(n, 0);
    if (loops_.size() != n) throw std::invalid_argument("Graph: self-loop vector has wrong length");
    for (int s : loops_) {
        if (s < 0) throw std::invalid_argument("Graph: negative self-loop count");
    }
    for (auto& e : edges_) {
        if (e.u >= n || e.v >= n) throw std::invalid_argument("Graph: edge endpoint out of range");
        if (e.u == e.v) throw std::invalid_argument("Graph: use self-loop counts, not u == v edges");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
        throw std::invalid_argument("Graph: duplicate edge");
    }
    for (const auto& e : edges_) {
        adjacency_[e.u].push_back(e.v);
        adjacency_[e.v].push_back(e.u);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_self_loops() const {
    return std::any_of(loops_.begin(), loops_.end(), [](int s) { return s > 0; });
}

int Graph::max_degree() const {
    int d = 0;
    for (NodeId i = 0; i < n_; ++i) d = std::max(d, degree(i));
    return d;
}

int Graph::degree_sum() const {
    int total = 0;
    for (NodeId i = 0; i < n_; ++i) total += degree(i);
    return total;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> d(n_);
    for (NodeId i = 0; i < n_; ++i) d[i] = degree(i);
    return d;
}

std::optional<int> Graph::regular_degree() const {
    const int k = degree(0);
    for (NodeId i = 1; i < n_; ++i) {
        if (degree(i) != k) return std::nullopt;
    }
    return k;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (u >= n_ || v >= n_) return false;
    if (u == v) return loops_[u] > 0;
    const auto& nb = adjacency_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

Matrix adjacency(const Graph& g) {
    Matrix a(g.size(), g.size());
    for (const auto& e : g.edges()) {
        a(e.u, e.v) = 1.0;
        a(e.v, e.u) = 1.0;
    }
    for (NodeId i = 0; i < g.size(); ++i) a(i, i) = g.self_loops(i);
    return a;
}

Matrix degree_matrix(const Graph& g) {
    Matrix d(g.size(), g.size());
    for (NodeId i = 0; i < g.size(); ++i) d(i, i) = g.degree(i);
    return d;
}

Matrix laplacian(const Graph& g) {
    Matrix l(g.size(), g.size());
    for (const auto& e : g.edges()) {
        l(e.u, e.v) = -1.0;
        l(e.v, e.u) = -1.0;
    }
    // D_ii - A_ii: loops cancel on the diagonal.
    for (NodeId i = 0; i < g.size(); ++i) {
        l(i, i) = static_cast<double>(g.neighbors(i).size());
    }
    return l;
}

namespace {

// Hop distances from `source`; -1 for unreachable nodes.
std::vector<int> bfs_distances(const Graph& g, NodeId source) {
    std::vector<int> dist(g.size(), -1);
    std::queue<NodeId> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                frontier.push(v);
            }
        }
    }
    return dist;
}

}  // namespace

bool is_connected(const Graph& g) {
    const auto dist = bfs_distances(g, 0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

bool is_bipartite(const Graph& g) {
    if (g.has_self_loops()) return false;
    std::vector<int> colour(g.size(), -1);
    for (NodeId start = 0; start < g.size(); ++start) {
        if (colour[start] >= 0) continue;
        colour[start] = 0;
        std::queue<NodeId> frontier;
        frontier.push(start);
        while (!frontier.empty()) {
            const NodeId u = frontier.front();
            frontier.pop();
            for (NodeId v : g.neighbors(u)) {
                if (colour[v] < 0) {
                    colour[v] = 1 - colour[u];
                    frontier.push(v);
                } else if (colour[v] == colour[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

int diameter(const Graph& g) {
    int best = 0;
    for (NodeId s = 0; s < g.size(); ++s) {
        const auto dist = bfs_distances(g, s);
        for (int d : dist) {
            if (d < 0) throw std::domain_error("diameter: graph is disconnected");
            best = std::max(best, d);
        }
    }
    return best;
}

Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return Graph(n, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
    if (n < 3) throw std::invalid_argument("cycle_graph: need at least 3 nodes");
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    return Graph(n, std::move(edges));
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) edges.push_back({i, j});
    }
    return Graph(n, std::move(edges));
}

Graph star_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 1; i < n; ++i) edges.push_back({0, i});
    return Graph(n, std::move(edges));
}

}  // namespace urwbpc
