#include "urwbpc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <set>
#include <string>

namespace urwbpc {

namespace {

constexpr int kTreeRejectionCap = 1000;

Graph decode_pruefer(std::size_t n, const std::vector<NodeId>& seq) {
    std::vector<int> remaining(n, 1);
    for (NodeId x : seq) ++remaining[x];
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> leaves;
    for (NodeId i = 0; i < n; ++i) {
        if (remaining[i] == 1) leaves.push(i);
    }
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (NodeId x : seq) {
        const NodeId leaf = leaves.top();
        leaves.pop();
        edges.push_back({leaf, x});
        if (--remaining[x] == 1) leaves.push(x);
    }
    const NodeId a = leaves.top();
    leaves.pop();
    const NodeId b = leaves.top();
    edges.push_back({a, b});
    return Graph(n, std::move(edges));
}

Graph tree_with_diameter(std::size_t n, int d, std::mt19937_64& rng) {
    std::vector<NodeId> order(n);
    for (NodeId i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const auto spine = static_cast<std::size_t>(d) + 1;
    // A node at spine position i and height h sees the far spine end at h + max(i, d - i).
    std::vector<int> ecc(n, 0);
    std::vector<NodeId> open;
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (std::size_t i = 0; i < spine; ++i) {
        const int far = std::max<int>(static_cast<int>(i), d - static_cast<int>(i));
        ecc[order[i]] = far;
        if (far < d) open.push_back(order[i]);
        if (i > 0) edges.push_back({order[i - 1], order[i]});
    }
    for (std::size_t j = spine; j < n; ++j) {
        if (open.empty()) throw GenerationError("random_tree: diameter " + std::to_string(d) + " cannot hold " + std::to_string(n) + " nodes");
        const NodeId parent = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
        const NodeId w = order[j];
        ecc[w] = ecc[parent] + 1;
        if (ecc[w] < d) open.push_back(w);
        edges.push_back({parent, w});
    }
    return Graph(n, std::move(edges));
}

}  // namespace

Graph random_tree(std::size_t n, std::uint64_t seed, std::optional<int> target_diameter,
                  int attempt_budget) {
    if (n < 2) throw std::invalid_argument("random_tree: need at least 2 nodes");
    if (target_diameter && (*target_diameter < 2 || *target_diameter > static_cast<int>(n) - 1)) {
        // n = 2 is the lone exception: its only tree has diameter 1.
        if (!(n == 2 && *target_diameter == 1)) {
            throw std::invalid_argument("random_tree: target diameter outside [2, n-1]");
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> pick(0, n - 1);
    std::vector<NodeId> seq(n - 2);
    // Uniform trees rarely hit a short diameter, so the rejection phase is capped
    // and a spine-based construction takes over.
    const int rejection = target_diameter ? std::min(attempt_budget, kTreeRejectionCap) : 1;
    for (int attempt = 0; attempt < rejection; ++attempt) {
        for (auto& x : seq) x = pick(rng);
        Graph tree = decode_pruefer(n, seq);
        if (!target_diameter || diameter(tree) == *target_diameter) return tree;
    }
    return tree_with_diameter(n, *target_diameter, rng);
}

Graph random_k_regular(std::size_t n, int k, std::uint64_t seed, int attempt_budget) {
    if (k < 1 || static_cast<std::size_t>(k) >= n) {
        throw std::invalid_argument("random_k_regular: need 1 <= k < n");
    }
    if ((n * static_cast<std::size_t>(k)) % 2 != 0) {
        throw std::invalid_argument("random_k_regular: n*k must be even");
    }
    std::mt19937_64 rng(seed);
    std::vector<NodeId> stubs;
    stubs.reserve(n * k);
    std::vector<Edge> edges;
    std::set<Edge> seen;
    for (int attempt = 0; attempt < attempt_budget; ++attempt) {
        stubs.clear();
        for (NodeId i = 0; i < n; ++i) stubs.insert(stubs.end(), k, i);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        edges.clear();
        seen.clear();
        bool simple = true;
        for (std::size_t s = 0; s < stubs.size(); s += 2) {
            NodeId u = stubs[s];
            NodeId v = stubs[s + 1];
            if (u == v) {
                simple = false;
                break;
            }
            if (u > v) std::swap(u, v);
            if (!seen.insert({u, v}).second) {
                simple = false;
                break;
            }
            edges.push_back({u, v});
        }
        if (!simple) continue;
        Graph g(n, edges);
        if (is_connected(g)) return g;
    }
    throw GenerationError("random_k_regular: rejection budget exhausted");
}

Graph circulant_small_world(std::size_t n, int k) {
    if (k < 2 || k % 2 != 0 || static_cast<std::size_t>(k) >= n) {
        throw std::invalid_argument("circulant_small_world: k must be even with 2 <= k < n");
    }
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (int m = 1; m <= k / 2; ++m) {
            const NodeId j = (i + static_cast<NodeId>(m)) % n;
            edges.push_back({std::min(i, j), std::max(i, j)});
        }
    }
    return Graph(n, std::move(edges));
}

Graph random_mixed_degree(std::size_t n, int max_degree, double drop_fraction, std::uint64_t seed) {
    if (!(drop_fraction >= 0.0 && drop_fraction < 1.0)) {
        throw std::invalid_argument("random_mixed_degree: drop fraction must lie in [0, 1)");
    }
    std::mt19937_64 rng(seed);
    const Graph base = random_k_regular(n, max_degree, rng());
    std::vector<Edge> kept = base.edges();
    std::vector<Edge> order = kept;
    std::shuffle(order.begin(), order.end(), rng);
    const auto to_drop = static_cast<std::size_t>(std::llround(drop_fraction * base.edge_count()));

    std::vector<int> deg = base.degrees();
    std::size_t at_max = n;
    std::size_t dropped = 0;
    for (const Edge& e : order) {
        if (dropped == to_drop) break;
        if (deg[e.u] == 1 || deg[e.v] == 1) continue;
        const std::size_t lost = (deg[e.u] == max_degree) + (deg[e.v] == max_degree);
        if (at_max <= lost) continue;
        std::vector<Edge> trial;
        trial.reserve(kept.size() - 1);
        for (const Edge& f : kept) {
            if (f != e) trial.push_back(f);
        }
        Graph candidate(n, trial);
        if (!is_connected(candidate)) continue;
        kept = std::move(trial);
        --deg[e.u];
        --deg[e.v];
        at_max -= lost;
        ++dropped;
    }
    return Graph(n, std::move(kept));
}

Graph add_self_loops_to_regularize(const Graph& g) {
    const int d_max = g.max_degree();
    std::vector<int> loops = g.self_loop_counts();
    for (NodeId i = 0; i < g.size(); ++i) loops[i] += d_max - g.degree(i);
    return Graph(g.size(), g.edges(), std::move(loops));
}

namespace {

// Discovery edges of an iterative depth-first search from node 0 that
// always descends into the smallest unvisited neighbour.
std::set<Edge> dfs_tree(const Graph& g) {
    std::set<Edge> tree;
    std::vector<bool> visited(g.size(), false);
    std::vector<std::size_t> next(g.size(), 0);
    std::vector<NodeId> stack{0};
    visited[0] = true;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        const auto& nb = g.neighbors(u);
        while (next[u] < nb.size() && visited[nb[next[u]]]) ++next[u];
        if (next[u] == nb.size()) {
            stack.pop_back();
            continue;
        }
        const NodeId v = nb[next[u]];
        visited[v] = true;
        tree.insert({std::min(u, v), std::max(u, v)});
        stack.push_back(v);
    }
    return tree;
}

}  // namespace

Graph delete_edges_to_regularize(const Graph& g, int target_k) {
    if (target_k < 1) throw std::invalid_argument("delete_edges_to_regularize: target_k must be >= 1");
    if (!is_connected(g)) throw std::invalid_argument("delete_edges_to_regularize: graph is disconnected");
    const std::size_t n = g.size();
    const std::set<Edge> tree = dfs_tree(g);

    std::vector<int> tree_degree(n, 0);
    for (const Edge& e : tree) {
        ++tree_degree[e.u];
        ++tree_degree[e.v];
    }
    for (NodeId i = 0; i < n; ++i) {
        if (tree_degree[i] + g.self_loops(i) > target_k) {
            throw GenerationError("delete_edges_to_regularize: spanning tree alone exceeds target_k");
        }
    }

    std::vector<std::set<NodeId>> removable(n);
    for (const Edge& e : g.edges()) {
        if (!tree.contains(e)) {
            removable[e.u].insert(e.v);
            removable[e.v].insert(e.u);
        }
    }
    std::vector<int> deg = g.degrees();
    std::set<Edge> deleted;

    for (;;) {
        const int d_max = *std::max_element(deg.begin(), deg.end());
        if (d_max <= target_k) break;
        // Highest degree first, lowest index on ties.
        std::vector<NodeId> order(n);
        for (NodeId i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return deg[a] > deg[b]; });
        bool progressed = false;
        for (NodeId u : order) {
            if (deg[u] <= target_k) break;
            if (removable[u].empty()) continue;
            // Prefer the partner that is itself most over-full.
            NodeId partner = *removable[u].begin();
            for (NodeId v : removable[u]) {
                if (deg[v] > deg[partner]) partner = v;
            }
            removable[u].erase(partner);
            removable[partner].erase(u);
            deleted.insert({std::min(u, partner), std::max(u, partner)});
            --deg[u];
            --deg[partner];
            progressed = true;
            break;
        }
        if (!progressed) {
            throw GenerationError("delete_edges_to_regularize: cannot reach target_k without disconnecting");
        }
    }

    std::vector<Edge> kept;
    for (const Edge& e : g.edges()) {
        if (!deleted.contains(e)) kept.push_back(e);
    }
    return Graph(n, std::move(kept), g.self_loop_counts());
}

}  // namespace urwbpc
