#include <doctest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "urwbpc/generators.hpp"
#include "urwbpc/graph.hpp"
#include "urwbpc/graph_io.hpp"

using namespace urwbpc;

namespace {

Graph triangle_with_pendant() { return Graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}); }

bool is_tree(const Graph& g) {
    return g.edge_count() + 1 == g.size() && oracle::union_find_connected(g.size(), g.edges());
}

}  // namespace

TEST_CASE("graph construction validates input") {
    CHECK_THROWS_AS(Graph(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 1}}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 1}}, {-1, 0}), std::invalid_argument);

    const Graph g(3, {{2, 0}, {1, 0}});
    CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 2}});
    CHECK(g.neighbors(0) == std::vector<NodeId>{1, 2});
    CHECK(g.has_edge(2, 0));
    CHECK_FALSE(g.has_edge(1, 2));
}

TEST_CASE("adjacency examples") {
    Matrix p2(2, 2);
    p2(0, 1) = p2(1, 0) = 1;
    CHECK(adjacency(path_graph(2)) == p2);

    Matrix k3(3, 3, 1.0);
    for (int i = 0; i < 3; ++i) k3(i, i) = 0.0;
    CHECK(adjacency(cycle_graph(3)) == k3);

    const Graph loops(1, {}, {2});
    CHECK(adjacency(loops)(0, 0) == 2.0);
    CHECK(loops.degree(0) == 2);
    CHECK(degree_matrix(loops)(0, 0) == 2.0);
}

TEST_CASE("self-loops add one to A_ii and D_ii") {
    const Graph g(3, {{0, 1}, {1, 2}}, {2, 0, 1});
    const Matrix a = adjacency(g);
    const Matrix d = degree_matrix(g);
    const Matrix l = laplacian(g);
    CHECK(a(0, 0) == 2);
    CHECK(d(0, 0) == 3);
    CHECK(d(1, 1) == 2);
    CHECK(d(2, 2) == 2);
    for (std::size_t i = 0; i < 3; ++i) {
        double rs = 0;
        for (std::size_t j = 0; j < 3; ++j) {
            rs += a(i, j);
            CHECK(a(i, j) == a(j, i));
            CHECK(l(i, j) == d(i, j) - a(i, j));
        }
        CHECK(rs == d(i, i));
    }
    CHECK(g.degree_sum() == 7);
    CHECK(g.has_self_loops());
    CHECK_FALSE(is_bipartite(g));
}

TEST_CASE("laplacian rows sum to zero and L is positive semidefinite") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = random_mixed_degree(30, 4, 0.3, seed);
        const Matrix l = laplacian(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            double rs = 0;
            for (double v : l.row(i)) rs += v;
            CHECK(rs == 0.0);
        }
        for (std::uint64_t t = 0; t < 5; ++t) {
            const auto x = oracle::normal_vector(g.size(), seed * 100 + t);
            const auto lx = multiply(l, x);
            double q = 0;
            for (std::size_t i = 0; i < x.size(); ++i) q += x[i] * lx[i];
            CHECK(q >= -1e-12);
        }
    }
}

TEST_CASE("diameter, bipartiteness and connectivity") {
    CHECK(diameter(path_graph(5)) == 4);
    CHECK(is_bipartite(cycle_graph(6)));
    CHECK_FALSE(is_bipartite(cycle_graph(5)));
    const Graph two_edges(4, {{0, 1}, {2, 3}});
    CHECK_FALSE(is_connected(two_edges));
    CHECK_THROWS_AS(diameter(two_edges), std::domain_error);
    CHECK(is_connected(Graph(1, {})));
    CHECK(diameter(Graph(1, {})) == 0);
}

TEST_CASE("diameter and connectivity agree with brute force on all small graphs") {
    for (std::size_t n = 1; n <= 5; ++n) {
        for (const Graph& g : oracle::all_graphs(n)) {
            const int d = oracle::floyd_diameter(g);
            CHECK(is_connected(g) == (d >= 0));
            if (d >= 0) CHECK(diameter(g) == d);
        }
    }
}

TEST_CASE("random_tree") {
    const Graph t2 = random_tree(2, 5);
    CHECK(t2 == path_graph(2));
    CHECK(diameter(t2) == 1);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Graph t = random_tree(5, seed, 4);
        CHECK(is_tree(t));
        CHECK(diameter(t) == 4);
        // Diameter 4 on 5 nodes forces a path: two leaves, three degree-2 nodes.
        auto d = t.degrees();
        std::sort(d.begin(), d.end());
        CHECK(d == std::vector<int>{1, 1, 2, 2, 2});
    }

    const Graph big = random_tree(100, 3, 12);
    CHECK(is_tree(big));
    CHECK(diameter(big) == 12);

    for (std::size_t n = 2; n < 60; n += 7) CHECK(is_tree(random_tree(n, n)));
    CHECK(random_tree(40, 9) == random_tree(40, 9));
    CHECK_THROWS_AS(random_tree(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(random_tree(6, 0, 6), std::invalid_argument);
    const Graph spine = random_tree(60, 0, 59, 5);
    CHECK(diameter(spine) == 59);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph t = random_tree(30 + seed, seed, 3 + static_cast<int>(seed));
        CHECK(is_tree(t));
        CHECK(diameter(t) == 3 + static_cast<int>(seed));
    }
}

TEST_CASE("random_tree draws every labelled tree on 4 nodes") {
    // 4^(4-2) = 16 labelled trees; uniform sampling hits all of them.
    std::set<std::vector<Edge>> seen;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) seen.insert(random_tree(4, seed).edges());
    CHECK(seen.size() == 16);
}

TEST_CASE("random_k_regular") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph c4 = random_k_regular(4, 2, seed);
        CHECK(c4.regular_degree() == 2);
        CHECK(is_connected(c4));
        CHECK(c4.edge_count() == 4);
        const Graph c5 = random_k_regular(5, 2, seed);
        CHECK(c5.regular_degree() == 2);
        CHECK(is_connected(c5));
        CHECK(diameter(c5) == 2);
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = random_k_regular(100, 4, seed);
        CHECK(g.regular_degree() == 4);
        CHECK(is_connected(g));
        CHECK_FALSE(g.has_self_loops());
    }
    CHECK(random_k_regular(50, 3, 4) == random_k_regular(50, 3, 4));
    CHECK_FALSE(random_k_regular(50, 3, 4) == random_k_regular(50, 3, 5));
    CHECK_THROWS_AS(random_k_regular(5, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(random_k_regular(4, 4, 0), std::invalid_argument);
}

TEST_CASE("circulant_small_world") {
    const Graph c = circulant_small_world(10, 4);
    CHECK(c.regular_degree() == 4);
    CHECK(c.has_edge(0, 1));
    CHECK(c.has_edge(0, 2));
    CHECK(c.has_edge(0, 8));
    CHECK(c.has_edge(0, 9));
    CHECK_FALSE(c.has_edge(0, 3));
    CHECK(circulant_small_world(6, 2) == cycle_graph(6));
    CHECK(circulant_small_world(5, 4) == complete_graph(5));
    CHECK_THROWS_AS(circulant_small_world(10, 3), std::invalid_argument);
    CHECK_THROWS_AS(circulant_small_world(4, 4), std::invalid_argument);
}

TEST_CASE("random_mixed_degree keeps connectivity and the maximum degree") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = random_mixed_degree(100, 3, 0.2, seed);
        CHECK(is_connected(g));
        CHECK(g.max_degree() == 3);
        CHECK_FALSE(g.regular_degree().has_value());
        for (int d : g.degrees()) CHECK(d >= 1);
    }
}

TEST_CASE("add_self_loops_to_regularize") {
    CHECK(add_self_loops_to_regularize(path_graph(2)) == path_graph(2));
    const Graph s = add_self_loops_to_regularize(star_graph(4));
    CHECK(s.regular_degree() == 3);
    CHECK(s.self_loops(0) == 0);
    for (NodeId i = 1; i < 4; ++i) CHECK(s.self_loops(i) == 2);
    CHECK(s.edges() == star_graph(4).edges());

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = random_mixed_degree(50, 3, 0.25, seed);
        const Graph r = add_self_loops_to_regularize(g);
        CHECK(r.regular_degree() == 3);
        CHECK(r.edges() == g.edges());
        CHECK(add_self_loops_to_regularize(r) == r);
    }
}

namespace {

// Every connected spanning subgraph with max degree <= k, by edge subset.
std::vector<std::vector<Edge>> feasible_subsets(const Graph& g, int k) {
    const auto& e = g.edges();
    std::vector<std::vector<Edge>> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e.size()); ++mask) {
        std::vector<Edge> sub;
        std::vector<int> deg(g.size(), 0);
        for (std::size_t b = 0; b < e.size(); ++b) {
            if (mask >> b & 1) {
                sub.push_back(e[b]);
                ++deg[e[b].u];
                ++deg[e[b].v];
            }
        }
        if (*std::max_element(deg.begin(), deg.end()) <= k && oracle::union_find_connected(g.size(), sub)) {
            out.push_back(sub);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("delete_edges_to_regularize") {
    CHECK(delete_edges_to_regularize(cycle_graph(4), 2) == cycle_graph(4));

    const Graph k4 = complete_graph(4);
    const Graph r = delete_edges_to_regularize(k4, 2);
    CHECK(is_connected(r));
    CHECK(r.max_degree() <= 2);
    const auto options = feasible_subsets(k4, 2);
    CHECK(std::find(options.begin(), options.end(), r.edges()) != options.end());
    // The greedy rule stops once no node exceeds 2: a Hamiltonian cycle.
    CHECK(r.edge_count() == 4);

    const Graph tp = triangle_with_pendant();
    const Graph t = delete_edges_to_regularize(tp, 2);
    CHECK(is_connected(t));
    CHECK(t.max_degree() <= 2);
    CHECK(t.edge_count() == 3);
    CHECK(t.has_edge(2, 3));
    // Exactly one triangle edge at node 2 went.
    CHECK(t.has_edge(0, 2) != t.has_edge(1, 2));
    CHECK(t.has_edge(0, 1));
    const auto tp_options = feasible_subsets(tp, 2);
    CHECK(std::find(tp_options.begin(), tp_options.end(), t.edges()) != tp_options.end());

    CHECK_THROWS_AS(delete_edges_to_regularize(star_graph(5), 2), GenerationError);
    CHECK_THROWS_AS(delete_edges_to_regularize(Graph(4, {{0, 1}, {2, 3}}), 2), std::invalid_argument);

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = random_k_regular(40, 6, seed);
        const Graph d = delete_edges_to_regularize(g, 4);
        CHECK(is_connected(d));
        CHECK(d.max_degree() <= 4);
        for (const Edge& e : d.edges()) CHECK(g.has_edge(e.u, e.v));
    }
}

TEST_CASE("edge list round trip") {
    const Graph g(5, {{3, 4}, {0, 1}, {1, 3}}, {0, 2, 0, 0, 1});
    const std::string text = to_edge_list(g);
    CHECK(text == "5\n0 1\n1 3\n3 4\nloop 1 2\nloop 4 1\n");
    CHECK(parse_edge_list(text) == g);
    CHECK(to_edge_list(parse_edge_list("5\nloop 4 1\n3 4\n1 3\n0 1\nloop 1 2\n")) == text);

    std::ostringstream os;
    write_edge_list(os, g);
    std::istringstream is(os.str());
    CHECK(read_edge_list(is) == g);

    const Graph r = random_k_regular(30, 4, 2);
    CHECK(parse_edge_list(to_edge_list(r)) == r);
}

TEST_CASE("edge list parser rejects malformed input") {
    CHECK_THROWS_AS(parse_edge_list(""), ParseError);
    CHECK_THROWS_AS(parse_edge_list("x\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3\n0 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3\n0 3\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3\n1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3\n0 1\n1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3\nloop 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3\nloop 0 -1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3\n0 -1\n"), ParseError);
    CHECK_THROWS_AS(load_edge_list("/nonexistent/graph.txt"), ParseError);
}
