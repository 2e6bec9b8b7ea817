#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "urwbpc/graph.hpp"

namespace urwbpc {

// A sampler ran out of attempts, or a transform cannot satisfy its target.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultAttemptBudget = 100000;

// Uniform labelled tree from a random Pruefer sequence. With a target
// diameter, resamples up to min(budget, 1000) times, then builds a random
// spine of that length and hangs the rest on nodes with room to spare.
Graph random_tree(std::size_t n, std::uint64_t seed,
                  std::optional<int> target_diameter = std::nullopt,
                  int attempt_budget = kDefaultAttemptBudget);

// Connected simple k-regular graph by configuration-model pairing; any
// outcome with a loop, a multi-edge or more than one component is thrown
// away and redrawn.
Graph random_k_regular(std::size_t n, int k, std::uint64_t seed,
                       int attempt_budget = kDefaultAttemptBudget);

// Ring where node i links to i +/- 1..k/2 (mod n).
Graph circulant_small_world(std::size_t n, int k);

// Connected, loop-free graph with mixed degrees and maximum degree
// `max_degree`: a random max_degree-regular graph with a fraction of its
// edges removed, never disconnecting it and never lowering the max degree.
Graph random_mixed_degree(std::size_t n, int max_degree, double drop_fraction,
                          std::uint64_t seed);

// Node i gains d_max - d_i self-loops.
Graph add_self_loops_to_regularize(const Graph& g);

// Greedy deletion of edges outside a fixed DFS spanning tree, always at a
// currently highest-degree node, until every degree is <= target_k.
Graph delete_edges_to_regularize(const Graph& g, int target_k);

}  // namespace urwbpc
