#pragma once

#include <vector>

#include "urwbpc/consensus.hpp"
#include "urwbpc/graph.hpp"
#include "urwbpc/matrix.hpp"

namespace urwbpc {

// loglik(m, t) = log p(y_m | theta_t); prior(t) = p(theta_t).
struct LikelihoodTable {
    Matrix loglik;
    Vector prior;

    std::size_t nodes() const { return loglik.rows(); }
    std::size_t states() const { return loglik.cols(); }

    // K >= 2, finite log-likelihoods, prior nonnegative summing to 1.
    // Throws std::invalid_argument.
    void validate() const;
};

// Reweighted BP on the equality-constrained fusion factor graph with
// explicit directed messages, all in the log domain. Entry l of the result
// is the n x K grid of log-beliefs after l message updates (l = 0 is the
// local likelihood). Each row is shifted so its maximum is 0. A self-loop
// is a single arc that is its own reverse. Requires rho in (0, 1].
std::vector<Matrix> urwbp_message_oracle(const Graph& g, const Matrix& loglik, double rho, int max_iters);

// Runs consensus on every theta column until two consecutive updates move
// no entry by tol or more, rescales to the global log-likelihood sum, adds
// the log prior and normalises each node's row. Throws ConvergenceError
// when max_iters is reached first.
Matrix fuse_posterior(const Graph& g, const LikelihoodTable& table, const Algorithm& algorithm, double tol,
                      int max_iters);

// p(theta | y) from the product rule, one row of length K.
Vector centralized_posterior(const LikelihoodTable& table);

}  // namespace urwbpc
