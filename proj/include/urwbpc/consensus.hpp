#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "urwbpc/graph.hpp"
#include "urwbpc/matrix.hpp"
#include "urwbpc/weights.hpp"

namespace urwbpc {

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// x_prev is only meaningful for the two-step recursion.
struct ConsensusState {
    Vector x_curr;
    Vector x_prev;
    int iteration = 0;
};

struct BcAlgorithm {
    WeightScheme scheme;
};

struct BpcAlgorithm {
    double rho = 1.0;
};

using Algorithm = std::variant<BcAlgorithm, BpcAlgorithm>;

std::string algorithm_name(const Algorithm& algorithm);

// x <- W x.
ConsensusState bc_step(ConsensusState state, const Matrix& w);

// x^(1) = (I + rho A) x^(0); x_prev = x^(0).
ConsensusState bpc_init(const Graph& g, std::span<const double> x0, double rho);

// x^(l) = rho A x^(l-1) + (I - rho D) x^(l-2). Requires iteration >= 1.
ConsensusState bpc_step(const Graph& g, ConsensusState state, double rho);

// c_1^T b_1 = 2N - rho * trace(D).
double bpc_normaliser(const Graph& g, double rho);

// c_1^T z / (c_1^T b_1) with z = [x_curr; x_prev] and
// c_1^T = [1^T, 1^T - rho 1^T D]. Constant along a run.
double preserved_quantity(const Graph& g, const ConsensusState& state, double rho);

// 2 * sum(x0) / (2N - rho * trace(D)). Throws std::domain_error when the
// normaliser vanishes.
double bpc_consensus_value(const Graph& g, std::span<const double> x0, double rho);

// The 2N x 2N block matrix [[rho A, I - rho D], [I, 0]].
Matrix bpc_matrix(const Graph& g, double rho);

// The value an algorithm drives every node to.
double consensus_target(const Graph& g, std::span<const double> x0, const Algorithm& algorithm);

// Growth over any `window`-iteration span that starts at or after `start`,
// ignoring values below 1e-20 * trace[0]; any non-finite entry also counts.
bool detect_divergence(std::span<const double> trace, int window = 20, int start = 20);

struct RunResult {
    ConsensusState state;
    int iterations = 0;
    std::vector<double> trace;  // ||x^(l) - target 1||_2^2 for l = 0..iterations
    double target = 0.0;
    bool converged = false;
    bool diverged = false;
};

// Iterates until ||x - target 1||_inf < tol or max_iters steps. tol <= 0
// runs the full budget. Running out of iterations is reported, not thrown.
RunResult run_to_convergence(const Graph& g, std::span<const double> x0, const Algorithm& algorithm,
                             double tol, int max_iters);

// "iteration,error_sq" header plus one row per trace entry.
std::string trace_csv(std::span<const double> trace);

}  // namespace urwbpc
