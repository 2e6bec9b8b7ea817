#include "urwbpc/consensus.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace urwbpc {

std::string algorithm_name(const Algorithm& algorithm) {
    if (const auto* bc = std::get_if<BcAlgorithm>(&algorithm)) return "bc_" + bc->scheme.name();
    char buf[48];
    std::snprintf(buf, sizeof buf, "urwbpc(%g)", std::get<BpcAlgorithm>(algorithm).rho);
    return buf;
}

ConsensusState bc_step(ConsensusState state, const Matrix& w) {
    state.x_curr = multiply(w, state.x_curr);
    ++state.iteration;
    return state;
}

ConsensusState bpc_init(const Graph& g, std::span<const double> x0, double rho) {
    if (x0.size() != g.size()) throw std::invalid_argument("bpc_init: x0 has the wrong length");
    ConsensusState s;
    s.x_prev.assign(x0.begin(), x0.end());
    s.x_curr.resize(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        double nb = g.self_loops(i) * x0[i];
        for (NodeId j : g.neighbors(i)) nb += x0[j];
        s.x_curr[i] = x0[i] + rho * nb;
    }
    s.iteration = 1;
    return s;
}

ConsensusState bpc_step(const Graph& g, ConsensusState state, double rho) {
    if (state.iteration < 1) throw std::invalid_argument("bpc_step: state must come from bpc_init");
    Vector next(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        double nb = g.self_loops(i) * state.x_curr[i];
        for (NodeId j : g.neighbors(i)) nb += state.x_curr[j];
        next[i] = rho * nb + (1.0 - rho * g.degree(i)) * state.x_prev[i];
    }
    state.x_prev = std::move(state.x_curr);
    state.x_curr = std::move(next);
    ++state.iteration;
    return state;
}

double bpc_normaliser(const Graph& g, double rho) {
    return 2.0 * static_cast<double>(g.size()) - rho * g.degree_sum();
}

double preserved_quantity(const Graph& g, const ConsensusState& state, double rho) {
    double acc = 0.0;
    for (NodeId i = 0; i < g.size(); ++i) {
        acc += state.x_curr[i] + (1.0 - rho * g.degree(i)) * state.x_prev[i];
    }
    return acc / bpc_normaliser(g, rho);
}

double bpc_consensus_value(const Graph& g, std::span<const double> x0, double rho) {
    const double denom = bpc_normaliser(g, rho);
    if (denom == 0.0) throw std::domain_error("bpc_consensus_value: 2N - rho*trace(D) is zero");
    return 2.0 * std::accumulate(x0.begin(), x0.end(), 0.0) / denom;
}

Matrix bpc_matrix(const Graph& g, double rho) {
    const std::size_t n = g.size();
    Matrix p(2 * n, 2 * n);
    for (const Edge& e : g.edges()) {
        p(e.u, e.v) = rho;
        p(e.v, e.u) = rho;
    }
    for (NodeId i = 0; i < n; ++i) {
        p(i, i) = rho * g.self_loops(i);
        p(i, n + i) = 1.0 - rho * g.degree(i);
        p(n + i, i) = 1.0;
    }
    return p;
}

double consensus_target(const Graph& g, std::span<const double> x0, const Algorithm& algorithm) {
    if (const auto* bpc = std::get_if<BpcAlgorithm>(&algorithm)) return bpc_consensus_value(g, x0, bpc->rho);
    return std::accumulate(x0.begin(), x0.end(), 0.0) / static_cast<double>(x0.size());
}

bool detect_divergence(std::span<const double> trace, int window, int start) {
    if (trace.empty()) return false;
    for (double v : trace) {
        if (!std::isfinite(v)) return true;
    }
    const double floor = 1e-20 * trace[0];
    for (std::size_t l = static_cast<std::size_t>(start + window); l < trace.size(); ++l) {
        if (trace[l] > floor && trace[l] > trace[l - window]) return true;
    }
    return false;
}

namespace {

double squared_error(std::span<const double> x, double target) {
    double s = 0.0;
    for (double v : x) s += (v - target) * (v - target);
    return s;
}

double inf_error(std::span<const double> x, double target) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v - target));
    return m;
}

}  // namespace

RunResult run_to_convergence(const Graph& g, std::span<const double> x0, const Algorithm& algorithm,
                             double tol, int max_iters) {
    if (x0.size() != g.size()) throw std::invalid_argument("run_to_convergence: x0 has the wrong length");
    RunResult out;
    out.target = consensus_target(g, x0, algorithm);
    out.state.x_curr.assign(x0.begin(), x0.end());
    out.trace.push_back(squared_error(out.state.x_curr, out.target));

    const auto* bc = std::get_if<BcAlgorithm>(&algorithm);
    const double rho = bc ? 0.0 : std::get<BpcAlgorithm>(algorithm).rho;
    Matrix w;
    if (bc) w = build_weight_matrix(g, bc->scheme);

    auto done = [&] { return tol > 0.0 && inf_error(out.state.x_curr, out.target) < tol; };
    out.converged = done();
    while (!out.converged && out.state.iteration < max_iters) {
        if (bc) {
            out.state = bc_step(std::move(out.state), w);
        } else if (out.state.iteration == 0) {
            out.state = bpc_init(g, x0, rho);
        } else {
            out.state = bpc_step(g, std::move(out.state), rho);
        }
        const double err = squared_error(out.state.x_curr, out.target);
        out.trace.push_back(err);
        if (!std::isfinite(err)) break;
        out.converged = done();
    }
    out.iterations = out.state.iteration;
    out.diverged = !out.converged && detect_divergence(out.trace);
    return out;
}

std::string trace_csv(std::span<const double> trace) {
    std::string out = "iteration,error_sq\n";
    char buf[64];
    for (std::size_t l = 0; l < trace.size(); ++l) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", l, trace[l]);
        out += buf;
    }
    return out;
}

}  // namespace urwbpc
