#include "urwbpc/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace urwbpc {

void LikelihoodTable::validate() const {
    if (states() < 2) throw std::invalid_argument("LikelihoodTable: need at least 2 states");
    if (nodes() == 0) throw std::invalid_argument("LikelihoodTable: no nodes");
    if (prior.size() != states()) throw std::invalid_argument("LikelihoodTable: prior length differs from state count");
    for (double x : loglik.data()) {
        if (!std::isfinite(x)) throw std::invalid_argument("LikelihoodTable: non-finite log-likelihood");
    }
    double total = 0.0;
    for (double p : prior) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("LikelihoodTable: prior entries must be nonnegative");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("LikelihoodTable: prior must sum to 1");
}

namespace {

// Normalises exp(log_row) in place.
void normalise_log_row(std::span<double> row) {
    const double m = *std::max_element(row.begin(), row.end());
    if (!std::isfinite(m)) throw std::domain_error("posterior: every state has zero probability");
    double total = 0.0;
    for (double& x : row) {
        x = std::exp(x - m);
        total += x;
    }
    for (double& x : row) x /= total;
}

double max_change(const Vector& a, const Vector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

// Converged per-node vector for one theta column.
Vector converge_column(const Graph& g, const Vector& x0, const Algorithm& algorithm, const Matrix& w, double tol,
                       int max_iters) {
    const auto* bc = std::get_if<BcAlgorithm>(&algorithm);
    ConsensusState s;
    s.x_curr = x0;
    int quiet = 0;
    double rho = bc ? 0.0 : std::get<BpcAlgorithm>(algorithm).rho;
    while (s.iteration < max_iters) {
        Vector before = s.x_curr;
        if (bc) {
            s = bc_step(std::move(s), w);
        } else if (s.iteration == 0) {
            s = bpc_init(g, x0, rho);
        } else {
            s = bpc_step(g, std::move(s), rho);
        }
        // Two quiet updates in a row mean [x_curr; x_prev] is a fixed point.
        quiet = max_change(s.x_curr, before) < tol ? quiet + 1 : 0;
        if (quiet >= 2) return s.x_curr;
    }
    throw ConvergenceError("fuse_posterior: no convergence within max_iters");
}

}  // namespace

Matrix fuse_posterior(const Graph& g, const LikelihoodTable& table, const Algorithm& algorithm, double tol,
                      int max_iters) {
    table.validate();
    if (table.nodes() != g.size()) throw std::invalid_argument("fuse_posterior: table rows differ from node count");
    const std::size_t n = g.size();
    const std::size_t states = table.states();

    double scale = static_cast<double>(n);
    Matrix w;
    if (const auto* bc = std::get_if<BcAlgorithm>(&algorithm)) {
        if (n > 1) w = build_weight_matrix(g, bc->scheme);
    } else {
        scale = bpc_normaliser(g, std::get<BpcAlgorithm>(algorithm).rho) / 2.0;
        if (scale == 0.0) throw std::domain_error("fuse_posterior: 2N - rho*trace(D) is zero");
    }

    Matrix post(n, states);
    for (std::size_t t = 0; t < states; ++t) {
        Vector column(n);
        for (NodeId i = 0; i < n; ++i) column[i] = table.loglik(i, t);
        // A single node already holds the global sum.
        const Vector settled = n == 1 ? column : converge_column(g, column, algorithm, w, tol, max_iters);
        const double local_scale = n == 1 ? 1.0 : scale;
        const double log_prior = std::log(table.prior[t]);
        for (NodeId i = 0; i < n; ++i) post(i, t) = log_prior + local_scale * settled[i];
    }
    for (NodeId i = 0; i < n; ++i) normalise_log_row(post.row(i));
    return post;
}

Vector centralized_posterior(const LikelihoodTable& table) {
    table.validate();
    Vector row(table.states());
    for (std::size_t t = 0; t < table.states(); ++t) {
        double s = std::log(table.prior[t]);
        for (NodeId i = 0; i < table.nodes(); ++i) s += table.loglik(i, t);
        row[t] = s;
    }
    normalise_log_row(row);
    return row;
}

}  // namespace urwbpc
