#include <algorithm>
#include <stdexcept>

#include "urwbpc/fusion.hpp"

namespace urwbpc {

namespace {

struct Arc {
    NodeId from;
    NodeId to;
    std::size_t reverse;
};

void shift_to_zero_max(std::span<double> row) {
    if (row.empty()) return;
    const double m = *std::max_element(row.begin(), row.end());
    for (double& x : row) x -= m;
}

}  // namespace

std::vector<Matrix> urwbp_message_oracle(const Graph& g, const Matrix& loglik, double rho, int max_iters) {
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("urwbp_message_oracle: rho must lie in (0, 1]");
    if (loglik.rows() != g.size()) throw std::invalid_argument("urwbp_message_oracle: loglik has the wrong row count");
    if (max_iters < 0) throw std::invalid_argument("urwbp_message_oracle: negative iteration count");
    const std::size_t n = g.size();
    const std::size_t states = loglik.cols();

    std::vector<Arc> arcs;
    for (const Edge& e : g.edges()) {
        const std::size_t a = arcs.size();
        arcs.push_back({e.u, e.v, a + 1});
        arcs.push_back({e.v, e.u, a});
    }
    for (NodeId i = 0; i < n; ++i) {
        for (int s = 0; s < g.self_loops(i); ++s) {
            const std::size_t a = arcs.size();
            arcs.push_back({i, i, a});
        }
    }
    std::vector<std::vector<std::size_t>> incoming(n);
    for (std::size_t a = 0; a < arcs.size(); ++a) incoming[arcs[a].to].push_back(a);

    // mu^(0) = 1, i.e. log-message 0.
    Matrix messages(arcs.size(), states, 0.0);
    Matrix next(arcs.size(), states, 0.0);

    std::vector<Matrix> beliefs;
    beliefs.reserve(static_cast<std::size_t>(max_iters) + 1);
    Matrix b0 = loglik;
    for (NodeId i = 0; i < n; ++i) shift_to_zero_max(b0.row(i));
    beliefs.push_back(std::move(b0));

    for (int l = 1; l <= max_iters; ++l) {
        for (std::size_t a = 0; a < arcs.size(); ++a) {
            const NodeId m = arcs[a].from;
            const std::size_t back = arcs[a].reverse;
            auto out = next.row(a);
            const auto local = loglik.row(m);
            std::copy(local.begin(), local.end(), out.begin());
            for (std::size_t c : incoming[m]) {
                if (c == back) continue;
                const auto in = messages.row(c);
                for (std::size_t t = 0; t < states; ++t) out[t] += rho * in[t];
            }
            const auto rev = messages.row(back);
            for (std::size_t t = 0; t < states; ++t) out[t] -= (1.0 - rho) * rev[t];
            shift_to_zero_max(out);
        }
        std::swap(messages, next);

        Matrix b = loglik;
        for (NodeId i = 0; i < n; ++i) {
            auto row = b.row(i);
            for (std::size_t c : incoming[i]) {
                const auto in = messages.row(c);
                for (std::size_t t = 0; t < states; ++t) row[t] += rho * in[t];
            }
            shift_to_zero_max(row);
        }
        beliefs.push_back(std::move(b));
    }
    return beliefs;
}

}  // namespace urwbpc
