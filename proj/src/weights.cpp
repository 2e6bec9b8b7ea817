#include "urwbpc/weights.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "urwbpc/eigen.hpp"

namespace urwbpc {

std::string WeightScheme::name() const {
    char buf[64];
    switch (kind) {
    case Kind::Metropolis:
        return "metropolis";
    case Kind::Uniform:
        std::snprintf(buf, sizeof buf, "uniform(%g)", parameter);
        return buf;
    case Kind::LaplacianStep:
        std::snprintf(buf, sizeof buf, "laplacian(%g)", parameter);
        return buf;
    }
    return "unknown";
}

Matrix build_weight_matrix(const Graph& g, const WeightScheme& scheme) {
    if (g.has_self_loops()) throw std::invalid_argument("build_weight_matrix: graph has self-loops");
    const std::size_t n = g.size();
    Matrix w(n, n);

    switch (scheme.kind) {
    case WeightScheme::Kind::Metropolis:
        for (const Edge& e : g.edges()) {
            const double wt = 1.0 / (std::max(g.degree(e.u), g.degree(e.v)) + 1);
            w(e.u, e.v) = wt;
            w(e.v, e.u) = wt;
        }
        for (NodeId i = 0; i < n; ++i) {
            double off = 0.0;
            for (NodeId j : g.neighbors(i)) off += w(i, j);
            w(i, i) = 1.0 - off;
        }
        break;
    case WeightScheme::Kind::Uniform: {
        const double xi = scheme.parameter;
        const int d_max = g.max_degree();
        if (!(xi > 0.0) || (d_max > 0 && !(xi * d_max < 1.0))) {
            throw std::invalid_argument("build_weight_matrix: uniform weight must satisfy 0 < xi < 1/d_max");
        }
        for (const Edge& e : g.edges()) {
            w(e.u, e.v) = xi;
            w(e.v, e.u) = xi;
        }
        for (NodeId i = 0; i < n; ++i) w(i, i) = 1.0 - xi * g.degree(i);
        break;
    }
    case WeightScheme::Kind::LaplacianStep: {
        const double eps = scheme.parameter;
        const Matrix l = laplacian(g);
        const auto ev = symmetric_eigenvalues(l);
        const double l_max = ev.empty() ? 0.0 : *std::max_element(ev.begin(), ev.end());
        if (!(eps > 0.0) || (l_max > 0.0 && !(eps * l_max < 2.0))) {
            throw std::invalid_argument("build_weight_matrix: Laplacian step must satisfy 0 < eps < 2/lambda_max(L)");
        }
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = 0; j < n; ++j) w(i, j) = (i == j ? 1.0 : 0.0) - eps * l(i, j);
        }
        break;
    }
    }
    return w;
}

}  // namespace urwbpc
