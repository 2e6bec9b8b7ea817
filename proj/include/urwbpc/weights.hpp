#pragma once

#include <string>

#include "urwbpc/graph.hpp"
#include "urwbpc/matrix.hpp"

namespace urwbpc {

// Belief-consensus weighting. Metropolis: W_nm = 1/(max(d_n, d_m) + 1) on
// edges. Uniform: xi on edges, 1 - xi*d_n on the diagonal. Laplacian step:
// W = I - eps*L.
struct WeightScheme {
    enum class Kind { Metropolis, Uniform, LaplacianStep };

    Kind kind = Kind::Metropolis;
    double parameter = 0.0;  // xi or eps; unused for Metropolis

    static WeightScheme metropolis() { return {Kind::Metropolis, 0.0}; }
    static WeightScheme uniform(double xi) { return {Kind::Uniform, xi}; }
    static WeightScheme laplacian_step(double eps) { return {Kind::LaplacianStep, eps}; }

    std::string name() const;

    bool operator==(const WeightScheme&) const = default;
};

// Throws std::invalid_argument for graphs with self-loops, xi outside
// (0, 1/d_max), or eps outside (0, 2/lambda_max(L)).
Matrix build_weight_matrix(const Graph& g, const WeightScheme& scheme);

}  // namespace urwbpc
