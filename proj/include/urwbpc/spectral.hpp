#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "urwbpc/graph.hpp"
#include "urwbpc/weights.hpp"

namespace urwbpc {

// Relative margin below k used to call |mu| "strictly inside" (-k, k).
inline constexpr double kInsideTolerance = 1e-9;

// Adjacency eigenvalues sorted by descending |mu|, ties (within 1e-9) by
// descending signed value.
std::vector<double> adjacency_spectrum(const Graph& g, double tol = 1e-12);

// Largest |mu| over eigenvalues with |mu| < k(1 - tol). For bipartite
// graphs this skips both +k and -k. Throws std::domain_error when no
// eigenvalue qualifies.
double mu_tilde(const std::vector<double>& spectrum, int k, double tol = kInsideTolerance);

// Roots of lambda^2 - mu*rho*lambda + rho*k - 1, "+" branch first.
std::pair<std::complex<double>, std::complex<double>> lambda_pair(double mu, int k, double rho);

// Larger root magnitude of lambda_pair(mu, k, rho). Even in mu.
double lambda_magnitude(double mu, int k, double rho);

// rho minimising the second-largest |lambda| of the two-step recursion on a
// k-regular graph: (2/mu^2)(k - sqrt(k^2 - mu^2)). Needs k >= 2 and
// 0 < mu_tilde < k, else std::domain_error.
double rho_opt(double mu_tilde, int k);

// |lambda~| at rho_opt: (k - sqrt(k^2 - mu^2)) / mu.
double lambda_tilde_opt(double mu_tilde, int k);

struct LimitRates {
    double rho_opt = 0.0;
    double lambda_bpc = 0.0;
    double lambda_metropolis = 0.0;
};

// Large-N limits for random k-regular graphs, where |mu_2| -> 2 sqrt(k-1).
// Requires k >= 3.
LimitRates limit_rates(int k);

// Predicted decay rate of the two-step recursion on a k-regular graph at
// any rho: the largest root magnitude over every adjacency eigenvalue other
// than +k (whose second root rho*k - 1 is included) and -k (cancelled by
// the initialisation).
double predicted_bpc_rate(const std::vector<double>& spectrum, int k, double rho,
                          double tol = kInsideTolerance);

// Second-largest eigenvalue magnitude of the scheme's W: the spectral
// radius of W - 11^T/N. Throws std::invalid_argument when g is
// disconnected or the scheme parameter is out of range.
double competitor_rate(const Graph& g, const WeightScheme& scheme);

// Metropolis rate of a loop-free k-regular graph straight from its
// adjacency spectrum: max over mu != k of |1 + mu| / (k + 1).
double metropolis_rate_regular(const std::vector<double>& spectrum, int k,
                               double tol = kInsideTolerance);

struct SpectralReport {
    std::size_t n = 0;
    std::vector<double> mu;
    std::optional<int> regular_degree;
    bool bipartite = false;

    // Closed forms; present only for regular graphs with a usable mu~.
    std::optional<double> mu_tilde;
    std::optional<double> rho_opt;
    std::optional<double> lambda_tilde_mag;

    // Belief-consensus competitors; absent when the graph has self-loops.
    std::optional<double> lambda2_metropolis;
    std::optional<double> lambda2_uniform;
    double uniform_xi = 0.0;

    // Measured rate of the two-step recursion for graphs without a
    // closed form.
    std::optional<double> empirical_rho;
    std::optional<double> empirical_bpc_rate;
    bool empirical_finite_time = false;
};

// Closed-form part of the report. uniform_xi defaults to 1/(d_max + 1).
SpectralReport spectral_report(const Graph& g, std::optional<double> uniform_xi = std::nullopt);

// Flat JSON object; numbers printed with 17 significant digits, absent
// optionals as null.
std::string to_json(const SpectralReport& report);

}  // namespace urwbpc
