#include "urwbpc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "urwbpc/eigen.hpp"

namespace urwbpc {

std::vector<double> adjacency_spectrum(const Graph& g, double tol) {
    const Matrix a = adjacency(g);
    std::vector<double> mu = a.rows() <= kJacobiMaxSize ? jacobi_eigenvalues(a, tol)
                                                        : tridiagonal_ql_eigenvalues(a);
    constexpr double tie = 1e-9;
    std::sort(mu.begin(), mu.end(), [](double x, double y) {
        const double ax = std::fabs(x);
        const double ay = std::fabs(y);
        if (std::fabs(ax - ay) > tie * std::max(1.0, std::max(ax, ay))) return ax > ay;
        return x > y;
    });
    return mu;
}

double mu_tilde(const std::vector<double>& spectrum, int k, double tol) {
    const double bound = k * (1.0 - tol);
    double best = -1.0;
    for (double m : spectrum) {
        const double am = std::fabs(m);
        if (am < bound) best = std::max(best, am);
    }
    if (best < 0.0) throw std::domain_error("mu_tilde: no adjacency eigenvalue strictly inside (-k, k)");
    return best;
}

std::pair<std::complex<double>, std::complex<double>> lambda_pair(double mu, int k, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("lambda_pair: rho must be positive");
    const double disc = mu * mu * rho * rho - 4.0 * k * rho + 4.0;
    const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
    const std::complex<double> half_sum(0.5 * mu * rho, 0.0);
    return {half_sum + 0.5 * root, half_sum - 0.5 * root};
}

double lambda_magnitude(double mu, int k, double rho) {
    const auto [a, b] = lambda_pair(mu, k, rho);
    return std::max(std::abs(a), std::abs(b));
}

namespace {

void check_closed_form_domain(double mu_tilde_value, int k, const char* who) {
    if (k < 2) throw std::domain_error(std::string(who) + ": requires k >= 2");
    if (!(mu_tilde_value > 0.0) || !(mu_tilde_value < k)) {
        throw std::domain_error(std::string(who) + ": requires 0 < mu_tilde < k");
    }
}

}  // namespace

// k - sqrt(k^2 - mu^2) rewritten as mu^2 / (k + sqrt(k^2 - mu^2)) to avoid
// cancellation for small mu.
double rho_opt(double mu_tilde_value, int k) {
    check_closed_form_domain(mu_tilde_value, k, "rho_opt");
    return 2.0 / (k + std::sqrt(static_cast<double>(k) * k - mu_tilde_value * mu_tilde_value));
}

double lambda_tilde_opt(double mu_tilde_value, int k) {
    check_closed_form_domain(mu_tilde_value, k, "lambda_tilde_opt");
    return mu_tilde_value / (k + std::sqrt(static_cast<double>(k) * k - mu_tilde_value * mu_tilde_value));
}

LimitRates limit_rates(int k) {
    if (k < 3) throw std::domain_error("limit_rates: requires k >= 3");
    const double kd = k;
    const double root = std::sqrt(kd * kd - 4.0 * (kd - 1.0));  // = k - 2
    LimitRates out;
    out.rho_opt = (kd - root) / (2.0 * (kd - 1.0));
    out.lambda_bpc = (kd - root) / (2.0 * std::sqrt(kd - 1.0));
    out.lambda_metropolis = (1.0 + 2.0 * std::sqrt(kd - 1.0)) / (kd + 1.0);
    if (!(out.lambda_bpc < out.lambda_metropolis)) {
        throw std::logic_error("limit_rates: BPC limit not below the Metropolis limit");
    }
    return out;
}

double predicted_bpc_rate(const std::vector<double>& spectrum, int k, double rho, double tol) {
    const double edge = k * tol;
    const double principal_partner = std::fabs(rho * k - 1.0);
    double rate = 0.0;
    for (double m : spectrum) {
        if (std::fabs(m - k) <= edge || std::fabs(m + k) <= edge) {
            rate = std::max(rate, principal_partner);
        } else {
            rate = std::max(rate, lambda_magnitude(m, k, rho));
        }
    }
    return rate;
}

double competitor_rate(const Graph& g, const WeightScheme& scheme) {
    if (!is_connected(g)) throw std::invalid_argument("competitor_rate: graph is disconnected");
    Matrix w = build_weight_matrix(g, scheme);
    const double shift = 1.0 / static_cast<double>(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        for (NodeId j = 0; j < g.size(); ++j) w(i, j) -= shift;
    }
    const auto ev = symmetric_eigenvalues(w);
    double rate = 0.0;
    for (double x : ev) rate = std::max(rate, std::fabs(x));
    return rate;
}

double metropolis_rate_regular(const std::vector<double>& spectrum, int k, double tol) {
    const double edge = k * tol;
    double rate = 0.0;
    bool skipped = false;
    for (double m : spectrum) {
        if (!skipped && std::fabs(m - k) <= edge) {
            skipped = true;
            continue;
        }
        rate = std::max(rate, std::fabs(1.0 + m) / (k + 1.0));
    }
    return rate;
}

SpectralReport spectral_report(const Graph& g, std::optional<double> uniform_xi) {
    SpectralReport r;
    r.n = g.size();
    r.mu = adjacency_spectrum(g);
    r.regular_degree = g.regular_degree();
    r.bipartite = is_bipartite(g);
    if (r.regular_degree && *r.regular_degree >= 2) {
        const int k = *r.regular_degree;
        try {
            const double mt = mu_tilde(r.mu, k);
            if (mt > 0.0) {
                r.mu_tilde = mt;
                r.rho_opt = rho_opt(mt, k);
                r.lambda_tilde_mag = lambda_tilde_opt(mt, k);
            }
        } catch (const std::domain_error&) {
            // {k, -k} only: no closed-form optimum exists.
        }
    }
    r.uniform_xi = uniform_xi.value_or(1.0 / (g.max_degree() + 1.0));
    if (!g.has_self_loops() && is_connected(g)) {
        r.lambda2_metropolis = competitor_rate(g, WeightScheme::metropolis());
        r.lambda2_uniform = competitor_rate(g, WeightScheme::uniform(r.uniform_xi));
    }
    return r;
}

namespace {

std::string number(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string number(const std::optional<double>& x) { return x ? number(*x) : "null"; }

}  // namespace

std::string to_json(const SpectralReport& r) {
    std::ostringstream out;
    out << "{\"n\":" << r.n << ",\"mu\":[";
    for (std::size_t i = 0; i < r.mu.size(); ++i) {
        if (i) out << ',';
        out << number(r.mu[i]);
    }
    out << "],\"k\":" << (r.regular_degree ? std::to_string(*r.regular_degree) : "null")
        << ",\"bipartite\":" << (r.bipartite ? "true" : "false")
        << ",\"mu_tilde\":" << number(r.mu_tilde)
        << ",\"rho_opt\":" << number(r.rho_opt)
        << ",\"lambda_tilde_mag\":" << number(r.lambda_tilde_mag)
        << ",\"lambda2_metropolis\":" << number(r.lambda2_metropolis)
        << ",\"lambda2_uniform\":" << number(r.lambda2_uniform)
        << ",\"uniform_xi\":" << number(r.uniform_xi)
        << ",\"empirical_rho\":" << number(r.empirical_rho)
        << ",\"empirical_bpc_rate\":" << number(r.empirical_bpc_rate)
        << ",\"empirical_finite_time\":" << (r.empirical_finite_time ? "true" : "false") << "}";
    return out.str();
}

}  // namespace urwbpc
