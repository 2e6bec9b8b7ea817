// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "urwbpc/consensus.hpp"
#include "urwbpc/fusion.hpp"
#include "urwbpc/generators.hpp"
#include "urwbpc/harness.hpp"
#include "urwbpc/spectral.hpp"

using namespace urwbpc;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < budget_s;
    const bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::printf("%s [%2d] %s | %s | %.2fs (limit %.0fs)%s\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
                budget_s, in_time ? "" : " TOO SLOW");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Matrix random_loglik(std::size_t n, std::size_t states, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.5);
    Matrix m(n, states);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < states; ++t) m(i, t) = d(rng);
    }
    return m;
}

double oracle_gap(const Graph& g, const Matrix& loglik, double rho, int steps) {
    const auto beliefs = urwbp_message_oracle(g, loglik, rho, steps);
    const std::size_t n = g.size();
    const std::size_t states = loglik.cols();
    double gap = 0.0;
    std::vector<ConsensusState> s(states);
    for (int l = 0; l <= steps; ++l) {
        Matrix lin(n, states);
        for (std::size_t t = 0; t < states; ++t) {
            Vector x0(n);
            for (std::size_t i = 0; i < n; ++i) x0[i] = loglik(i, t);
            if (l == 0) {
                s[t].x_curr = x0;
            } else if (l == 1) {
                s[t] = bpc_init(g, x0, rho);
            } else {
                s[t] = bpc_step(g, std::move(s[t]), rho);
            }
            for (std::size_t i = 0; i < n; ++i) lin(i, t) = s[t].x_curr[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = lin.row(i);
            const double top = *std::max_element(row.begin(), row.end());
            for (std::size_t t = 0; t < states; ++t) {
                const double want = row[t] - top;
                gap = std::max(gap, std::fabs(beliefs[l](i, t) - want) / std::max(1.0, std::fabs(want)));
            }
        }
    }
    return gap;
}

}  // namespace

int main() {
    criterion(1, "small-world golden values (circulant n=10, k=4)", 1.0, [] {
        const Graph g = circulant_small_world(10, 4);
        const auto mu = adjacency_spectrum(g);
        const double mu2 = mu[1];
        const double lt = lambda_tilde_opt(mu_tilde(mu, 4), 4);
        const double lap = competitor_rate(g, WeightScheme::laplacian_step(0.25));
        const bool ok = std::fabs(mu2 - 2.236) <= 0.01 && std::fabs(lt - 0.31) <= 0.01 && std::fabs(lap - 0.56) <= 0.01;
        return Outcome{ok, fmt("mu2=%.5f |lambda~|=%.5f laplacian |lambda2|=%.5f", mu2, lt, lap)};
    });

    criterion(2, "finite-time consensus on 50 random trees, rho=1", 10.0, [] {
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<std::size_t> nd(2, 100);
        int worst_slack = 1 << 30;
        int within = 0;
        double worst_rel = 0.0;
        bool ok = true;
        for (int t = 0; t < 50; ++t) {
            const std::size_t n = t == 0 ? 2 : t == 1 ? 100 : nd(rng);
            const Graph tree = random_tree(n, rng());
            const Vector x0 = oracle::normal_vector(n, rng());
            const int budget = static_cast<int>(2 * n - 3);
            const RunResult r = run_to_convergence(tree, x0, BpcAlgorithm{1.0}, 1e-9, budget);
            double total = 0.0;
            for (double v : x0) total += v;
            for (double v : r.state.x_curr) {
                worst_rel = std::max(worst_rel, std::fabs(v - total) / std::max(1.0, std::fabs(total)));
            }
            const bool hit = r.converged && r.iterations <= budget;
            within += hit ? 1 : 0;
            ok = ok && hit;
            worst_slack = std::min(worst_slack, budget - r.iterations);
        }
        ok = ok && worst_rel <= 1e-9;
        return Outcome{ok, fmt("%.0f/50 exact within 2n-3, min slack %.0f, worst value error %.2e", within, worst_slack, worst_rel)};
    });

    criterion(3, "convergence interval on random 4-regular graphs (n=50)", 30.0, [] {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(0.05 / 4, 1.95 / 4);
        double worst = 0.0;
        int slowest = 0;
        bool ok = true;
        for (int t = 0; t < 20; ++t) {
            const Graph g = random_k_regular(50, 4, rng());
            const Vector x0 = oracle::normal_vector(50, rng());
            const double rho = u(rng);
            double total = 0.0;
            for (double v : x0) total += v;
            const double target = total / (50 * (1 - rho * 4 / 2.0));
            const RunResult r = run_to_convergence(g, x0, BpcAlgorithm{rho}, 1e-10 * std::max(1.0, std::fabs(target)), 200000);
            ok = ok && r.converged;
            slowest = std::max(slowest, r.iterations);
            for (double v : r.state.x_curr) worst = std::max(worst, std::fabs(v - target) / std::max(1e-300, std::fabs(target)));
        }
        ok = ok && worst <= 1e-7;
        const Graph g = random_k_regular(50, 4, 5);
        const RunResult d = run_to_convergence(g, oracle::normal_vector(50, 6), BpcAlgorithm{2.0 / 4 + 0.05}, 1e-10, 400);
        ok = ok && d.diverged;
        return Outcome{ok, fmt("worst value error %.2e, slowest %.0f iterations, divergence detected at rho=2/k+0.05: %.0f",
                               worst, slowest, d.diverged ? 1 : 0)};
    });

    criterion(4, "optimal rho is never beaten on a 1000-point grid", 5.0, [] {
        std::mt19937_64 rng(4);
        std::uniform_int_distribution<int> kd(2, 20);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = -1e9;
        for (int t = 0; t < 100; ++t) {
            const int k = kd(rng);
            double mt = 0.0;
            while (mt <= 0.0 || mt >= k) mt = u(rng) * k;
            const double lt = lambda_tilde_opt(mt, k);
            double best = 1e9;
            for (double rho : rho_grid(k, 1000)) best = std::min(best, lambda_magnitude(mt, k, rho));
            worst = std::max(worst, lt - best);
        }
        return Outcome{worst <= 1e-6, fmt("max(lambda~_opt - grid min) = %.3e", worst)};
    });

    criterion(5, "MSE at iteration 100, n=100, k=4, 100 trials: URW-BPC vs Metropolis", 120.0, [] {
        ExperimentConfig cfg;
        cfg.graph = GraphSpec::parse("regular:n=100,k=4");
        cfg.algorithms = {AlgorithmSpec::parse("urwbpc:rho=opt"), AlgorithmSpec::parse("bc:scheme=metropolis")};
        cfg.trials = 100;
        cfg.iterations = 100;
        cfg.master_seed = 4;
        const ExperimentResult r = run_mse_experiment(cfg);
        const double bpc = r.series[0].values[100];
        const double metr = r.series[1].values[100];
        const bool ok = r.series[0].values[0] == 1.0 && bpc * 10.0 <= metr;
        return Outcome{ok, fmt("urwbpc %.3e, metropolis %.3e, factor %.3g", bpc, metr, metr / std::max(bpc, 1e-300))};
    });

    criterion(6, "rate ratio over 1000 random 4-regular graphs at n=101 and n=33", 300.0, [] {
        const auto r101 = ratio_cdf_experiment(101, 4, 1000, 6);
        const auto r33 = ratio_cdf_experiment(33, 4, 1000, 6);
        const double limit = (1.0 / std::sqrt(3.0)) / ((1.0 + 2.0 * std::sqrt(3.0)) / 5.0);
        const double med = median(r101);
        const bool ok = r101.back() < 1.0 && r33.back() < 1.0 && std::fabs(med - limit) <= 0.05;
        return Outcome{ok, fmt("max r (101) %.4f, max r (33) %.4f, median (101) %.4f vs limit %.4f", r101.back(), r33.back(),
                               med, limit)};
    });

    criterion(7, "large-graph limits at n=2000, k=4", 120.0, [] {
        const Graph g = random_k_regular(2000, 4, 7);
        const auto mu = adjacency_spectrum(g);
        const double mu2 = std::fabs(mu[1]);
        const double lt = lambda_tilde_opt(mu_tilde(mu, 4), 4);
        const double metr = competitor_rate(g, WeightScheme::metropolis());
        const bool ok = std::fabs(mu2 - 2 * std::sqrt(3.0)) <= 0.05 && std::fabs(lt - 0.57735) <= 0.03 &&
                        std::fabs(metr - 0.89282) <= 0.03;
        return Outcome{ok, fmt("|mu2|=%.4f |lambda~|=%.4f metropolis=%.4f", mu2, lt, metr)};
    });

    criterion(8, "message passing equals the linear recursion (n<=12)", 30.0, [] {
        std::vector<Graph> suite;
        for (std::size_t n = 2; n <= 12; ++n) {
            suite.push_back(path_graph(n));
            suite.push_back(star_graph(n));
            for (std::uint64_t s = 0; s < 3; ++s) suite.push_back(random_tree(n, 100 * n + s));
            if (n >= 3) suite.push_back(cycle_graph(n));
            for (int k = 2; k <= 4 && k < static_cast<int>(n); ++k) {
                if ((n * k) % 2 == 0) suite.push_back(random_k_regular(n, k, n * 10 + k));
            }
            if (n >= 5) suite.push_back(add_self_loops_to_regularize(random_mixed_degree(n, n % 2 ? 4 : 3, 0.3, n)));
            suite.push_back(add_self_loops_to_regularize(star_graph(n)));
        }
        for (const Graph& g : oracle::all_graphs(4)) {
            if (is_connected(g)) suite.push_back(g);
        }
        double worst = 0.0;
        std::uint64_t seed = 0;
        for (const Graph& g : suite) {
            for (double rho : {0.3, 0.7, 1.0}) worst = std::max(worst, oracle_gap(g, random_loglik(g.size(), 3, ++seed), rho, 10));
        }
        return Outcome{worst <= 1e-10, fmt("%.0f graphs x 3 rho, worst centred gap %.2e", static_cast<double>(suite.size()), worst)};
    });

    criterion(9, "consensus eigen-relations and preserved quantity on 20 configurations", 10.0, [] {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0.02, 0.98);
        double eig = 0.0;
        double drift = 0.0;
        for (int t = 0; t < 20; ++t) {
            const Graph g = t % 2 ? random_k_regular(40, 3 + t % 3, rng())
                                  : add_self_loops_to_regularize(random_mixed_degree(40, 4, 0.25, rng()));
            const std::size_t n = g.size();
            const int k = *g.regular_degree();
            const double rho = u(rng) * 2.0 / k;
            const Matrix p = bpc_matrix(g, rho);
            const Vector pb = multiply(p, Vector(2 * n, 1.0));
            for (double v : pb) eig = std::max(eig, std::fabs(v - 1.0));
            Vector c(2 * n);
            for (std::size_t i = 0; i < n; ++i) {
                c[i] = 1.0;
                c[n + i] = 1.0 - rho * g.degree(i);
            }
            for (std::size_t j = 0; j < 2 * n; ++j) {
                double cp = 0.0;
                for (std::size_t i = 0; i < 2 * n; ++i) cp += c[i] * p(i, j);
                eig = std::max(eig, std::fabs(cp - c[j]));
            }
            const Vector x0 = oracle::normal_vector(n, rng());
            ConsensusState s = bpc_init(g, x0, rho);
            const double a0 = preserved_quantity(g, s, rho);
            for (int l = 0; l < 500; ++l) {
                s = bpc_step(g, std::move(s), rho);
                drift = std::max(drift, std::fabs(preserved_quantity(g, s, rho) - a0) / std::max(1e-300, std::fabs(a0)));
            }
        }
        return Outcome{eig <= 1e-12 && drift < 1e-8, fmt("eigen-relation error %.2e, max relative drift %.2e", eig, drift)};
    });

    criterion(10, "self-loop regularised graph (d_max=3): URW-BPC vs Metropolis on original", 60.0, [] {
        ExperimentConfig cfg;
        cfg.graph = GraphSpec::parse("mixed:n=100,dmax=3,drop=0.2");
        cfg.algorithms = {AlgorithmSpec::parse("urwbpc:rho=opt,topology=loops"), AlgorithmSpec::parse("bc:scheme=metropolis")};
        cfg.trials = 100;
        cfg.iterations = 100;
        cfg.master_seed = 10;
        const ExperimentResult r = run_mse_experiment(cfg);
        const double bpc = r.series[0].values[100];
        const double metr = r.series[1].values[100];
        return Outcome{bpc < metr, fmt("urwbpc %.3e, metropolis %.3e at iteration 100", bpc, metr)};
    });

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
