#include "urwbpc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "urwbpc/generators.hpp"

namespace urwbpc {

std::mt19937_64 stream_rng(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex guard;
    std::size_t failed_at = count;
    std::exception_ptr failure;
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(guard);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

constexpr std::uint64_t kGraphStream = 0;
constexpr std::uint64_t kInitStream = 1;

double squared_spread(std::span<const double> x, double avg) {
    double s = 0.0;
    for (double v : x) s += (v - avg) * (v - avg);
    return s;
}

struct ResolvedAlgorithm {
    Graph graph;
    Algorithm algorithm;
    std::optional<double> predicted;
};

ResolvedAlgorithm resolve_on(const AlgorithmSpec& spec, const Graph& g) {
    Graph rg = spec.run_graph(g);
    Algorithm alg = spec.resolve(rg);
    std::optional<double> predicted;
    if (const auto* bpc = std::get_if<BpcAlgorithm>(&alg)) {
        if (const auto k = rg.regular_degree(); k && *k >= 1) {
            predicted = predicted_bpc_rate(adjacency_spectrum(rg), *k, bpc->rho);
        }
    } else if (rg.size() > 1) {
        predicted = competitor_rate(rg, std::get<BcAlgorithm>(alg).scheme);
    }
    return {std::move(rg), alg, predicted};
}

TrialOutcome run_trial(const ResolvedAlgorithm& ra, const Vector& x0, double e0, int iterations) {
    TrialOutcome out;
    out.predicted_rate = ra.predicted;
    double sigma = 1.0;
    if (const auto* bpc = std::get_if<BpcAlgorithm>(&ra.algorithm)) {
        out.rho = bpc->rho;
        sigma = bpc_normaliser(ra.graph, bpc->rho) / (2.0 * static_cast<double>(ra.graph.size()));
    }
    const RunResult run = run_to_convergence(ra.graph, x0, ra.algorithm, 0.0, iterations);
    out.error.assign(static_cast<std::size_t>(iterations) + 1, std::numeric_limits<double>::quiet_NaN());
    out.error[0] = e0;
    for (std::size_t l = 1; l < run.trace.size() && l < out.error.size(); ++l) {
        out.error[l] = sigma * sigma * run.trace[l];
    }
    out.diverged = run.diverged || run.trace.size() < out.error.size() ||
                   std::any_of(out.error.begin(), out.error.end(), [](double v) { return !std::isfinite(v); });
    return out;
}

std::string number(double x) {
    if (!std::isfinite(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json json_number(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

ExperimentResult run_mse_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    const std::size_t n_alg = cfg.algorithms.size();
    const std::size_t len = static_cast<std::size_t>(cfg.iterations) + 1;

    // Fixed graphs and their resolved algorithms are shared across trials.
    std::optional<Graph> fixed;
    std::vector<ResolvedAlgorithm> fixed_algs;
    if (!cfg.graph.redraw_per_trial()) {
        fixed = cfg.graph.generate(stream_rng(cfg.master_seed, 0, kGraphStream)());
        for (const auto& a : cfg.algorithms) fixed_algs.push_back(resolve_on(a, *fixed));
    }
    if (cfg.fixed_init && fixed && cfg.fixed_init->size() != fixed->size()) {
        throw std::invalid_argument("experiment: initial-value count differs from node count");
    }

    std::vector<std::vector<TrialOutcome>> outcomes(trials, std::vector<TrialOutcome>(n_alg));
    parallel_for(trials, cfg.threads, [&](std::size_t t) {
        Graph g = fixed ? *fixed : cfg.graph.generate(stream_rng(cfg.master_seed, t, kGraphStream)());
        Vector x0;
        if (cfg.fixed_init) {
            if (cfg.fixed_init->size() != g.size()) {
                throw std::invalid_argument("experiment: initial-value count differs from node count");
            }
            x0 = *cfg.fixed_init;
        } else {
            auto rng = stream_rng(cfg.master_seed, t, kInitStream);
            std::normal_distribution<double> normal(0.0, 1.0);
            x0.resize(g.size());
            for (double& v : x0) v = normal(rng);
        }
        double avg = 0.0;
        for (double v : x0) avg += v;
        avg /= static_cast<double>(x0.size());
        const double e0 = squared_spread(x0, avg);
        for (std::size_t a = 0; a < n_alg; ++a) {
            if (fixed) {
                outcomes[t][a] = run_trial(fixed_algs[a], x0, e0, cfg.iterations);
            } else {
                outcomes[t][a] = run_trial(resolve_on(cfg.algorithms[a], g), x0, e0, cfg.iterations);
            }
        }
    });

    ExperimentResult result;
    result.master_seed = cfg.master_seed;
    for (std::size_t a = 0; a < n_alg; ++a) {
        MseSeries s;
        s.algorithm = cfg.algorithms[a].name;
        std::vector<double> sum(len, 0.0);
        for (std::size_t t = 0; t < trials; ++t) {
            const TrialOutcome& o = outcomes[t][a];
            if (o.diverged) {
                ++s.excluded;
                continue;
            }
            ++s.trials_averaged;
            for (std::size_t l = 0; l < len; ++l) sum[l] += o.error[l];
        }
        if (s.trials_averaged == 0) {
            s.values.assign(len, std::numeric_limits<double>::quiet_NaN());
        } else if (sum[0] == 0.0) {
            // Already at consensus: nothing to normalise by.
            s.values.assign(len, 0.0);
        } else {
            s.values.resize(len);
            for (std::size_t l = 0; l < len; ++l) s.values[l] = sum[l] / sum[0];
        }
        for (std::size_t t = 0; t < trials; ++t) s.trials.push_back(std::move(outcomes[t][a]));
        result.series.push_back(std::move(s));
    }
    return result;
}

std::string mse_csv(const ExperimentResult& result) {
    std::string out = "iteration";
    for (const auto& s : result.series) out += "," + s.algorithm;
    out += "\n";
    const std::size_t len = result.series.empty() ? 0 : result.series.front().values.size();
    for (std::size_t l = 0; l < len; ++l) {
        out += std::to_string(l);
        for (const auto& s : result.series) out += "," + number(s.values[l]);
        out += "\n";
    }
    return out;
}

std::string mse_json(const ExperimentResult& result) {
    nlohmann::json j;
    j["master_seed"] = result.master_seed;
    j["series"] = nlohmann::json::array();
    for (const auto& s : result.series) {
        nlohmann::json values = nlohmann::json::array();
        for (double v : s.values) values.push_back(json_number(v));
        j["series"].push_back({{"algorithm", s.algorithm},
                               {"trials_averaged", s.trials_averaged},
                               {"excluded", s.excluded},
                               {"values", values}});
    }
    return j.dump(2) + "\n";
}

std::string mse_metadata_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    nlohmann::json j;
    j["master_seed"] = cfg.master_seed;
    j["graph"] = cfg.graph.to_string();
    j["trials"] = cfg.trials;
    j["iterations"] = cfg.iterations;
    j["init"] = cfg.fixed_init ? "fixed" : "standard_normal";
    j["algorithms"] = nlohmann::json::array();
    for (std::size_t a = 0; a < result.series.size(); ++a) {
        const auto& s = result.series[a];
        double rho_sum = 0.0;
        double rate_sum = 0.0;
        int rate_count = 0;
        for (const auto& t : s.trials) {
            rho_sum += t.rho;
            if (t.predicted_rate) {
                rate_sum += *t.predicted_rate;
                ++rate_count;
            }
        }
        const double trials = static_cast<double>(std::max<std::size_t>(s.trials.size(), 1));
        j["algorithms"].push_back({
            {"name", s.algorithm},
            {"spec", a < cfg.algorithms.size() ? cfg.algorithms[a].to_string() : std::string()},
            {"trials_averaged", s.trials_averaged},
            {"excluded_trials", s.excluded},
            {"mean_rho", a < cfg.algorithms.size() && !cfg.algorithms[a].bpc
                             ? nlohmann::json(nullptr)
                             : json_number(rho_sum / trials)},
            {"mean_predicted_rate", rate_count ? json_number(rate_sum / rate_count) : nlohmann::json(nullptr)},
        });
    }
    return j.dump(2) + "\n";
}

std::vector<double> ratio_cdf_experiment(std::size_t n, int k, int samples, std::uint64_t master_seed, int threads) {
    if (samples < 1) throw std::invalid_argument("ratio_cdf_experiment: samples must be >= 1");
    if ((n * static_cast<std::size_t>(std::max(k, 0))) % 2 != 0) {
        throw std::invalid_argument("ratio_cdf_experiment: n*k must be even");
    }
    std::vector<double> ratios(static_cast<std::size_t>(samples));
    parallel_for(ratios.size(), threads, [&](std::size_t s) {
        const Graph g = random_k_regular(n, k, stream_rng(master_seed, s, kGraphStream)());
        const auto spectrum = adjacency_spectrum(g);
        ratios[s] = lambda_tilde_opt(mu_tilde(spectrum, k), k) / metropolis_rate_regular(spectrum, k);
    });
    std::sort(ratios.begin(), ratios.end());
    return ratios;
}

std::string ratio_cdf_csv(const std::vector<double>& sorted_ratios) {
    std::string out = "r,cdf\n";
    const double m = static_cast<double>(sorted_ratios.size());
    for (std::size_t i = 0; i < sorted_ratios.size(); ++i) {
        out += number(sorted_ratios[i]) + "," + number(static_cast<double>(i + 1) / m) + "\n";
    }
    return out;
}

std::vector<double> rho_grid(int k, int points) {
    if (k < 1) throw std::invalid_argument("rho_grid: k must be positive");
    if (points < 1) throw std::invalid_argument("rho_grid: need at least one point");
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double top = 2.0 / k;
    for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = top * (i + 1) / (points + 1);
    return grid;
}

std::vector<SweepPoint> rho_sweep(const Graph& g, std::span<const double> grid) {
    const auto k = g.regular_degree();
    if (!k) throw std::invalid_argument("rho_sweep: graph is not regular");
    const auto spectrum = adjacency_spectrum(g);
    const double mt = mu_tilde(spectrum, *k);
    // Second-largest signed eigenvalue.
    auto sorted = spectrum;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double mu2 = sorted.size() > 1 ? sorted[1] : sorted[0];
    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (double rho : grid) {
        if (!(rho > 0.0 && rho < 2.0 / *k)) throw std::invalid_argument("rho_sweep: grid point outside (0, 2/k)");
        out.push_back({rho, lambda_magnitude(mt, *k, rho), lambda_magnitude(mu2, *k, rho)});
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string out = "rho,lambda_tilde,lambda_mu2\n";
    for (const auto& p : points) out += number(p.rho) + "," + number(p.lambda_tilde) + "," + number(p.lambda_mu2) + "\n";
    return out;
}

EmpiricalRate empirical_rate(std::span<const double> trace, int discard, int min_points) {
    if (discard < 0 || min_points < 2) throw std::invalid_argument("empirical_rate: bad discard/min_points");
    double peak = 0.0;
    for (double v : trace) {
        if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("empirical_rate: invalid trace entry");
        peak = std::max(peak, v);
    }
    // Jumps taken from the rounding floor do not count.
    for (std::size_t l = 1; l < trace.size(); ++l) {
        if (trace[l - 1] > 1e-20 * peak && (trace[l] == 0.0 || trace[l] < 1e-12 * trace[l - 1])) {
            return {0.0, true, 0};
        }
    }
    if (trace.size() < static_cast<std::size_t>(discard + min_points)) {
        throw std::invalid_argument("empirical_rate: trace too short");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (std::size_t l = static_cast<std::size_t>(discard); l < trace.size(); ++l) {
        if (trace[l] <= 1e-26 * peak) break;
        const double x = static_cast<double>(l);
        const double y = 0.5 * std::log(trace[l]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 3) throw std::invalid_argument("empirical_rate: too few points above the numerical floor");
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return {std::exp(slope), false, m};
}

SpectralReport full_spectral_report(const Graph& g, const ReportOptions& options) {
    SpectralReport report = spectral_report(g, options.uniform_xi);
    if (report.mu_tilde || !is_connected(g) || g.size() < 2) return report;
    const bool tree = g.edge_count() + 1 == g.size() && !g.has_self_loops();
    const double rho = options.rho ? *options.rho : tree ? 1.0 : 1.0 / g.max_degree();
    auto rng = stream_rng(options.seed, 0, kInitStream);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector x0(g.size());
    for (double& v : x0) v = normal(rng);
    const RunResult run = run_to_convergence(g, x0, BpcAlgorithm{rho}, 0.0, options.iterations);
    report.empirical_rho = rho;
    try {
        const EmpiricalRate r = empirical_rate(run.trace);
        report.empirical_bpc_rate = r.rate;
        report.empirical_finite_time = r.finite_time;
    } catch (const std::invalid_argument&) {
        // Too short or flat; leave the rate absent.
    }
    return report;
}

}  // namespace urwbpc
