#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "urwbpc/consensus.hpp"
#include "urwbpc/graph.hpp"
#include "urwbpc/spectral.hpp"

namespace urwbpc {

// Deterministic per-(trial, stream) generator derived from the master seed.
std::mt19937_64 stream_rng(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t stream);

// Graph family plus parameters, written "kind:key=value,...", e.g.
// "regular:n=100,k=4", "tree:n=100,diameter=12", "circulant:n=10,k=4",
// "mixed:n=100,dmax=3,drop=0.2", "path:n=5", "cycle:n=6", "complete:n=5",
// "star:n=4", "file:path=g.txt".
struct GraphSpec {
    enum class Kind { Tree, Regular, Circulant, Mixed, Path, Cycle, Complete, Star, File };

    Kind kind = Kind::Regular;
    std::size_t n = 0;
    int k = 0;
    std::optional<int> diameter;
    double drop = 0.2;
    std::string path;

    static GraphSpec parse(const std::string& text);
    std::string to_string() const;

    // Random k-regular graphs are redrawn every trial; everything else is
    // drawn once per experiment.
    bool redraw_per_trial() const { return kind == Kind::Regular; }
    Graph generate(std::uint64_t seed) const;
};

// One algorithm entry, written "urwbpc:rho=opt,topology=loops" or
// "bc:scheme=metropolis" (also scheme=uniform,xi=... / laplacian,eps=...).
// Optional keys: name=..., topology=original|loops|delete, target_k=...
struct AlgorithmSpec {
    enum class Topology { Original, Loops, Delete };

    std::string name;
    bool bpc = true;
    std::optional<double> rho;  // empty means rho_opt of the run graph
    WeightScheme scheme = WeightScheme::metropolis();
    Topology topology = Topology::Original;
    int target_k = 0;  // Delete only

    static AlgorithmSpec parse(const std::string& text);
    std::string to_string() const;

    // Graph the algorithm actually runs on: Loops adds self-loops, Delete
    // deletes down to target_k then adds self-loops.
    Graph run_graph(const Graph& g) const;
    // Concrete algorithm for run_graph(g); resolves rho=opt.
    Algorithm resolve(const Graph& run_graph) const;
};

struct ExperimentConfig {
    GraphSpec graph;
    std::vector<AlgorithmSpec> algorithms;
    int trials = 100;
    int iterations = 100;
    std::uint64_t master_seed = 1;
    std::optional<Vector> fixed_init;  // empty: i.i.d. standard normal per trial
    int threads = 0;                   // 0: hardware concurrency

    void validate() const;
};

// Text: "key = value" per line, '#' comments. JSON: an object with the same
// keys, where "algorithms" may be a list. Keys: graph, algorithms (';'
// separated in text form), trials, iterations, seed, init (normal or
// file:<path>), threads. Throws ParseError.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

// Whitespace/comma separated numbers, one x^(0) entry per value.
Vector load_initial_values(const std::string& path);

struct TrialOutcome {
    std::vector<double> error;  // e^(l), l = 0..iterations
    double rho = 0.0;           // 0 for belief consensus
    std::optional<double> predicted_rate;
    bool diverged = false;
};

struct MseSeries {
    std::string algorithm;
    std::vector<double> values;  // normalised MSE per iteration
    int trials_averaged = 0;
    int excluded = 0;
    std::vector<TrialOutcome> trials;
};

struct ExperimentResult {
    std::vector<MseSeries> series;
    std::uint64_t master_seed = 0;
};

// e^(l) = ||sigma x^(l) - avg(x^(0)) 1||^2 with sigma = 1 for belief
// consensus and (2N - rho trace D)/(2N) for URW-BPC; e^(0) is the initial
// consensus error ||x^(0) - avg 1||^2 for every algorithm. Divergent
// trials are dropped per algorithm and counted.
ExperimentResult run_mse_experiment(const ExperimentConfig& cfg);

std::string mse_csv(const ExperimentResult& result);
std::string mse_json(const ExperimentResult& result);
std::string mse_metadata_json(const ExperimentConfig& cfg, const ExperimentResult& result);

// Sorted |lambda~_BPC| / |lambda_2,Metropolis| over random k-regular graphs.
std::vector<double> ratio_cdf_experiment(std::size_t n, int k, int samples, std::uint64_t master_seed,
                                         int threads = 0);
std::string ratio_cdf_csv(const std::vector<double>& sorted_ratios);

struct SweepPoint {
    double rho = 0.0;
    double lambda_tilde = 0.0;  // |lambda| on the mu~ branch
    double lambda_mu2 = 0.0;    // |lambda| on the mu_2 branch
};

// Evenly spaced interior grid of (0, 2/k).
std::vector<double> rho_grid(int k, int points);
// Throws std::invalid_argument for non-regular graphs.
std::vector<SweepPoint> rho_sweep(const Graph& g, std::span<const double> grid);
std::string sweep_csv(const std::vector<SweepPoint>& points);

struct EmpiricalRate {
    double rate = 0.0;
    bool finite_time = false;
    int points_used = 0;
};

// Geometric decay rate of a squared-error trace: least-squares slope of
// 0.5*log(trace) over iterations, after dropping the first `discard`
// entries and stopping at the numerical floor (1e-26 of the trace peak).
// A drop by 12 orders of magnitude in one step, or an exact zero, from a
// value above 1e-20 of the peak counts as finite-time convergence and
// returns rate 0. Throws
// std::invalid_argument when fewer than discard + min_points entries exist.
EmpiricalRate empirical_rate(std::span<const double> trace, int discard = 10, int min_points = 30);

struct ReportOptions {
    std::optional<double> uniform_xi;
    std::optional<double> rho;  // empirical run; default 1 for trees, 1/d_max otherwise
    int iterations = 200;
    std::uint64_t seed = 1;
};

// spectral_report plus a measured URW-BPC rate for graphs without a
// closed form (non-regular).
SpectralReport full_spectral_report(const Graph& g, const ReportOptions& options = {});

// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace urwbpc
