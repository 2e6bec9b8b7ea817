#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "urwbpc/consensus.hpp"
#include "urwbpc/eigen.hpp"
#include "urwbpc/fusion.hpp"
#include "urwbpc/generators.hpp"
#include "urwbpc/graph_io.hpp"
#include "urwbpc/harness.hpp"
#include "urwbpc/spectral.hpp"

namespace urwbpc {

namespace {

struct Common {
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> iters;
    std::optional<int> threads;
    std::string out;
    std::string format = "csv";
};

struct GraphSource {
    std::string file;
    std::string gen;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Master seed");
    cmd->add_option("--trials", c.trials, "Monte Carlo trials or samples");
    cmd->add_option("--iters", c.iters, "Iteration count");
    cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--out", c.out, "Output path (default stdout)");
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_graph_source(CLI::App* cmd, GraphSource& g) {
    cmd->add_option("graph", g.file, "Edge-list file");
    cmd->add_option("--gen", g.gen, "Generated graph, e.g. circulant:n=10,k=4");
}

Graph load_graph(const GraphSource& src, std::uint64_t seed) {
    if (src.file.empty() == src.gen.empty()) throw ParseError("give exactly one of a graph file or --gen");
    if (!src.file.empty()) return load_edge_list(src.file);
    return GraphSpec::parse(src.gen).generate(seed);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot write '" + path + "'");
    f << text;
    if (!f) throw ParseError("write failed for '" + path + "'");
}

std::string number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Rows of comma-separated fields; blank lines and a non-numeric first
// line (header) are skipped.
std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::size_t width, const std::string& what) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) {
            const auto b = f.find_first_not_of(" \t");
            const auto e = f.find_last_not_of(" \t");
            fields.push_back(b == std::string::npos ? "" : f.substr(b, e - b + 1));
        }
        const bool header = first && !fields.empty() && !fields[0].empty() &&
                            !(std::isdigit(static_cast<unsigned char>(fields[0][0])) || fields[0][0] == '-');
        first = false;
        if (header) continue;
        if (fields.size() != width) throw ParseError(what + ": expected " + std::to_string(width) + " fields in '" + line + "'");
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::size_t to_index(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::logic_error&) {
        used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-') throw ParseError(what + ": bad index '" + s + "'");
    return static_cast<std::size_t>(v);
}

double to_real(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::logic_error&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw ParseError(what + ": bad number '" + s + "'");
    return v;
}

LikelihoodTable read_likelihoods(const std::string& lik_path, const std::string& prior_path) {
    std::map<std::pair<std::size_t, std::size_t>, double> cells;
    std::size_t nodes = 0;
    std::size_t states = 0;
    for (const auto& r : csv_rows(read_file(lik_path), 3, "likelihood CSV")) {
        const std::size_t m = to_index(r[0], "likelihood CSV");
        const std::size_t t = to_index(r[1], "likelihood CSV");
        if (!cells.emplace(std::pair{m, t}, to_real(r[2], "likelihood CSV")).second) {
            throw ParseError("likelihood CSV: duplicate entry for node " + r[0] + ", theta " + r[1]);
        }
        nodes = std::max(nodes, m + 1);
        states = std::max(states, t + 1);
    }
    if (cells.size() != nodes * states) throw ParseError("likelihood CSV: missing (node, theta) entries");
    LikelihoodTable table{Matrix(nodes, states), Vector(states, 1.0 / static_cast<double>(std::max<std::size_t>(states, 1)))};
    for (const auto& [key, v] : cells) table.loglik(key.first, key.second) = v;
    if (!prior_path.empty()) {
        Vector prior(states, -1.0);
        for (const auto& r : csv_rows(read_file(prior_path), 2, "prior CSV")) {
            const std::size_t t = to_index(r[0], "prior CSV");
            if (t >= states || prior[t] >= 0.0) throw ParseError("prior CSV: bad or repeated theta index " + r[0]);
            prior[t] = to_real(r[1], "prior CSV");
            if (prior[t] < 0.0) throw ParseError("prior CSV: negative prior");
        }
        for (double p : prior) {
            if (p < 0.0) throw ParseError("prior CSV: missing theta entries");
        }
        table.prior = prior;
    }
    return table;
}

int run_spectral(const GraphSource& src, const Common& c, std::optional<double> xi, std::optional<double> rho,
                 std::ostream& out) {
    const std::uint64_t seed = c.seed.value_or(1);
    const Graph g = load_graph(src, seed);
    ReportOptions opts;
    opts.uniform_xi = xi;
    opts.rho = rho;
    opts.seed = seed;
    if (c.iters) opts.iterations = *c.iters;
    const SpectralReport r = full_spectral_report(g, opts);
    if (c.format == "json") {
        emit(to_json(r) + "\n", c.out, out);
    } else {
        std::string text = "index,mu\n";
        for (std::size_t i = 0; i < r.mu.size(); ++i) text += std::to_string(i) + "," + number(r.mu[i]) + "\n";
        emit(text, c.out, out);
    }
    return kExitOk;
}

int run_simulate(const std::string& config_path, const Common& c, std::ostream& out) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (c.seed) cfg.master_seed = *c.seed;
    if (c.trials) cfg.trials = *c.trials;
    if (c.iters) cfg.iterations = *c.iters;
    if (c.threads) cfg.threads = *c.threads;
    cfg.validate();
    const ExperimentResult result = run_mse_experiment(cfg);
    emit(c.format == "json" ? mse_json(result) : mse_csv(result), c.out, out);
    if (!c.out.empty()) emit(mse_metadata_json(cfg, result), c.out + ".meta.json", out);
    return kExitOk;
}

int run_sweep(const GraphSource& src, const Common& c, int points, std::ostream& out) {
    const Graph g = load_graph(src, c.seed.value_or(1));
    const auto k = g.regular_degree();
    if (!k) throw std::invalid_argument("sweep-rho: graph is not regular");
    const auto pts = rho_sweep(g, rho_grid(*k, points));
    if (c.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& p : pts) j.push_back({{"rho", p.rho}, {"lambda_tilde", p.lambda_tilde}, {"lambda_mu2", p.lambda_mu2}});
        emit(j.dump(2) + "\n", c.out, out);
    } else {
        emit(sweep_csv(pts), c.out, out);
    }
    return kExitOk;
}

int run_ratio(std::size_t n, int k, const Common& c, std::ostream& out) {
    const auto ratios = ratio_cdf_experiment(n, k, c.trials.value_or(1000), c.seed.value_or(1), c.threads.value_or(0));
    if (c.format == "json") {
        nlohmann::json j;
        j["n"] = n;
        j["k"] = k;
        j["ratios"] = ratios;
        emit(j.dump(2) + "\n", c.out, out);
    } else {
        emit(ratio_cdf_csv(ratios), c.out, out);
    }
    return kExitOk;
}

int run_regularize(const GraphSource& src, const Common& c, const std::string& mode, std::optional<int> target_k,
                   std::ostream& out) {
    const Graph g = load_graph(src, c.seed.value_or(1));
    Graph r = g;
    if (mode == "loops") {
        r = add_self_loops_to_regularize(g);
    } else {
        if (!target_k) throw std::invalid_argument("regularize: --mode delete needs --target-k");
        r = add_self_loops_to_regularize(delete_edges_to_regularize(g, *target_k));
    }
    emit(to_edge_list(r), c.out, out);
    return kExitOk;
}

int run_fuse(const GraphSource& src, const Common& c, const std::string& lik, const std::string& prior,
             const std::string& algorithm, double tol, std::ostream& out) {
    const Graph g = load_graph(src, c.seed.value_or(1));
    const LikelihoodTable table = read_likelihoods(lik, prior);
    const AlgorithmSpec spec = AlgorithmSpec::parse(algorithm);
    const Graph rg = spec.run_graph(g);
    const Matrix post = fuse_posterior(rg, table, spec.resolve(rg), tol, c.iters.value_or(100000));
    if (c.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (std::size_t i = 0; i < post.rows(); ++i) {
            auto row = post.row(i);
            j.push_back(std::vector<double>(row.begin(), row.end()));
        }
        emit(j.dump(2) + "\n", c.out, out);
    } else {
        std::string text = "node,theta_index,posterior\n";
        for (std::size_t i = 0; i < post.rows(); ++i) {
            for (std::size_t t = 0; t < post.cols(); ++t) {
                text += std::to_string(i) + "," + std::to_string(t) + "," + number(post(i, t)) + "\n";
            }
        }
        emit(text, c.out, out);
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"URW-BPC consensus analysis and simulation"};
    app.require_subcommand(1);

    Common common;
    GraphSource source;

    auto* spectral = app.add_subcommand("spectral", "Spectral report of a graph (JSON)");
    add_graph_source(spectral, source);
    add_common(spectral, common);
    std::optional<double> xi;
    std::optional<double> report_rho;
    spectral->add_option("--xi", xi, "Uniform weight for the competitor rate");
    spectral->add_option("--rho", report_rho, "rho for the measured rate on non-regular graphs");

    auto* simulate = app.add_subcommand("simulate", "Normalized-MSE experiment from a config file");
    std::string config_path;
    simulate->add_option("config", config_path, "Config file (key=value or JSON)")->required();
    add_common(simulate, common);

    auto* sweep = app.add_subcommand("sweep-rho", "|lambda| against rho on a regular graph");
    add_graph_source(sweep, source);
    add_common(sweep, common);
    int points = 200;
    sweep->add_option("--points", points, "Grid points in (0, 2/k)")->check(CLI::PositiveNumber);

    auto* ratio = app.add_subcommand("ratio-cdf", "Rate ratio over random regular graphs");
    std::size_t ratio_n = 101;
    int ratio_k = 4;
    ratio->add_option("--n", ratio_n, "Node count");
    ratio->add_option("--k", ratio_k, "Degree");
    add_common(ratio, common);

    auto* regularize = app.add_subcommand("regularize", "Make a graph regular (edge list out)");
    add_graph_source(regularize, source);
    add_common(regularize, common);
    std::string mode;
    std::optional<int> target_k;
    regularize->add_option("--mode", mode, "loops or delete")->required()->check(CLI::IsMember({"loops", "delete"}));
    regularize->add_option("--target-k", target_k, "Degree bound for --mode delete");

    auto* fuse = app.add_subcommand("fuse", "Distributed posterior from a likelihood CSV");
    add_graph_source(fuse, source);
    add_common(fuse, common);
    std::string lik_path;
    std::string prior_path;
    std::string algorithm = "urwbpc:rho=1";
    double tol = 1e-12;
    fuse->add_option("--likelihood", lik_path, "CSV node,theta_index,loglik")->required();
    fuse->add_option("--prior", prior_path, "CSV theta_index,prior (default uniform)");
    fuse->add_option("--algorithm", algorithm, "e.g. urwbpc:rho=1 or bc:scheme=metropolis");
    fuse->add_option("--tol", tol, "Stopping tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*spectral) {
            if (spectral->count("--format") == 0) common.format = "json";
            return run_spectral(source, common, xi, report_rho, out);
        }
        if (*simulate) return run_simulate(config_path, common, out);
        if (*sweep) return run_sweep(source, common, points, out);
        if (*ratio) return run_ratio(ratio_n, ratio_k, common, out);
        if (*regularize) return run_regularize(source, common, mode, target_k, out);
        if (*fuse) return run_fuse(source, common, lik_path, prior_path, algorithm, tol, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const EigenError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const GenerationError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}

}  // namespace urwbpc
