#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "urwbpc/generators.hpp"
#include "urwbpc/graph_io.hpp"
#include "urwbpc/harness.hpp"

namespace urwbpc {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

// "kind:key=value,key=value" -> kind and an ordered key map.
std::pair<std::string, std::map<std::string, std::string>> split_spec(const std::string& text) {
    const auto colon = text.find(':');
    std::string kind = trim(text.substr(0, colon));
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        for (const auto& item : split(text.substr(colon + 1), ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                kv["_"] = item;
            } else {
                kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
            }
        }
    }
    for (auto& c : kind) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return {kind, kv};
}

long long parse_int(const std::string& s, const std::string& what) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("bad integer for " + what + ": '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("bad integer for " + what + ": '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ParseError("bad number for " + what + ": '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("bad number for " + what + ": '" + s + "'");
    }
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key,
                           const std::string& where) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(where + ": missing '" + key + "'");
    return it->second;
}

std::string fmt_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

GraphSpec GraphSpec::parse(const std::string& text) {
    const auto [kind, kv] = split_spec(text);
    GraphSpec s;
    const std::string where = "graph spec '" + text + "'";
    auto n_of = [&] {
        const auto v = parse_int(require(kv, "n", where), "n");
        if (v < 1) throw ParseError(where + ": n must be positive");
        return static_cast<std::size_t>(v);
    };
    auto k_of = [&] { return static_cast<int>(parse_int(require(kv, "k", where), "k")); };
    if (kind == "tree") {
        s.kind = Kind::Tree;
        s.n = n_of();
        if (kv.contains("diameter")) s.diameter = static_cast<int>(parse_int(kv.at("diameter"), "diameter"));
    } else if (kind == "regular") {
        s.kind = Kind::Regular;
        s.n = n_of();
        s.k = k_of();
    } else if (kind == "circulant") {
        s.kind = Kind::Circulant;
        s.n = n_of();
        s.k = k_of();
    } else if (kind == "mixed") {
        s.kind = Kind::Mixed;
        s.n = n_of();
        s.k = static_cast<int>(parse_int(require(kv, "dmax", where), "dmax"));
        if (kv.contains("drop")) s.drop = parse_double(kv.at("drop"), "drop");
    } else if (kind == "path" || kind == "cycle" || kind == "complete" || kind == "star") {
        s.kind = kind == "path" ? Kind::Path : kind == "cycle" ? Kind::Cycle : kind == "complete" ? Kind::Complete : Kind::Star;
        s.n = n_of();
    } else if (kind == "file") {
        s.kind = Kind::File;
        s.path = kv.contains("path") ? kv.at("path") : require(kv, "_", where);
    } else {
        throw ParseError("unknown graph kind '" + kind + "'");
    }
    return s;
}

std::string GraphSpec::to_string() const {
    const std::string n_str = "n=" + std::to_string(n);
    switch (kind) {
    case Kind::Tree:
        return "tree:" + n_str + (diameter ? ",diameter=" + std::to_string(*diameter) : "");
    case Kind::Regular:
        return "regular:" + n_str + ",k=" + std::to_string(k);
    case Kind::Circulant:
        return "circulant:" + n_str + ",k=" + std::to_string(k);
    case Kind::Mixed:
        return "mixed:" + n_str + ",dmax=" + std::to_string(k) + ",drop=" + fmt_number(drop);
    case Kind::Path:
        return "path:" + n_str;
    case Kind::Cycle:
        return "cycle:" + n_str;
    case Kind::Complete:
        return "complete:" + n_str;
    case Kind::Star:
        return "star:" + n_str;
    case Kind::File:
        return "file:path=" + path;
    }
    return "?";
}

Graph GraphSpec::generate(std::uint64_t seed) const {
    switch (kind) {
    case Kind::Tree:
        return random_tree(n, seed, diameter);
    case Kind::Regular:
        return random_k_regular(n, k, seed);
    case Kind::Circulant:
        return circulant_small_world(n, k);
    case Kind::Mixed:
        return random_mixed_degree(n, k, drop, seed);
    case Kind::Path:
        return path_graph(n);
    case Kind::Cycle:
        return cycle_graph(n);
    case Kind::Complete:
        return complete_graph(n);
    case Kind::Star:
        return star_graph(n);
    case Kind::File:
        return load_edge_list(path);
    }
    throw std::logic_error("GraphSpec::generate: unknown kind");
}

AlgorithmSpec AlgorithmSpec::parse(const std::string& text) {
    const auto [kind, kv] = split_spec(text);
    const std::string where = "algorithm '" + text + "'";
    AlgorithmSpec a;
    if (kind == "urwbpc" || kind == "bpc") {
        a.bpc = true;
        const std::string rho = kv.contains("rho") ? kv.at("rho") : "opt";
        if (rho != "opt") {
            a.rho = parse_double(rho, "rho");
            if (!(*a.rho > 0.0)) throw ParseError(where + ": rho must be positive");
        }
    } else if (kind == "bc") {
        a.bpc = false;
        const std::string scheme = kv.contains("scheme") ? kv.at("scheme") : "metropolis";
        if (scheme == "metropolis") {
            a.scheme = WeightScheme::metropolis();
        } else if (scheme == "uniform") {
            a.scheme = WeightScheme::uniform(parse_double(require(kv, "xi", where), "xi"));
        } else if (scheme == "laplacian") {
            a.scheme = WeightScheme::laplacian_step(parse_double(require(kv, "eps", where), "eps"));
        } else {
            throw ParseError(where + ": unknown scheme '" + scheme + "'");
        }
    } else {
        throw ParseError("unknown algorithm kind '" + kind + "'");
    }
    if (kv.contains("topology")) {
        const auto& t = kv.at("topology");
        if (t == "original") {
            a.topology = Topology::Original;
        } else if (t == "loops") {
            a.topology = Topology::Loops;
        } else if (t == "delete") {
            a.topology = Topology::Delete;
            a.target_k = static_cast<int>(parse_int(require(kv, "target_k", where), "target_k"));
        } else {
            throw ParseError(where + ": unknown topology '" + t + "'");
        }
    }
    if (!a.bpc && a.topology != Topology::Original) {
        throw ParseError(where + ": belief consensus runs on the original graph only");
    }
    if (kv.contains("name")) {
        a.name = kv.at("name");
    } else if (a.bpc) {
        a.name = "urwbpc";
        if (a.topology == Topology::Loops) a.name += "_loops";
        if (a.topology == Topology::Delete) a.name += "_delete";
    } else {
        a.name = "bc_" + a.scheme.name();
    }
    return a;
}

std::string AlgorithmSpec::to_string() const {
    std::string s;
    if (bpc) {
        s = "urwbpc:rho=" + (rho ? fmt_number(*rho) : std::string("opt"));
        if (topology == Topology::Loops) s += ",topology=loops";
        if (topology == Topology::Delete) s += ",topology=delete,target_k=" + std::to_string(target_k);
    } else {
        switch (scheme.kind) {
        case WeightScheme::Kind::Metropolis:
            s = "bc:scheme=metropolis";
            break;
        case WeightScheme::Kind::Uniform:
            s = "bc:scheme=uniform,xi=" + fmt_number(scheme.parameter);
            break;
        case WeightScheme::Kind::LaplacianStep:
            s = "bc:scheme=laplacian,eps=" + fmt_number(scheme.parameter);
            break;
        }
    }
    return s + ",name=" + name;
}

Graph AlgorithmSpec::run_graph(const Graph& g) const {
    switch (topology) {
    case Topology::Original:
        return g;
    case Topology::Loops:
        return add_self_loops_to_regularize(g);
    case Topology::Delete:
        return add_self_loops_to_regularize(delete_edges_to_regularize(g, target_k));
    }
    return g;
}

Algorithm AlgorithmSpec::resolve(const Graph& run_graph) const {
    if (!bpc) return BcAlgorithm{scheme};
    if (rho) return BpcAlgorithm{*rho};
    const auto k = run_graph.regular_degree();
    if (!k) throw std::invalid_argument("rho=opt needs a regular run graph (use topology=loops)");
    return BpcAlgorithm{urwbpc::rho_opt(mu_tilde(adjacency_spectrum(run_graph), *k), *k)};
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (iterations < 1) throw std::invalid_argument("experiment: iterations must be >= 1");
    if (algorithms.empty()) throw std::invalid_argument("experiment: no algorithms given");
}

Vector load_initial_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open initial-value file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    for (char& c : text) {
        if (c == ',') c = ' ';
    }
    std::istringstream tokens(text);
    Vector out;
    std::string tok;
    while (tokens >> tok) out.push_back(parse_double(tok, "initial value"));
    if (out.empty()) throw ParseError("initial-value file '" + path + "' is empty");
    return out;
}

namespace {

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "graph") {
        cfg.graph = GraphSpec::parse(value);
    } else if (key == "algorithms") {
        cfg.algorithms.clear();
        for (const auto& item : split(value, ';')) cfg.algorithms.push_back(AlgorithmSpec::parse(item));
    } else if (key == "trials") {
        cfg.trials = static_cast<int>(parse_int(value, key));
    } else if (key == "iterations") {
        cfg.iterations = static_cast<int>(parse_int(value, key));
    } else if (key == "seed") {
        cfg.master_seed = parse_u64(value, key);
    } else if (key == "threads") {
        cfg.threads = static_cast<int>(parse_int(value, key));
    } else if (key == "init") {
        if (value == "normal") {
            cfg.fixed_init.reset();
        } else if (value.rfind("file:", 0) == 0) {
            cfg.fixed_init = load_initial_values(value.substr(5));
        } else {
            throw ParseError("init must be 'normal' or 'file:<path>'");
        }
    } else {
        throw ParseError("unknown config key '" + key + "'");
    }
}

std::string json_scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig cfg;
    bool have_graph = false;
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("config JSON: ") + e.what());
        }
        for (const auto& [key, value] : j.items()) {
            if (key == "algorithms" && value.is_array()) {
                cfg.algorithms.clear();
                for (const auto& item : value) cfg.algorithms.push_back(AlgorithmSpec::parse(json_scalar(item)));
            } else if (key == "init" && value.is_array()) {
                Vector x;
                for (const auto& item : value) {
                    if (!item.is_number()) throw ParseError("config JSON: init array must hold numbers");
                    x.push_back(item.get<double>());
                }
                cfg.fixed_init = std::move(x);
            } else {
                apply_key(cfg, key, json_scalar(value));
            }
            have_graph = have_graph || key == "graph";
        }
    } else {
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            apply_key(cfg, key, trim(line.substr(eq + 1)));
            have_graph = have_graph || key == "graph";
        }
    }
    if (!have_graph) throw ParseError("config: missing 'graph'");
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

}  // namespace urwbpc
