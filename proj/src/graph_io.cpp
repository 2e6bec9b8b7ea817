#include "urwbpc/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace urwbpc {

std::string to_edge_list(const Graph& g) {
    std::ostringstream out;
    write_edge_list(out, g);
    return out.str();
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.size() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
    for (NodeId i = 0; i < g.size(); ++i) {
        if (g.self_loops(i) > 0) out << "loop " << i << ' ' << g.self_loops(i) << '\n';
    }
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::size_t parse_index(std::string_view tok, std::size_t line_no) {
    std::size_t value = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError("edge list line " + std::to_string(line_no) + ": bad integer '" +
                         std::string(tok) + "'");
    }
    return value;
}

}  // namespace

Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return read_edge_list(in);
}

Graph read_edge_list(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t n = 0;
    bool have_n = false;
    std::vector<Edge> edges;
    std::vector<int> loops;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tok = split_ws(line);
        if (tok.empty()) continue;
        if (!have_n) {
            if (tok.size() != 1) throw ParseError("edge list: first line must hold the node count");
            n = parse_index(tok[0], line_no);
            if (n == 0) throw ParseError("edge list: node count must be at least 1");
            loops.assign(n, 0);
            have_n = true;
            continue;
        }
        if (tok[0] == "loop") {
            if (tok.size() != 3) throw ParseError("edge list line " + std::to_string(line_no) + ": expected 'loop i s'");
            const std::size_t i = parse_index(tok[1], line_no);
            const std::size_t s = parse_index(tok[2], line_no);
            if (i >= n) throw ParseError("edge list line " + std::to_string(line_no) + ": node out of range");
            if (s == 0 || loops[i] != 0) {
                throw ParseError("edge list line " + std::to_string(line_no) + ": loop count must be positive and given once");
            }
            loops[i] = static_cast<int>(s);
            continue;
        }
        if (tok.size() != 2) throw ParseError("edge list line " + std::to_string(line_no) + ": expected 'u v'");
        const std::size_t u = parse_index(tok[0], line_no);
        const std::size_t v = parse_index(tok[1], line_no);
        if (u >= n || v >= n) throw ParseError("edge list line " + std::to_string(line_no) + ": node out of range");
        if (u == v) throw ParseError("edge list line " + std::to_string(line_no) + ": write self-loops as 'loop i s'");
        edges.push_back({u, v});
    }
    if (!have_n) throw ParseError("edge list: empty input");
    try {
        return Graph(n, std::move(edges), std::move(loops));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("edge list: ") + e.what());
    }
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file '" + path + "'");
    return read_edge_list(in);
}

void save_edge_list(const std::string& path, const Graph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write graph file '" + path + "'");
    write_edge_list(out, g);
}

}  // namespace urwbpc
