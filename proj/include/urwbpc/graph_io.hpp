#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "urwbpc/graph.hpp"

namespace urwbpc {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Edge-list text format:
//   n
//   u v          (one per edge, 0-indexed, u < v, lexicographic order)
//   loop i s     (one per node with s > 0, ascending i)
// Every line ends with '\n'.
std::string to_edge_list(const Graph& g);
void write_edge_list(std::ostream& out, const Graph& g);

// Accepts edges and loop lines in any order; rejects malformed lines,
// out-of-range nodes, u == v, duplicates, and non-positive loop counts.
Graph parse_edge_list(const std::string& text);
Graph read_edge_list(std::istream& in);
Graph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const Graph& g);

}  // namespace urwbpc
