#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "statrec/graph.hpp"

namespace statrec {

struct TreeDecomposition;  // decomposition.hpp

// Graph text format: line 1 "n m k", then m lines "u v" (0-based), then
// optionally n lines of ground-truth labels. Whitespace-separated decimals.
struct GraphFile {
    LabeledGraph graph;
    int k = 0;
    std::optional<NodeLabeling> truth;
};

GraphFile read_graph_file(std::istream& in);
GraphFile read_graph_file(const std::string& path);
void write_graph_file(std::ostream& out, const LabeledGraph& g, int k,
                      const NodeLabeling* truth = nullptr);
void write_graph_file(const std::string& path, const LabeledGraph& g, int k,
                      const NodeLabeling* truth = nullptr);

// Label format: one label per line, n lines.
NodeLabeling read_labels(std::istream& in, int n, int k);
NodeLabeling read_labels(const std::string& path, int n, int k);
void write_labels(std::ostream& out, const NodeLabeling& y);
void write_labels(const std::string& path, const NodeLabeling& y);

// Sign format: one +1/-1 per line, m lines.
EdgeSigns read_signs(std::istream& in, int m);
EdgeSigns read_signs(const std::string& path, int m);
void write_signs(std::ostream& out, const EdgeSigns& x);
void write_signs(const std::string& path, const EdgeSigns& x);

// Sidecar noise record: single line "p q k seed".
struct NoiseRecord {
    double p = 0.0;
    double q = 0.0;
    int k = 0;
    std::uint64_t seed = 0;
};

NoiseRecord read_noise_record(const std::string& path);
void write_noise_record(const std::string& path, const NoiseRecord& rec);

// Decomposition dump: line "B", B lines of space-separated vertex ids, B-1
// lines of bag-index pairs, then the extended bags as a parallel section of
// B lines.
void write_decomposition(std::ostream& out, const TreeDecomposition& td);
void write_decomposition(const std::string& path, const TreeDecomposition& td);
TreeDecomposition read_decomposition(std::istream& in);
TreeDecomposition read_decomposition(const std::string& path);

}  // namespace statrec
