#include "statrec/io.hpp"

#include <fstream>
#include <sstream>

#include "statrec/decomposition.hpp"
#include "statrec/errors.hpp"

namespace statrec {
namespace {

long long next_int(std::istream& in, const char* what) {
    long long value;
    if (!(in >> value)) throw FormatError(std::string("expected integer for ") + what);
    return value;
}

double next_double(std::istream& in, const char* what) {
    double value;
    if (!(in >> value)) throw FormatError(std::string("expected number for ") + what);
    return value;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    return out;
}

}  // namespace

GraphFile read_graph_file(std::istream& in) {
    GraphFile file;
    const int n = static_cast<int>(next_int(in, "vertex count"));
    const int m = static_cast<int>(next_int(in, "edge count"));
    file.k = static_cast<int>(next_int(in, "label count"));
    if (n < 1 || m < 0 || file.k < 1) throw FormatError("bad graph header");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (int e = 0; e < m; ++e) {
        int u = static_cast<int>(next_int(in, "edge endpoint"));
        int v = static_cast<int>(next_int(in, "edge endpoint"));
        edges.push_back({u, v});
    }
    try {
        file.graph = LabeledGraph(n, std::move(edges));
    } catch (const ConfigError& err) {
        throw FormatError(err.what());
    }
    long long first;
    if (in >> first) {
        NodeLabeling truth;
        truth.k = file.k;
        truth.labels.resize(n);
        truth.labels[0] = static_cast<int>(first);
        for (int v = 1; v < n; ++v) truth.labels[v] = static_cast<int>(next_int(in, "label"));
        try {
            truth.validate();
        } catch (const ConfigError& err) {
            throw FormatError(err.what());
        }
        file.truth = std::move(truth);
    }
    return file;
}

GraphFile read_graph_file(const std::string& path) {
    auto in = open_in(path);
    return read_graph_file(in);
}

void write_graph_file(std::ostream& out, const LabeledGraph& g, int k, const NodeLabeling* truth) {
    out << g.n() << ' ' << g.m() << ' ' << k << '\n';
    for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
    if (truth) {
        for (int v = 0; v < truth->size(); ++v) out << (*truth)[v] << '\n';
    }
}

void write_graph_file(const std::string& path, const LabeledGraph& g, int k,
                      const NodeLabeling* truth) {
    auto out = open_out(path);
    write_graph_file(out, g, k, truth);
}

NodeLabeling read_labels(std::istream& in, int n, int k) {
    NodeLabeling y;
    y.k = k;
    y.labels.resize(n);
    for (int v = 0; v < n; ++v) y.labels[v] = static_cast<int>(next_int(in, "label"));
    try {
        y.validate();
    } catch (const ConfigError& err) {
        throw FormatError(err.what());
    }
    return y;
}

NodeLabeling read_labels(const std::string& path, int n, int k) {
    auto in = open_in(path);
    return read_labels(in, n, k);
}

void write_labels(std::ostream& out, const NodeLabeling& y) {
    for (int v = 0; v < y.size(); ++v) out << y[v] << '\n';
}

void write_labels(const std::string& path, const NodeLabeling& y) {
    auto out = open_out(path);
    write_labels(out, y);
}

EdgeSigns read_signs(std::istream& in, int m) {
    EdgeSigns x;
    x.signs.resize(m);
    for (int e = 0; e < m; ++e) {
        int s = static_cast<int>(next_int(in, "sign"));
        if (s != 1 && s != -1) throw FormatError("sign must be +1 or -1");
        x.signs[e] = s;
    }
    return x;
}

EdgeSigns read_signs(const std::string& path, int m) {
    auto in = open_in(path);
    return read_signs(in, m);
}

void write_signs(std::ostream& out, const EdgeSigns& x) {
    for (int e = 0; e < x.size(); ++e) out << (x[e] > 0 ? "+1" : "-1") << '\n';
}

void write_signs(const std::string& path, const EdgeSigns& x) {
    auto out = open_out(path);
    write_signs(out, x);
}

NoiseRecord read_noise_record(const std::string& path) {
    auto in = open_in(path);
    NoiseRecord rec;
    rec.p = next_double(in, "p");
    rec.q = next_double(in, "q");
    rec.k = static_cast<int>(next_int(in, "k"));
    rec.seed = static_cast<std::uint64_t>(next_int(in, "seed"));
    return rec;
}

void write_noise_record(const std::string& path, const NoiseRecord& rec) {
    auto out = open_out(path);
    out << rec.p << ' ' << rec.q << ' ' << rec.k << ' ' << rec.seed << '\n';
}

void write_decomposition(std::ostream& out, const TreeDecomposition& td) {
    out << td.bag_count() << '\n';
    for (const auto& bag : td.bags) {
        for (std::size_t i = 0; i < bag.size(); ++i) out << (i ? " " : "") << bag[i];
        out << '\n';
    }
    for (const auto& [a, b] : td.tree_edges) out << a << ' ' << b << '\n';
    for (const auto& bag : td.extended_bags) {
        for (std::size_t i = 0; i < bag.size(); ++i) out << (i ? " " : "") << bag[i];
        out << '\n';
    }
}

void write_decomposition(const std::string& path, const TreeDecomposition& td) {
    auto out = open_out(path);
    write_decomposition(out, td);
}

namespace {

std::vector<int> read_vertex_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::vector<int> ids;
        long long v;
        while (ss >> v) ids.push_back(static_cast<int>(v));
        if (!ids.empty()) return ids;
    }
    throw FormatError("unexpected end of decomposition dump");
}

}  // namespace

TreeDecomposition read_decomposition(std::istream& in) {
    TreeDecomposition td;
    const int b = static_cast<int>(next_int(in, "bag count"));
    if (b < 1) throw FormatError("bag count must be positive");
    in.ignore();
    for (int i = 0; i < b; ++i) td.bags.push_back(read_vertex_line(in));
    for (int i = 0; i + 1 < b; ++i) {
        auto pair = read_vertex_line(in);
        if (pair.size() != 2) throw FormatError("tree edge line needs two bag indices");
        td.tree_edges.push_back({pair[0], pair[1]});
    }
    for (int i = 0; i < b; ++i) td.extended_bags.push_back(read_vertex_line(in));
    return td;
}

TreeDecomposition read_decomposition(const std::string& path) {
    auto in = open_in(path);
    return read_decomposition(in);
}

}  // namespace statrec
