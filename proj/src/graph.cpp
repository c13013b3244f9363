#include "statrec/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "statrec/errors.hpp"

namespace statrec {

LabeledGraph::LabeledGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 1) throw ConfigError("graph needs at least one vertex");
    std::set<Edge> seen;
    for (auto& [u, v] : edges_) {
        if (u == v) throw ConfigError("self loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n_) {
            throw ConfigError("edge endpoint out of range: " + std::to_string(u) + " " +
                              std::to_string(v));
        }
        if (!seen.insert({u, v}).second) {
            throw ConfigError("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
        }
    }
    adjacency_.assign(n_, {});
    for (int e = 0; e < m(); ++e) {
        adjacency_[edges_[e].first].push_back({edges_[e].second, e});
        adjacency_[edges_[e].second].push_back({edges_[e].first, e});
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

int LabeledGraph::max_degree() const {
    int best = 0;
    for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
    return best;
}

bool LabeledGraph::connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [u, e] : adjacency_[v]) {
            (void)e;
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == n_;
}

void NodeLabeling::validate() const {
    for (int v = 0; v < size(); ++v) {
        if (labels[v] < 0 || labels[v] >= k) {
            throw ConfigError("label " + std::to_string(labels[v]) + " at vertex " +
                              std::to_string(v) + " outside [0," + std::to_string(k) + ")");
        }
    }
}

SwapPerm SwapPerm::transposition(int a, int b) {
    if (a == b || a < 0 || b < 0) throw ConfigError("transposition needs two distinct labels");
    if (a > b) std::swap(a, b);
    return SwapPerm{a, b};
}

FullPerm FullPerm::identity(int k) {
    FullPerm p;
    p.mapping.resize(k);
    std::iota(p.mapping.begin(), p.mapping.end(), 0);
    return p;
}

void FullPerm::validate() const {
    std::vector<char> hit(mapping.size(), 0);
    for (int image : mapping) {
        if (image < 0 || image >= k() || hit[image]) throw ConfigError("mapping is not a bijection");
        hit[image] = 1;
    }
}

EdgeSigns induce_edge_signs(const LabeledGraph& g, const NodeLabeling& y) {
    if (y.size() != g.n()) throw ConfigError("labeling length does not match vertex count");
    EdgeSigns x;
    x.signs.resize(g.m());
    for (int e = 0; e < g.m(); ++e) {
        x.signs[e] = agreement_sign(y[g.edge(e).first], y[g.edge(e).second]);
    }
    return x;
}

int edge_disagreements(const LabeledGraph& g, const NodeLabeling& y, const EdgeSigns& x) {
    if (y.size() != g.n()) throw ConfigError("labeling length does not match vertex count");
    if (x.size() != g.m()) throw ConfigError("sign count does not match edge count");
    int count = 0;
    for (int e = 0; e < g.m(); ++e) {
        count += agreement_sign(y[g.edge(e).first], y[g.edge(e).second]) != x[e];
    }
    return count;
}

int hamming_distance(const NodeLabeling& y1, const NodeLabeling& y2) {
    if (y1.size() != y2.size()) throw ConfigError("labelings have different lengths");
    int count = 0;
    for (int v = 0; v < y1.size(); ++v) count += y1[v] != y2[v];
    return count;
}

double normalized_hamming(const NodeLabeling& y1, const NodeLabeling& y2) {
    return static_cast<double>(hamming_distance(y1, y2)) / static_cast<double>(y1.size());
}

NodeLabeling apply_swap(const NodeLabeling& y, const SwapPerm& s) {
    NodeLabeling out = y;
    if (s.is_identity()) return out;
    for (int& label : out.labels) label = s.apply(label);
    return out;
}

NodeLabeling apply_permutation(const NodeLabeling& y, const FullPerm& p) {
    NodeLabeling out = y;
    for (int& label : out.labels) label = p.apply(label);
    return out;
}

}  // namespace statrec
