#pragma once

#include <utility>
#include <vector>

namespace statrec {

using Edge = std::pair<int, int>;  // stored canonically with first < second

// Undirected simple graph over vertices 0..n-1 with a fixed edge order.
// Edge signs and all per-edge data are indexed by position in edges().
class LabeledGraph {
public:
    LabeledGraph() = default;
    // Throws ConfigError on self loops, duplicate edges, or out-of-range
    // endpoints. Edges are canonicalized to u < v; input order is preserved.
    LabeledGraph(int n, std::vector<Edge> edges);

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int index) const { return edges_[index]; }
    // Neighbor lists paired with the incident edge index.
    const std::vector<std::vector<std::pair<int, int>>>& adjacency() const { return adjacency_; }
    const std::vector<std::pair<int, int>>& neighbors(int v) const { return adjacency_[v]; }

    int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
    int max_degree() const;
    bool connected() const;
    bool is_tree() const { return m() == n_ - 1 && connected(); }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

// Length-n vector of labels in {0..k-1}. The paper-facing convention 1..k is
// shifted to 0-based everywhere, including file formats.
struct NodeLabeling {
    std::vector<int> labels;
    int k = 0;

    int size() const { return static_cast<int>(labels.size()); }
    int operator[](int v) const { return labels[v]; }
    int& operator[](int v) { return labels[v]; }

    // Throws ConfigError when an entry is outside [0, k).
    void validate() const;
};

// One sign in {+1,-1} per graph edge, index-aligned with LabeledGraph::edges().
struct EdgeSigns {
    std::vector<int> signs;

    int size() const { return static_cast<int>(signs.size()); }
    int operator[](int e) const { return signs[e]; }
    int& operator[](int e) { return signs[e]; }
};

// Identity or a single transposition of two labels.
struct SwapPerm {
    int a = -1;
    int b = -1;  // identity iff a < 0; otherwise a < b

    static SwapPerm identity() { return SwapPerm{}; }
    static SwapPerm transposition(int a, int b);

    bool is_identity() const { return a < 0; }
    int apply(int label) const {
        if (label == a) return b;
        if (label == b) return a;
        return label;
    }
};

// Arbitrary bijection on {0..k-1}.
struct FullPerm {
    std::vector<int> mapping;

    static FullPerm identity(int k);
    int k() const { return static_cast<int>(mapping.size()); }
    int apply(int label) const { return mapping[label]; }
    // Throws ConfigError if mapping is not a bijection on {0..k-1}.
    void validate() const;
};

// +1 iff the two labels agree, -1 otherwise.
inline int agreement_sign(int a, int b) { return a == b ? 1 : -1; }

// Signs induced by a labeling: sign of edge (u,v) is agreement_sign(y_u, y_v).
EdgeSigns induce_edge_signs(const LabeledGraph& g, const NodeLabeling& y);

// Number of edges whose induced sign disagrees with x.
int edge_disagreements(const LabeledGraph& g, const NodeLabeling& y, const EdgeSigns& x);

int hamming_distance(const NodeLabeling& y1, const NodeLabeling& y2);
double normalized_hamming(const NodeLabeling& y1, const NodeLabeling& y2);

NodeLabeling apply_swap(const NodeLabeling& y, const SwapPerm& s);
NodeLabeling apply_permutation(const NodeLabeling& y, const FullPerm& p);

}  // namespace statrec
