#pragma once

#include <string>
#include <vector>

#include "statrec/graph.hpp"

namespace statrec {

// Structural statistics consumed by the analytical bounds. Widths follow the
// usual convention (max bag size minus one). mincut values above the
// exactness threshold are replaced by a min-degree proxy and flagged.
struct DecompStats {
    int wid = 0;
    int wid_star = 0;
    int deg_T = 0;
    int deg_E_star = 0;
    int max_edges_star = 0;
    std::vector<std::pair<int, bool>> mincut_star_per_bag;  // (value, exact)

    bool any_proxy() const {
        for (const auto& [value, exact] : mincut_star_per_bag)
            if (!exact) return true;
        return false;
    }
};

struct TreeDecomposition {
    std::vector<std::vector<int>> bags;        // sorted vertex ids
    std::vector<std::pair<int, int>> tree_edges;
    std::vector<std::vector<int>> extended_bags;
    DecompStats stats;

    int bag_count() const { return static_cast<int>(bags.size()); }
};

enum class EliminationHeuristic { MinFill, MinDegree };

// Tree decomposition from an elimination ordering (min-fill by default, ties
// by min-degree then vertex id). Bags that are subsets of a neighbor are
// merged away, so the result is non-redundant. Extended bags and stats are
// filled in. Works on disconnected graphs by linking component trees.
TreeDecomposition decompose(const LabeledGraph& g,
                            EliminationHeuristic heuristic = EliminationHeuristic::MinFill);

inline TreeDecomposition min_fill_decomposition(const LabeledGraph& g) {
    return decompose(g, EliminationHeuristic::MinFill);
}

// W united with the one-hop neighborhoods of its members; sorted.
std::vector<int> extend_bag(const LabeledGraph& g, const std::vector<int>& w);

struct ValidationReport {
    bool vertices_covered = true;     // T1
    bool edges_covered = true;        // T2
    bool running_intersection = true; // T3
    bool tree_shape = true;
    bool non_redundant = true;
    std::string witness;

    bool ok() const {
        return vertices_covered && edges_covered && running_intersection && tree_shape &&
               non_redundant;
    }
};

ValidationReport validate_decomposition(const LabeledGraph& g, const TreeDecomposition& td);

// Minimum, over vertex sets S inside the extended bag that split the core bag,
// of the boundary size of S in the subgraph induced by the extended bag.
// Exact by enumeration when |w_star| <= mincut_exact_limit; otherwise the
// min degree of a core vertex inside that subgraph, flagged non-exact.
// Returns kNoCut when the core bag cannot be split (|w| < 2).
inline constexpr int kMincutExactLimit = 14;
inline constexpr int kNoCut = -1;

std::pair<int, bool> mincut_star(const LabeledGraph& g, const std::vector<int>& w,
                                 const std::vector<int>& w_star,
                                 int mincut_exact_limit = kMincutExactLimit);

// Recompute the stats block from bags + tree_edges alone.
DecompStats compute_stats(const LabeledGraph& g, const TreeDecomposition& td,
                          int mincut_exact_limit = kMincutExactLimit);

}  // namespace statrec
