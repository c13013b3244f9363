#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "statrec/decomposition.hpp"
#include "statrec/graph.hpp"

namespace statrec {

// Subgraph induced by a vertex subset, with signs carried over and vertices
// renumbered 0..|subset|-1 (sorted by global id).
struct InducedSubgraph {
    std::vector<int> vertices;  // local -> global
    LabeledGraph graph;
    EdgeSigns signs;

    NodeLabeling restrict_labels(const NodeLabeling& full) const;
};

InducedSubgraph induce_subgraph(const LabeledGraph& g, const EdgeSigns& x,
                                const std::vector<int>& vertices);

// Maximizes edge agreement with x_sub by enumerating all k^n labelings.
// Lexicographically smallest maximizer; guarded by k^n <= 10^6.
NodeLabeling solve_bag_exact(const LabeledGraph& sub, const EdgeSigns& x_sub, int k);

// Correlation-clustering local search with at most k clusters: per restart,
// single-vertex best-improvement moves until no move improves (capped at
// 100*n moves), best agreement over all restarts. Restart 0 starts from
// `init` when provided, all other restarts from a uniformly random labeling.
// Deterministic given the seed.
NodeLabeling solve_bag_cc(const LabeledGraph& sub, const EdgeSigns& x_sub, int k, int restarts,
                          std::uint64_t seed, const NodeLabeling* init = nullptr);

int agreement(const LabeledGraph& sub, const EdgeSigns& x_sub, const NodeLabeling& y);

// Greedy label alignment: repeatedly match the pair (i,j) with the largest
// intersection count |{v : y_bar_v = i and z_v = j}| (ties by smaller i then
// j), removing i's row and j's column. Leftover labels map order-preservingly.
FullPerm greedy_match(const NodeLabeling& y_bar, const NodeLabeling& z_sub, int k);

// Exact alignment: maximizes the total matched intersection weight via an
// assignment solver; lexicographically smallest maximizer for k <= 40.
FullPerm optimal_match(const NodeLabeling& y_bar, const NodeLabeling& z_sub, int k);

std::vector<std::vector<int>> intersection_matrix(const NodeLabeling& y_bar,
                                                  const NodeLabeling& z_sub, int k);

enum class Matcher { Greedy, Exact };

struct LocalSolverOptions {
    Matcher matcher = Matcher::Greedy;
    int cc_restarts = 8;
    std::uint64_t seed = 0;
    double exact_limit = 1e6;  // use enumeration while k^|W*| stays below this
    bool warm_start = true;    // seed restart 0 of the local search with z
};

struct BagLabeling {
    int bag_index = 0;
    std::vector<int> vertices_star;  // global ids, sorted
    std::vector<int> labels_star;    // aligned with vertices_star
    std::vector<int> vertices;       // core bag, global ids, sorted
    std::vector<int> labels;         // restriction of labels_star to the core
    int agreement = 0;               // matched edges within the extended bag
    int edges_star = 0;
    std::string method;              // "exact" or "local-search"
    int restarts_used = 0;
};

// Per-bag solve on the extended bag, alignment to z, restriction to the core
// bag. Bag seeds are derived from (options.seed, bag index) so bags are
// order-independent.
std::vector<BagLabeling> local_labelings(const LabeledGraph& g, const TreeDecomposition& td,
                                         const EdgeSigns& x, const NodeLabeling& z, int k,
                                         const LocalSolverOptions& options);

}  // namespace statrec
