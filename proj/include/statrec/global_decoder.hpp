#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "statrec/decomposition.hpp"
#include "statrec/graph.hpp"
#include "statrec/local_solver.hpp"

namespace statrec {

// Canonical per-bag swap options: identity first, then all k(k-1)/2
// transpositions in lexicographic (a,b) order.
std::vector<SwapPerm> swap_options(int k);

struct SwapCostTable {
    int bag_index = 0;
    std::vector<int> costs;  // aligned with swap_options(k)
};

// Cost of applying each swap option to the bag's core labeling, measured
// against z: sum over core vertices of 1{pi(label_v) != z_v}. Swaps over
// labels absent from the bag act as the identity and price accordingly.
SwapCostTable swap_costs(const BagLabeling& bag, const NodeLabeling& z, int k);

struct InterBagSign {
    int bag_a = 0;
    int bag_b = 0;
    int vertex = 0;   // smallest shared vertex, the representative
    int label_a = 0;  // core label of the representative in bag_a
    int label_b = 0;
    int sign = 0;     // 2*1{label_a == label_b} - 1
};

struct InterBagSigns {
    std::vector<InterBagSign> entries;  // aligned with td.tree_edges
};

InterBagSigns inter_bag_signs(const TreeDecomposition& td,
                              const std::vector<BagLabeling>& bags);

struct GlobalBudget {
    double K_n = 0.0;
    double L_n = 0.0;
    int effective = 0;  // floor(L_n) capped at |F|
    double sum_power_terms = 0.0;
    double p_used = 0.0;
    bool use_p_prime = false;
    double delta = 0.0;
    int wid_star = 0;
    int deg_T = 0;
    int deg_E_star = 0;
    int max_edges_star = 0;
    bool heuristic = false;  // some mincut* values were proxies
};

// K_n = 2^(wid*+2) * sum_W p^ceil(mincut*(W)/2) + 6 deg_E* max|E(W*)| ln(2/d),
// L_n = deg(T) * K_n. With use_p_prime, p is replaced by 0.7666p + 0.2334.
// Bags with no qualifying cut contribute nothing to the power sum.
GlobalBudget compute_global_budget(const TreeDecomposition& td, double p, double delta,
                                   bool use_p_prime);

struct SwapDecodeResult {
    std::vector<SwapPerm> swaps;  // one per bag
    int cost = 0;
    int disagreements = 0;
    int budget_used = 0;
    bool budget_raised = false;  // budget was below the minimum achievable
};

// Exact minimization of the total swap cost subject to at most `budget`
// inter-bag sign disagreements, by DP over the decomposition tree rooted at
// bag 0. psi is evaluated at the same representative vertex as the sign.
SwapDecodeResult tree_decode_swaps(const TreeDecomposition& td,
                                   const std::vector<SwapCostTable>& costs,
                                   const InterBagSigns& signs, int budget);

// Final vertex assembly: each vertex takes its label from the lowest-index
// bag containing it, with that bag's swap applied.
NodeLabeling assemble(const TreeDecomposition& td, const std::vector<BagLabeling>& bags,
                      const std::vector<SwapPerm>& swaps, int n, int k);

struct RecoverOptions {
    double p = 0.1;
    double delta = 0.1;
    bool use_p_prime = false;
    EliminationHeuristic heuristic = EliminationHeuristic::MinFill;
    LocalSolverOptions local;
    const TreeDecomposition* precomputed = nullptr;  // reuse across trials
};

struct RecoveryReport {
    NodeLabeling labels;
    GlobalBudget budget;
    DecompStats stats;
    int bag_count = 0;
    std::vector<BagLabeling> bags;
    SwapDecodeResult decode;
    std::optional<int> hamming;
    std::optional<double> normalized;
    double millis = 0.0;
};

// The full pipeline: decompose, solve bags, align, decode swaps, assemble.
RecoveryReport recover_graph(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z,
                             int k, const RecoverOptions& options,
                             const NodeLabeling* truth = nullptr);

}  // namespace statrec
