#pragma once

#include <array>
#include <cstdint>

#include "statrec/graph.hpp"

namespace statrec {

// Bernstein bound on the number of flipped edge observations of a tree:
// t = (n-1)p + (2/3)ln(2/delta)(1-p) + sqrt(2(n-1)p(1-p)ln(2/delta)).
struct BudgetBound {
    double t = 0.0;
    double delta = 0.0;
    std::array<double, 3> components{};  // (n-1)p, (2/3)ln(2/d)(1-p), sqrt term
    int effective_budget = 0;            // floor(t); violation counts are integers
};

BudgetBound edge_budget(int n, double p, double delta);

struct TreeSolution {
    NodeLabeling labels;
    int objective = 0;   // hamming distance to z
    int violations = 0;  // edge disagreements vs x, recomputed
    bool feasible = false;
};

// Minimizes the Hamming distance to z subject to at most `budget` edge
// disagreements with x, exactly, by dynamic programming over the tree rooted
// at vertex 0 (BFS orientation, children in vertex-id order, each edge's
// violation charged at its child endpoint). Reconstruction picks the smallest
// label, then the smallest child budget, at every step.
TreeSolution solve_tree(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z, int k,
                        int budget);

// Exhaustive oracle with the same contract; lexicographically smallest optimum
// over the raw label vector. Guarded by k^n <= 10^6.
TreeSolution brute_force_tree(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z,
                              int k, int budget);

// Same enumeration without the tree requirement; used by tests that compare
// the decomposition pipeline against a global optimum on tiny graphs.
TreeSolution brute_force_constrained(const LabeledGraph& g, const EdgeSigns& x,
                                     const NodeLabeling& z, int k, int budget);

}  // namespace statrec
