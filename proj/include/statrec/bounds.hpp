#pragma once

#include <map>
#include <string>

#include "statrec/decomposition.hpp"

namespace statrec {

struct BoundReport {
    std::string name;
    double value = 0.0;
    std::map<std::string, double> inputs;
    bool heuristic = false;
    std::string note;
};

// Hamming error bound for the budgeted tree program, evaluated with the
// Bernstein budget t and log|F| <= t ln(2k):
//   (1/c) (4/3 + 2(k-1)/((eps+1/2)k - 1)) (t ln(2k) - ln delta),
// c = 1 - (k/(k-1))q, eps = 1/2 - q. Raises RegimeError when c <= 0.
BoundReport tree_bound(int n, int k, double p, double q, double delta);

// Edge noise level below which the side information helps:
// (q / (k log2 k))^(1/ceil(max_degree/2)).
BoundReport usefulness_threshold(double q, int k, int max_degree);

// Worst-case noise level after the 0.7666-approximation of the clustering
// step: p' = 0.7666 p + 0.2334.
double adjust_p_for_approx(double p);

// Likelihood that an edge observation with label `sign` is untouched, given
// whether it violates the observed node labels. count_sign is the number of
// edges carrying that sign; m the total edge count.
double edge_trust(int sign, bool violated, double p, double q, int k, int count_sign, int m);

BoundReport edge_trust_report(int sign, bool violated, double p, double q, int k, int count_sign,
                              int m);

// Graph-pipeline error bound:
// (1/eps^2) [2^(wid*+2) sum p^ceil(mincut*/2) + 6 deg_E* max|E(W*)| ln(2/d)]
//           [3 wid + deg(T) k ln(n k)],
// flagged heuristic when any mincut* value is a proxy.
BoundReport graph_bound(const DecompStats& stats, int n, int k, double p, double q, double delta);

}  // namespace statrec
