#include "statrec/tree_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "statrec/errors.hpp"

namespace statrec {

namespace {
constexpr int kInf = std::numeric_limits<int>::max() / 4;
}

BudgetBound edge_budget(int n, double p, double delta) {
    if (n < 1) throw ConfigError("n must be >= 1");
    if (p < 0.0 || p >= 0.5) throw ConfigError("p must be in [0, 0.5)");
    if (delta <= 0.0 || delta >= 1.0) throw ConfigError("delta must be in (0, 1)");
    BudgetBound b;
    b.delta = delta;
    const double ln2d = std::log(2.0 / delta);
    b.components[0] = (n - 1) * p;
    b.components[1] = (2.0 / 3.0) * ln2d * (1.0 - p);
    b.components[2] = std::sqrt(2.0 * (n - 1) * p * (1.0 - p) * ln2d);
    b.t = b.components[0] + b.components[1] + b.components[2];
    b.effective_budget = static_cast<int>(std::floor(b.t));
    return b;
}

namespace {

struct TreeOrder {
    std::vector<int> bfs;                       // root first
    std::vector<int> parent;                    // -1 at root
    std::vector<int> parent_edge;               // edge index towards parent
    std::vector<std::vector<int>> children;     // in vertex-id order
};

TreeOrder orient_tree(const LabeledGraph& g, int root) {
    TreeOrder order;
    const int n = g.n();
    order.parent.assign(n, -2);
    order.parent_edge.assign(n, -1);
    order.children.assign(n, {});
    order.bfs.reserve(n);
    order.bfs.push_back(root);
    order.parent[root] = -1;
    for (std::size_t head = 0; head < order.bfs.size(); ++head) {
        const int u = order.bfs[head];
        for (auto [v, e] : g.neighbors(u)) {
            if (order.parent[v] == -2) {
                order.parent[v] = u;
                order.parent_edge[v] = e;
                order.children[u].push_back(v);
                order.bfs.push_back(v);
            }
        }
    }
    return order;
}

class TreeDp {
public:
    TreeDp(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z, int k, int budget)
        : g_(g), x_(x), z_(z), k_(k), cap_(std::min(budget, g.n() - 1)), order_(orient_tree(g, 0)) {
        if (cap_ < 0) cap_ = 0;
        down_.assign(g.n(), {});
    }

    TreeSolution run() {
        for (auto it = order_.bfs.rbegin(); it != order_.bfs.rend(); ++it) fill_tables(*it);

        NodeLabeling labels;
        labels.k = k_;
        labels.labels.assign(g_.n(), 0);

        // Root: direct minimization over its own label.
        auto conv = child_convolutions(0);
        int best = kInf;
        int best_label = 0;
        for (int i = 0; i < k_; ++i) {
            const int cost = (i != z_[0]) + conv[i][cap_];
            if (cost < best) {
                best = cost;
                best_label = i;
            }
        }
        if (best >= kInf) throw ConfigError("no labeling satisfies the budget");
        labels[0] = best_label;
        assign_children(0, best_label, cap_, conv, labels);

        TreeSolution sol;
        sol.labels = std::move(labels);
        sol.objective = hamming_distance(sol.labels, z_);
        sol.violations = edge_disagreements(g_, sol.labels, x_);
        sol.feasible = sol.violations <= cap_;
        return sol;
    }

private:
    // down_[u][l][b]: best cost of u's subtree, parent labeled l, at most b
    // violations charged inside the subtree including u's parent edge.
    void fill_tables(int u) {
        auto conv = child_convolutions(u);
        if (order_.parent[u] < 0) return;  // root has no parent table
        const int xe = x_[order_.parent_edge[u]];
        auto& table = down_[u];
        table.assign(k_, std::vector<int>(cap_ + 1, kInf));
        for (int l = 0; l < k_; ++l) {
            for (int b = 0; b <= cap_; ++b) {
                int best = kInf;
                for (int i = 0; i < k_; ++i) {
                    const int viol = agreement_sign(i, l) != xe;
                    if (viol > b) continue;
                    const int c = conv[i][b - viol];
                    if (c >= kInf) continue;
                    best = std::min(best, (i != z_[u]) + c);
                }
                table[l][b] = best;
            }
        }
    }

    // conv[i][b]: best total cost of u's children subtrees when u is labeled
    // i, spending at most b violations across them.
    std::vector<std::vector<int>> child_convolutions(int u) const {
        std::vector<std::vector<int>> conv(k_, std::vector<int>(cap_ + 1, 0));
        for (int i = 0; i < k_; ++i) {
            for (int child : order_.children[u]) {
                const auto& ct = down_[child][i];
                std::vector<int> next(cap_ + 1, kInf);
                for (int b = 0; b <= cap_; ++b) {
                    if (conv[i][b] >= kInf) continue;
                    for (int bc = 0; bc + b <= cap_; ++bc) {
                        if (ct[bc] >= kInf) continue;
                        next[b + bc] = std::min(next[b + bc], conv[i][b] + ct[bc]);
                    }
                }
                // Tables are monotone in the budget; keep them that way.
                for (int b = 1; b <= cap_; ++b) next[b] = std::min(next[b], next[b - 1]);
                conv[i] = std::move(next);
            }
        }
        return conv;
    }

    // Splits budget among children with suffix convolutions, taking for each
    // child (in id order) the smallest budget consistent with the optimum.
    void assign_children(int u, int label, int budget,
                         const std::vector<std::vector<int>>& conv, NodeLabeling& out) {
        const auto& children = order_.children[u];
        if (children.empty()) return;
        const int m = static_cast<int>(children.size());
        // suf[j][b]: best cost of children j..m-1 with at most b violations.
        std::vector<std::vector<int>> suf(m + 1, std::vector<int>(budget + 1, 0));
        for (int j = m - 1; j >= 0; --j) {
            const auto& ct = down_[children[j]][label];
            for (int b = 0; b <= budget; ++b) {
                int best = kInf;
                for (int bc = 0; bc <= b; ++bc) {
                    if (ct[bc] >= kInf || suf[j + 1][b - bc] >= kInf) continue;
                    best = std::min(best, ct[bc] + suf[j + 1][b - bc]);
                }
                suf[j][b] = best;
            }
        }
        int remaining = budget;
        for (int j = 0; j < m; ++j) {
            const int child = children[j];
            const auto& ct = down_[child][label];
            const int target = suf[j][remaining];
            int chosen = -1;
            for (int bc = 0; bc <= remaining; ++bc) {
                if (ct[bc] < kInf && suf[j + 1][remaining - bc] < kInf &&
                    ct[bc] + suf[j + 1][remaining - bc] == target) {
                    chosen = bc;
                    break;
                }
            }
            assign_vertex(child, label, chosen, out);
            remaining -= chosen;
        }
    }

    void assign_vertex(int u, int parent_label, int budget, NodeLabeling& out) {
        const int xe = x_[order_.parent_edge[u]];
        auto conv = child_convolutions(u);
        const int target = down_[u][parent_label][budget];
        int chosen_label = -1;
        int chosen_budget = 0;
        for (int i = 0; i < k_; ++i) {
            const int viol = agreement_sign(i, parent_label) != xe;
            if (viol > budget) continue;
            const int c = conv[i][budget - viol];
            if (c < kInf && (i != z_[u]) + c == target) {
                chosen_label = i;
                chosen_budget = budget - viol;
                break;
            }
        }
        if (chosen_label < 0) throw ConfigError("tree DP reconstruction lost its target");
        out[u] = chosen_label;
        assign_children(u, chosen_label, chosen_budget, conv, out);
    }

    const LabeledGraph& g_;
    const EdgeSigns& x_;
    const NodeLabeling& z_;
    int k_;
    int cap_;
    TreeOrder order_;
    std::vector<std::vector<std::vector<int>>> down_;
};

}  // namespace

TreeSolution solve_tree(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z, int k,
                        int budget) {
    if (!g.is_tree()) throw ConfigError("solve_tree needs a connected tree");
    if (budget < 0) throw ConfigError("budget must be >= 0");
    if (z.size() != g.n()) throw ConfigError("observed labeling length mismatch");
    if (x.size() != g.m()) throw ConfigError("sign count mismatch");
    if (k < 1) throw ConfigError("k must be >= 1");
    return TreeDp(g, x, z, k, budget).run();
}

TreeSolution brute_force_constrained(const LabeledGraph& g, const EdgeSigns& x,
                                     const NodeLabeling& z, int k, int budget) {
    double size = 1.0;
    for (int v = 0; v < g.n(); ++v) {
        size *= k;
        if (size > 1e6) throw GuardError("brute force limited to k^n <= 1e6");
    }
    NodeLabeling candidate;
    candidate.k = k;
    candidate.labels.assign(g.n(), 0);
    TreeSolution best;
    best.objective = kInf;
    for (;;) {
        if (edge_disagreements(g, candidate, x) <= budget) {
            const int obj = hamming_distance(candidate, z);
            if (obj < best.objective) {
                best.labels = candidate;
                best.objective = obj;
            }
        }
        // Lexicographic counter: first hit at each objective value wins ties.
        int pos = g.n() - 1;
        while (pos >= 0 && candidate[pos] == k - 1) candidate[pos--] = 0;
        if (pos < 0) break;
        ++candidate[pos];
    }
    if (best.objective >= kInf) {
        // Unreachable for trees with k >= 2; settle on all-zeros and flag it.
        best.labels = candidate;
        best.objective = hamming_distance(best.labels, z);
    }
    best.violations = edge_disagreements(g, best.labels, x);
    best.feasible = best.violations <= budget;
    return best;
}

TreeSolution brute_force_tree(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z,
                              int k, int budget) {
    if (!g.is_tree()) throw ConfigError("brute_force_tree needs a connected tree");
    return brute_force_constrained(g, x, z, k, budget);
}

}  // namespace statrec
