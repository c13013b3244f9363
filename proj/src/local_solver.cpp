#include "statrec/local_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "statrec/errors.hpp"
#include "statrec/rng.hpp"

namespace statrec {

NodeLabeling InducedSubgraph::restrict_labels(const NodeLabeling& full) const {
    NodeLabeling out;
    out.k = full.k;
    out.labels.reserve(vertices.size());
    for (int v : vertices) out.labels.push_back(full[v]);
    return out;
}

InducedSubgraph induce_subgraph(const LabeledGraph& g, const EdgeSigns& x,
                                const std::vector<int>& vertices) {
    InducedSubgraph sub;
    sub.vertices = vertices;
    std::sort(sub.vertices.begin(), sub.vertices.end());
    std::vector<int> local(g.n(), -1);
    for (int i = 0; i < static_cast<int>(sub.vertices.size()); ++i) local[sub.vertices[i]] = i;
    std::vector<Edge> edges;
    std::vector<int> signs;
    for (int v : sub.vertices) {
        for (auto [u, e] : g.neighbors(v)) {
            if (v < u && local[u] >= 0) {
                edges.push_back({local[v], local[u]});
                signs.push_back(x[e]);
            }
        }
    }
    sub.graph = LabeledGraph(static_cast<int>(sub.vertices.size()), std::move(edges));
    sub.signs.signs = std::move(signs);
    return sub;
}

int agreement(const LabeledGraph& sub, const EdgeSigns& x_sub, const NodeLabeling& y) {
    return sub.m() - edge_disagreements(sub, y, x_sub);
}

NodeLabeling solve_bag_exact(const LabeledGraph& sub, const EdgeSigns& x_sub, int k) {
    double size = 1.0;
    for (int v = 0; v < sub.n(); ++v) {
        size *= k;
        if (size > 1e6) throw GuardError("bag enumeration limited to k^n <= 1e6");
    }
    NodeLabeling candidate;
    candidate.k = k;
    candidate.labels.assign(sub.n(), 0);
    NodeLabeling best = candidate;
    int best_agreement = -1;
    for (;;) {
        const int a = agreement(sub, x_sub, candidate);
        if (a > best_agreement) {
            best_agreement = a;
            best = candidate;
        }
        int pos = sub.n() - 1;
        while (pos >= 0 && candidate[pos] == k - 1) candidate[pos--] = 0;
        if (pos < 0) break;
        ++candidate[pos];
    }
    return best;
}

namespace {

// One hill-climbing pass: best-improvement single-vertex moves on the
// agreement objective, lazy max-heap over per-vertex best moves.
int climb(const LabeledGraph& sub, const EdgeSigns& x_sub, int k, NodeLabeling& y) {
    const int n = sub.n();
    int agree = agreement(sub, x_sub, y);
    if (sub.m() == 0) return agree;

    // score[v][c]: number of incident edges that agree if v takes label c.
    std::vector<std::vector<int>> score(n, std::vector<int>(k, 0));
    for (int v = 0; v < n; ++v) {
        for (auto [u, e] : sub.neighbors(v)) {
            if (x_sub[e] > 0) {
                score[v][y[u]] += 1;
            } else {
                for (int c = 0; c < k; ++c) score[v][c] += c != y[u];
            }
        }
    }
    std::vector<int> best_gain(n), best_label(n);
    auto refresh = [&](int v) {
        int gain = 0;
        int label = y[v];
        for (int c = 0; c < k; ++c) {
            const int diff = score[v][c] - score[v][y[v]];
            if (c != y[v] && diff > gain) {
                gain = diff;
                label = c;
            }
        }
        best_gain[v] = gain;
        best_label[v] = label;
    };
    // Max-heap on (gain, -v); stale entries skipped on pop.
    std::priority_queue<std::pair<int, int>> heap;
    for (int v = 0; v < n; ++v) {
        refresh(v);
        if (best_gain[v] > 0) heap.push({best_gain[v], -v});
    }

    const long long cap = 100LL * n;
    long long moves = 0;
    while (!heap.empty() && moves < cap) {
        auto [gain, neg_v] = heap.top();
        heap.pop();
        const int v = -neg_v;
        if (gain != best_gain[v] || gain <= 0) continue;
        const int old = y[v];
        const int next = best_label[v];
        y[v] = next;
        agree += gain;
        ++moves;
        for (auto [u, e] : sub.neighbors(v)) {
            if (x_sub[e] > 0) {
                score[u][old] -= 1;
                score[u][next] += 1;
            } else {
                score[u][old] += 1;
                score[u][next] -= 1;
            }
            refresh(u);
            if (best_gain[u] > 0) heap.push({best_gain[u], -u});
        }
        refresh(v);
        if (best_gain[v] > 0) heap.push({best_gain[v], -v});
    }
    return agree;
}

}  // namespace

NodeLabeling solve_bag_cc(const LabeledGraph& sub, const EdgeSigns& x_sub, int k, int restarts,
                          std::uint64_t seed, const NodeLabeling* init) {
    if (k < 2) throw ConfigError("correlation clustering needs k >= 2");
    if (restarts < 1) throw ConfigError("need at least one restart");
    NodeLabeling best;
    int best_agreement = -1;
    for (int r = 0; r < restarts; ++r) {
        NodeLabeling y;
        y.k = k;
        if (r == 0 && init) {
            y = *init;
            if (y.size() != sub.n()) throw ConfigError("warm start has wrong length");
        } else {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
            y.labels.resize(sub.n());
            for (int v = 0; v < sub.n(); ++v) y.labels[v] = rng.int_below(k);
        }
        const int a = climb(sub, x_sub, k, y);
        if (a > best_agreement) {
            best_agreement = a;
            best = std::move(y);
        }
    }
    return best;
}

std::vector<std::vector<int>> intersection_matrix(const NodeLabeling& y_bar,
                                                  const NodeLabeling& z_sub, int k) {
    if (y_bar.size() != z_sub.size()) throw ConfigError("labelings have different lengths");
    std::vector<std::vector<int>> counts(k, std::vector<int>(k, 0));
    for (int v = 0; v < y_bar.size(); ++v) ++counts[y_bar[v]][z_sub[v]];
    return counts;
}

FullPerm greedy_match(const NodeLabeling& y_bar, const NodeLabeling& z_sub, int k) {
    const auto counts = intersection_matrix(y_bar, z_sub, k);
    std::vector<std::tuple<int, int, int>> entries;  // (-count, i, j)
    entries.reserve(k * k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) entries.push_back({-counts[i][j], i, j});
    }
    std::sort(entries.begin(), entries.end());
    FullPerm perm;
    perm.mapping.assign(k, -1);
    std::vector<char> used_col(k, 0);
    for (const auto& [neg, i, j] : entries) {
        (void)neg;
        if (perm.mapping[i] < 0 && !used_col[j]) {
            perm.mapping[i] = j;
            used_col[j] = 1;
        }
    }
    return perm;
}

namespace {

// Max-weight perfect assignment via the Hungarian algorithm with potentials;
// returns (value, row -> column).
std::pair<long long, std::vector<int>> assignment(const std::vector<std::vector<int>>& weight) {
    const int n = static_cast<int>(weight.size());
    // Minimize negated weights; classic potentials formulation, 1-indexed.
    const long long kInf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            long long delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const long long cur = -weight[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n);
    long long total = 0;
    for (int j = 1; j <= n; ++j) {
        if (p[j] > 0) {
            row_to_col[p[j] - 1] = j - 1;
            total += weight[p[j] - 1][j - 1];
        }
    }
    return {total, row_to_col};
}

constexpr int kLexRefineLimit = 40;

}  // namespace

FullPerm optimal_match(const NodeLabeling& y_bar, const NodeLabeling& z_sub, int k) {
    const auto counts = intersection_matrix(y_bar, z_sub, k);
    auto [best_value, row_to_col] = assignment(counts);

    FullPerm perm;
    if (k > kLexRefineLimit) {
        // Deterministic but without the lexicographic tie-break refinement.
        perm.mapping = std::move(row_to_col);
        return perm;
    }

    // Fix rows in order, picking the smallest column that still allows the
    // optimal total on the remaining sub-assignment.
    perm.mapping.assign(k, -1);
    std::vector<char> used_col(k, 0);
    long long remaining = best_value;
    for (int i = 0; i < k; ++i) {
        std::vector<int> free_cols;
        for (int j = 0; j < k; ++j) {
            if (!used_col[j]) free_cols.push_back(j);
        }
        for (int j : free_cols) {
            long long rest = 0;
            if (i + 1 < k) {
                std::vector<std::vector<int>> subweight;
                subweight.reserve(k - i - 1);
                for (int r = i + 1; r < k; ++r) {
                    std::vector<int> row;
                    for (int c : free_cols) {
                        if (c != j) row.push_back(counts[r][c]);
                    }
                    subweight.push_back(std::move(row));
                }
                rest = assignment(subweight).first;
            }
            if (counts[i][j] + rest == remaining) {
                perm.mapping[i] = j;
                used_col[j] = 1;
                remaining -= counts[i][j];
                break;
            }
        }
        if (perm.mapping[i] < 0) throw ConfigError("assignment refinement lost its target");
    }
    return perm;
}

std::vector<BagLabeling> local_labelings(const LabeledGraph& g, const TreeDecomposition& td,
                                         const EdgeSigns& x, const NodeLabeling& z, int k,
                                         const LocalSolverOptions& options) {
    std::vector<BagLabeling> out(td.bag_count());
    for (int i = 0; i < td.bag_count(); ++i) {
        BagLabeling bag;
        bag.bag_index = i;
        bag.vertices_star = td.extended_bags[i];
        bag.vertices = td.bags[i];
        const auto sub = induce_subgraph(g, x, bag.vertices_star);
        const NodeLabeling z_sub = sub.restrict_labels(z);

        NodeLabeling y_bar;
        const double combos = std::pow(static_cast<double>(k),
                                       static_cast<double>(sub.graph.n()));
        if (combos <= options.exact_limit) {
            y_bar = solve_bag_exact(sub.graph, sub.signs, k);
            bag.method = "exact";
            bag.restarts_used = 0;
        } else {
            y_bar = solve_bag_cc(sub.graph, sub.signs, k, options.cc_restarts,
                                 derive_seed(options.seed, static_cast<std::uint64_t>(i)),
                                 options.warm_start ? &z_sub : nullptr);
            bag.method = "local-search";
            bag.restarts_used = options.cc_restarts;
        }
        // The optimum set can be larger than one permutation orbit (several
        // sign-consistent classes). Any member is admissible; z itself is the
        // one the alignment step wants, so keep it whenever it ties.
        if (agreement(sub.graph, sub.signs, z_sub) >=
            agreement(sub.graph, sub.signs, y_bar)) {
            y_bar = z_sub;
        }

        const FullPerm perm = options.matcher == Matcher::Exact ? optimal_match(y_bar, z_sub, k)
                                                                : greedy_match(y_bar, z_sub, k);
        const NodeLabeling y_tilde = apply_permutation(y_bar, perm);
        bag.agreement = agreement(sub.graph, sub.signs, y_tilde);
        bag.edges_star = sub.graph.m();
        if (bag.agreement != agreement(sub.graph, sub.signs, y_bar)) {
            throw ConfigError("permutation changed the bag agreement");
        }

        bag.labels_star = y_tilde.labels;
        bag.labels.reserve(bag.vertices.size());
        std::size_t pos = 0;
        for (int v : bag.vertices) {
            while (bag.vertices_star[pos] != v) ++pos;
            bag.labels.push_back(bag.labels_star[pos]);
        }
        out[i] = std::move(bag);
    }
    return out;
}

}  // namespace statrec
