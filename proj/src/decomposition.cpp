#include "statrec/decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <unordered_set>

#include "statrec/errors.hpp"

namespace statrec {

std::vector<int> extend_bag(const LabeledGraph& g, const std::vector<int>& w) {
    std::vector<char> in(g.n(), 0);
    for (int v : w) {
        if (v < 0 || v >= g.n()) throw ConfigError("bag vertex out of range");
        in[v] = 1;
    }
    for (int v : w) {
        for (auto [u, e] : g.neighbors(v)) {
            (void)e;
            in[u] = 1;
        }
    }
    std::vector<int> out;
    for (int v = 0; v < g.n(); ++v) {
        if (in[v]) out.push_back(v);
    }
    return out;
}

namespace {

// Elimination-ordering engine with lazily recomputed fill counts.
class Eliminator {
public:
    Eliminator(const LabeledGraph& g, EliminationHeuristic heuristic)
        : n_(g.n()), heuristic_(heuristic), adj_(g.n()), alive_(g.n(), 1), fill_(g.n(), 0),
          dirty_(g.n(), 1) {
        for (const auto& [u, v] : g.edges()) {
            adj_[u].insert(v);
            adj_[v].insert(u);
        }
    }

    // Returns bags in elimination order plus, for each, the eliminated vertex.
    std::vector<std::pair<int, std::vector<int>>> run() {
        std::vector<std::pair<int, std::vector<int>>> bags;
        bags.reserve(n_);
        for (int step = 0; step < n_; ++step) {
            const int v = pick();
            std::vector<int> nbrs(adj_[v].begin(), adj_[v].end());
            std::sort(nbrs.begin(), nbrs.end());
            std::vector<int> bag = nbrs;
            bag.push_back(v);
            std::sort(bag.begin(), bag.end());
            bags.push_back({v, std::move(bag)});
            eliminate(v, nbrs);
        }
        return bags;
    }

private:
    int pick() {
        int best = -1;
        long long best_fill = 0;
        for (int v = 0; v < n_; ++v) {
            if (!alive_[v]) continue;
            if (heuristic_ == EliminationHeuristic::MinFill && dirty_[v]) {
                fill_[v] = count_fill(v);
                dirty_[v] = 0;
            }
            const long long f = heuristic_ == EliminationHeuristic::MinFill ? fill_[v] : 0;
            if (best < 0 || f < best_fill ||
                (f == best_fill && adj_[v].size() < adj_[best].size()) ||
                (f == best_fill && adj_[v].size() == adj_[best].size() && v < best)) {
                best = v;
                best_fill = f;
            }
        }
        return best;
    }

    long long count_fill(int v) const {
        long long fill = 0;
        std::vector<int> nbrs(adj_[v].begin(), adj_[v].end());
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                if (!adj_[nbrs[i]].count(nbrs[j])) ++fill;
            }
        }
        return fill;
    }

    void eliminate(int v, const std::vector<int>& nbrs) {
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                const int a = nbrs[i];
                const int b = nbrs[j];
                if (adj_[a].insert(b).second) {
                    adj_[b].insert(a);
                    // A new edge changes the fill count of common neighbors.
                    const auto& small = adj_[a].size() < adj_[b].size() ? adj_[a] : adj_[b];
                    const auto& large = adj_[a].size() < adj_[b].size() ? adj_[b] : adj_[a];
                    for (int u : small) {
                        if (large.count(u)) dirty_[u] = 1;
                    }
                    dirty_[a] = dirty_[b] = 1;
                }
            }
        }
        for (int u : nbrs) {
            adj_[u].erase(v);
            dirty_[u] = 1;
        }
        adj_[v].clear();
        alive_[v] = 0;
    }

    int n_;
    EliminationHeuristic heuristic_;
    std::vector<std::unordered_set<int>> adj_;
    std::vector<char> alive_;
    std::vector<long long> fill_;
    std::vector<char> dirty_;
};

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TreeDecomposition decompose(const LabeledGraph& g, EliminationHeuristic heuristic) {
    const int n = g.n();
    auto raw = Eliminator(g, heuristic).run();

    // Elimination index per vertex; bag i connects to the bag of its earliest
    // eliminated higher neighbor.
    std::vector<int> elim_index(n);
    for (int i = 0; i < n; ++i) elim_index[raw[i].first] = i;
    std::vector<int> parent(n, -1);
    for (int i = 0; i < n; ++i) {
        int best = -1;
        for (int u : raw[i].second) {
            if (u == raw[i].first) continue;
            if (best < 0 || elim_index[u] < best) best = elim_index[u];
        }
        parent[i] = best;  // -1 for the last bag of each component
    }
    // Link component roots in a chain so the result is always one tree.
    int prev_root = -1;
    for (int i = 0; i < n; ++i) {
        if (parent[i] < 0) {
            if (prev_root >= 0) parent[i] = prev_root;
            prev_root = i;
        }
    }

    // Merge every bag that is a subset of a tree neighbor (non-redundancy).
    std::vector<std::vector<int>> bag_of(n);
    for (int i = 0; i < n; ++i) bag_of[i] = std::move(raw[i].second);
    std::vector<std::vector<int>> nbrs(n);
    for (int i = 0; i < n; ++i) {
        if (parent[i] >= 0) {
            nbrs[i].push_back(parent[i]);
            nbrs[parent[i]].push_back(i);
        }
    }
    std::vector<char> dead(n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            if (dead[i]) continue;
            for (int j : nbrs[i]) {
                if (dead[j] || j == i) continue;
                if (subset_of(bag_of[i], bag_of[j])) {
                    // Reattach i's other neighbors to j and drop i.
                    for (int o : nbrs[i]) {
                        if (o == j || dead[o]) continue;
                        nbrs[o].push_back(j);
                        nbrs[j].push_back(o);
                    }
                    dead[i] = 1;
                    for (int o : nbrs[i]) {
                        auto& lst = nbrs[o];
                        lst.erase(std::remove(lst.begin(), lst.end(), i), lst.end());
                    }
                    nbrs[i].clear();
                    changed = true;
                    break;
                }
            }
        }
    }

    TreeDecomposition td;
    std::vector<int> new_index(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!dead[i]) {
            new_index[i] = td.bag_count();
            td.bags.push_back(bag_of[i]);
        }
    }
    std::vector<std::pair<int, int>> seen;
    for (int i = 0; i < n; ++i) {
        if (dead[i]) continue;
        for (int j : nbrs[i]) {
            if (dead[j]) continue;
            int a = new_index[i];
            int b = new_index[j];
            if (a > b) std::swap(a, b);
            if (a != b) seen.push_back({a, b});
        }
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    td.tree_edges = std::move(seen);

    td.extended_bags.reserve(td.bag_count());
    for (const auto& bag : td.bags) td.extended_bags.push_back(extend_bag(g, bag));
    td.stats = compute_stats(g, td);
    return td;
}

ValidationReport validate_decomposition(const LabeledGraph& g, const TreeDecomposition& td) {
    ValidationReport report;
    const int b = td.bag_count();
    if (b == 0) {
        report.tree_shape = false;
        report.witness = "no bags";
        return report;
    }

    // Tree shape: right edge count, valid indices, connected.
    if (static_cast<int>(td.tree_edges.size()) != b - 1) {
        report.tree_shape = false;
        report.witness = "edge count is not bags-1";
    }
    std::vector<std::vector<int>> nbrs(b);
    for (const auto& [x, y] : td.tree_edges) {
        if (x < 0 || x >= b || y < 0 || y >= b || x == y) {
            report.tree_shape = false;
            report.witness = "bad tree edge";
            return report;
        }
        nbrs[x].push_back(y);
        nbrs[y].push_back(x);
    }
    if (report.tree_shape) {
        std::vector<char> seen(b, 0);
        std::queue<int> queue;
        queue.push(0);
        seen[0] = 1;
        int count = 1;
        while (!queue.empty()) {
            int i = queue.front();
            queue.pop();
            for (int j : nbrs[i]) {
                if (!seen[j]) {
                    seen[j] = 1;
                    ++count;
                    queue.push(j);
                }
            }
        }
        if (count != b) {
            report.tree_shape = false;
            report.witness = "bag tree disconnected";
        }
    }

    // T1: every vertex covered.
    std::vector<int> first_bag(g.n(), -1);
    for (int i = 0; i < b; ++i) {
        for (int v : td.bags[i]) {
            if (v < 0 || v >= g.n()) {
                report.vertices_covered = false;
                report.witness = "bag vertex out of range";
                return report;
            }
            if (first_bag[v] < 0) first_bag[v] = i;
        }
    }
    for (int v = 0; v < g.n(); ++v) {
        if (first_bag[v] < 0) {
            report.vertices_covered = false;
            report.witness = "vertex " + std::to_string(v) + " in no bag";
            break;
        }
    }

    // T2: every edge inside some bag.
    std::vector<char> edge_covered(g.m(), 0);
    std::vector<int> stamp(g.n(), -1);
    for (int i = 0; i < b; ++i) {
        for (int v : td.bags[i]) stamp[v] = i;
        for (int v : td.bags[i]) {
            for (auto [u, e] : g.neighbors(v)) {
                if (stamp[u] == i) edge_covered[e] = 1;
            }
        }
    }
    for (int e = 0; e < g.m(); ++e) {
        if (!edge_covered[e]) {
            report.edges_covered = false;
            report.witness = "edge " + std::to_string(g.edge(e).first) + "-" +
                             std::to_string(g.edge(e).second) + " in no bag";
            break;
        }
    }

    // T3: bags containing any vertex induce a connected subtree.
    if (report.tree_shape) {
        std::vector<std::vector<int>> bags_of(g.n());
        for (int i = 0; i < b; ++i) {
            for (int v : td.bags[i]) bags_of[v].push_back(i);
        }
        std::vector<int> mark(b, -1);
        for (int v = 0; v < g.n(); ++v) {
            if (bags_of[v].empty()) continue;
            for (int i : bags_of[v]) mark[i] = v;
            std::queue<int> queue;
            queue.push(bags_of[v][0]);
            std::vector<int> seen_stack{bags_of[v][0]};
            mark[bags_of[v][0]] = -v - 2;
            int count = 1;
            while (!queue.empty()) {
                int i = queue.front();
                queue.pop();
                for (int j : nbrs[i]) {
                    if (mark[j] == v) {
                        mark[j] = -v - 2;
                        ++count;
                        queue.push(j);
                    }
                }
            }
            if (count != static_cast<int>(bags_of[v].size())) {
                report.running_intersection = false;
                report.witness = "bags of vertex " + std::to_string(v) + " are disconnected";
                break;
            }
        }
    }

    // Non-redundancy across tree edges.
    for (const auto& [x, y] : td.tree_edges) {
        if (subset_of(td.bags[x], td.bags[y]) || subset_of(td.bags[y], td.bags[x])) {
            report.non_redundant = false;
            report.witness = "bag " + std::to_string(x) + " and " + std::to_string(y) +
                             " are nested";
            break;
        }
    }
    return report;
}

namespace {

// Induced edges of the subgraph on `vertices` (global endpoint ids).
std::vector<Edge> induced_edges(const LabeledGraph& g, const std::vector<int>& vertices,
                                std::vector<int>& stamp, int token) {
    for (int v : vertices) stamp[v] = token;
    std::vector<Edge> edges;
    for (int v : vertices) {
        for (auto [u, e] : g.neighbors(v)) {
            (void)e;
            if (stamp[u] == token && v < u) edges.push_back({v, u});
        }
    }
    return edges;
}

}  // namespace

std::pair<int, bool> mincut_star(const LabeledGraph& g, const std::vector<int>& w,
                                 const std::vector<int>& w_star, int mincut_exact_limit) {
    if (static_cast<int>(w.size()) < 2) return {kNoCut, true};
    std::vector<int> stamp(g.n(), -1);
    const auto edges = induced_edges(g, w_star, stamp, 0);
    const int size = static_cast<int>(w_star.size());

    if (size <= mincut_exact_limit) {
        std::vector<int> position(g.n(), -1);
        for (int i = 0; i < size; ++i) position[w_star[i]] = i;
        std::uint32_t core_mask = 0;
        for (int v : w) core_mask |= 1u << position[v];
        std::vector<std::pair<int, int>> bit_edges;
        bit_edges.reserve(edges.size());
        for (const auto& [a, c] : edges) bit_edges.push_back({position[a], position[c]});
        int best = kNoCut;
        const std::uint32_t full = size == 32 ? ~0u : (1u << size) - 1;
        for (std::uint32_t s = 1; s < full; ++s) {
            if (!(s & core_mask) || !(~s & core_mask)) continue;
            int boundary = 0;
            for (const auto& [a, c] : bit_edges) {
                boundary += ((s >> a) & 1u) != ((s >> c) & 1u);
            }
            if (best == kNoCut || boundary < best) best = boundary;
        }
        return {best, true};
    }

    // Proxy: min degree, within the extended-bag subgraph, over core vertices.
    std::vector<int> degree(g.n(), 0);
    for (const auto& [a, c] : edges) {
        ++degree[a];
        ++degree[c];
    }
    int best = kNoCut;
    for (int v : w) {
        if (best == kNoCut || degree[v] < best) best = degree[v];
    }
    return {best, false};
}

DecompStats compute_stats(const LabeledGraph& g, const TreeDecomposition& td,
                          int mincut_exact_limit) {
    DecompStats stats;
    for (const auto& bag : td.bags) stats.wid = std::max(stats.wid, static_cast<int>(bag.size()) - 1);
    for (const auto& bag : td.extended_bags) {
        stats.wid_star = std::max(stats.wid_star, static_cast<int>(bag.size()) - 1);
    }
    std::vector<int> degree(td.bag_count(), 0);
    for (const auto& [a, b] : td.tree_edges) {
        ++degree[a];
        ++degree[b];
    }
    for (int d : degree) stats.deg_T = std::max(stats.deg_T, d);

    std::vector<int> per_edge(g.m(), 0);
    std::vector<int> stamp(g.n(), -1);
    for (int i = 0; i < td.bag_count(); ++i) {
        for (int v : td.extended_bags[i]) stamp[v] = i;
        int count = 0;
        for (int v : td.extended_bags[i]) {
            for (auto [u, e] : g.neighbors(v)) {
                if (stamp[u] == i && v < u) {
                    ++count;
                    ++per_edge[e];
                }
            }
        }
        stats.max_edges_star = std::max(stats.max_edges_star, count);
    }
    for (int e = 0; e < g.m(); ++e) stats.deg_E_star = std::max(stats.deg_E_star, per_edge[e]);

    stats.mincut_star_per_bag.reserve(td.bag_count());
    for (int i = 0; i < td.bag_count(); ++i) {
        stats.mincut_star_per_bag.push_back(
            mincut_star(g, td.bags[i], td.extended_bags[i], mincut_exact_limit));
    }
    return stats;
}

}  // namespace statrec
