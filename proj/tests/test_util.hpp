#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "statrec/graph.hpp"
#include "statrec/rng.hpp"

namespace statrec::testutil {

// Random connected graph: a random spanning tree plus `extra` random edges.
inline LabeledGraph random_connected_graph(int n, int extra, Rng& rng) {
    std::set<Edge> edges;
    for (int v = 1; v < n; ++v) {
        int u = rng.int_below(v);
        edges.insert({u, v});
    }
    int guard = 0;
    while (extra > 0 && guard < 1000) {
        int u = rng.int_below(n);
        int v = rng.int_below(n);
        if (u == v) {
            ++guard;
            continue;
        }
        if (u > v) std::swap(u, v);
        if (edges.insert({u, v}).second) {
            --extra;
        } else {
            ++guard;
        }
    }
    return LabeledGraph(n, {edges.begin(), edges.end()});
}

inline LabeledGraph random_tree(int n, Rng& rng) { return random_connected_graph(n, 0, rng); }

inline NodeLabeling random_labeling(int n, int k, Rng& rng) {
    NodeLabeling y;
    y.k = k;
    y.labels.resize(n);
    for (int v = 0; v < n; ++v) y.labels[v] = rng.int_below(k);
    return y;
}

inline EdgeSigns random_signs(int m, Rng& rng) {
    EdgeSigns x;
    x.signs.resize(m);
    for (int e = 0; e < m; ++e) x.signs[e] = rng.bernoulli(0.5) ? 1 : -1;
    return x;
}

// Max-flow (Edmonds-Karp) on an undirected unit-capacity graph given as an
// edge list over local ids; independent oracle for mincut checks.
inline int max_flow_unit(int n, const std::vector<std::pair<int, int>>& edges, int s, int t) {
    std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
    for (const auto& [a, b] : edges) {
        cap[a][b] += 1;
        cap[b][a] += 1;
    }
    int flow = 0;
    for (;;) {
        std::vector<int> parent(n, -1);
        parent[s] = s;
        std::vector<int> queue{s};
        for (std::size_t head = 0; head < queue.size() && parent[t] < 0; ++head) {
            int v = queue[head];
            for (int u = 0; u < n; ++u) {
                if (parent[u] < 0 && cap[v][u] > 0) {
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
        if (parent[t] < 0) break;
        for (int v = t; v != s; v = parent[v]) {
            cap[parent[v]][v] -= 1;
            cap[v][parent[v]] += 1;
        }
        ++flow;
    }
    return flow;
}

}  // namespace statrec::testutil
