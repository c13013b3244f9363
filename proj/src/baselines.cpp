#include "statrec/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "statrec/errors.hpp"

namespace statrec {

NodeLabeling majority_vote(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z,
                           int k) {
    if (z.size() != g.n()) throw ConfigError("observed labeling length mismatch");
    if (x.size() != g.m()) throw ConfigError("sign count mismatch");
    NodeLabeling out;
    out.k = k;
    out.labels.resize(g.n());
    std::vector<int> score(k);
    for (int v = 0; v < g.n(); ++v) {
        std::fill(score.begin(), score.end(), 0);
        for (auto [u, e] : g.neighbors(v)) score[z[u]] += x[e];
        const int top = *std::max_element(score.begin(), score.end());
        int winners = 0;
        int smallest = -1;
        for (int c = 0; c < k; ++c) {
            if (score[c] == top) {
                ++winners;
                if (smallest < 0) smallest = c;
            }
        }
        if (winners == 1) {
            out[v] = smallest;
        } else if (score[z[v]] == top) {
            out[v] = z[v];
        } else {
            out[v] = smallest;
        }
    }
    return out;
}

NodeLabeling loopy_bp(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z, double p,
                      double q, int k, const LoopyBpOptions& options) {
    if (z.size() != g.n()) throw ConfigError("observed labeling length mismatch");
    if (x.size() != g.m()) throw ConfigError("sign count mismatch");
    if (p < 0.0 || p >= 0.5 || q < 0.0 || q >= 0.5) throw ConfigError("p, q must be in [0, 0.5)");
    if (k < 2) throw ConfigError("k must be >= 2");

    const double node_hit = 1.0 - q;
    const double node_miss = q / (k - 1);
    // Potential mass split uniformly inside the agree/disagree classes.
    const double pos_same = (1.0 - p) / k;
    const double pos_diff = p / (static_cast<double>(k) * (k - 1));
    const double neg_same = p / k;
    const double neg_diff = (1.0 - p) / (static_cast<double>(k) * (k - 1));

    // Messages live on directed edges: message[2e] flows from edge(e).first to
    // edge(e).second, message[2e+1] the other way.
    std::vector<std::vector<double>> message(2 * g.m(), std::vector<double>(k, 1.0 / k));
    auto incoming_product = [&](int v, int skip_edge, std::vector<double>& out) {
        for (int c = 0; c < k; ++c) out[c] = c == z[v] ? node_hit : node_miss;
        for (auto [u, e] : g.neighbors(v)) {
            (void)u;
            if (e == skip_edge) continue;
            const int dir = g.edge(e).first == v ? 1 : 0;  // message arriving at v
            const auto& in = message[2 * e + dir];
            for (int c = 0; c < k; ++c) out[c] *= in[c];
        }
    };

    std::vector<std::vector<double>> next(2 * g.m(), std::vector<double>(k));
    std::vector<double> base(k);
    for (int iter = 0; iter < options.max_iters; ++iter) {
        double change = 0.0;
        for (int e = 0; e < g.m(); ++e) {
            const auto [a, b] = g.edge(e);
            const double same = x[e] > 0 ? pos_same : neg_same;
            const double diff = x[e] > 0 ? pos_diff : neg_diff;
            for (int dir = 0; dir < 2; ++dir) {
                const int from = dir == 0 ? a : b;
                incoming_product(from, e, base);
                double total = 0.0;
                for (int c = 0; c < k; ++c) total += base[c];
                auto& out = next[2 * e + dir];
                for (int c = 0; c < k; ++c) {
                    // Sum over the sender's labels: same-label mass plus the
                    // rest of the class.
                    out[c] = same * base[c] + diff * (total - base[c]);
                }
                double norm = 0.0;
                for (int c = 0; c < k; ++c) norm += out[c];
                if (norm <= 0.0) norm = 1.0;
                const auto& old = message[2 * e + dir];
                for (int c = 0; c < k; ++c) {
                    out[c] = options.damping * old[c] + (1.0 - options.damping) * out[c] / norm;
                    change = std::max(change, std::abs(out[c] - old[c]));
                }
            }
        }
        message.swap(next);
        if (change < options.tolerance) break;
    }

    NodeLabeling out;
    out.k = k;
    out.labels.resize(g.n());
    std::vector<double> belief(k);
    for (int v = 0; v < g.n(); ++v) {
        incoming_product(v, -1, belief);
        int best = 0;
        for (int c = 1; c < k; ++c) {
            if (belief[c] > belief[best]) best = c;
        }
        out[v] = best;
    }
    return out;
}

}  // namespace statrec
