#include "statrec/global_decoder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "statrec/errors.hpp"
#include "statrec/bounds.hpp"

namespace statrec {

namespace {
constexpr int kInf = std::numeric_limits<int>::max() / 4;
}

std::vector<SwapPerm> swap_options(int k) {
    std::vector<SwapPerm> options;
    options.reserve(1 + k * (k - 1) / 2);
    options.push_back(SwapPerm::identity());
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) options.push_back(SwapPerm::transposition(a, b));
    }
    return options;
}

SwapCostTable swap_costs(const BagLabeling& bag, const NodeLabeling& z, int k) {
    SwapCostTable table;
    table.bag_index = bag.bag_index;
    const auto options = swap_options(k);
    table.costs.reserve(options.size());
    for (const auto& option : options) {
        int cost = 0;
        for (std::size_t i = 0; i < bag.vertices.size(); ++i) {
            cost += option.apply(bag.labels[i]) != z[bag.vertices[i]];
        }
        table.costs.push_back(cost);
    }
    return table;
}

namespace {

int core_label_at(const BagLabeling& bag, int vertex) {
    const auto it = std::lower_bound(bag.vertices.begin(), bag.vertices.end(), vertex);
    if (it == bag.vertices.end() || *it != vertex) {
        throw ConfigError("vertex missing from bag labeling");
    }
    return bag.labels[it - bag.vertices.begin()];
}

}  // namespace

InterBagSigns inter_bag_signs(const TreeDecomposition& td,
                              const std::vector<BagLabeling>& bags) {
    InterBagSigns out;
    out.entries.reserve(td.tree_edges.size());
    for (const auto& [a, b] : td.tree_edges) {
        std::vector<int> shared;
        std::set_intersection(td.bags[a].begin(), td.bags[a].end(), td.bags[b].begin(),
                              td.bags[b].end(), std::back_inserter(shared));
        if (shared.empty()) {
            throw ConfigError("adjacent bags " + std::to_string(a) + "," + std::to_string(b) +
                              " share no vertex");
        }
        InterBagSign entry;
        entry.bag_a = a;
        entry.bag_b = b;
        entry.vertex = shared.front();
        entry.label_a = core_label_at(bags[a], entry.vertex);
        entry.label_b = core_label_at(bags[b], entry.vertex);
        entry.sign = entry.label_a == entry.label_b ? 1 : -1;
        out.entries.push_back(entry);
    }
    return out;
}

GlobalBudget compute_global_budget(const TreeDecomposition& td, double p, double delta,
                                   bool use_p_prime) {
    if (delta <= 0.0 || delta >= 1.0) throw ConfigError("delta must be in (0, 1)");
    if (p < 0.0 || p > 1.0) throw ConfigError("p must be in [0, 1]");
    const DecompStats& stats = td.stats;
    GlobalBudget gb;
    gb.delta = delta;
    gb.use_p_prime = use_p_prime;
    gb.p_used = use_p_prime ? adjust_p_for_approx(p) : p;
    gb.wid_star = stats.wid_star;
    gb.deg_T = stats.deg_T;
    gb.deg_E_star = stats.deg_E_star;
    gb.max_edges_star = stats.max_edges_star;
    gb.heuristic = stats.any_proxy();
    for (const auto& [cut, exact] : stats.mincut_star_per_bag) {
        (void)exact;
        if (cut == kNoCut) continue;  // no way to split the core: no error term
        gb.sum_power_terms += std::pow(gb.p_used, static_cast<double>((cut + 1) / 2));
    }
    gb.K_n = std::pow(2.0, stats.wid_star + 2) * gb.sum_power_terms +
             6.0 * stats.deg_E_star * stats.max_edges_star * std::log(2.0 / delta);
    gb.L_n = stats.deg_T * gb.K_n;
    const double cap = static_cast<double>(td.tree_edges.size());
    gb.effective = static_cast<int>(std::floor(std::min(gb.L_n, cap)));
    if (gb.effective < 0) gb.effective = 0;
    return gb;
}

namespace {

struct BagTreeOrder {
    std::vector<int> bfs;
    std::vector<int> parent;
    std::vector<int> parent_entry;  // index into signs.entries
    std::vector<std::vector<int>> children;
};

BagTreeOrder orient_bags(const TreeDecomposition& td, const InterBagSigns& signs) {
    const int b = td.bag_count();
    BagTreeOrder order;
    order.parent.assign(b, -2);
    order.parent_entry.assign(b, -1);
    order.children.assign(b, {});
    std::vector<std::vector<std::pair<int, int>>> nbrs(b);  // (other, entry)
    for (int e = 0; e < static_cast<int>(signs.entries.size()); ++e) {
        const auto& entry = signs.entries[e];
        nbrs[entry.bag_a].push_back({entry.bag_b, e});
        nbrs[entry.bag_b].push_back({entry.bag_a, e});
    }
    for (auto& lst : nbrs) std::sort(lst.begin(), lst.end());
    order.bfs.push_back(0);
    order.parent[0] = -1;
    for (std::size_t head = 0; head < order.bfs.size(); ++head) {
        const int i = order.bfs[head];
        for (auto [j, e] : nbrs[i]) {
            if (order.parent[j] == -2) {
                order.parent[j] = i;
                order.parent_entry[j] = e;
                order.children[i].push_back(j);
                order.bfs.push_back(j);
            }
        }
    }
    if (static_cast<int>(order.bfs.size()) != b) {
        throw ConfigError("decomposition tree is disconnected");
    }
    return order;
}

// +1 edge charge when the two swapped representative labels disagree with the
// recorded sign.
int entry_charge(const InterBagSign& entry, const SwapPerm& at_a, const SwapPerm& at_b) {
    const int sign = at_a.apply(entry.label_a) == at_b.apply(entry.label_b) ? 1 : -1;
    return sign != entry.sign;
}

class SwapDp {
public:
    SwapDp(const TreeDecomposition& td, const std::vector<SwapCostTable>& costs,
           const InterBagSigns& signs, int k, int budget)
        : td_(td), costs_(costs), signs_(signs), options_(swap_options(k)),
          cap_(std::min<int>(budget, static_cast<int>(td.tree_edges.size()))),
          order_(orient_bags(td, signs)) {
        if (cap_ < 0) cap_ = 0;
        down_.assign(td.bag_count(), {});
    }

    // Minimum achievable number of inter-bag disagreements, unconstrained.
    int min_disagreements() {
        const int o = static_cast<int>(options_.size());
        std::vector<std::vector<int>> table(td_.bag_count(), std::vector<int>(o, 0));
        for (auto it = order_.bfs.rbegin(); it != order_.bfs.rend(); ++it) {
            const int bag = *it;
            std::vector<int> own(o, 0);
            for (int mine = 0; mine < o; ++mine) {
                int total = 0;
                for (int child : order_.children[bag]) total += table[child][mine];
                own[mine] = total;
            }
            if (order_.parent[bag] < 0) {
                int best = kInf;
                for (int mine = 0; mine < o; ++mine) best = std::min(best, own[mine]);
                return best;
            }
            const auto& entry = signs_.entries[order_.parent_entry[bag]];
            const bool bag_is_a = entry.bag_a == bag;
            for (int pa = 0; pa < o; ++pa) {
                int best = kInf;
                for (int mine = 0; mine < o; ++mine) {
                    const int charge = bag_is_a ? entry_charge(entry, options_[mine], options_[pa])
                                                : entry_charge(entry, options_[pa], options_[mine]);
                    best = std::min(best, charge == 0 ? own[mine] : own[mine] + 1);
                }
                table[bag][pa] = best;
            }
        }
        return 0;  // single bag: no edges
    }

    SwapDecodeResult run() {
        const int o = static_cast<int>(options_.size());
        for (auto it = order_.bfs.rbegin(); it != order_.bfs.rend(); ++it) {
            if (order_.parent[*it] >= 0) fill_tables(*it);
        }
        SwapDecodeResult result;
        result.swaps.assign(td_.bag_count(), SwapPerm::identity());
        auto conv = child_convolutions(0);
        int best = kInf;
        int best_option = 0;
        for (int mine = 0; mine < o; ++mine) {
            const int c = conv[mine][cap_];
            if (c < kInf && costs_[0].costs[mine] + c < best) {
                best = costs_[0].costs[mine] + c;
                best_option = mine;
            }
        }
        if (best >= kInf) throw ConfigError("swap decoding found no assignment within budget");
        result.cost = best;
        result.swaps[0] = options_[best_option];
        choice_.assign(td_.bag_count(), 0);
        choice_[0] = best_option;
        assign_children(0, best_option, cap_, conv, result);
        result.budget_used = cap_;
        result.disagreements = 0;
        for (const auto& entry : signs_.entries) {
            result.disagreements +=
                entry_charge(entry, result.swaps[entry.bag_a], result.swaps[entry.bag_b]);
        }
        return result;
    }

private:
    void fill_tables(int bag) {
        const int o = static_cast<int>(options_.size());
        auto conv = child_convolutions(bag);
        const auto& entry = signs_.entries[order_.parent_entry[bag]];
        const bool bag_is_a = entry.bag_a == bag;
        auto& table = down_[bag];
        table.assign(o, std::vector<int>(cap_ + 1, kInf));
        for (int pa = 0; pa < o; ++pa) {
            for (int b = 0; b <= cap_; ++b) {
                int best = kInf;
                for (int mine = 0; mine < o; ++mine) {
                    const int charge = bag_is_a ? entry_charge(entry, options_[mine], options_[pa])
                                                : entry_charge(entry, options_[pa], options_[mine]);
                    if (charge > b) continue;
                    const int c = conv[mine][b - charge];
                    if (c >= kInf) continue;
                    best = std::min(best, costs_[bag].costs[mine] + c);
                }
                table[pa][b] = best;
            }
        }
    }

    std::vector<std::vector<int>> child_convolutions(int bag) const {
        const int o = static_cast<int>(options_.size());
        std::vector<std::vector<int>> conv(o, std::vector<int>(cap_ + 1, 0));
        for (int mine = 0; mine < o; ++mine) {
            for (int child : order_.children[bag]) {
                const auto& ct = down_[child][mine];
                std::vector<int> next(cap_ + 1, kInf);
                for (int b = 0; b <= cap_; ++b) {
                    if (conv[mine][b] >= kInf) continue;
                    for (int bc = 0; bc + b <= cap_; ++bc) {
                        if (ct[bc] >= kInf) continue;
                        next[b + bc] = std::min(next[b + bc], conv[mine][b] + ct[bc]);
                    }
                }
                for (int b = 1; b <= cap_; ++b) next[b] = std::min(next[b], next[b - 1]);
                conv[mine] = std::move(next);
            }
        }
        return conv;
    }

    void assign_children(int bag, int option, int budget,
                         const std::vector<std::vector<int>>& conv, SwapDecodeResult& result) {
        const auto& children = order_.children[bag];
        if (children.empty()) return;
        const int m = static_cast<int>(children.size());
        std::vector<std::vector<int>> suf(m + 1, std::vector<int>(budget + 1, 0));
        for (int j = m - 1; j >= 0; --j) {
            const auto& ct = down_[children[j]][option];
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
            const auto& ct = down_[child][option];
            const int target = suf[j][remaining];
            int chosen = -1;
            for (int bc = 0; bc <= remaining; ++bc) {
                if (ct[bc] < kInf && suf[j + 1][remaining - bc] < kInf &&
                    ct[bc] + suf[j + 1][remaining - bc] == target) {
                    chosen = bc;
                    break;
                }
            }
            if (chosen < 0) throw ConfigError("swap DP reconstruction lost its target");
            assign_bag(child, option, chosen, result);
            remaining -= chosen;
        }
    }

    void assign_bag(int bag, int parent_option, int budget, SwapDecodeResult& result) {
        const int o = static_cast<int>(options_.size());
        auto conv = child_convolutions(bag);
        const auto& entry = signs_.entries[order_.parent_entry[bag]];
        const bool bag_is_a = entry.bag_a == bag;
        const int target = down_[bag][parent_option][budget];
        int chosen = -1;
        int chosen_budget = 0;
        for (int mine = 0; mine < o; ++mine) {
            const int charge = bag_is_a
                                   ? entry_charge(entry, options_[mine], options_[parent_option])
                                   : entry_charge(entry, options_[parent_option], options_[mine]);
            if (charge > budget) continue;
            const int c = conv[mine][budget - charge];
            if (c < kInf && costs_[bag].costs[mine] + c == target) {
                chosen = mine;
                chosen_budget = budget - charge;
                break;
            }
        }
        if (chosen < 0) throw ConfigError("swap DP reconstruction lost its target");
        result.swaps[bag] = options_[chosen];
        choice_[bag] = chosen;
        assign_children(bag, chosen, chosen_budget, conv, result);
    }

    const TreeDecomposition& td_;
    const std::vector<SwapCostTable>& costs_;
    const InterBagSigns& signs_;
    std::vector<SwapPerm> options_;
    int cap_;
    BagTreeOrder order_;
    std::vector<std::vector<std::vector<int>>> down_;
    std::vector<int> choice_;
};

int options_k_from_costs(const std::vector<SwapCostTable>& costs) {
    // |costs| per bag is k(k-1)/2 + 1; recover k.
    const std::size_t count = costs.at(0).costs.size();
    int k = 1;
    while (static_cast<std::size_t>(1 + k * (k - 1) / 2) < count) ++k;
    if (static_cast<std::size_t>(1 + k * (k - 1) / 2) != count) {
        throw ConfigError("cost table size is not k(k-1)/2 + 1");
    }
    return k;
}

}  // namespace

SwapDecodeResult tree_decode_swaps(const TreeDecomposition& td,
                                   const std::vector<SwapCostTable>& costs,
                                   const InterBagSigns& signs, int budget) {
    if (budget < 0) throw ConfigError("budget must be >= 0");
    if (static_cast<int>(costs.size()) != td.bag_count()) {
        throw ConfigError("need one cost table per bag");
    }
    const int k = options_k_from_costs(costs);
    const auto options = swap_options(k);
    const int edge_count = static_cast<int>(td.tree_edges.size());

    // A budget at or above |F| makes the constraint vacuous: every bag takes
    // its cheapest swap independently.
    if (budget >= edge_count) {
        SwapDecodeResult result;
        result.swaps.reserve(td.bag_count());
        result.budget_used = edge_count;
        for (const auto& table : costs) {
            int best = 0;
            for (int o = 1; o < static_cast<int>(options.size()); ++o) {
                if (table.costs[o] < table.costs[best]) best = o;
            }
            result.swaps.push_back(options[best]);
            result.cost += table.costs[best];
        }
        for (const auto& entry : signs.entries) {
            result.disagreements +=
                entry_charge(entry, result.swaps[entry.bag_a], result.swaps[entry.bag_b]);
        }
        return result;
    }

    SwapDp dp(td, costs, signs, k, budget);
    const int min_dis = dp.min_disagreements();
    if (min_dis > budget) {
        SwapDp relaxed(td, costs, signs, k, min_dis);
        auto result = relaxed.run();
        result.budget_raised = true;
        return result;
    }
    return dp.run();
}

NodeLabeling assemble(const TreeDecomposition& td, const std::vector<BagLabeling>& bags,
                      const std::vector<SwapPerm>& swaps, int n, int k) {
    NodeLabeling out;
    out.k = k;
    out.labels.assign(n, -1);
    std::vector<int> owner(n, -1);
    for (int i = td.bag_count() - 1; i >= 0; --i) {
        for (int v : td.bags[i]) owner[v] = i;
    }
    for (int v = 0; v < n; ++v) {
        if (owner[v] < 0) throw ConfigError("vertex " + std::to_string(v) + " is in no bag");
        const int i = owner[v];
        out[v] = swaps[i].apply(core_label_at(bags[i], v));
    }
    return out;
}

RecoveryReport recover_graph(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z,
                             int k, const RecoverOptions& options, const NodeLabeling* truth) {
    const auto start = std::chrono::steady_clock::now();
    if (!g.connected()) throw ConfigError("recover_graph needs a connected graph");
    if (z.size() != g.n()) throw ConfigError("observed labeling length mismatch");
    if (x.size() != g.m()) throw ConfigError("sign count mismatch");

    RecoveryReport report;
    TreeDecomposition local_td;
    const TreeDecomposition* td = options.precomputed;
    if (!td) {
        local_td = decompose(g, options.heuristic);
        td = &local_td;
    }
    report.stats = td->stats;
    report.bag_count = td->bag_count();

    report.bags = local_labelings(g, *td, x, z, k, options.local);

    std::vector<SwapCostTable> costs;
    costs.reserve(report.bags.size());
    for (const auto& bag : report.bags) costs.push_back(swap_costs(bag, z, k));
    const InterBagSigns signs = inter_bag_signs(*td, report.bags);

    report.budget = compute_global_budget(*td, options.p, options.delta, options.use_p_prime);
    report.decode = tree_decode_swaps(*td, costs, signs, report.budget.effective);
    report.labels = assemble(*td, report.bags, report.decode.swaps, g.n(), k);

    if (truth) {
        report.hamming = hamming_distance(report.labels, *truth);
        report.normalized = static_cast<double>(*report.hamming) / g.n();
    }
    report.millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

}  // namespace statrec
