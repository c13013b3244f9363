#include "statrec/bounds.hpp"

#include <cmath>

#include "statrec/errors.hpp"
#include "statrec/tree_solver.hpp"

namespace statrec {

namespace {

void check_noise_range(double p, double q, int k, double delta) {
    if (p < 0.0 || p >= 0.5) throw ConfigError("p must be in [0, 0.5)");
    if (q < 0.0 || q >= 0.5) throw ConfigError("q must be in [0, 0.5)");
    if (k < 2) throw ConfigError("k must be >= 2");
    if (delta <= 0.0 || delta >= 1.0) throw ConfigError("delta must be in (0, 1)");
}

double excess_risk_constant(double q, int k) {
    return 1.0 - (static_cast<double>(k) / (k - 1)) * q;
}

}  // namespace

BoundReport tree_bound(int n, int k, double p, double q, double delta) {
    check_noise_range(p, q, k, delta);
    if (n < 1) throw ConfigError("n must be >= 1");
    const double c = excess_risk_constant(q, k);
    if (c <= 0.0) throw RegimeError("excess-risk constant 1 - (k/(k-1))q is not positive");
    const double eps = 0.5 - q;
    const double denom = (eps + 0.5) * k - 1.0;
    if (denom <= 0.0) throw RegimeError("bound denominator vanished");
    const BudgetBound budget = edge_budget(n, p, delta);

    BoundReport report;
    report.name = "tree";
    const double class_term = budget.t * std::log(2.0 * k) - std::log(delta);
    report.value = (1.0 / c) * (4.0 / 3.0 + 2.0 * (k - 1) / denom) * class_term;
    report.inputs = {{"n", static_cast<double>(n)}, {"k", static_cast<double>(k)},
                     {"p", p},  {"q", q},  {"delta", delta},
                     {"t", budget.t}, {"c", c}, {"eps", eps}};
    return report;
}

BoundReport usefulness_threshold(double q, int k, int max_degree) {
    if (k < 2) throw ConfigError("k must be >= 2");
    if (max_degree < 1) throw ConfigError("max degree must be >= 1");
    if (q < 0.0 || q >= 0.5) throw ConfigError("q must be in [0, 0.5)");
    BoundReport report;
    report.name = "threshold";
    const double log2k = std::log2(static_cast<double>(k));
    const int root = (max_degree + 1) / 2;
    const double base = q / (k * log2k);
    report.value = q == 0.0 ? 0.0 : std::pow(base, 1.0 / root);
    report.inputs = {{"q", q}, {"k", static_cast<double>(k)},
                     {"max_degree", static_cast<double>(max_degree)}};
    report.note =
        "log base 2; the paper's own worked example (~0.04 at k=128, q=0.1, degree 4) does not "
        "reproduce under any standard base, base-2 gives ~0.0106";
    return report;
}

double adjust_p_for_approx(double p) {
    if (p < 0.0 || p > 1.0) throw ConfigError("p must be in [0, 1]");
    return 0.7666 * p + 0.2334;
}

double edge_trust(int sign, bool violated, double p, double q, int k, int count_sign, int m) {
    if (sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
    if (k < 2) throw ConfigError("k must be >= 2");
    if (count_sign < 1) throw ConfigError("count of the sign class must be >= 1");
    if (m < count_sign) throw ConfigError("total edges below the sign count");
    if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) throw ConfigError("p, q must be in [0, 1]");
    const double r = q / (k - 1);
    const double kk = static_cast<double>(k);
    double body;
    if (sign == 1) {
        body = violated ? 2.0 * (1.0 - q) * q + r * r * (kk - 2) / (kk * (kk - 1))
                        : (1.0 - q) * (1.0 - q) + r * r / (kk * (kk - 1));
    } else {
        body = violated ? 2.0 * (1.0 - q) * r + r * r * (kk - 2) / (kk * (kk - 1))
                        : (1.0 - q) * (1.0 - q) + r * r * (kk - 2) / kk;
    }
    const double c_sign = (1.0 - p) * m / count_sign;
    return c_sign * body;
}

BoundReport edge_trust_report(int sign, bool violated, double p, double q, int k, int count_sign,
                              int m) {
    BoundReport report;
    report.name = "trust";
    report.value = edge_trust(sign, violated, p, q, k, count_sign, m);
    report.inputs = {{"sign", static_cast<double>(sign)},
                     {"violated", violated ? 1.0 : 0.0},
                     {"p", p},
                     {"q", q},
                     {"k", static_cast<double>(k)},
                     {"count_sign", static_cast<double>(count_sign)},
                     {"m", static_cast<double>(m)}};
    return report;
}

BoundReport graph_bound(const DecompStats& stats, int n, int k, double p, double q, double delta) {
    check_noise_range(p, q, k, delta);
    if (n < 1) throw ConfigError("n must be >= 1");
    const double eps = 0.5 - q;
    if (eps <= 0.0) throw RegimeError("eps = 1/2 - q is not positive");
    double power_sum = 0.0;
    for (const auto& [cut, exact] : stats.mincut_star_per_bag) {
        (void)exact;
        if (cut == kNoCut) continue;
        power_sum += std::pow(p, static_cast<double>((cut + 1) / 2));
    }
    const double concentration = std::pow(2.0, stats.wid_star + 2) * power_sum +
                                 6.0 * stats.deg_E_star * stats.max_edges_star *
                                     std::log(2.0 / delta);
    const double bracket = 3.0 * stats.wid + stats.deg_T * k * std::log(static_cast<double>(n) * k);
    BoundReport report;
    report.name = "graph";
    report.value = concentration * bracket / (eps * eps);
    report.heuristic = stats.any_proxy();
    report.inputs = {{"n", static_cast<double>(n)},
                     {"k", static_cast<double>(k)},
                     {"p", p},
                     {"q", q},
                     {"delta", delta},
                     {"eps", eps},
                     {"wid", static_cast<double>(stats.wid)},
                     {"wid_star", static_cast<double>(stats.wid_star)},
                     {"deg_T", static_cast<double>(stats.deg_T)},
                     {"deg_E_star", static_cast<double>(stats.deg_E_star)},
                     {"max_edges_star", static_cast<double>(stats.max_edges_star)},
                     {"power_sum", power_sum}};
    if (report.heuristic) report.note = "mincut* proxies in use";
    return report;
}

}  // namespace statrec
