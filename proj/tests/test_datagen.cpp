#include <doctest.h>

#include <cmath>
#include <sstream>

#include "statrec/datagen.hpp"
#include "statrec/errors.hpp"
#include "statrec/rng.hpp"

using namespace statrec;

namespace {

LabeledGraph star(int n) {
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) edges.push_back({0, v});
    return LabeledGraph(n, std::move(edges));
}

}  // namespace

TEST_CASE("noise params validate their ranges") {
    CHECK_THROWS_AS((NoiseParams{0.5, 0.0, 2, 0}.validate()), ConfigError);
    CHECK_THROWS_AS((NoiseParams{1.0, 0.0, 2, 0}.validate()), ConfigError);
    CHECK_THROWS_AS((NoiseParams{0.1, 0.5, 2, 0}.validate()), ConfigError);
    CHECK_THROWS_AS((NoiseParams{0.1, 0.1, 1, 0}.validate()), ConfigError);
    CHECK_NOTHROW((NoiseParams{0.0, 0.0, 2, 0}.validate()));
}

TEST_CASE("zero noise is the identity channel") {
    Rng rng(1);
    auto g = star(20);
    NodeLabeling y;
    y.k = 4;
    y.labels.resize(20);
    for (int v = 0; v < 20; ++v) y.labels[v] = v % 4;
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        auto [z, x] = apply_noise(g, y, {0.0, 0.0, 4, seed});
        CHECK(z.labels == y.labels);
        CHECK(x.signs == induce_edge_signs(g, y).signs);
    }
}

TEST_CASE("edge-only noise leaves node labels alone") {
    auto g = star(50);
    NodeLabeling y;
    y.k = 2;
    y.labels.assign(50, 1);
    auto [z, x] = apply_noise(g, y, {0.4, 0.0, 2, 7});
    CHECK(z.labels == y.labels);
}

TEST_CASE("noise is deterministic in the seed") {
    auto g = star(100);
    NodeLabeling y;
    y.k = 3;
    y.labels.assign(100, 2);
    auto [z1, x1] = apply_noise(g, y, {0.2, 0.3, 3, 42});
    auto [z2, x2] = apply_noise(g, y, {0.2, 0.3, 3, 42});
    CHECK(z1.labels == z2.labels);
    CHECK(x1.signs == x2.signs);
    auto [z3, x3] = apply_noise(g, y, {0.2, 0.3, 3, 43});
    CHECK((z3.labels != z1.labels || x3.signs != x1.signs));
}

TEST_CASE("empirical noise rates match the channel on a large star") {
    const int n = 10000;
    auto g = star(n);
    NodeLabeling y;
    y.k = 4;
    y.labels.resize(n);
    for (int v = 0; v < n; ++v) y.labels[v] = v % 4;
    const double p = 0.1, q = 0.3;
    auto [z, x] = apply_noise(g, y, {p, q, 4, 20240817});
    const auto truth_signs = induce_edge_signs(g, y);

    int edge_flips = 0;
    for (int e = 0; e < g.m(); ++e) edge_flips += x[e] != truth_signs[e];
    const double edge_rate = static_cast<double>(edge_flips) / g.m();
    CHECK(std::abs(edge_rate - p) <= 3.0 * std::sqrt(p * (1 - p) / g.m()));

    int node_flips = 0;
    std::vector<int> wrong_offset_counts(3, 0);  // offset of wrong label among the 3 others
    for (int v = 0; v < n; ++v) {
        if (z[v] != y[v]) {
            ++node_flips;
            int offset = (z[v] - y[v] + 4) % 4 - 1;
            ++wrong_offset_counts[offset];
        }
    }
    const double node_rate = static_cast<double>(node_flips) / n;
    CHECK(std::abs(node_rate - q) <= 3.0 * std::sqrt(q * (1 - q) / n));

    // Chi-squared over the 3 wrong labels, 99% critical value for df=2.
    const double expected = node_flips / 3.0;
    double chi2 = 0.0;
    for (int count : wrong_offset_counts) {
        chi2 += (count - expected) * (count - expected) / expected;
    }
    CHECK(chi2 < 9.21);
}

TEST_CASE("noise draws are independent across sites") {
    // Covariance of the two edge-flip indicators on a 2-edge path.
    LabeledGraph path(3, {{0, 1}, {1, 2}});
    NodeLabeling y;
    y.k = 2;
    y.labels = {0, 1, 0};
    const auto truth_signs = induce_edge_signs(path, y);
    const int trials = 10000;
    double a_sum = 0, b_sum = 0, ab_sum = 0;
    for (int t = 0; t < trials; ++t) {
        auto [z, x] = apply_noise(path, y, {0.3, 0.2, 2, derive_seed(5, t)});
        const int a = x[0] != truth_signs[0];
        const int b = x[1] != truth_signs[1];
        a_sum += a;
        b_sum += b;
        ab_sum += a * b;
    }
    const double cov = ab_sum / trials - (a_sum / trials) * (b_sum / trials);
    CHECK(std::abs(cov) < 0.015);
}

TEST_CASE("random trees are trees with full label coverage") {
    for (int seed = 0; seed < 1000; ++seed) {
        auto [g, y] = gen_random_tree(50, 5, seed);
        REQUIRE(g.n() == 50);
        REQUIRE(g.m() == 49);
        REQUIRE(g.connected());
        std::vector<int> seen(5, 0);
        for (int v = 0; v < 50; ++v) ++seen[y[v]];
        for (int count : seen) CHECK(count >= 1);
    }
}

TEST_CASE("smallest random tree covers each label exactly once") {
    auto [g, y] = gen_random_tree(3, 3, 9);
    CHECK(g.m() == 2);
    std::vector<int> seen(3, 0);
    for (int v = 0; v < 3; ++v) ++seen[y[v]];
    CHECK(seen == std::vector<int>{1, 1, 1});
    CHECK_THROWS_AS(gen_random_tree(2, 3, 0), ConfigError);
}

TEST_CASE("pgm parsing handles P2, P5, comments, and errors") {
    std::stringstream ascii("P2\n# comment\n3 2\n255\n0 128 255\n1 2 3\n");
    auto img = load_pgm(ascii);
    CHECK(img.rows == 2);
    CHECK(img.cols == 3);
    CHECK(img.at(0, 1) == 128);
    CHECK(img.at(1, 2) == 3);

    std::string raw = "P5\n2 2\n255\n";
    raw += static_cast<char>(7);
    raw += static_cast<char>(250);
    raw += static_cast<char>(0);
    raw += static_cast<char>(255);
    std::stringstream binary(raw);
    auto img5 = load_pgm(binary);
    CHECK(img5.at(0, 0) == 7);
    CHECK(img5.at(1, 1) == 255);

    std::stringstream badmax("P2\n2 2\n128\n0 0 0 0\n");
    CHECK_THROWS_AS(load_pgm(badmax), FormatError);
    std::stringstream truncated("P2\n2 2\n255\n0 0\n");
    CHECK_THROWS_AS(load_pgm(truncated), FormatError);
    std::stringstream wrongmagic("P3\n1 1\n255\n0\n");
    CHECK_THROWS_AS(load_pgm(wrongmagic), FormatError);
}

TEST_CASE("quantization bins partition the pixel range") {
    Image img;
    img.rows = 1;
    img.cols = 256;
    img.pixels.resize(256);
    for (int i = 0; i < 256; ++i) img.pixels[i] = i;

    auto full = quantize_image(img, 256);
    for (int i = 0; i < 256; ++i) {
        CHECK(full.truth[i] == i);
        CHECK(full.bin_medians[i] == i);
    }

    auto two = quantize_image(img, 2);
    CHECK(two.truth[0] == 0);
    CHECK(two.truth[127] == 0);
    CHECK(two.truth[128] == 1);
    CHECK(two.truth[200] == 1);
    CHECK(two.bin_medians == std::vector<int>{63, 191});

    auto seven = quantize_image(img, 7);
    int previous = 0;
    for (int i = 0; i < 256; ++i) {
        CHECK(seven.truth[i] >= previous);  // bins are contiguous and ordered
        CHECK(seven.truth[i] <= previous + 1);
        previous = seven.truth[i];
    }
    CHECK(seven.truth[255] == 6);
}

TEST_CASE("grid instances wire up the 4-neighbor graph") {
    Image img;
    img.rows = 3;
    img.cols = 4;
    img.pixels.assign(12, 50);
    auto inst = quantize_image(img, 4);
    CHECK(inst.graph.n() == 12);
    CHECK(inst.graph.m() == 3 * 3 + 4 * 2);
    CHECK(inst.truth[0] == 0);  // 50 < 64
}
