#include "statrec/datagen.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <string>

#include "statrec/errors.hpp"
#include "statrec/rng.hpp"

namespace statrec {

void NoiseParams::validate() const {
    if (p < 0.0 || p >= 0.5) throw ConfigError("edge noise p must be in [0, 0.5)");
    if (q < 0.0 || q >= 0.5) throw ConfigError("node noise q must be in [0, 0.5)");
    if (k < 2) throw ConfigError("label count k must be >= 2");
}

std::pair<NodeLabeling, EdgeSigns> apply_noise(const LabeledGraph& g, const NodeLabeling& y,
                                               const NoiseParams& params) {
    params.validate();
    if (y.size() != g.n()) throw ConfigError("labeling length does not match vertex count");
    if (y.k != params.k) throw ConfigError("labeling defined over a different k");
    Rng rng(params.seed);
    EdgeSigns x = induce_edge_signs(g, y);
    for (int e = 0; e < g.m(); ++e) {
        if (rng.bernoulli(params.p)) x[e] = -x[e];
    }
    NodeLabeling z = y;
    for (int v = 0; v < g.n(); ++v) {
        if (rng.bernoulli(params.q)) {
            // Uniform over the k-1 wrong labels via rejection.
            int label;
            do {
                label = rng.int_below(params.k);
            } while (label == y[v]);
            z[v] = label;
        }
    }
    return {std::move(z), std::move(x)};
}

std::pair<LabeledGraph, NodeLabeling> gen_random_tree(int n, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("label count k must be >= 2");
    if (n < k) throw ConfigError("need n >= k so every label can appear");
    Rng rng(seed);

    // One seed node per label, then a uniform composition n_1+...+n_k = n-k
    // for the remaining nodes (stars and bars: k-1 cuts among n-k+k-1 slots).
    NodeLabeling y;
    y.k = k;
    y.labels.resize(n);
    for (int i = 0; i < k; ++i) y.labels[i] = i;
    if (n > k) {
        const int slots = n - k + k - 1;
        std::vector<int> cuts;
        std::vector<char> used(slots, 0);
        while (static_cast<int>(cuts.size()) < k - 1) {
            int c = rng.int_below(slots);
            if (!used[c]) {
                used[c] = 1;
                cuts.push_back(c);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        int node = k;
        int prev = -1;
        for (int i = 0; i < k; ++i) {
            const int cut = (i < k - 1) ? cuts[i] : slots;
            const int count = cut - prev - 1;
            for (int j = 0; j < count; ++j) y.labels[node++] = i;
            prev = cut;
        }
    }

    // Attach nodes one at a time by random edges. The first edge joins two
    // random vertices; afterwards one endpoint is drawn from the attached set
    // and the other from the rest. Signs induced by the labels satisfy the
    // endpoints by construction.
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    std::vector<int> pool(n);
    for (int v = 0; v < n; ++v) pool[v] = v;
    std::vector<int> attached;
    auto take = [&](std::vector<int>& from, int idx) {
        int v = from[idx];
        from[idx] = from.back();
        from.pop_back();
        return v;
    };
    if (n == 1) return {LabeledGraph(1, {}), std::move(y)};
    int u = take(pool, rng.int_below(static_cast<int>(pool.size())));
    int v = take(pool, rng.int_below(static_cast<int>(pool.size())));
    edges.push_back({u, v});
    attached.push_back(u);
    attached.push_back(v);
    while (!pool.empty()) {
        int a = attached[rng.int_below(static_cast<int>(attached.size()))];
        int b = take(pool, rng.int_below(static_cast<int>(pool.size())));
        edges.push_back({a, b});
        attached.push_back(b);
    }
    return {LabeledGraph(n, std::move(edges)), std::move(y)};
}

namespace {

// Reads the next header token, skipping whitespace and # comments.
std::string pgm_token(std::istream& in) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
        } else if (!std::isspace(c)) {
            token.push_back(static_cast<char>(c));
            while ((c = in.get()) != EOF && !std::isspace(c) && c != '#') {
                token.push_back(static_cast<char>(c));
            }
            if (c == '#') in.unget();
            return token;
        }
    }
    throw FormatError("truncated PGM header");
}

int pgm_int(std::istream& in, const char* what) {
    const std::string token = pgm_token(in);
    try {
        std::size_t pos = 0;
        int value = std::stoi(token, &pos);
        if (pos != token.size()) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw FormatError(std::string("bad PGM ") + what + ": " + token);
    }
}

}  // namespace

Image load_pgm(std::istream& in) {
    const std::string magic = pgm_token(in);
    if (magic != "P2" && magic != "P5") throw FormatError("not a PGM (want P2 or P5)");
    Image img;
    img.cols = pgm_int(in, "width");
    img.rows = pgm_int(in, "height");
    if (img.cols < 1 || img.rows < 1) throw FormatError("bad PGM dimensions");
    const int maxval = pgm_int(in, "maxval");
    if (maxval != 255) throw FormatError("PGM maxval must be 255");
    const int count = img.rows * img.cols;
    img.pixels.resize(count);
    if (magic == "P2") {
        for (int i = 0; i < count; ++i) {
            img.pixels[i] = pgm_int(in, "pixel");
            if (img.pixels[i] < 0 || img.pixels[i] > 255) throw FormatError("pixel out of range");
        }
    } else {
        // P5: exactly one whitespace byte after maxval, then raw bytes.
        for (int i = 0; i < count; ++i) {
            const int c = in.get();
            if (c == EOF) throw FormatError("truncated PGM pixel data");
            img.pixels[i] = c;
        }
    }
    return img;
}

Image load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    return load_pgm(in);
}

void write_pgm(const std::string& path, const Image& img, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path);
    out << (binary ? "P5" : "P2") << '\n' << img.cols << ' ' << img.rows << '\n' << 255 << '\n';
    if (binary) {
        for (int p : img.pixels) out.put(static_cast<char>(p));
    } else {
        for (int r = 0; r < img.rows; ++r) {
            for (int c = 0; c < img.cols; ++c) out << (c ? " " : "") << img.at(r, c);
            out << '\n';
        }
    }
}

LabeledGraph grid_graph(int rows, int cols) {
    if (rows < 1 || cols < 1) throw ConfigError("grid needs positive dimensions");
    std::vector<Edge> edges;
    edges.reserve(rows * (cols - 1) + cols * (rows - 1));
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
        }
    }
    return LabeledGraph(rows * cols, std::move(edges));
}

GridInstance quantize_image(const Image& img, int k) {
    if (k < 2 || k > 256) throw ConfigError("quantization needs 2 <= k <= 256");
    GridInstance inst;
    inst.rows = img.rows;
    inst.cols = img.cols;
    inst.graph = grid_graph(img.rows, img.cols);
    std::vector<int> lows(k + 1);
    for (int i = 0; i <= k; ++i) lows[i] = (256 * i) / k;
    inst.bin_medians.resize(k);
    for (int i = 0; i < k; ++i) inst.bin_medians[i] = (lows[i] + lows[i + 1] - 1) / 2;
    inst.truth.k = k;
    inst.truth.labels.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const int v = img.pixels[i];
        // Range index: largest i with lows[i] <= v.
        const int label =
            static_cast<int>(std::upper_bound(lows.begin(), lows.end(), v) - lows.begin()) - 1;
        inst.truth.labels[i] = label;
    }
    return inst;
}

}  // namespace statrec
