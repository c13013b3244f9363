#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "statrec/graph.hpp"

namespace statrec {

// Uniform noise model parameters. p < q is the regime of interest but is not
// enforced.
struct NoiseParams {
    double p = 0.0;  // edge flip probability, [0, 0.5)
    double q = 0.0;  // node corruption probability, [0, 0.5)
    int k = 2;       // label count, >= 2
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

// Independently flips each induced edge sign with probability p and replaces
// each node label with a uniform wrong label with probability q. Byte
// reproducible for a fixed seed: edges are drawn in index order, then nodes.
std::pair<NodeLabeling, EdgeSigns> apply_noise(const LabeledGraph& g, const NodeLabeling& y,
                                               const NoiseParams& params);

// Random tree with every label present at least once: k seed nodes (one per
// label), remaining counts drawn as a uniform composition of n-k, then nodes
// attached one at a time by uniformly random edges. Edge signs are the ones
// induced by the labels.
std::pair<LabeledGraph, NodeLabeling> gen_random_tree(int n, int k, std::uint64_t seed);

struct Image {
    int rows = 0;
    int cols = 0;
    std::vector<int> pixels;  // row-major, values 0..255

    int at(int r, int c) const { return pixels[r * cols + c]; }
};

// PGM reader, P2 (ASCII) and P5 (binary), maxval 255 only.
Image load_pgm(const std::string& path);
Image load_pgm(std::istream& in);
void write_pgm(const std::string& path, const Image& img, bool binary = false);

struct GridInstance {
    int rows = 0;
    int cols = 0;
    LabeledGraph graph;       // 4-neighbor grid, vertex r*cols+c
    NodeLabeling truth;       // quantized pixel labels
    std::vector<int> bin_medians;
};

// Splits [0,256) into k ranges r_i = [floor(256 i/k), floor(256 (i+1)/k)),
// labels each pixel by its range index, and records the integer midpoint of
// each range as its representative value.
GridInstance quantize_image(const Image& img, int k);

// 4-neighbor grid over rows x cols vertices.
LabeledGraph grid_graph(int rows, int cols);

}  // namespace statrec
