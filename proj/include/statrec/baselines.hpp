#pragma once

#include "statrec/graph.hpp"

namespace statrec {

// Neighborhood vote: each neighbor u adds X_uv to the score of Z_u; a vertex
// takes the unique top-scoring label, keeps Z_v when tied and Z_v is among
// the winners, and otherwise the smallest winning label.
NodeLabeling majority_vote(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z,
                           int k);

struct LoopyBpOptions {
    int max_iters = 50;
    double damping = 0.5;
    double tolerance = 1e-6;  // L-inf change of messages
};

// Sum-product on the pairwise model implied by the noise channels: node
// potential (1-q) at Z_v and q/(k-1) elsewhere; edge potential splits 1-p
// uniformly over the label pairs agreeing with the observed sign and p over
// the rest. Synchronous damped updates; decode by max marginal, ties to the
// smallest label.
NodeLabeling loopy_bp(const LabeledGraph& g, const EdgeSigns& x, const NodeLabeling& z, double p,
                      double q, int k, const LoopyBpOptions& options = {});

}  // namespace statrec
