#pragma once

#include <cstdint>

#include "tokenprune/types.hpp"

namespace tokenprune {

// Recipe parameters for synthetic attention with a hot minority of tokens
// grouped into contiguous temporal clusters.
struct SynthSpec {
    std::size_t n_tokens = 750;
    std::size_t n_heads = 4;
    std::size_t n_hot = 30;          // tokens that concentrate the attention
    std::size_t cluster_width = 10;  // tokens per hot cluster (last may be smaller)
    double concentration = 0.8;      // fraction of total mass on hot tokens, in (0, 1)
    double noise_scale = 1.0;        // logit noise amplitude
    std::uint64_t seed = 0;
    std::size_t dim = 1280;          // embedding dimension for gen_embeddings

    void validate() const;
};

// Half-open [begin, end) token range.
struct HotCluster {
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Seeded non-overlapping placement of ceil(n_hot / cluster_width) contiguous
// clusters, uniform over all valid placements. Shared by gen_attention and
// gen_embeddings so both views agree on which tokens are hot.
std::vector<HotCluster> hot_clusters(const SynthSpec& spec);

// Row-stochastic H x N x N attention built from logit bumps on the hot
// columns plus seeded noise, then a per-row softmax. The noise has two
// parts: a smooth column profile (an AR(1) walk along the token axis) that
// gives the cold region genuine temporal structure, and a smaller
// white component per (head, row, column). With noise_scale = 0 the hot
// columns receive exactly `concentration` of the total incoming mass.
AttentionTensor gen_attention(const SynthSpec& spec);

// N x dim seeded Gaussian embeddings; tokens of one hot cluster share a
// cluster-specific mean direction, so similarity-based merging has structure
// to find.
EmbeddingSequence gen_embeddings(const SynthSpec& spec);

}  // namespace tokenprune
