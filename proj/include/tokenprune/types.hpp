#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tokenprune/tensor.hpp"

namespace tokenprune {

// N x D encoder output, one row per token.
struct EmbeddingSequence {
    Tensor data;  // rank 2

    std::size_t n_tokens() const { return data.dim(0); }
    std::size_t dim() const { return data.dim(1); }

    // Validates rank 2, nonzero dims, finite entries.
    static EmbeddingSequence from_tensor(Tensor t);
};

// Per-head queries and keys, each H x N x Dh.
struct QKTensor {
    Tensor queries;
    Tensor keys;

    std::size_t n_heads() const { return queries.dim(0); }
    std::size_t n_tokens() const { return queries.dim(1); }
    std::size_t head_dim() const { return queries.dim(2); }

    // Validates rank 3, identical shapes, finite entries.
    static QKTensor from_tensors(Tensor q, Tensor k);
};

// H x N x N post-softmax attention; every query row is a distribution.
struct AttentionTensor {
    static constexpr double kRowSumTolerance = 1e-5;

    Tensor weights;  // rank 3, H x N x N

    std::size_t n_heads() const { return weights.dim(0); }
    std::size_t n_tokens() const { return weights.dim(1); }

    // Validates rank 3, square token axes, entries in [0, 1], and each row
    // summing to 1 within kRowSumTolerance.
    static AttentionTensor from_tensor(Tensor t);
};

// Aggregated attention mass per token (nonnegative, finite).
struct TokenScores {
    std::vector<double> scores;

    std::size_t n_tokens() const { return scores.size(); }

    static TokenScores from_vector(std::vector<double> s);
};

}  // namespace tokenprune
