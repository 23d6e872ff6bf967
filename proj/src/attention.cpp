#include "tokenprune/attention.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace tokenprune {

AttentionTensor softmax_attention(const QKTensor& qk) {
    const std::size_t heads = qk.n_heads();
    const std::size_t n = qk.n_tokens();
    const std::size_t dh = qk.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    Tensor weights({heads, n, n}, Dtype::Float64);
    std::vector<double> logits(n);

    for (std::size_t h = 0; h < heads; ++h) {
        for (std::size_t i = 0; i < n; ++i) {
            double row_max = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                double dot = 0.0;
                for (std::size_t d = 0; d < dh; ++d) {
                    dot += qk.queries.at(h, i, d) * qk.keys.at(h, j, d);
                }
                logits[j] = dot * scale;
                if (logits[j] > row_max) row_max = logits[j];
            }
            double denom = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                logits[j] = std::exp(logits[j] - row_max);
                denom += logits[j];
            }
            for (std::size_t j = 0; j < n; ++j) {
                weights.at(h, i, j) = logits[j] / denom;
            }
        }
    }
    return AttentionTensor{std::move(weights)};
}

TokenScores aggregate_scores(const AttentionTensor& attn, AggregationAxis axis) {
    const std::size_t heads = attn.n_heads();
    const std::size_t n = attn.n_tokens();

    std::vector<double> scores(n, 0.0);
    for (std::size_t h = 0; h < heads; ++h) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double w = attn.weights.at(h, i, j);
                if (axis == AggregationAxis::Incoming) {
                    scores[j] += w;
                } else {
                    scores[i] += w;
                }
            }
        }
    }
    const double inv_heads = 1.0 / static_cast<double>(heads);
    for (double& s : scores) s *= inv_heads;
    return TokenScores{std::move(scores)};
}

TokenScores scores_from_qk(const QKTensor& qk, AggregationAxis axis) {
    return aggregate_scores(softmax_attention(qk), axis);
}

}  // namespace tokenprune
