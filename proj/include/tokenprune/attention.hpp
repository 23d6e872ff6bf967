#pragma once

#include "tokenprune/types.hpp"

namespace tokenprune {

// Which axis of the N x N attention map is summed into a per-token score.
// Incoming (the default) sums over query rows, i.e. the attention each token
// receives; Outgoing sums over key columns instead and is exposed for
// experimentation (rows are stochastic, so outgoing scores sit near 1).
enum class AggregationAxis { Incoming, Outgoing };

// Per-head scaled dot-product attention: row-wise softmax of
// (Q[h] K[h]^T) / sqrt(Dh), stabilized by per-row max subtraction.
// All arithmetic in float64.
AttentionTensor softmax_attention(const QKTensor& qk);

// scores[j] = (1/H) * sum_h sum_i weights[h, i, j] for Incoming.
// Each of the N rows carries total mass 1 and head-averaging preserves it,
// so the scores sum to N.
TokenScores aggregate_scores(const AttentionTensor& attn,
                             AggregationAxis axis = AggregationAxis::Incoming);

// Composition of the two steps above, bit-identical to calling them in turn.
TokenScores scores_from_qk(const QKTensor& qk,
                           AggregationAxis axis = AggregationAxis::Incoming);

}  // namespace tokenprune
