#pragma once

#include <cstdint>
#include <optional>

#include "tokenprune/prune_result.hpp"
#include "tokenprune/types.hpp"

namespace tokenprune {

// Selection parameters shared by all strategies. Exactly one of `k` and
// `retention_rate` must be set (identity ignores both); the resolved budget
// is K = k or K = max(1, round(rate * N)).
struct PruneConfig {
    Strategy strategy = Strategy::TopK;
    std::optional<std::size_t> k;
    std::optional<double> retention_rate;       // in (0, 1]
    std::size_t segments = 10;                  // SegmentwiseTopK only
    Ordering ordering = Ordering::DescendingAttention;
    double contextual_ratio = 0.18;             // VisionZip only, in [0, 1)
    std::uint64_t seed = 0;                     // Random only
    RemainderPolicy remainder = RemainderPolicy::Strict;

    std::size_t resolve_k(std::size_t n_tokens) const;
};

// Balanced contiguous cover of [0, N): boundaries[0] = 0, boundaries[S] = N,
// the first (N mod S) segments one token larger than the rest.
struct SegmentPartition {
    std::vector<std::size_t> boundaries;  // S + 1 increasing values

    std::size_t n_segments() const { return boundaries.size() - 1; }
    std::size_t begin(std::size_t s) const { return boundaries[s]; }
    std::size_t end(std::size_t s) const { return boundaries[s + 1]; }
    std::size_t size(std::size_t s) const { return end(s) - begin(s); }
};

SegmentPartition segment_partition(std::size_t n, std::size_t s);

// The K highest-scoring tokens. Ties break toward the lower index; output
// order follows cfg.ordering.
PruneResult top_k(const TokenScores& scores, const PruneConfig& cfg);

// The K lowest-scoring tokens (ablation lower bound), same tie break.
PruneResult bottom_k(const TokenScores& scores, const PruneConfig& cfg);

// Partitions the sequence into cfg.segments temporal intervals and keeps the
// floor(K/S) highest-scoring tokens of each, enforcing temporal spread.
// Strict keeps exactly S*floor(K/S) tokens (the K mod S remainder is
// dropped); GreedyFill tops the set back up to K with the best unselected
// tokens. With S = 1 the result is identical to top_k.
PruneResult segmentwise_top_k(const TokenScores& scores, const PruneConfig& cfg);

// K tokens drawn uniformly without replacement from a seeded generator;
// output always temporal.
PruneResult random_prune(std::size_t n_tokens, const PruneConfig& cfg);

// Full retention, ordered per cfg.ordering.
PruneResult identity_prune(const TokenScores& scores, const PruneConfig& cfg);

// Dominant tokens via top_k over Kd = max(1, round(K / (1 + ratio))), plus
// C = K - Kd contextual tokens that summarize the remainder: C temporally
// uniform targets among the leftover tokens, every other leftover assigned
// to its most cosine-similar target (head-concatenated key vectors), each
// group replaced by the unweighted mean of its embeddings.
// `keys` is the H x N x Dh key tensor of a QKTensor.
PruneResult visionzip_prune(const TokenScores& scores, const Tensor& keys,
                            const EmbeddingSequence& embeddings, const PruneConfig& cfg);

// Materializes a pruned sequence: rows gathered in result order, contextual
// rows appended after them.
EmbeddingSequence apply_selection(const EmbeddingSequence& embeddings,
                                  const PruneResult& result);

struct CoverageMetrics {
    double attention_mass_captured = 0.0;  // sum(scores[kept]) / sum(scores)
    double segment_occupancy = 0.0;        // fraction of s_eval segments with a kept token
    std::size_t max_temporal_gap = 0;      // largest step between consecutive kept indices
};

// Coverage proxies for a selection; occupancy is evaluated over a balanced
// s_eval-segment partition. max_temporal_gap is 0 when fewer than two
// original indices were kept.
CoverageMetrics coverage_metrics(const PruneResult& result, const TokenScores& scores,
                                 std::size_t s_eval);

}  // namespace tokenprune
