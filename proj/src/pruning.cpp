#include "tokenprune/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tokenprune/rng.hpp"

namespace tokenprune {

namespace {

// Candidates ordered by (score descending, index ascending). The index tie
// break keeps every strategy deterministic across platforms and sorts.
void sort_by_score_desc(std::vector<std::size_t>& indices, const std::vector<double>& scores) {
    std::sort(indices.begin(), indices.end(), [&scores](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
}

void order_kept(std::vector<std::size_t>& kept, const std::vector<double>& scores,
                Ordering ordering) {
    if (ordering == Ordering::Temporal) {
        std::sort(kept.begin(), kept.end());
    } else {
        sort_by_score_desc(kept, scores);
    }
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

}  // namespace

std::size_t PruneConfig::resolve_k(std::size_t n_tokens) const {
    if (n_tokens == 0) throw InvalidArgumentError("resolve_k: empty sequence");
    if (k && retention_rate) {
        throw InvalidArgumentError("PruneConfig: set either k or retention_rate, not both");
    }
    std::size_t resolved = 0;
    if (k) {
        resolved = *k;
    } else if (retention_rate) {
        const double rate = *retention_rate;
        if (!(rate > 0.0) || rate > 1.0) {
            throw InvalidArgumentError("PruneConfig: retention_rate must be in (0, 1]");
        }
        resolved = static_cast<std::size_t>(
            std::max<long long>(1, std::llround(rate * static_cast<double>(n_tokens))));
    } else {
        throw InvalidArgumentError("PruneConfig: neither k nor retention_rate set");
    }
    if (resolved == 0) throw InvalidArgumentError("PruneConfig: k must be positive");
    if (resolved > n_tokens) {
        throw InvalidArgumentError("PruneConfig: k = " + std::to_string(resolved) +
                                   " exceeds sequence length " + std::to_string(n_tokens));
    }
    return resolved;
}

SegmentPartition segment_partition(std::size_t n, std::size_t s) {
    if (s == 0) throw InvalidArgumentError("segment_partition: s must be positive");
    if (s > n) {
        throw InvalidArgumentError("segment_partition: s = " + std::to_string(s) +
                                   " exceeds n = " + std::to_string(n));
    }
    const std::size_t base = n / s;
    const std::size_t larger = n % s;  // leading segments get one extra token
    SegmentPartition part;
    part.boundaries.reserve(s + 1);
    part.boundaries.push_back(0);
    for (std::size_t seg = 0; seg < s; ++seg) {
        part.boundaries.push_back(part.boundaries.back() + base + (seg < larger ? 1 : 0));
    }
    return part;
}

PruneResult top_k(const TokenScores& scores, const PruneConfig& cfg) {
    const std::size_t n = scores.n_tokens();
    const std::size_t kk = cfg.resolve_k(n);

    std::vector<std::size_t> order = all_indices(n);
    sort_by_score_desc(order, scores.scores);
    std::vector<std::size_t> kept(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk));
    order_kept(kept, scores.scores, cfg.ordering);

    PruneResult result;
    result.strategy = Strategy::TopK;
    result.n_tokens_in = n;
    result.k_requested = kk;
    result.segments = 1;
    result.ordering = cfg.ordering;
    result.kept_indices = std::move(kept);
    return result;
}

PruneResult bottom_k(const TokenScores& scores, const PruneConfig& cfg) {
    const std::size_t n = scores.n_tokens();
    const std::size_t kk = cfg.resolve_k(n);

    std::vector<std::size_t> order = all_indices(n);
    std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
        if (scores.scores[a] != scores.scores[b]) return scores.scores[a] < scores.scores[b];
        return a < b;
    });
    std::vector<std::size_t> kept(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk));
    order_kept(kept, scores.scores, cfg.ordering);

    PruneResult result;
    result.strategy = Strategy::BottomK;
    result.n_tokens_in = n;
    result.k_requested = kk;
    result.segments = 1;
    result.ordering = cfg.ordering;
    result.kept_indices = std::move(kept);
    return result;
}

PruneResult segmentwise_top_k(const TokenScores& scores, const PruneConfig& cfg) {
    const std::size_t n = scores.n_tokens();
    const std::size_t kk = cfg.resolve_k(n);
    const SegmentPartition part = segment_partition(n, cfg.segments);
    const std::size_t quota = kk / cfg.segments;

    std::vector<std::size_t> kept;
    kept.reserve(kk);
    std::vector<char> taken(n, 0);
    for (std::size_t seg = 0; seg < part.n_segments(); ++seg) {
        std::vector<std::size_t> segment_idx;
        segment_idx.reserve(part.size(seg));
        for (std::size_t i = part.begin(seg); i < part.end(seg); ++i) segment_idx.push_back(i);
        sort_by_score_desc(segment_idx, scores.scores);
        const std::size_t take = std::min(quota, segment_idx.size());
        for (std::size_t t = 0; t < take; ++t) {
            kept.push_back(segment_idx[t]);
            taken[segment_idx[t]] = 1;
        }
    }

    if (cfg.remainder == RemainderPolicy::GreedyFill && kept.size() < kk) {
        std::vector<std::size_t> rest;
        rest.reserve(n - kept.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i]) rest.push_back(i);
        }
        sort_by_score_desc(rest, scores.scores);
        for (std::size_t t = 0; kept.size() < kk; ++t) kept.push_back(rest[t]);
    }

    order_kept(kept, scores.scores, cfg.ordering);

    PruneResult result;
    result.strategy = Strategy::SegmentwiseTopK;
    result.n_tokens_in = n;
    result.k_requested = kk;
    result.segments = cfg.segments;
    result.ordering = cfg.ordering;
    result.kept_indices = std::move(kept);
    return result;
}

PruneResult random_prune(std::size_t n_tokens, const PruneConfig& cfg) {
    if (n_tokens == 0) throw InvalidArgumentError("random_prune: empty sequence");
    const std::size_t kk = cfg.resolve_k(n_tokens);

    Rng rng(cfg.seed);
    PruneResult result;
    result.strategy = Strategy::Random;
    result.n_tokens_in = n_tokens;
    result.k_requested = kk;
    result.segments = 1;
    result.ordering = Ordering::Temporal;
    result.kept_indices = rng.sample_without_replacement(n_tokens, kk);
    return result;
}

PruneResult identity_prune(const TokenScores& scores, const PruneConfig& cfg) {
    const std::size_t n = scores.n_tokens();
    std::vector<std::size_t> kept = all_indices(n);
    order_kept(kept, scores.scores, cfg.ordering);

    PruneResult result;
    result.strategy = Strategy::Identity;
    result.n_tokens_in = n;
    result.k_requested = n;
    result.segments = 1;
    result.ordering = cfg.ordering;
    result.kept_indices = std::move(kept);
    return result;
}

PruneResult visionzip_prune(const TokenScores& scores, const Tensor& keys,
                            const EmbeddingSequence& embeddings, const PruneConfig& cfg) {
    const std::size_t n = scores.n_tokens();
    if (keys.rank() != 3) throw WrongRankError("visionzip_prune: keys must be rank 3");
    if (keys.dim(1) != n) {
        throw ShapeMismatchError("visionzip_prune: keys token axis does not match scores");
    }
    if (embeddings.n_tokens() != n) {
        throw ShapeMismatchError("visionzip_prune: embeddings token count does not match scores");
    }
    const std::size_t kk = cfg.resolve_k(n);
    const double ratio = cfg.contextual_ratio;
    if (ratio < 0.0 || ratio >= 1.0) {
        throw InvalidArgumentError("visionzip_prune: contextual_ratio must be in [0, 1)");
    }
    if (ratio > 0.0 && kk < 2) {
        throw InvalidArgumentError("visionzip_prune: budget must be at least 2 when contextual_ratio > 0");
    }

    const std::size_t dominant = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(static_cast<double>(kk) / (1.0 + ratio))));
    const std::size_t contextual = kk - dominant;

    std::vector<std::size_t> order = all_indices(n);
    sort_by_score_desc(order, scores.scores);
    std::vector<std::size_t> kept(order.begin(),
                                  order.begin() + static_cast<std::ptrdiff_t>(dominant));
    order_kept(kept, scores.scores, cfg.ordering);

    PruneResult result;
    result.strategy = Strategy::VisionZip;
    result.n_tokens_in = n;
    result.k_requested = kk;
    result.segments = 1;
    result.ordering = cfg.ordering;
    result.kept_indices = std::move(kept);

    if (contextual == 0) return result;

    std::vector<char> is_dominant(n, 0);
    for (std::size_t idx : result.kept_indices) is_dominant[idx] = 1;
    std::vector<std::size_t> remaining;
    remaining.reserve(n - dominant);
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_dominant[i]) remaining.push_back(i);
    }
    const std::size_t rem = remaining.size();  // contextual <= rem since K <= N

    // Targets at temporally uniform positions among the remaining tokens;
    // floor((t + 0.5) * rem / C) = (2t+1)*rem / (2C) in exact integer
    // arithmetic gives C distinct, increasing picks.
    std::vector<std::size_t> targets(contextual);
    for (std::size_t t = 0; t < contextual; ++t) {
        targets[t] = remaining[(2 * t + 1) * rem / (2 * contextual)];
    }

    // Head-concatenated key vector per token: [keys[0,j,:] ... keys[H-1,j,:]].
    const std::size_t heads = keys.dim(0);
    const std::size_t dh = keys.dim(2);
    auto key_dot = [&](std::size_t a, std::size_t b) {
        double dot = 0.0;
        for (std::size_t h = 0; h < heads; ++h) {
            for (std::size_t d = 0; d < dh; ++d) {
                dot += keys.at(h, a, d) * keys.at(h, b, d);
            }
        }
        return dot;
    };
    std::vector<double> key_norm(n, 0.0);
    for (std::size_t j : remaining) key_norm[j] = std::sqrt(key_dot(j, j));

    std::vector<std::vector<std::size_t>> groups(contextual);
    std::vector<std::size_t> target_slot(n, 0);
    std::vector<char> is_target(n, 0);
    for (std::size_t t = 0; t < contextual; ++t) {
        is_target[targets[t]] = 1;
        target_slot[targets[t]] = t;
        groups[t].push_back(targets[t]);
    }
    for (std::size_t j : remaining) {
        if (is_target[j]) continue;
        std::size_t best = 0;
        double best_cos = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < contextual; ++t) {
            const double denom = key_norm[j] * key_norm[targets[t]];
            const double cos = denom > 0.0 ? key_dot(j, targets[t]) / denom : 0.0;
            if (cos > best_cos) {  // ties stay with the earliest target
                best_cos = cos;
                best = t;
            }
        }
        groups[best].push_back(j);
    }

    const std::size_t dim = embeddings.dim();
    Tensor merged({contextual, dim}, embeddings.data.dtype());
    for (std::size_t t = 0; t < contextual; ++t) {
        const double inv = 1.0 / static_cast<double>(groups[t].size());
        for (std::size_t d = 0; d < dim; ++d) {
            double acc = 0.0;
            for (std::size_t j : groups[t]) acc += embeddings.data.at(j, d);
            merged.at(t, d) = acc * inv;
        }
    }
    result.contextual_count = contextual;
    result.contextual_tokens = std::move(merged);
    return result;
}

EmbeddingSequence apply_selection(const EmbeddingSequence& embeddings,
                                  const PruneResult& result) {
    const std::size_t n = embeddings.n_tokens();
    const std::size_t dim = embeddings.dim();
    if (result.n_tokens_in != n) {
        throw ShapeMismatchError("apply_selection: result was computed for a different sequence");
    }
    for (std::size_t idx : result.kept_indices) {
        if (idx >= n) throw ValidationError("apply_selection: kept index out of range");
    }
    if (result.contextual_count > 0 && !result.contextual_tokens) {
        throw InvalidArgumentError("apply_selection: contextual tokens not materialized");
    }
    if (result.contextual_tokens && result.contextual_tokens->dim(1) != dim) {
        throw ShapeMismatchError("apply_selection: contextual token dimension mismatch");
    }
    if (result.k_kept() == 0) {
        throw InvalidArgumentError("apply_selection: empty selection");
    }

    Tensor out({result.k_kept(), dim}, embeddings.data.dtype());
    std::size_t row = 0;
    for (std::size_t idx : result.kept_indices) {
        for (std::size_t d = 0; d < dim; ++d) out.at(row, d) = embeddings.data.at(idx, d);
        ++row;
    }
    if (result.contextual_tokens) {
        for (std::size_t c = 0; c < result.contextual_count; ++c) {
            for (std::size_t d = 0; d < dim; ++d) out.at(row, d) = result.contextual_tokens->at(c, d);
            ++row;
        }
    }
    return EmbeddingSequence{std::move(out)};
}

CoverageMetrics coverage_metrics(const PruneResult& result, const TokenScores& scores,
                                 std::size_t s_eval) {
    const std::size_t n = scores.n_tokens();
    if (result.n_tokens_in != n) {
        throw ShapeMismatchError("coverage_metrics: result and scores disagree on N");
    }
    const SegmentPartition part = segment_partition(n, s_eval);

    double total = 0.0;
    for (double s : scores.scores) total += s;
    double kept_mass = 0.0;
    for (std::size_t idx : result.kept_indices) {
        if (idx >= n) throw ValidationError("coverage_metrics: kept index out of range");
        kept_mass += scores.scores[idx];
    }

    std::vector<std::size_t> sorted = result.kept_indices;
    std::sort(sorted.begin(), sorted.end());

    std::size_t occupied = 0;
    std::size_t cursor = 0;
    for (std::size_t seg = 0; seg < part.n_segments(); ++seg) {
        while (cursor < sorted.size() && sorted[cursor] < part.begin(seg)) ++cursor;
        if (cursor < sorted.size() && sorted[cursor] < part.end(seg)) ++occupied;
    }

    std::size_t max_gap = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        max_gap = std::max(max_gap, sorted[i] - sorted[i - 1]);
    }

    CoverageMetrics m;
    m.attention_mass_captured = total > 0.0 ? kept_mass / total : 0.0;
    m.segment_occupancy = static_cast<double>(occupied) / static_cast<double>(part.n_segments());
    m.max_temporal_gap = max_gap;
    return m;
}

}  // namespace tokenprune
