#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tokenprune/tensor.hpp"

namespace tokenprune {

enum class Strategy { TopK, SegmentwiseTopK, VisionZip, Random, BottomK, Identity };
enum class Ordering { DescendingAttention, Temporal };
enum class RemainderPolicy { Strict, GreedyFill };

std::string to_string(Strategy s);
std::string to_string(Ordering o);
std::string to_string(RemainderPolicy p);
Strategy strategy_from_string(std::string_view s);
Ordering ordering_from_string(std::string_view s);
RemainderPolicy remainder_from_string(std::string_view s);

// Outcome of one selection pass over a token sequence.
struct PruneResult {
    Strategy strategy = Strategy::TopK;
    std::size_t n_tokens_in = 0;
    std::size_t k_requested = 0;
    std::size_t segments = 1;  // 1 unless the strategy segments temporally
    Ordering ordering = Ordering::DescendingAttention;
    std::vector<std::size_t> kept_indices;
    std::size_t contextual_count = 0;
    // C x D merged embeddings (VisionZip). Set when the result was produced
    // in-process; a result loaded from JSON carries only contextual_count.
    std::optional<Tensor> contextual_tokens;

    std::size_t k_kept() const { return kept_indices.size() + contextual_count; }
};

// JSON document with fields {strategy, n_tokens_in, k_requested, k_kept,
// segments, ordering, kept_indices, contextual_count}; kept indices appear
// in the result's ordering. Merged embedding values are not serialized here;
// they travel through the pruned-embedding tensor file.
std::string prune_result_to_json(const PruneResult& result);

void save_prune_result(const PruneResult& result, const std::filesystem::path& path);
PruneResult load_prune_result(const std::filesystem::path& path);

}  // namespace tokenprune
