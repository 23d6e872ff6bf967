#include "tokenprune/prune_result.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace tokenprune {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::TopK: return "topk";
        case Strategy::SegmentwiseTopK: return "segmentwise";
        case Strategy::VisionZip: return "visionzip";
        case Strategy::Random: return "random";
        case Strategy::BottomK: return "bottomk";
        case Strategy::Identity: return "identity";
    }
    throw InvalidArgumentError("unknown strategy");
}

std::string to_string(Ordering o) {
    return o == Ordering::DescendingAttention ? "descending-attention" : "temporal";
}

std::string to_string(RemainderPolicy p) {
    return p == RemainderPolicy::Strict ? "strict" : "greedy-fill";
}

Strategy strategy_from_string(std::string_view s) {
    if (s == "topk") return Strategy::TopK;
    if (s == "segmentwise") return Strategy::SegmentwiseTopK;
    if (s == "visionzip") return Strategy::VisionZip;
    if (s == "random") return Strategy::Random;
    if (s == "bottomk") return Strategy::BottomK;
    if (s == "identity") return Strategy::Identity;
    throw InvalidArgumentError("unknown strategy '" + std::string(s) + "'");
}

Ordering ordering_from_string(std::string_view s) {
    if (s == "descending-attention") return Ordering::DescendingAttention;
    if (s == "temporal") return Ordering::Temporal;
    throw InvalidArgumentError("unknown ordering '" + std::string(s) + "'");
}

RemainderPolicy remainder_from_string(std::string_view s) {
    if (s == "strict") return RemainderPolicy::Strict;
    if (s == "greedy-fill") return RemainderPolicy::GreedyFill;
    throw InvalidArgumentError("unknown remainder policy '" + std::string(s) + "'");
}

std::string prune_result_to_json(const PruneResult& result) {
    nlohmann::json doc;
    doc["strategy"] = to_string(result.strategy);
    doc["n_tokens_in"] = result.n_tokens_in;
    doc["k_requested"] = result.k_requested;
    doc["k_kept"] = result.k_kept();
    doc["segments"] = result.segments;
    doc["ordering"] = to_string(result.ordering);
    doc["kept_indices"] = result.kept_indices;
    doc["contextual_count"] = result.contextual_count;
    return doc.dump(2) + "\n";
}

void save_prune_result(const PruneResult& result, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw UnwritablePathError("cannot write " + path.string());
    out << prune_result_to_json(result);
    out.flush();
    if (!out) throw UnwritablePathError("write failed for " + path.string());
}

PruneResult load_prune_result(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("prune result JSON parse error: " + std::string(e.what()));
    }

    PruneResult result;
    try {
        result.strategy = strategy_from_string(doc.at("strategy").get<std::string>());
        result.ordering = ordering_from_string(doc.at("ordering").get<std::string>());
        result.n_tokens_in = doc.at("n_tokens_in").get<std::size_t>();
        result.k_requested = doc.at("k_requested").get<std::size_t>();
        result.segments = doc.at("segments").get<std::size_t>();
        result.kept_indices = doc.at("kept_indices").get<std::vector<std::size_t>>();
        result.contextual_count = doc.at("contextual_count").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("prune result JSON missing field: " + std::string(e.what()));
    }

    std::set<std::size_t> seen;
    for (std::size_t idx : result.kept_indices) {
        if (idx >= result.n_tokens_in) {
            throw ValidationError("prune result: kept index out of range");
        }
        if (!seen.insert(idx).second) {
            throw ValidationError("prune result: duplicate kept index");
        }
    }
    return result;
}

}  // namespace tokenprune
