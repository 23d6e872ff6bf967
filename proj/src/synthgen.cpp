#include "tokenprune/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tokenprune/rng.hpp"

namespace tokenprune {

namespace {

// Substream tags off the user seed.
constexpr std::uint64_t kPlacementStream = 0;
constexpr std::uint64_t kAttentionStream = 1;
constexpr std::uint64_t kEmbeddingStream = 2;

}  // namespace

void SynthSpec::validate() const {
    if (n_tokens == 0) throw InvalidArgumentError("SynthSpec: n_tokens must be positive");
    if (n_heads == 0) throw InvalidArgumentError("SynthSpec: n_heads must be positive");
    if (dim == 0) throw InvalidArgumentError("SynthSpec: dim must be positive");
    if (cluster_width == 0) throw InvalidArgumentError("SynthSpec: cluster_width must be >= 1");
    if (!(concentration > 0.0 && concentration < 1.0)) {
        throw InvalidArgumentError("SynthSpec: concentration must be in (0, 1)");
    }
    if (!(noise_scale >= 0.0)) {
        throw InvalidArgumentError("SynthSpec: noise_scale must be nonnegative");
    }
    if (n_hot > n_tokens) {
        throw InvalidArgumentError("SynthSpec: infeasible, n_hot exceeds n_tokens");
    }
}

std::vector<HotCluster> hot_clusters(const SynthSpec& spec) {
    spec.validate();
    if (spec.n_hot == 0) return {};

    const std::size_t count = (spec.n_hot + spec.cluster_width - 1) / spec.cluster_width;
    std::vector<std::size_t> sizes(count, spec.cluster_width);
    sizes.back() = spec.n_hot - spec.cluster_width * (count - 1);

    // Uniform placement of `count` non-overlapping blocks: pick `count`
    // distinct sorted values v from [0, free + count), then
    // start_i = v_i - i + sum of earlier block sizes.
    const std::size_t free_slots = spec.n_tokens - spec.n_hot;
    Rng rng = substream(spec.seed, kPlacementStream);
    const std::vector<std::size_t> picks =
        rng.sample_without_replacement(free_slots + count, count);

    std::vector<HotCluster> clusters(count);
    std::size_t prefix = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t start = picks[i] - i + prefix;
        clusters[i] = {start, start + sizes[i]};
        prefix += sizes[i];
    }
    return clusters;
}

AttentionTensor gen_attention(const SynthSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_tokens;
    const std::size_t heads = spec.n_heads;

    std::vector<char> hot(n, 0);
    for (const HotCluster& c : hot_clusters(spec)) {
        for (std::size_t j = c.begin; j < c.end; ++j) hot[j] = 1;
    }

    // Logit bump that puts `concentration` of each row's mass on the hot
    // columns in the noiseless case: e^b * n_hot / (e^b * n_hot + n_cold)
    // = concentration.
    double bump = 0.0;
    if (spec.n_hot > 0 && spec.n_hot < n) {
        const double c = spec.concentration;
        const double n_hot = static_cast<double>(spec.n_hot);
        const double n_cold = static_cast<double>(n - spec.n_hot);
        bump = std::log(c / (1.0 - c) * n_cold / n_hot);
    }

    Rng rng = substream(spec.seed, kAttentionStream);

    // Smooth column profile: stationary AR(1) along the token axis with
    // correlation length ~ N/20 and standard deviation noise_scale.
    std::vector<double> profile(n, 0.0);
    const double corr_len = std::max(4.0, static_cast<double>(n) / 20.0);
    const double rho = std::exp(-1.0 / corr_len);
    const double innovation = std::sqrt(1.0 - rho * rho);
    profile[0] = spec.noise_scale * rng.next_gaussian();
    for (std::size_t j = 1; j < n; ++j) {
        profile[j] = rho * profile[j - 1] + innovation * spec.noise_scale * rng.next_gaussian();
    }

    const double white_scale = 0.25 * spec.noise_scale;

    Tensor weights({heads, n, n}, Dtype::Float32);
    std::vector<double> logits(n);
    for (std::size_t h = 0; h < heads; ++h) {
        for (std::size_t i = 0; i < n; ++i) {
            double row_max = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                logits[j] = (hot[j] ? bump : 0.0) + profile[j] + white_scale * rng.next_gaussian();
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

EmbeddingSequence gen_embeddings(const SynthSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_tokens;
    const std::size_t dim = spec.dim;

    const std::vector<HotCluster> clusters = hot_clusters(spec);
    std::vector<std::size_t> cluster_of(n, clusters.size());  // sentinel = cold
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (std::size_t j = clusters[c].begin; j < clusters[c].end; ++j) cluster_of[j] = c;
    }

    Rng rng = substream(spec.seed, kEmbeddingStream);

    // Unit mean direction per cluster, scaled to 2*sqrt(dim) so same-cluster
    // rows end up with cosine similarity near 0.8 against unit-variance noise.
    std::vector<std::vector<double>> directions(clusters.size(), std::vector<double>(dim));
    const double signal = 2.0 * std::sqrt(static_cast<double>(dim));
    for (auto& dir : directions) {
        double norm_sq = 0.0;
        for (double& v : dir) {
            v = rng.next_gaussian();
            norm_sq += v * v;
        }
        const double scale = norm_sq > 0.0 ? signal / std::sqrt(norm_sq) : 0.0;
        for (double& v : dir) v *= scale;
    }

    Tensor data({n, dim}, Dtype::Float32);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t c = cluster_of[j];
        for (std::size_t d = 0; d < dim; ++d) {
            double v = rng.next_gaussian();
            if (c < clusters.size()) v += directions[c][d];
            data.at(j, d) = v;
        }
    }
    return EmbeddingSequence{std::move(data)};
}

}  // namespace tokenprune
