#pragma once

#include <cstdint>
#include <vector>

#include "tokenprune/errors.hpp"

namespace tokenprune {

// Decoder geometry for the analytic cost formulas. Defaults are sized like a
// 7B-class decoder; they are a configuration default, not a claim about any
// particular model's internals.
struct ModelShape {
    std::size_t n_layers = 32;
    std::size_t model_dim = 4096;
    std::size_t n_heads = 32;
    std::size_t ffn_dim = 11008;

    void validate() const;
};

struct CostEstimate {
    double prefill_flops = 0.0;
    double decode_flops_per_token = 0.0;
    double attention_share = 0.0;  // quadratic score/value share of prefill
};

// Tokens produced for a given audio duration at the 25 Hz encoder output
// rate (25 ms window, 10 ms hop, 2-frame patches, stride-2 pooling):
// floor(duration_s * 25), snapped so exact 0.04 s multiples never lose a
// token to floating-point rounding.
long long audio_token_count(double duration_s);

// =========================================================================
// Analytic per-layer FLOPs, multiply-add = 2 FLOPs, n = context tokens,
// D = model width, F = FFN width, L = layers:
//
//   prefill:  QKVO projections  4·n·D²
//             score + value     2·n²·D      (the only n² term)
//             FFN (2 matrices)  2·n·D·F·2
//
//   decode, per generated token with n cached positions:
//             projections       4·D²
//             KV lookups        2·n·D·2     (affine in n, slope 4·L·D)
//             FFN               4·D·F
//
// The weight terms dominate decode at these scales, which is what makes
// per-token generation time nearly independent of context length.
// =========================================================================
CostEstimate prefill_cost(std::size_t n_context, const ModelShape& shape);
CostEstimate decode_cost(std::size_t n_context, const ModelShape& shape);

// Both of the above in one record (what the CSV reports carry).
CostEstimate estimate_cost(std::size_t n_context, const ModelShape& shape);

struct BenchStats {
    double mean_ms = 0.0;
    double std_ms = 0.0;  // sample standard deviation over the timed reps
    std::vector<double> rep_ms;
};

// Operand buffer for one layer's prefill GEMMs, concatenated
// [X | Wq | Wk | Wv | Wo | W1 | W2] in column-major blocks; deterministic in
// (n, shape, seed). Exposed so seeded-generation reproducibility is testable.
std::vector<float> make_bench_operands(std::size_t n, const ModelShape& shape,
                                       std::uint64_t seed);

// Times one transformer layer's prefill GEMMs (QKV/O projections, per-head
// score and value products, two FFN matrices) at sequence length n on a
// single execution stream. Operands are generated once from the seed; one
// warmup rep runs before the reps timed with a monotonic clock.
BenchStats bench_prefill(std::size_t n, const ModelShape& shape, int reps,
                         std::uint64_t seed);

}  // namespace tokenprune
