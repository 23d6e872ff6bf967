// Acceptance suite: end-to-end checks over the full toolkit, one printed
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.
//
// Build passes the CLI binary path via TOKENPRUNE_CLI_PATH; argv[1] overrides.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tokenprune/attention.hpp"
#include "tokenprune/cost_model.hpp"
#include "tokenprune/npy.hpp"
#include "tokenprune/prune_result.hpp"
#include "tokenprune/pruning.hpp"
#include "tokenprune/rng.hpp"
#include "tokenprune/synthgen.hpp"

using namespace tokenprune;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli_path = TOKENPRUNE_CLI_PATH;

struct CriterionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw CriterionFailure(msg);
}

// ------------------------------------------------------------------ helpers

std::size_t g_mass_checks = 0;

// Criterion 3 applies to every attention tensor the suite touches.
void check_mass_conservation(const AttentionTensor& attn) {
    const TokenScores scores = aggregate_scores(attn);
    double total = 0.0;
    for (double s : scores.scores) total += s;
    const double n = static_cast<double>(attn.n_tokens());
    require(std::abs(total - n) <= 1e-4,
            "aggregate mass " + std::to_string(total) + " != N = " + std::to_string(n));
    ++g_mass_checks;
}

QKTensor random_qk(std::size_t heads, std::size_t n, std::size_t dh, std::uint64_t seed) {
    Rng rng(seed);
    Tensor q({heads, n, dh}, Dtype::Float64);
    Tensor k({heads, n, dh}, Dtype::Float64);
    for (double& v : q.values()) v = rng.next_gaussian();
    for (double& v : k.values()) v = rng.next_gaussian();
    return QKTensor::from_tensors(std::move(q), std::move(k));
}

TokenScores random_scores(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.next_double() * 10.0;
    return TokenScores::from_vector(std::move(v));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

int run_cli(const std::string& args) {
    const std::string cmd = g_cli_path + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

struct ScratchDir {
    std::string path;
    explicit ScratchDir(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& f) const { return path + "/" + f; }
};

// Shared battery for criteria 6 and 7: 200 seeded instances at N = 750,
// n_hot = 30, concentration = 0.8, with hot tokens in few clusters.
struct SynthBattery {
    bool built = false;
    // mass[retention][strategy] accumulated over instances
    double mass_seg[3] = {0, 0, 0};
    double mass_rand[3] = {0, 0, 0};
    double mass_bottom[3] = {0, 0, 0};
    double occ_seg_quarter = 0.0;
    double occ_top_quarter = 0.0;
    std::size_t instances = 0;

    void build() {
        if (built) return;
        const double retentions[3] = {0.5, 0.25, 0.1};
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            SynthSpec spec;
            spec.n_tokens = 750;
            spec.n_heads = 2;
            spec.n_hot = 30;
            spec.cluster_width = 10;
            spec.concentration = 0.8;
            spec.noise_scale = 1.0;
            spec.seed = seed;
            const AttentionTensor attn = gen_attention(spec);
            check_mass_conservation(attn);
            const TokenScores scores = aggregate_scores(attn);

            for (int r = 0; r < 3; ++r) {
                PruneConfig cfg;
                cfg.retention_rate = retentions[r];
                cfg.segments = 10;
                cfg.seed = seed;
                mass_seg[r] += coverage_metrics(segmentwise_top_k(scores, cfg), scores, 10)
                                   .attention_mass_captured;
                mass_rand[r] += coverage_metrics(random_prune(750, cfg), scores, 10)
                                    .attention_mass_captured;
                mass_bottom[r] += coverage_metrics(bottom_k(scores, cfg), scores, 10)
                                      .attention_mass_captured;
                if (r == 1) {
                    occ_seg_quarter +=
                        coverage_metrics(segmentwise_top_k(scores, cfg), scores, 10)
                            .segment_occupancy;
                    occ_top_quarter +=
                        coverage_metrics(top_k(scores, cfg), scores, 10).segment_occupancy;
                }
            }
            ++instances;
        }
        built = true;
    }
};

SynthBattery g_battery;

// --------------------------------------------------------------- criteria

// 1. Segmentwise Top-K with S = 1 degenerates to Top-K exactly.
void criterion_degeneracy() {
    const auto t0 = Clock::now();
    Rng pick(101);
    for (int c = 0; c < 1000; ++c) {
        const std::size_t n = 2 + pick.next_below(999);       // N in [2, 1000]
        const std::size_t k = 1 + pick.next_below(n);         // K in [1, N]
        const TokenScores scores = random_scores(n, 5000 + static_cast<std::uint64_t>(c));

        PruneConfig cfg;
        cfg.k = k;
        cfg.segments = 1;
        cfg.ordering = pick.next_below(2) == 0 ? Ordering::DescendingAttention
                                               : Ordering::Temporal;
        const PruneResult seg = segmentwise_top_k(scores, cfg);
        const PruneResult top = top_k(scores, cfg);

        require(seg.kept_indices == top.kept_indices, "ordering mismatch");
        require(std::set<std::size_t>(seg.kept_indices.begin(), seg.kept_indices.end()) ==
                    std::set<std::size_t>(top.kept_indices.begin(), top.kept_indices.end()),
                "index set mismatch");
        const nlohmann::json a = seg.kept_indices;
        const nlohmann::json b = top.kept_indices;
        require(a.dump() == b.dump(), "kept_indices JSON differs");
        require(seg.k_kept() == top.k_kept() && seg.segments == top.segments &&
                    seg.k_requested == top.k_requested,
                "result metadata differs");
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    require(secs < 10.0, "took " + std::to_string(secs) + " s, budget 10 s");
}

// 2. Softmax and aggregation match independent float64 oracles.
void criterion_oracle_equivalence() {
    const auto t0 = Clock::now();
    Rng pick(202);
    for (int c = 0; c < 500; ++c) {
        const std::size_t heads = 1 + pick.next_below(4);
        const std::size_t n = 1 + pick.next_below(64);
        const std::size_t dh = 1 + pick.next_below(8);
        const QKTensor qk = random_qk(heads, n, dh, 9000 + static_cast<std::uint64_t>(c));

        const AttentionTensor got = softmax_attention(qk);

        // Oracle softmax: direct exp/sum at float64, no stabilization.
        const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
        std::vector<double> oracle_scores(n, 0.0);
        for (std::size_t h = 0; h < heads; ++h) {
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<double> expd(n);
                double denom = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    double dot = 0.0;
                    for (std::size_t d = 0; d < dh; ++d) {
                        dot += qk.queries.at(h, i, d) * qk.keys.at(h, j, d);
                    }
                    expd[j] = std::exp(dot * scale);
                    denom += expd[j];
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double want = expd[j] / denom;
                    require(std::abs(got.weights.at(h, i, j) - want) < 1e-6,
                            "softmax deviates from oracle");
                    oracle_scores[j] += want / static_cast<double>(heads);
                }
            }
        }
        const TokenScores scores = aggregate_scores(got);
        for (std::size_t j = 0; j < n; ++j) {
            require(std::abs(scores.scores[j] - oracle_scores[j]) < 1e-6,
                    "aggregation deviates from oracle");
        }
        check_mass_conservation(got);
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    require(secs < 30.0, "took " + std::to_string(secs) + " s, budget 30 s");
}

// 3. Mass conservation across every tensor the suite generates.
void criterion_mass_conservation() {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        check_mass_conservation(softmax_attention(random_qk(2, 40, 4, 7700 + seed)));

        SynthSpec spec;
        spec.n_tokens = 120;
        spec.n_heads = 2;
        spec.n_hot = 12;
        spec.cluster_width = 4;
        spec.concentration = 0.7;
        spec.noise_scale = seed % 3 == 0 ? 0.0 : 1.2;
        spec.seed = seed;
        check_mass_conservation(gen_attention(spec));
    }
    require(g_mass_checks >= 560, "expected the suite to have checked every tensor");
}

// 4. Per-segment quotas under Strict; exact budget under GreedyFill.
void criterion_quota() {
    Rng pick(404);
    for (int c = 0; c < 1000; ++c) {
        const std::size_t n = 2 + pick.next_below(400);
        const std::size_t s = 1 + pick.next_below(std::min<std::size_t>(n, 32));
        const std::size_t k = 1 + pick.next_below(n);
        const TokenScores scores = random_scores(n, 11000 + static_cast<std::uint64_t>(c));

        PruneConfig cfg;
        cfg.k = k;
        cfg.segments = s;
        const PruneResult strict = segmentwise_top_k(scores, cfg);
        const SegmentPartition part = segment_partition(n, s);
        const std::size_t quota = k / s;
        for (std::size_t seg = 0; seg < s; ++seg) {
            std::size_t count = 0;
            for (std::size_t idx : strict.kept_indices) {
                if (idx >= part.begin(seg) && idx < part.end(seg)) ++count;
            }
            require(count == std::min(quota, part.size(seg)),
                    "segment quota violated under Strict");
        }

        cfg.remainder = RemainderPolicy::GreedyFill;
        const PruneResult filled = segmentwise_top_k(scores, cfg);
        require(filled.kept_indices.size() == std::min(k, n),
                "GreedyFill kept count != min(K, N)");
    }
}

// 5. S = N/3 with quota 1 selects exactly one token per consecutive triple.
void criterion_one_per_triple() {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SynthSpec spec;
        spec.n_tokens = 750;
        spec.n_heads = 2;
        spec.n_hot = 30;
        spec.cluster_width = 6;
        spec.concentration = 0.8;
        spec.noise_scale = 1.0;
        spec.seed = 3000 + seed;
        const AttentionTensor attn = gen_attention(spec);
        check_mass_conservation(attn);
        const TokenScores scores = aggregate_scores(attn);

        const std::size_t s = spec.n_tokens / 3;  // 250 segments of width 3
        PruneConfig cfg;
        cfg.k = s;  // quota floor(K/S) = 1
        cfg.segments = s;
        cfg.ordering = Ordering::Temporal;
        const PruneResult r = segmentwise_top_k(scores, cfg);
        require(r.kept_indices.size() == s, "expected one token per segment");
        for (std::size_t t = 0; t < s; ++t) {
            require(r.kept_indices[t] >= 3 * t && r.kept_indices[t] < 3 * (t + 1),
                    "kept token outside its triple");
        }
    }
}

// 6. Mass ordering analogue: segmentwise > random > bottom at 50/25/10%.
void criterion_mass_ordering() {
    const auto t0 = Clock::now();
    g_battery.build();
    const auto& b = g_battery;
    require(b.instances == 200, "expected 200 instances");
    const char* names[3] = {"50%", "25%", "10%"};
    for (int r = 0; r < 3; ++r) {
        require(b.mass_seg[r] > b.mass_rand[r],
                std::string("segmentwise mass <= random at ") + names[r]);
        require(b.mass_rand[r] > b.mass_bottom[r],
                std::string("random mass <= bottom at ") + names[r]);
    }
    require(b.mass_bottom[2] < 0.25 * b.mass_rand[2],
            "bottom mass not below a quarter of random at 10%");
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    require(secs < 60.0, "took " + std::to_string(secs) + " s, budget 60 s");
}

// 7. Segmentwise occupancy beats top-k on clustered data at 25% retention.
void criterion_occupancy() {
    g_battery.build();
    require(g_battery.occ_seg_quarter > g_battery.occ_top_quarter,
            "segmentwise occupancy did not exceed top-k occupancy");
}

// 8. Audio token count: 30 s -> 750 tokens, exactly linear at 0.04 s steps.
void criterion_token_count() {
    require(audio_token_count(30.0) == 750, "30 s must map to 750 tokens");
    for (long long k = 0; k <= 1000000; ++k) {
        const long long got = audio_token_count(static_cast<double>(k) * 0.04);
        if (got != k) {
            require(false, "not linear at k = " + std::to_string(k) + " (got " +
                               std::to_string(got) + ")");
        }
    }
}

// 9. Prefill scaling: quadratic-term ratio r^2 analytically; measured means
// strictly ordered over the retention grid.
void criterion_prefill_scaling() {
    const auto t0 = Clock::now();

    const ModelShape analytic{};  // default 7B-class shape
    auto quad = [&](std::size_t n) {
        const CostEstimate est = prefill_cost(n, analytic);
        return est.attention_share * est.prefill_flops;
    };
    const struct { std::size_t full, kept; double r; } grid[] = {
        {1000, 500, 0.5}, {1000, 250, 0.25}, {1000, 100, 0.1}, {600, 300, 0.5}, {600, 60, 0.1}};
    for (const auto& g : grid) {
        const double ratio = quad(g.kept) / quad(g.full);
        require(std::abs(ratio - g.r * g.r) < 1e-12, "quadratic ratio != r^2");
    }

    // Timed GEMMs on a width-1024 layer; the criterion fixes the n grid and
    // reps, not the layer width.
    const ModelShape bench_shape{2, 1024, 16, 2752};
    const std::size_t grid_n[4] = {750, 375, 188, 75};
    double means[4];
    for (int i = 0; i < 4; ++i) {
        means[i] = bench_prefill(grid_n[i], bench_shape, 10, 42).mean_ms;
    }
    for (int i = 1; i < 4; ++i) {
        require(means[i] < means[i - 1], "bench means not strictly decreasing at n = " +
                                             std::to_string(grid_n[i]));
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    require(secs < 120.0, "took " + std::to_string(secs) + " s, budget 120 s");
}

// 10. Decode cost is nearly flat in context length.
void criterion_decode_constancy() {
    const ModelShape shape{};
    const double ratio = decode_cost(750, shape).decode_flops_per_token /
                         decode_cost(75, shape).decode_flops_per_token;
    require(ratio < 1.05, "decode ratio " + std::to_string(ratio) + " >= 1.05");
}

// 11. Determinism and round trips, including CLI manifest replay.
void criterion_determinism() {
    // Seeded library operations are bitwise reproducible.
    SynthSpec spec;
    spec.n_tokens = 64;
    spec.n_heads = 2;
    spec.n_hot = 8;
    spec.cluster_width = 4;
    spec.concentration = 0.8;
    spec.noise_scale = 1.0;
    spec.seed = 17;
    spec.dim = 32;
    require(gen_attention(spec).weights == gen_attention(spec).weights,
            "gen_attention not reproducible");
    require(gen_embeddings(spec).data == gen_embeddings(spec).data,
            "gen_embeddings not reproducible");

    PruneConfig rnd;
    rnd.k = 10;
    rnd.seed = 33;
    require(random_prune(100, rnd).kept_indices == random_prune(100, rnd).kept_indices,
            "random_prune not reproducible");

    const ModelShape small{2, 64, 4, 160};
    require(make_bench_operands(24, small, 5) == make_bench_operands(24, small, 5),
            "bench operands not reproducible");

    // f32 npy round trip is bit-exact.
    ScratchDir dir("tokenprune-acceptance-rt");
    Rng rng(8);
    Tensor t({6, 5}, Dtype::Float32);
    for (double& v : t.values()) {
        v = static_cast<double>(static_cast<float>(rng.next_gaussian()));
    }
    save_tensor(t, dir.file("t.npy"));
    const Tensor back = load_tensor(dir.file("t.npy"), 2);
    require(back.values() == t.values() && back.dtype() == Dtype::Float32,
            "f32 round trip not bit-exact");
    save_tensor(back, dir.file("t2.npy"));
    require(slurp(dir.file("t.npy")) == slurp(dir.file("t2.npy")),
            "re-saving a loaded tensor changed the bytes");

    // Manifest replay through the CLI reproduces outputs byte for byte.
    require(run_cli("synth --n-tokens 96 --n-heads 2 --n-hot 8 --cluster-width 4"
                    " --concentration 0.8 --noise-scale 1.0 --seed 3 --dim 16 --out-dir " +
                    dir.file("synth")) == 0,
            "synth failed");
    require(run_cli("aggregate --attn " + dir.file("synth/attention.npy") + " --out " +
                    dir.file("scores.npy")) == 0,
            "aggregate failed");
    require(run_cli("prune --scores " + dir.file("scores.npy") + " --embeddings " +
                    dir.file("synth/embeddings.npy") +
                    " --strategy segmentwise --rate 0.25 --out-dir " + dir.file("prune")) == 0,
            "prune failed");
    require(run_cli("rerun --manifest " + dir.file("synth/manifest.json") + " --out-dir " +
                    dir.file("synth2")) == 0,
            "synth rerun failed");
    require(run_cli("rerun --manifest " + dir.file("prune/manifest.json") + " --out-dir " +
                    dir.file("prune2")) == 0,
            "prune rerun failed");
    for (const char* f : {"attention.npy", "embeddings.npy", "keys.npy", "synth_spec.json"}) {
        require(slurp(dir.file("synth/" + std::string(f))) ==
                    slurp(dir.file("synth2/" + std::string(f))),
                std::string("synth rerun differs in ") + f);
    }
    for (const char* f : {"pruned.npy", "result.json", "metrics.csv"}) {
        require(slurp(dir.file("prune/" + std::string(f))) ==
                    slurp(dir.file("prune2/" + std::string(f))),
                std::string("prune rerun differs in ") + f);
    }
}

// 12. VisionZip budget arithmetic and its ratio-zero degeneracy.
void criterion_visionzip_budget() {
    Rng rng(606);
    const std::size_t n = 300;
    const TokenScores scores = random_scores(n, 12345);
    Tensor keys({2, n, 4}, Dtype::Float64);
    for (double& v : keys.values()) v = rng.next_gaussian();
    Tensor emb_t({n, 6}, Dtype::Float64);
    for (double& v : emb_t.values()) v = rng.next_gaussian();
    const EmbeddingSequence emb = EmbeddingSequence::from_tensor(std::move(emb_t));

    PruneConfig cfg;
    cfg.k = 118;
    cfg.contextual_ratio = 0.18;
    const PruneResult r = visionzip_prune(scores, keys, emb, cfg);
    require(r.kept_indices.size() == 100, "Kd != 100 for K = 118 at ratio 0.18");
    require(r.contextual_count == 18, "C != 18 for K = 118 at ratio 0.18");
    require(r.k_kept() == 118, "k_kept != 118");

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const TokenScores s = random_scores(80, 20000 + seed);
        PruneConfig zero;
        zero.k = 1 + seed % 80;
        zero.contextual_ratio = 0.0;
        Tensor ks({1, 80, 3}, Dtype::Float64);
        Rng kr(seed);
        for (double& v : ks.values()) v = kr.next_gaussian();
        Tensor et({80, 4}, Dtype::Float64);
        for (double& v : et.values()) v = kr.next_gaussian();
        const EmbeddingSequence e = EmbeddingSequence::from_tensor(std::move(et));
        const PruneResult vz = visionzip_prune(s, ks, e, zero);
        const PruneResult tk = top_k(s, zero);
        require(vz.kept_indices == tk.kept_indices && vz.contextual_count == 0,
                "ratio 0 did not reduce to top_k");
    }
}

struct Criterion {
    int id;
    const char* name;
    std::function<void()> body;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];

    const std::vector<Criterion> criteria = {
        {1, "segmentwise S=1 degenerates to top-k (1000 cases)", criterion_degeneracy},
        {2, "softmax/aggregation match float64 oracles (500 tensors)", criterion_oracle_equivalence},
        {3, "aggregate mass equals N within 1e-4 on every tensor", criterion_mass_conservation},
        {4, "strict per-segment quotas; greedy fill hits the budget (1000 triples)",
         criterion_quota},
        {5, "S=N/3 with quota 1 keeps one token per triple", criterion_one_per_triple},
        {6, "mass ordering segmentwise > random > bottom at 50/25/10%", criterion_mass_ordering},
        {7, "segmentwise occupancy exceeds top-k on clustered data at 25%", criterion_occupancy},
        {8, "audio token count: 30 s = 750 tokens, linear at 0.04 s steps", criterion_token_count},
        {9, "prefill quadratic ratio = r^2; bench means strictly ordered", criterion_prefill_scaling},
        {10, "decode flops ratio 750/75 below 1.05", criterion_decode_constancy},
        {11, "seeded determinism, bit-exact round trips, manifest replay", criterion_determinism},
        {12, "visionzip budget: 118 -> 100 + 18; ratio 0 is top-k", criterion_visionzip_budget},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = Clock::now();
        std::string note;
        bool ok = true;
        try {
            c.body();
        } catch (const std::exception& e) {
            ok = false;
            note = e.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        std::printf("[%s] %2d. %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs,
                    note.empty() ? "" : " -- ", note.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }

    if (failures > 0) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
