// tokenprune command-line tool: file-based pipelines over npy tensors with
// CSV/JSON outputs and a reproducibility manifest per command.
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tokenprune/attention.hpp"
#include "tokenprune/cost_model.hpp"
#include "tokenprune/csv.hpp"
#include "tokenprune/manifest.hpp"
#include "tokenprune/npy.hpp"
#include "tokenprune/prune_result.hpp"
#include "tokenprune/pruning.hpp"
#include "tokenprune/synthgen.hpp"
#include "tokenprune/types.hpp"
#include "tokenprune/version.hpp"

namespace fs = std::filesystem;
using namespace tokenprune;

namespace {

// Flag-combination problems detected past CLI11 parsing; mapped to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int run_cli(const std::vector<std::string>& args);  // forward, used by rerun

std::string u64str(std::uint64_t v) { return std::to_string(v); }

RunManifest base_manifest(std::string command, std::vector<std::string> argv) {
    RunManifest m;
    m.tool = kToolName;
    m.version = kToolVersion;
    m.command = std::move(command);
    m.timestamp = utc_timestamp_now();
    m.argv = std::move(argv);
    return m;
}

fs::path sibling_manifest_path(fs::path out) {
    out.replace_extension(".manifest.json");
    return out;
}

TokenScores load_scores_file(const fs::path& path) {
    const Tensor t = load_tensor(path, 2);
    if (t.dim(0) != 1) {
        throw ValidationError("scores file must have shape (1, N), got (" +
                              std::to_string(t.dim(0)) + ", " + std::to_string(t.dim(1)) + ")");
    }
    return TokenScores::from_vector(t.values());
}

void write_scores_npy(const TokenScores& scores, const fs::path& path) {
    Tensor t({1, scores.n_tokens()}, Dtype::Float64);
    t.values() = scores.scores;
    save_tensor(t, path);
}

// ---------------------------------------------------------------- aggregate

struct AggregateArgs {
    std::string attn_path;
    std::string qk_pair;
    std::string axis = "incoming";
    std::string out_path;
};

int run_aggregate(const AggregateArgs& a) {
    const bool have_attn = !a.attn_path.empty();
    const bool have_qk = !a.qk_pair.empty();
    if (have_attn == have_qk) {
        throw UsageError("aggregate: give exactly one of --attn and --qk");
    }
    if (a.axis != "incoming" && a.axis != "outgoing") {
        throw UsageError("aggregate: --axis must be incoming or outgoing");
    }
    const AggregationAxis axis =
        a.axis == "incoming" ? AggregationAxis::Incoming : AggregationAxis::Outgoing;

    RunManifest manifest = base_manifest(
        "aggregate", {"aggregate", have_attn ? "--attn" : "--qk",
                      have_attn ? a.attn_path : a.qk_pair, "--axis", a.axis, "--out", a.out_path});

    TokenScores scores{{}};
    if (have_attn) {
        manifest.inputs["attn"] = a.attn_path;
        scores = aggregate_scores(AttentionTensor::from_tensor(load_tensor(a.attn_path, 3)), axis);
    } else {
        const auto comma = a.qk_pair.find(',');
        if (comma == std::string::npos) {
            throw UsageError("aggregate: --qk wants 'queries.npy,keys.npy'");
        }
        const std::string q_path = a.qk_pair.substr(0, comma);
        const std::string k_path = a.qk_pair.substr(comma + 1);
        manifest.inputs["queries"] = q_path;
        manifest.inputs["keys"] = k_path;
        scores = scores_from_qk(
            QKTensor::from_tensors(load_tensor(q_path, 3), load_tensor(k_path, 3)), axis);
    }

    const fs::path out(a.out_path);
    write_scores_npy(scores, out);

    fs::path csv_path = out;
    csv_path.replace_extension(".csv");
    double max_score = 0.0;
    for (double s : scores.scores) max_score = std::max(max_score, s);
    CsvWriter csv(csv_path);
    csv.row({"index", "score", "max_normalized_score"});
    for (std::size_t i = 0; i < scores.n_tokens(); ++i) {
        const double normalized = max_score > 0.0 ? scores.scores[i] / max_score : 0.0;
        csv.row({format_number(i), format_number(scores.scores[i]), format_number(normalized)});
    }

    manifest.outputs["scores_npy"] = out.string();
    manifest.outputs["scores_csv"] = csv_path.string();
    save_manifest(manifest, sibling_manifest_path(out));
    return 0;
}

// -------------------------------------------------------------------- prune

struct PruneArgs {
    std::string scores_path;
    std::string embeddings_path;
    std::string keys_path;
    std::string strategy;
    std::optional<std::size_t> k;
    std::optional<double> rate;
    std::size_t segments = 10;
    std::string ordering = "descending-attention";
    double contextual_ratio = 0.18;
    std::uint64_t seed = 0;
    std::string remainder = "strict";
    std::string out_dir;
};

void write_metrics_csv(const fs::path& path, const PruneResult& result,
                       const CoverageMetrics& metrics, std::size_t s_eval) {
    CsvWriter csv(path);
    csv.row({"strategy", "n_tokens_in", "k_requested", "k_kept", "s_eval",
             "attention_mass_captured", "segment_occupancy", "max_temporal_gap"});
    csv.row({to_string(result.strategy), format_number(result.n_tokens_in),
             format_number(result.k_requested), format_number(result.k_kept()),
             format_number(s_eval), format_number(metrics.attention_mass_captured),
             format_number(metrics.segment_occupancy), format_number(metrics.max_temporal_gap)});
}

int run_prune(const PruneArgs& a) {
    const Strategy strategy = [&] {
        try {
            return strategy_from_string(a.strategy);
        } catch (const InvalidArgumentError& e) {
            throw UsageError(e.what());
        }
    }();
    if (a.k && a.rate) throw UsageError("prune: give either --k or --rate, not both");
    if (!a.k && !a.rate && strategy != Strategy::Identity) {
        throw UsageError("prune: one of --k / --rate is required");
    }
    if (strategy == Strategy::VisionZip && a.keys_path.empty()) {
        throw UsageError("prune: --keys is required for the visionzip strategy");
    }

    PruneConfig cfg;
    cfg.strategy = strategy;
    cfg.k = a.k;
    cfg.retention_rate = a.rate;
    cfg.segments = a.segments;
    cfg.ordering = ordering_from_string(a.ordering);
    cfg.contextual_ratio = a.contextual_ratio;
    cfg.seed = a.seed;
    cfg.remainder = remainder_from_string(a.remainder);

    const TokenScores scores = load_scores_file(a.scores_path);
    const EmbeddingSequence embeddings =
        EmbeddingSequence::from_tensor(load_tensor(a.embeddings_path, 2));
    if (embeddings.n_tokens() != scores.n_tokens()) {
        throw ShapeMismatchError("prune: scores and embeddings disagree on N");
    }

    PruneResult result;
    switch (strategy) {
        case Strategy::TopK: result = top_k(scores, cfg); break;
        case Strategy::BottomK: result = bottom_k(scores, cfg); break;
        case Strategy::SegmentwiseTopK: result = segmentwise_top_k(scores, cfg); break;
        case Strategy::Random: result = random_prune(scores.n_tokens(), cfg); break;
        case Strategy::Identity: result = identity_prune(scores, cfg); break;
        case Strategy::VisionZip:
            result = visionzip_prune(scores, load_tensor(a.keys_path, 3), embeddings, cfg);
            break;
    }

    const EmbeddingSequence pruned = apply_selection(embeddings, result);
    const std::size_t s_eval = std::min(a.segments, scores.n_tokens());
    const CoverageMetrics metrics = coverage_metrics(result, scores, s_eval);

    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    save_tensor(pruned.data, dir / "pruned.npy");
    save_prune_result(result, dir / "result.json");
    write_metrics_csv(dir / "metrics.csv", result, metrics, s_eval);

    std::vector<std::string> argv = {"prune", "--scores", a.scores_path,
                                     "--embeddings", a.embeddings_path};
    if (!a.keys_path.empty()) {
        argv.push_back("--keys");
        argv.push_back(a.keys_path);
    }
    argv.insert(argv.end(), {"--strategy", a.strategy});
    if (strategy != Strategy::Identity) {
        argv.push_back("--k");
        argv.push_back(std::to_string(result.k_requested));
    }
    argv.insert(argv.end(),
                {"--segments", std::to_string(a.segments), "--ordering", a.ordering,
                 "--contextual-ratio", format_number(a.contextual_ratio), "--seed", u64str(a.seed),
                 "--remainder", a.remainder, "--out-dir", a.out_dir});

    RunManifest manifest = base_manifest("prune", std::move(argv));
    manifest.inputs["scores"] = a.scores_path;
    manifest.inputs["embeddings"] = a.embeddings_path;
    if (!a.keys_path.empty()) manifest.inputs["keys"] = a.keys_path;
    manifest.outputs["pruned_npy"] = (dir / "pruned.npy").string();
    manifest.outputs["result_json"] = (dir / "result.json").string();
    manifest.outputs["metrics_csv"] = (dir / "metrics.csv").string();
    manifest.seed = a.seed;
    save_manifest(manifest, dir / "manifest.json");
    return 0;
}

// -------------------------------------------------------------------- synth

struct SynthArgs {
    SynthSpec spec;
    std::string out_dir;
};

int run_synth(const SynthArgs& a) {
    if (a.spec.dim % a.spec.n_heads != 0) {
        throw UsageError("synth: --dim must be divisible by --n-heads (keys reshape)");
    }
    const AttentionTensor attn = gen_attention(a.spec);
    const EmbeddingSequence emb = gen_embeddings(a.spec);

    // Keys as head-split embeddings: concatenating the per-head key vectors
    // of one token recovers its embedding row.
    const std::size_t heads = a.spec.n_heads;
    const std::size_t head_dim = a.spec.dim / heads;
    Tensor keys({heads, a.spec.n_tokens, head_dim}, Dtype::Float32);
    for (std::size_t h = 0; h < heads; ++h) {
        for (std::size_t j = 0; j < a.spec.n_tokens; ++j) {
            for (std::size_t d = 0; d < head_dim; ++d) {
                keys.at(h, j, d) = emb.data.at(j, h * head_dim + d);
            }
        }
    }

    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    save_tensor(attn.weights, dir / "attention.npy");
    save_tensor(emb.data, dir / "embeddings.npy");
    save_tensor(keys, dir / "keys.npy");

    nlohmann::json side;
    side["n_tokens"] = a.spec.n_tokens;
    side["n_heads"] = a.spec.n_heads;
    side["n_hot"] = a.spec.n_hot;
    side["cluster_width"] = a.spec.cluster_width;
    side["concentration"] = a.spec.concentration;
    side["noise_scale"] = a.spec.noise_scale;
    side["seed"] = a.spec.seed;
    side["dim"] = a.spec.dim;
    side["hot_clusters"] = nlohmann::json::array();
    for (const HotCluster& c : hot_clusters(a.spec)) {
        side["hot_clusters"].push_back({c.begin, c.end});
    }
    {
        std::ofstream out(dir / "synth_spec.json", std::ios::trunc);
        if (!out) throw UnwritablePathError("cannot write synth_spec.json");
        out << side.dump(2) << "\n";
    }

    RunManifest manifest = base_manifest(
        "synth",
        {"synth", "--n-tokens", std::to_string(a.spec.n_tokens), "--n-heads",
         std::to_string(a.spec.n_heads), "--n-hot", std::to_string(a.spec.n_hot),
         "--cluster-width", std::to_string(a.spec.cluster_width), "--concentration",
         format_number(a.spec.concentration), "--noise-scale", format_number(a.spec.noise_scale),
         "--seed", u64str(a.spec.seed), "--dim", std::to_string(a.spec.dim), "--out-dir",
         a.out_dir});
    manifest.outputs["attention_npy"] = (dir / "attention.npy").string();
    manifest.outputs["embeddings_npy"] = (dir / "embeddings.npy").string();
    manifest.outputs["keys_npy"] = (dir / "keys.npy").string();
    manifest.outputs["synth_spec_json"] = (dir / "synth_spec.json").string();
    manifest.seed = a.spec.seed;
    save_manifest(manifest, dir / "manifest.json");
    return 0;
}

// ------------------------------------------------------------------ metrics

struct MetricsArgs {
    std::string result_path;
    std::string scores_path;
    std::size_t segments = 10;
    std::string out_path = "metrics.csv";
};

int run_metrics(const MetricsArgs& a) {
    const PruneResult result = load_prune_result(a.result_path);
    const TokenScores scores = load_scores_file(a.scores_path);
    const std::size_t s_eval = std::min(a.segments, scores.n_tokens());
    const CoverageMetrics metrics = coverage_metrics(result, scores, s_eval);
    write_metrics_csv(a.out_path, result, metrics, s_eval);

    RunManifest manifest = base_manifest(
        "metrics", {"metrics", "--result", a.result_path, "--scores", a.scores_path, "--segments",
                    std::to_string(a.segments), "--out", a.out_path});
    manifest.inputs["result"] = a.result_path;
    manifest.inputs["scores"] = a.scores_path;
    manifest.outputs["metrics_csv"] = a.out_path;
    save_manifest(manifest, sibling_manifest_path(a.out_path));
    return 0;
}

// ------------------------------------------------------- estimate and bench

struct ShapeArgs {
    std::size_t layers = 32;
    std::size_t model_dim = 4096;
    std::size_t heads = 32;
    std::size_t ffn_dim = 11008;

    ModelShape to_shape() const { return ModelShape{layers, model_dim, heads, ffn_dim}; }

    std::vector<std::string> to_argv() const {
        return {"--layers",    std::to_string(layers), "--model-dim", std::to_string(model_dim),
                "--heads",     std::to_string(heads),  "--ffn-dim",   std::to_string(ffn_dim)};
    }
};

void add_shape_flags(CLI::App* cmd, ShapeArgs& shape) {
    cmd->add_option("--layers", shape.layers, "Decoder layer count")->capture_default_str();
    cmd->add_option("--model-dim", shape.model_dim, "Model width D")->capture_default_str();
    cmd->add_option("--heads", shape.heads, "Attention heads")->capture_default_str();
    cmd->add_option("--ffn-dim", shape.ffn_dim, "FFN width")->capture_default_str();
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

const std::vector<std::string> kCostHeader = {"n_tokens",
                                              "prefill_flops",
                                              "attention_share",
                                              "decode_flops_per_token",
                                              "bench_mean_ms",
                                              "bench_std_ms"};

struct EstimateArgs {
    std::vector<std::size_t> n_tokens;
    ShapeArgs shape;
    std::string out_path = "costs.csv";
};

int run_estimate(const EstimateArgs& a) {
    if (a.n_tokens.empty()) throw UsageError("estimate: --n-tokens wants at least one value");
    const ModelShape shape = a.shape.to_shape();

    CsvWriter csv(a.out_path);
    csv.row(kCostHeader);
    for (std::size_t n : a.n_tokens) {
        const CostEstimate est = estimate_cost(n, shape);
        csv.row({format_number(n), format_number(est.prefill_flops),
                 format_number(est.attention_share), format_number(est.decode_flops_per_token),
                 "", ""});
    }

    std::vector<std::string> argv = {"estimate", "--n-tokens", join_sizes(a.n_tokens)};
    const auto shape_argv = a.shape.to_argv();
    argv.insert(argv.end(), shape_argv.begin(), shape_argv.end());
    argv.insert(argv.end(), {"--out", a.out_path});
    RunManifest manifest = base_manifest("estimate", std::move(argv));
    manifest.outputs["costs_csv"] = a.out_path;
    save_manifest(manifest, sibling_manifest_path(a.out_path));
    return 0;
}

struct BenchArgs {
    std::vector<std::size_t> n_tokens;
    int reps = 10;
    std::uint64_t seed = 0;
    ShapeArgs shape;
    std::string out_path = "bench.csv";
};

int run_bench(const BenchArgs& a) {
    if (a.n_tokens.empty()) throw UsageError("bench: --n-tokens wants at least one value");
    const ModelShape shape = a.shape.to_shape();

    CsvWriter csv(a.out_path);
    csv.row(kCostHeader);
    for (std::size_t n : a.n_tokens) {
        const CostEstimate est = estimate_cost(n, shape);
        const BenchStats stats = bench_prefill(n, shape, a.reps, a.seed);
        csv.row({format_number(n), format_number(est.prefill_flops),
                 format_number(est.attention_share), format_number(est.decode_flops_per_token),
                 format_number(stats.mean_ms), format_number(stats.std_ms)});
    }

    std::vector<std::string> argv = {"bench", "--n-tokens", join_sizes(a.n_tokens),
                                     "--reps", std::to_string(a.reps)};
    const auto shape_argv = a.shape.to_argv();
    argv.insert(argv.end(), shape_argv.begin(), shape_argv.end());
    argv.insert(argv.end(), {"--seed", u64str(a.seed), "--out", a.out_path});
    RunManifest manifest = base_manifest("bench", std::move(argv));
    manifest.outputs["bench_csv"] = a.out_path;
    manifest.seed = a.seed;
    save_manifest(manifest, sibling_manifest_path(a.out_path));
    return 0;
}

// -------------------------------------------------------------------- rerun

struct RerunArgs {
    std::string manifest_path;
    std::string out_dir_override;
    std::string out_override;
};

int run_rerun(const RerunArgs& a) {
    const RunManifest manifest = load_manifest(a.manifest_path);
    std::vector<std::string> argv = manifest.argv;
    if (argv.empty()) throw ValidationError("rerun: manifest has an empty argv");

    auto override_flag = [&argv](const std::string& flag, const std::string& value) {
        for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
            if (argv[i] == flag) {
                argv[i + 1] = value;
                return;
            }
        }
        throw UsageError("rerun: recorded command has no " + flag + " to override");
    };
    if (!a.out_dir_override.empty()) override_flag("--out-dir", a.out_dir_override);
    if (!a.out_override.empty()) override_flag("--out", a.out_override);

    return run_cli(argv);
}

// ----------------------------------------------------------------- dispatch

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{std::string(kToolName) +
                 " - attention-based token pruning toolkit for transformer audio representations"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.fallthrough(true);
    app.set_config("--config", "", "TOML config file; command-line flags take precedence");

    AggregateArgs agg;
    CLI::App* aggregate =
        app.add_subcommand("aggregate", "Aggregate attention into per-token scores");
    aggregate->add_option("--attn", agg.attn_path, "H x N x N post-softmax attention (npy)");
    aggregate->add_option("--qk", agg.qk_pair, "queries.npy,keys.npy (each H x N x Dh)");
    aggregate->add_option("--axis", agg.axis, "incoming | outgoing")->capture_default_str();
    aggregate->add_option("--out", agg.out_path, "Output scores npy (1 x N)")->required();

    PruneArgs pr;
    CLI::App* prune = app.add_subcommand("prune", "Select tokens and materialize the pruned sequence");
    prune->add_option("--scores", pr.scores_path, "Token scores npy (1 x N)")->required();
    prune->add_option("--embeddings", pr.embeddings_path, "Embeddings npy (N x D)")->required();
    prune->add_option("--keys", pr.keys_path, "Keys npy (H x N x Dh), visionzip only");
    prune->add_option("--strategy", pr.strategy,
                      "topk | segmentwise | visionzip | random | bottomk | identity")
        ->required();
    std::size_t k_flag = 0;
    double rate_flag = 0.0;
    CLI::Option* k_opt = prune->add_option("--k", k_flag, "Tokens to keep");
    CLI::Option* rate_opt =
        prune->add_option("--rate", rate_flag, "Retention rate in (0, 1]; K = max(1, round(rate*N))");
    prune->add_option("--segments", pr.segments, "Temporal segments S (segmentwise)")
        ->capture_default_str();
    prune->add_option("--ordering", pr.ordering, "descending-attention | temporal")
        ->capture_default_str();
    prune->add_option("--contextual-ratio", pr.contextual_ratio,
                      "Contextual-to-dominant ratio (visionzip)")
        ->capture_default_str();
    prune->add_option("--seed", pr.seed, "RNG seed (random)")->capture_default_str();
    prune->add_option("--remainder", pr.remainder, "strict | greedy-fill")->capture_default_str();
    prune->add_option("--out-dir", pr.out_dir, "Output directory")->required();

    SynthArgs sy;
    CLI::App* synth = app.add_subcommand("synth", "Generate synthetic attention and embeddings");
    synth->add_option("--n-tokens", sy.spec.n_tokens, "Sequence length N")->capture_default_str();
    synth->add_option("--n-heads", sy.spec.n_heads, "Attention heads H")->capture_default_str();
    synth->add_option("--n-hot", sy.spec.n_hot, "High-attention token count")->capture_default_str();
    synth->add_option("--cluster-width", sy.spec.cluster_width, "Tokens per hot cluster")
        ->capture_default_str();
    synth->add_option("--concentration", sy.spec.concentration,
                      "Attention mass fraction on hot tokens, in (0, 1)")
        ->capture_default_str();
    synth->add_option("--noise-scale", sy.spec.noise_scale, "Logit noise amplitude")
        ->capture_default_str();
    synth->add_option("--seed", sy.spec.seed, "RNG seed")->capture_default_str();
    synth->add_option("--dim", sy.spec.dim, "Embedding dimension D")->capture_default_str();
    synth->add_option("--out-dir", sy.out_dir, "Output directory")->required();

    MetricsArgs me;
    CLI::App* metrics = app.add_subcommand("metrics", "Coverage metrics for a prune result");
    metrics->add_option("--result", me.result_path, "PruneResult JSON")->required();
    metrics->add_option("--scores", me.scores_path, "Token scores npy (1 x N)")->required();
    metrics->add_option("--segments", me.segments, "Occupancy evaluation segments")
        ->capture_default_str();
    metrics->add_option("--out", me.out_path, "Output CSV")->capture_default_str();

    EstimateArgs es;
    CLI::App* estimate = app.add_subcommand("estimate", "Analytic prefill/decode cost per context size");
    estimate->add_option("--n-tokens", es.n_tokens, "Context sizes, comma separated")
        ->required()
        ->delimiter(',');
    add_shape_flags(estimate, es.shape);
    estimate->add_option("--out", es.out_path, "Output CSV")->capture_default_str();

    BenchArgs be;
    CLI::App* bench = app.add_subcommand("bench", "Time one layer's prefill GEMMs per context size");
    bench->add_option("--n-tokens", be.n_tokens, "Context sizes, comma separated")
        ->required()
        ->delimiter(',');
    bench->add_option("--reps", be.reps, "Timed repetitions (>= 3)")
        ->required()
        ->check(CLI::Range(3, 1000000));
    bench->add_option("--seed", be.seed, "Operand seed")->capture_default_str();
    add_shape_flags(bench, be.shape);
    bench->add_option("--out", be.out_path, "Output CSV")->capture_default_str();

    RerunArgs re;
    CLI::App* rerun = app.add_subcommand("rerun", "Replay a command from its manifest");
    rerun->add_option("--manifest", re.manifest_path, "manifest.json of a previous run")->required();
    rerun->add_option("--out-dir", re.out_dir_override, "Override the recorded --out-dir");
    rerun->add_option("--out", re.out_override, "Override the recorded --out");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back(kToolName);
    for (const std::string& s : args) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (k_opt->count() > 0) pr.k = k_flag;
    if (rate_opt->count() > 0) pr.rate = rate_flag;

    try {
        if (aggregate->parsed()) return run_aggregate(agg);
        if (prune->parsed()) return run_prune(pr);
        if (synth->parsed()) return run_synth(sy);
        if (metrics->parsed()) return run_metrics(me);
        if (estimate->parsed()) return run_estimate(es);
        if (bench->parsed()) return run_bench(be);
        if (rerun->parsed()) return run_rerun(re);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "usage error: a subcommand is required\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}
