#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "curator/errors.hpp"
#include "curator/io_util.hpp"
#include "curator/pipeline.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_root;
    std::string corpus_in;
    int workers = -1;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool takes_corpus = true) {
    cmd->add_option("--config,--spec", opts.config_path, "Config file (or $CURATOR_CONFIG)");
    cmd->add_option("--out", opts.out_root, "Artifact root directory");
    if (takes_corpus) {
        cmd->add_option("--in", opts.corpus_in, "Corpus directory (overrides config paths)");
    }
    cmd->add_option("--workers", opts.workers, "Parallel workers");
    cmd->add_option("--seed", opts.seed, "Base seed");
}

curator::PipelineConfig resolve_config(const CommonOpts& opts) {
    curator::PipelineConfig cfg;
    std::string path = opts.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("CURATOR_CONFIG")) path = env;
    }
    if (!path.empty()) cfg = curator::PipelineConfig::from_file(path);
    if (!opts.out_root.empty()) cfg.root = opts.out_root;
    if (!opts.corpus_in.empty()) {
        cfg.corpus_dir = std::filesystem::absolute(opts.corpus_in);
    }
    if (opts.workers > 0) cfg.num_workers = opts.workers;
    if (opts.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(opts.seed);
        cfg.gen.seed = cfg.seed;
        cfg.ensemble.seed = cfg.seed;
    }
    cfg.validate();
    return cfg;
}

int run_sample(const curator::PipelineConfig& cfg, const std::string& strategy, long long draws,
               std::uint64_t seed, const std::string& out_file) {
    using namespace curator;
    auto require = [](const std::filesystem::path& p, const std::string& producer) {
        if (!std::filesystem::exists(p)) {
            throw DependencyError("missing " + p.string() + "; run 'curator " + producer +
                                  "' first");
        }
    };
    std::string lines;
    lines.reserve(static_cast<std::size_t>(draws) * 16);
    if (strategy == "HS" || strategy == "ES" || strategy == "ARS") {
        require(cfg.corpus_path(), "gen");
        require(cfg.scores_path() / "scenario_scores.csv", "aggregate");
        const Corpus corpus = load_corpus(cfg.corpus_path());
        const ScenarioScoreTable table =
            load_scenario_scores(cfg.scores_path() / "scenario_scores.csv");
        std::vector<ScenarioEpochSampler::ScenarioEntry> entries;
        for (std::size_t i = 0; i < table.scenario_ids.size(); ++i) {
            const Scenario* s = corpus.find(table.scenario_ids[i]);
            if (!s) throw MissingScores("sample: scored scenario missing from corpus: " +
                                        table.scenario_ids[i]);
            double score = 0.0;
            if (strategy == "HS") score = table.heuristic[i];
            else if (strategy == "ES") score = table.ensemble[i];
            else score = table.rarity[i];
            entries.push_back({table.scenario_ids[i], enumerate_transitions(*s), score});
        }
        ScenarioEpochSampler sampler(std::move(entries), cfg.sampler_epsilon, seed);
        for (long long i = 0; i < draws; ++i) {
            const IndexEntry e = sampler.next();
            lines += e.scenario_id + "," + std::to_string(e.t) + "\n";
        }
    } else {
        require(cfg.index_path() / "master_index.csv", "build-index");
        const MasterIndex idx = load_master_index(cfg.index_path() / "master_index.csv");
        TimestepSampler sampler(idx, strategy, seed);
        for (long long i = 0; i < draws; ++i) {
            const IndexEntry& e = sampler.next();
            lines += e.scenario_id + "," + std::to_string(e.t) + "\n";
        }
    }
    if (out_file.empty()) {
        std::fputs(lines.c_str(), stdout);
    } else {
        curator::write_text_file(out_file, lines);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curator - criticality scoring and weighted sampling for driving logs"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* gen = app.add_subcommand("gen", "Generate a synthetic scenario corpus");
    add_common(gen, opts);

    auto* score_h = app.add_subcommand("score-heuristic", "Per-timestep heuristic scores");
    add_common(score_h, opts);

    auto* build_hist = app.add_subcommand("build-histogram", "Global expert-action histogram");
    add_common(build_hist, opts);

    auto* score_r = app.add_subcommand("score-rarity", "Per-transition action-rarity scores");
    add_common(score_r, opts);

    auto* train = app.add_subcommand("train-scouts", "Train the K-fold scout ensemble");
    add_common(train, opts);

    auto* score_u = app.add_subcommand("score-uncertainty", "Ensemble disagreement scores");
    add_common(score_u, opts);

    auto* aggregate = app.add_subcommand("aggregate", "Scenario-level score aggregation");
    add_common(aggregate, opts);

    auto* build_idx = app.add_subcommand("build-index", "Build the master transition index");
    add_common(build_idx, opts);

    auto* sample = app.add_subcommand("sample", "Draw transitions with a sampling strategy");
    add_common(sample, opts);
    std::string strategy = "uniform";
    long long draws = 10;
    std::string sample_out;
    sample->add_option("--strategy", strategy, "uniform|H|HS|E|ES|AR|ARS")
        ->check(CLI::IsMember({"uniform", "H", "HS", "E", "ES", "AR", "ARS"}));
    sample->add_option("--n", draws, "Number of draws")->required();
    sample->add_option("--sample-out", sample_out, "Write draws to a file instead of stdout");

    auto* eval = app.add_subcommand("eval", "Closed-loop evaluation of a policy");
    add_common(eval, opts);
    std::string policy = "expert";
    std::string label;
    std::string corpus_override;
    std::string report_file;
    eval->add_option("--policy", policy, "expert | constant:a,w | scout checkpoint path");
    eval->add_option("--label", label, "Strategy label used in reports");
    eval->add_option("--corpus", corpus_override, "Evaluate on this corpus directory");
    eval->add_option("--report", report_file, "Write the per-scenario CSV report here");

    auto* report = app.add_subcommand("report", "Metrics-by-strategy comparison tables");
    add_common(report, opts);

    auto* run = app.add_subcommand("run", "Run pipeline stages in order");
    add_common(run, opts);
    std::string stages_arg;
    run->add_option("--stages", stages_arg, "Comma-separated stage list (default: all)");

    CLI11_PARSE(app, argc, argv);

    try {
        curator::PipelineConfig cfg = resolve_config(opts);
        if (gen->parsed()) curator::run_pipeline(cfg, {"gen"});
        else if (score_h->parsed()) curator::run_pipeline(cfg, {"score-heuristic"});
        else if (build_hist->parsed()) curator::run_pipeline(cfg, {"build-histogram"});
        else if (score_r->parsed()) curator::run_pipeline(cfg, {"score-rarity"});
        else if (train->parsed()) curator::run_pipeline(cfg, {"train-scouts"});
        else if (score_u->parsed()) curator::run_pipeline(cfg, {"score-uncertainty"});
        else if (aggregate->parsed()) curator::run_pipeline(cfg, {"aggregate"});
        else if (build_idx->parsed()) curator::run_pipeline(cfg, {"build-index"});
        else if (sample->parsed()) {
            return run_sample(cfg, strategy, draws, cfg.seed, sample_out);
        } else if (eval->parsed()) {
            if (!corpus_override.empty()) cfg.corpus_dir = corpus_override;
            std::string use_label = label;
            if (use_label.empty()) {
                use_label = policy == "expert" ? "expert" : "policy";
            }
            curator::stage_eval(cfg, policy, use_label);
            if (!report_file.empty()) {
                std::filesystem::copy_file(
                    cfg.reports_path() / ("eval_" + use_label + ".csv"), report_file,
                    std::filesystem::copy_options::overwrite_existing);
            }
        } else if (report->parsed()) {
            curator::run_pipeline(cfg, {"report"});
        } else if (run->parsed()) {
            std::vector<std::string> stages;
            if (stages_arg.empty()) {
                stages = curator::kAllStages;
            } else {
                std::size_t start = 0;
                while (start <= stages_arg.size()) {
                    std::size_t pos = stages_arg.find(',', start);
                    if (pos == std::string::npos) pos = stages_arg.size();
                    if (pos > start) stages.push_back(stages_arg.substr(start, pos - start));
                    start = pos + 1;
                }
            }
            curator::run_pipeline(cfg, stages);
        }
        return 0;
    } catch (const curator::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const curator::DependencyError& e) {
        std::fprintf(stderr, "dependency error: %s\n", e.what());
        return 3;
    } catch (const curator::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
