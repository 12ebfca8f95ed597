#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "curator/curation.hpp"
#include "curator/eval.hpp"
#include "curator/features.hpp"
#include "curator/heuristics.hpp"
#include "curator/reward.hpp"
#include "curator/scoring.hpp"
#include "curator/scouts.hpp"
#include "curator/synth.hpp"

namespace curator {

// Declarative configuration mirroring the scoring / training / reward tables
// of the global config file.
struct PipelineConfig {
    std::filesystem::path root = ".";
    std::filesystem::path corpus_dir = "corpus";
    std::filesystem::path scores_dir = "scores";
    std::filesystem::path index_dir = "index";
    std::filesystem::path checkpoints_dir = "checkpoints";
    std::filesystem::path reports_dir = "reports";

    FeatureConfig features;
    ActionLimits action_space;
    HeuristicConstants heuristic_constants;
    HeuristicWeights heuristic_weights;
    EnsembleSpec ensemble;
    double rarity_alpha = 1.0;
    RewardWeights reward_weights;
    RewardParams reward_params;
    EvalParams eval_params;
    double sampler_epsilon = kWeightFloor;
    int num_workers = 16;
    std::uint64_t seed = 0;
    CorpusSpec gen;

    std::filesystem::path corpus_path() const { return root / corpus_dir; }
    std::filesystem::path scores_path() const { return root / scores_dir; }
    std::filesystem::path index_path() const { return root / index_dir; }
    std::filesystem::path checkpoints_path() const { return root / checkpoints_dir; }
    std::filesystem::path reports_path() const { return root / reports_dir; }

    void validate() const;  // throws ConfigError

    static PipelineConfig from_file(const std::filesystem::path& path);
    static PipelineConfig from_json_text(const std::string& text, const std::string& origin);
};

// Pipeline stages in dependency order.
inline const std::vector<std::string> kAllStages = {
    "gen",          "score-heuristic", "build-histogram", "score-rarity", "train-scouts",
    "score-uncertainty", "aggregate",  "build-index",     "eval",         "report"};

void stage_gen(const PipelineConfig& cfg);
void stage_score_heuristic(const PipelineConfig& cfg);
void stage_build_histogram(const PipelineConfig& cfg);
void stage_score_rarity(const PipelineConfig& cfg);
void stage_train_scouts(const PipelineConfig& cfg);
void stage_score_uncertainty(const PipelineConfig& cfg);
void stage_aggregate(const PipelineConfig& cfg);
void stage_build_index(const PipelineConfig& cfg);
void stage_eval(const PipelineConfig& cfg, const std::string& policy_spec,
                const std::string& label);
void stage_report(const PipelineConfig& cfg);

// Runs the stages in order; each stage is idempotent (unchanged inputs yield
// byte-identical outputs). Throws ConfigError / DependencyError / DataError.
// Prints one timing line per stage.
void run_pipeline(const PipelineConfig& cfg, const std::vector<std::string>& stages);

// Artifact loading helpers shared by stages, the CLI and tests.
std::vector<ScoutModel> load_scout_checkpoints(const std::filesystem::path& dir);
TimestepScores load_heuristic_table(const PipelineConfig& cfg, const std::string& scenario_id);

// Per-transition score table persistence: one CSV per scenario plus a meta
// file holding the corpus-wide normalization constant.
void save_transition_scores(const std::filesystem::path& dir, const TransitionScoreTable& table);
StrategyScores load_transition_scores(const std::filesystem::path& dir,
                                      const std::vector<std::string>& scenario_ids);

// Policy specs accepted by the eval stage: "expert", "constant:a,w", or a
// scout checkpoint path.
PolicyFactory make_policy_factory(const PipelineConfig& cfg, const std::string& policy_spec);

void save_eval_report(const std::filesystem::path& csv_path,
                      const std::filesystem::path& json_path, const EvalReport& report);

}  // namespace curator
