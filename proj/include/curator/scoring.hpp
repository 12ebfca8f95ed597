#pragma once

#include <string>
#include <vector>

#include "curator/curation.hpp"
#include "curator/features.hpp"
#include "curator/rarity.hpp"
#include "curator/scenario.hpp"
#include "curator/scouts.hpp"

namespace curator {

// Per-transition scores for every scenario of a corpus, normalized corpus-wide
// by the 99th percentile of the raw values.
struct TransitionScoreTable {
    std::vector<std::string> scenario_ids;
    std::vector<std::vector<int>> transitions;
    std::vector<std::vector<double>> raw;
    std::vector<std::vector<double>> score;
    double p99_raw = 0.0;
};

// Expert action of transition t via the invertible bicycle model (clipped to
// the action limits).
Action expert_action(const Scenario& s, int t, const ActionLimits& limits = {});

// All expert actions of the corpus in deterministic (scenario, t) order.
std::vector<Action> collect_corpus_actions(const Corpus& corpus, const ActionLimits& limits,
                                           int workers = 1);

// Sharded histogram build: one shard per scenario, merged in corpus order.
ActionHistogram build_corpus_histogram(const Corpus& corpus, const ActionLimits& limits,
                                       int workers = 1);

TransitionScoreTable score_corpus_rarity(const Corpus& corpus, const ActionHistogram& hist,
                                         const ActionLimits& limits, int workers = 1);

TransitionScoreTable score_corpus_uncertainty(const Corpus& corpus,
                                              const std::vector<ScoutModel>& scouts,
                                              const FeatureConfig& cfg, int workers = 1);

// Adapters into the master-index strategy map.
StrategyScores to_strategy_scores(const TransitionScoreTable& table);
StrategyScores heuristic_strategy_scores(const Corpus& corpus,
                                         const std::vector<TimestepScores>& tables);

}  // namespace curator
