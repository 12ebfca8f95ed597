#include "curator/scoring.hpp"

#include <cmath>

#include "curator/errors.hpp"
#include "curator/parallel.hpp"

namespace curator {

Action expert_action(const Scenario& s, int t, const ActionLimits& limits) {
    const AgentTrack& sdc = s.sdc();
    const AgentState& a = sdc.states[static_cast<std::size_t>(t)];
    const AgentState& b = sdc.states[static_cast<std::size_t>(t) + 1];
    const KinState s0{a.x, a.y, a.yaw, std::hypot(a.vx, a.vy)};
    const KinState s1{b.x, b.y, b.yaw, std::hypot(b.vx, b.vy)};
    return inverse_action(s0, s1, s.dt, limits).action;
}

std::vector<Action> collect_corpus_actions(const Corpus& corpus, const ActionLimits& limits,
                                           int workers) {
    std::vector<std::vector<Action>> slots(corpus.scenarios.size());
    parallel_for(corpus.scenarios.size(), workers, [&](std::size_t i) {
        const Scenario& s = corpus.scenarios[i];
        for (int t : enumerate_transitions(s)) slots[i].push_back(expert_action(s, t, limits));
    });
    std::vector<Action> out;
    for (const auto& shard : slots) out.insert(out.end(), shard.begin(), shard.end());
    return out;
}

ActionHistogram build_corpus_histogram(const Corpus& corpus, const ActionLimits& limits,
                                       int workers) {
    auto [accel_edges, yaw_edges] = default_edges(limits);
    std::vector<ActionHistogram> shards(corpus.scenarios.size());
    parallel_for(corpus.scenarios.size(), workers, [&](std::size_t i) {
        shards[i] = make_histogram(accel_edges, yaw_edges);
        const Scenario& s = corpus.scenarios[i];
        for (int t : enumerate_transitions(s)) shards[i].add(expert_action(s, t, limits));
    });
    ActionHistogram h = make_histogram(std::move(accel_edges), std::move(yaw_edges));
    for (const auto& shard : shards) h.merge(shard);
    return h;
}

namespace {

TransitionScoreTable normalize_table(const Corpus& corpus,
                                     std::vector<std::vector<int>> transitions,
                                     std::vector<std::vector<double>> raw) {
    TransitionScoreTable table;
    for (const Scenario& s : corpus.scenarios) table.scenario_ids.push_back(s.id);
    table.transitions = std::move(transitions);
    table.raw = std::move(raw);

    std::vector<double> all;
    for (const auto& shard : table.raw) all.insert(all.end(), shard.begin(), shard.end());
    if (all.empty()) throw EmptyInput("score table: corpus has no transitions");

    const RarityScores norm = normalize_rarity(all);  // same P99 + clip rule
    table.p99_raw = norm.p99_raw;
    table.score.resize(table.raw.size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < table.raw.size(); ++i) {
        table.score[i].assign(norm.score.begin() + static_cast<std::ptrdiff_t>(pos),
                              norm.score.begin() + static_cast<std::ptrdiff_t>(pos) +
                                  static_cast<std::ptrdiff_t>(table.raw[i].size()));
        pos += table.raw[i].size();
    }
    return table;
}

}  // namespace

TransitionScoreTable score_corpus_rarity(const Corpus& corpus, const ActionHistogram& hist,
                                         const ActionLimits& limits, int workers) {
    std::vector<std::vector<int>> transitions(corpus.scenarios.size());
    std::vector<std::vector<double>> raw(corpus.scenarios.size());
    parallel_for(corpus.scenarios.size(), workers, [&](std::size_t i) {
        const Scenario& s = corpus.scenarios[i];
        transitions[i] = enumerate_transitions(s);
        for (int t : transitions[i]) {
            raw[i].push_back(rarity_raw(hist, expert_action(s, t, limits)));
        }
    });
    return normalize_table(corpus, std::move(transitions), std::move(raw));
}

TransitionScoreTable score_corpus_uncertainty(const Corpus& corpus,
                                              const std::vector<ScoutModel>& scouts,
                                              const FeatureConfig& cfg, int workers) {
    if (scouts.size() < 2) throw TooFewModels("score_corpus_uncertainty: need K >= 2 scouts");
    std::vector<std::vector<int>> transitions(corpus.scenarios.size());
    std::vector<std::vector<double>> raw(corpus.scenarios.size());
    parallel_for(corpus.scenarios.size(), workers, [&](std::size_t i) {
        const Scenario& s = corpus.scenarios[i];
        transitions[i] = enumerate_transitions(s);
        std::vector<std::array<double, 2>> preds(scouts.size());
        for (int t : transitions[i]) {
            const std::vector<double> x = flatten(extract_state(s, t, cfg), cfg);
            for (std::size_t k = 0; k < scouts.size(); ++k) preds[k] = scouts[k].predict(x);
            raw[i].push_back(disagreement(preds));
        }
    });
    return normalize_table(corpus, std::move(transitions), std::move(raw));
}

StrategyScores to_strategy_scores(const TransitionScoreTable& table) {
    StrategyScores out;
    for (std::size_t i = 0; i < table.scenario_ids.size(); ++i) {
        StrategyScores::Entry e;
        e.t = table.transitions[i];
        e.score = table.score[i];
        e.defined.assign(e.t.size(), 1);
        out.per_scenario[table.scenario_ids[i]] = std::move(e);
    }
    return out;
}

StrategyScores heuristic_strategy_scores(const Corpus& corpus,
                                         const std::vector<TimestepScores>& tables) {
    if (tables.size() != corpus.scenarios.size()) {
        throw DimensionMismatch("heuristic_strategy_scores: table count mismatch");
    }
    StrategyScores out;
    for (std::size_t i = 0; i < corpus.scenarios.size(); ++i) {
        const TimestepScores& ts = tables[i];
        StrategyScores::Entry e;
        for (std::size_t t = 0; t < ts.combined.size(); ++t) {
            e.t.push_back(static_cast<int>(t));
            e.score.push_back(ts.combined[t]);
            e.defined.push_back(ts.combined_defined[t]);
        }
        out.per_scenario[corpus.scenarios[i].id] = std::move(e);
    }
    return out;
}

}  // namespace curator
