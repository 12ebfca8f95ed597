#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "curator/heuristics.hpp"
#include "curator/rng.hpp"
#include "curator/scenario.hpp"

namespace curator {

inline constexpr double kWeightFloor = 0.01;

// Linear-interpolation percentile between closest ranks (inclusive):
// position = q/100 * (n-1). Throws EmptyInput.
double percentile(std::span<const double> values, double q);

// Per-signal scenario aggregation of the heuristic table: P99 for the peak
// signals (volatility, interaction, off-road), standard deviation (clipped
// to [0,1]) for lane deviation, mean for density; then the weighted sum.
double aggregate_heuristic_scenario(const TimestepScores& scores, const HeuristicWeights& w);

// P99 / P95 aggregation used by the ensemble and rarity strategies.
double aggregate_percentile_scenario(std::span<const double> scores, double q);

struct IndexEntry {
    std::string scenario_id;
    int t = 0;
};

// Global list of valid contiguous transitions with per-strategy weights.
// A weight of 0 marks a timestep excluded for that strategy (undefined
// score); every included entry carries weight >= kWeightFloor.
struct MasterIndex {
    std::vector<IndexEntry> entries;  // sorted by (scenario_id, t)
    std::map<std::string, std::vector<double>> weights;
};

// Per-scenario timestep scores of one strategy, keyed by scenario id. Each
// scenario maps transitions (ascending t) to scores; entries absent from the
// map throw MissingScores.
struct StrategyScores {
    // (t, score, defined) triplets per scenario.
    struct Entry {
        std::vector<int> t;
        std::vector<double> score;
        std::vector<std::uint8_t> defined;
    };
    std::map<std::string, Entry> per_scenario;
};

MasterIndex build_master_index(const Corpus& corpus,
                               const std::map<std::string, StrategyScores>& strategies,
                               double epsilon = kWeightFloor, int workers = 1);

void save_master_index(const std::filesystem::path& path, const MasterIndex& idx);
MasterIndex load_master_index(const std::filesystem::path& path);

// Weighted sampling with replacement over index entries: P(e) = w_e / sum w.
// Deterministic given the seed.
class TimestepSampler {
public:
    TimestepSampler(const MasterIndex& idx, const std::string& strategy, std::uint64_t seed);

    std::size_t draw();  // position into entries()
    const IndexEntry& next() { return (*entries_)[included_[draw()]]; }
    const std::vector<IndexEntry>& entries() const { return *entries_; }
    std::size_t included_count() const { return included_.size(); }
    const IndexEntry& included_entry(std::size_t i) const { return (*entries_)[included_[i]]; }

private:
    const std::vector<IndexEntry>* entries_;
    std::vector<std::size_t> included_;
    std::vector<double> cumulative_;
    Rng rng_;
};

// Stochastic epoch: draws whole scenarios with replacement, P proportional
// to (score + epsilon), then yields that scenario's transitions shuffled.
class ScenarioEpochSampler {
public:
    struct ScenarioEntry {
        std::string id;
        std::vector<int> transitions;
        double score = 0.0;
    };

    ScenarioEpochSampler(std::vector<ScenarioEntry> entries, double epsilon, std::uint64_t seed);

    std::size_t draw_scenario();
    // Next block: the drawn scenario position and a fresh permutation of its
    // transitions.
    std::pair<std::size_t, std::vector<int>> next_block();
    IndexEntry next();  // flattened stream

    const std::vector<ScenarioEntry>& entries() const { return entries_; }

private:
    std::vector<ScenarioEntry> entries_;
    std::vector<double> cumulative_;
    Rng rng_;
    std::size_t current_ = 0;
    std::vector<int> pending_;
    std::size_t pending_pos_ = 0;
};

// Scenario score table (one aggregate per strategy family), persisted as CSV.
struct ScenarioScoreTable {
    std::vector<std::string> scenario_ids;
    std::vector<double> heuristic;
    std::vector<double> ensemble;
    std::vector<double> rarity;
};

void save_scenario_scores(const std::filesystem::path& path, const ScenarioScoreTable& t);
ScenarioScoreTable load_scenario_scores(const std::filesystem::path& path);

}  // namespace curator
