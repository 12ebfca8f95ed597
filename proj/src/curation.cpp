#include "curator/curation.hpp"

#include <algorithm>
#include <cmath>

#include "curator/errors.hpp"
#include "curator/io_util.hpp"
#include "curator/parallel.hpp"

namespace curator {

double percentile(std::span<const double> values, double q) {
    if (values.empty()) throw EmptyInput("percentile: empty input");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = std::clamp(q, 0.0, 100.0) / 100.0 * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    double v = sorted[lo];
    if (frac > 0.0 && lo + 1 < sorted.size()) v += frac * (sorted[lo + 1] - sorted[lo]);
    return v;
}

namespace {

std::vector<double> masked(const std::vector<double>& values,
                           const std::vector<std::uint8_t>& mask) {
    std::vector<double> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (mask[i]) out.push_back(values[i]);
    }
    return out;
}

double stddev(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace

double aggregate_heuristic_scenario(const TimestepScores& scores, const HeuristicWeights& w) {
    const auto vol = masked(scores.volatility, scores.vol_defined);
    const auto inter = masked(scores.interaction, scores.base_defined);
    const auto off = masked(scores.off_road, scores.base_defined);
    const auto lane = masked(scores.lane_dev, scores.base_defined);
    const auto den = masked(scores.density, scores.base_defined);
    if (vol.empty() || inter.empty()) {
        throw EmptyInput("aggregate_heuristic_scenario: no defined timesteps");
    }
    double mean_den = 0.0;
    for (double x : den) mean_den += x;
    mean_den /= static_cast<double>(den.size());

    const double agg = w.volatility * percentile(vol, 99.0) +
                       w.interaction * percentile(inter, 99.0) +
                       w.off_road * percentile(off, 99.0) +
                       w.lane_dev * std::clamp(stddev(lane), 0.0, 1.0) +
                       w.density * mean_den;
    return std::clamp(agg, 0.0, 1.0);
}

double aggregate_percentile_scenario(std::span<const double> scores, double q) {
    return percentile(scores, q);
}

MasterIndex build_master_index(const Corpus& corpus,
                               const std::map<std::string, StrategyScores>& strategies,
                               double epsilon, int workers) {
    // Per-scenario slots merged in corpus (id-sorted) order so the result is
    // independent of worker count.
    const std::size_t n = corpus.scenarios.size();
    std::vector<std::vector<IndexEntry>> entry_slots(n);
    std::map<std::string, std::vector<std::vector<double>>> weight_slots;
    for (const auto& [name, scores] : strategies) {
        weight_slots[name].resize(n);
    }
    std::vector<std::vector<double>> uniform_slots(n);

    std::vector<std::string> missing(n);
    parallel_for(n, workers, [&](std::size_t i) {
        const Scenario& s = corpus.scenarios[i];
        const std::vector<int> trans = enumerate_transitions(s);
        for (int t : trans) entry_slots[i].push_back({s.id, t});
        uniform_slots[i].assign(trans.size(), 1.0);
        for (const auto& [name, scores] : strategies) {
            auto it = scores.per_scenario.find(s.id);
            if (it == scores.per_scenario.end()) {
                missing[i] = s.id + " (strategy " + name + ")";
                return;
            }
            const StrategyScores::Entry& e = it->second;
            auto& weights = weight_slots[name][i];
            weights.assign(trans.size(), 0.0);
            for (std::size_t k = 0; k < trans.size(); ++k) {
                // Score rows are keyed by timestep.
                auto pos = std::lower_bound(e.t.begin(), e.t.end(), trans[k]);
                if (pos == e.t.end() || *pos != trans[k]) continue;  // excluded
                const std::size_t row = static_cast<std::size_t>(pos - e.t.begin());
                if (!e.defined[row]) continue;  // excluded for this strategy
                weights[k] = e.score[row] + epsilon;
            }
        }
    });
    for (const std::string& m : missing) {
        if (!m.empty()) throw MissingScores("build_master_index: no scores for scenario " + m);
    }

    MasterIndex idx;
    for (std::size_t i = 0; i < n; ++i) {
        idx.entries.insert(idx.entries.end(), entry_slots[i].begin(), entry_slots[i].end());
    }
    auto& uniform = idx.weights["uniform"];
    for (std::size_t i = 0; i < n; ++i) {
        uniform.insert(uniform.end(), uniform_slots[i].begin(), uniform_slots[i].end());
    }
    for (auto& [name, slots] : weight_slots) {
        auto& w = idx.weights[name];
        for (std::size_t i = 0; i < n; ++i) w.insert(w.end(), slots[i].begin(), slots[i].end());
    }
    return idx;
}

void save_master_index(const std::filesystem::path& path, const MasterIndex& idx) {
    CsvTable table;
    table.header = {"scenario_id", "t"};
    std::vector<const std::vector<double>*> cols;
    for (const auto& [name, w] : idx.weights) {
        table.header.push_back("w_" + name);
        cols.push_back(&w);
    }
    for (std::size_t i = 0; i < idx.entries.size(); ++i) {
        std::vector<std::string> row{idx.entries[i].scenario_id, std::to_string(idx.entries[i].t)};
        for (const auto* col : cols) row.push_back(format_double((*col)[i]));
        table.rows.push_back(std::move(row));
    }
    write_csv(path, table);
}

MasterIndex load_master_index(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    MasterIndex idx;
    std::vector<std::pair<int, std::string>> weight_cols;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (table.header[c].rfind("w_", 0) == 0) {
            weight_cols.push_back({static_cast<int>(c), table.header[c].substr(2)});
        }
    }
    for (const auto& row : table.rows) {
        idx.entries.push_back({row[0], static_cast<int>(parse_int(row[1]))});
        for (const auto& [c, name] : weight_cols) {
            idx.weights[name].push_back(parse_double(row[static_cast<std::size_t>(c)]));
        }
    }
    return idx;
}

TimestepSampler::TimestepSampler(const MasterIndex& idx, const std::string& strategy,
                                 std::uint64_t seed)
    : entries_(&idx.entries), rng_(seed) {
    auto it = idx.weights.find(strategy);
    if (it == idx.weights.end()) {
        throw MissingScores("TimestepSampler: no weights for strategy '" + strategy + "'");
    }
    const std::vector<double>& w = it->second;
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] <= 0.0) continue;  // excluded timestep
        total += w[i];
        included_.push_back(i);
        cumulative_.push_back(total);
    }
    if (included_.empty()) throw EmptyInput("TimestepSampler: no positive weights");
}

std::size_t TimestepSampler::draw() {
    const double u = rng_.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
}

ScenarioEpochSampler::ScenarioEpochSampler(std::vector<ScenarioEntry> entries, double epsilon,
                                           std::uint64_t seed)
    : entries_(std::move(entries)), rng_(seed) {
    if (entries_.empty()) throw EmptyInput("ScenarioEpochSampler: no scenarios");
    double total = 0.0;
    bool any_transitions = false;
    for (const auto& e : entries_) {
        total += e.score + epsilon;
        cumulative_.push_back(total);
        any_transitions = any_transitions || !e.transitions.empty();
    }
    if (!(total > 0.0)) throw EmptyInput("ScenarioEpochSampler: nonpositive total weight");
    if (!any_transitions) throw EmptyInput("ScenarioEpochSampler: no scenario has transitions");
}

std::size_t ScenarioEpochSampler::draw_scenario() {
    const double u = rng_.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
}

std::pair<std::size_t, std::vector<int>> ScenarioEpochSampler::next_block() {
    while (true) {
        const std::size_t s = draw_scenario();
        std::vector<int> block = entries_[s].transitions;
        if (block.empty()) continue;  // scenario with no transitions contributes nothing
        rng_.shuffle(block);
        return {s, std::move(block)};
    }
}

IndexEntry ScenarioEpochSampler::next() {
    if (pending_pos_ >= pending_.size()) {
        auto [s, block] = next_block();
        current_ = s;
        pending_ = std::move(block);
        pending_pos_ = 0;
    }
    return {entries_[current_].id, pending_[pending_pos_++]};
}

void save_scenario_scores(const std::filesystem::path& path, const ScenarioScoreTable& t) {
    CsvTable table;
    table.header = {"scenario_id", "heuristic", "ensemble", "rarity"};
    for (std::size_t i = 0; i < t.scenario_ids.size(); ++i) {
        table.rows.push_back({t.scenario_ids[i], format_double(t.heuristic[i]),
                              format_double(t.ensemble[i]), format_double(t.rarity[i])});
    }
    write_csv(path, table);
}

ScenarioScoreTable load_scenario_scores(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    ScenarioScoreTable t;
    for (const auto& row : table.rows) {
        if (row.size() != 4) throw SchemaError(path.string() + ": bad scenario score row");
        t.scenario_ids.push_back(row[0]);
        t.heuristic.push_back(parse_double(row[1]));
        t.ensemble.push_back(parse_double(row[2]));
        t.rarity.push_back(parse_double(row[3]));
    }
    return t;
}

}  // namespace curator
