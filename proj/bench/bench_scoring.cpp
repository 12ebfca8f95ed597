// Compares the serial reference path (workers = 1) against the OpenMP path
// on the corpus-level kernels: heuristic scoring, histogram build, rarity
// scoring and index construction.

#include <chrono>
#include <cstdio>
#include <filesystem>

#include "curator/curation.hpp"
#include "curator/heuristics.hpp"
#include "curator/scoring.hpp"
#include "curator/synth.hpp"

using namespace curator;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class Fn>
double timed(const char* name, int workers, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const double secs = seconds_since(start);
    std::printf("  %-24s workers=%d  %8.3fs\n", name, workers, secs);
    return secs;
}

}  // namespace

int main(int argc, char** argv) {
    int scenarios = 200;
    int max_workers = 8;
    if (argc > 1) scenarios = std::atoi(argv[1]);
    if (argc > 2) max_workers = std::atoi(argv[2]);

    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "curator_bench";
    std::filesystem::remove_all(dir);

    CorpusSpec spec;
    spec.num_scenarios = scenarios;
    spec.num_timesteps = 91;
    spec.seed = 7;
    spec.event_mix = {{EventKind::hard_brake, 0.05},
                      {EventKind::cut_in, 0.05},
                      {EventKind::lane_change, 0.05}};

    std::printf("generating %d scenarios...\n", scenarios);
    generate_corpus(spec, dir, max_workers);
    const Corpus corpus = load_corpus(dir);

    const HeuristicConstants hc;
    const HeuristicWeights hw;
    const ActionLimits limits;

    for (int workers : {1, max_workers}) {
        std::printf("--- workers = %d ---\n", workers);
        std::vector<TimestepScores> tables;
        timed("score_corpus_heuristic", workers,
              [&] { tables = score_corpus_heuristic(corpus, hc, hw, workers); });
        ActionHistogram hist = make_histogram({}, {});
        timed("build_corpus_histogram", workers,
              [&] { hist = build_corpus_histogram(corpus, limits, workers); });
        TransitionScoreTable rarity;
        timed("score_corpus_rarity", workers,
              [&] { rarity = score_corpus_rarity(corpus, hist, limits, workers); });
        std::map<std::string, StrategyScores> strategies;
        strategies["H"] = heuristic_strategy_scores(corpus, tables);
        strategies["AR"] = to_strategy_scores(rarity);
        timed("build_master_index", workers,
              [&] { (void)build_master_index(corpus, strategies, kWeightFloor, workers); });
    }

    std::filesystem::remove_all(dir);
    return 0;
}
