#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <json.hpp>

#include "curator/errors.hpp"
#include "curator/io_util.hpp"
#include "curator/pipeline.hpp"

using namespace curator;
namespace fs = std::filesystem;

namespace {

PipelineConfig small_config(const fs::path& root) {
    PipelineConfig cfg;
    cfg.root = root;
    cfg.num_workers = 1;
    cfg.seed = 5;
    cfg.gen.num_scenarios = 8;
    cfg.gen.num_timesteps = 41;
    cfg.gen.event_mix = {{EventKind::hard_brake, 0.25}};
    cfg.features.num_agents = 4;
    cfg.features.num_map_polylines = 4;
    cfg.features.map_points_per_polyline = 5;
    cfg.features.num_goal_points = 3;
    cfg.ensemble.num_folds = 3;
    cfg.ensemble.train.hidden = {16, 8};
    cfg.ensemble.train.num_epochs = 2;
    cfg.ensemble.train.batch_size = 16;
    return cfg;
}

fs::path fresh_root(const std::string& name) {
    const fs::path root = fs::temp_directory_path() / name;
    fs::remove_all(root);
    fs::create_directories(root);
    return root;
}

std::string slurp_dir(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::string all;
    for (const auto& f : files) {
        all += f.lexically_relative(dir).string();
        all += read_text_file(f);
    }
    return all;
}

}  // namespace

TEST_CASE("full pipeline produces every artifact and is idempotent") {
    const fs::path root = fresh_root("curator_pipe_full");
    const PipelineConfig cfg = small_config(root);
    run_pipeline(cfg, kAllStages);

    CHECK(fs::exists(cfg.corpus_path() / "ledger.csv"));
    CHECK(fs::exists(cfg.scores_path() / "heuristic"));
    CHECK(fs::exists(cfg.scores_path() / "histogram.json"));
    CHECK(fs::exists(cfg.scores_path() / "rarity" / "meta.json"));
    CHECK(fs::exists(cfg.checkpoints_path() / "scout_0.json"));
    CHECK(fs::exists(cfg.scores_path() / "uncertainty" / "meta.json"));
    CHECK(fs::exists(cfg.scores_path() / "scenario_scores.csv"));
    CHECK(fs::exists(cfg.index_path() / "master_index.csv"));
    CHECK(fs::exists(cfg.reports_path() / "eval_expert.csv"));
    CHECK(fs::exists(cfg.reports_path() / "report.csv"));
    CHECK(fs::exists(cfg.reports_path() / "report.json"));

    // Idempotence: re-running a stage rewrites identical bytes.
    const std::string before = slurp_dir(cfg.scores_path() / "heuristic");
    run_pipeline(cfg, {"score-heuristic"});
    CHECK(slurp_dir(cfg.scores_path() / "heuristic") == before);

    const std::string hist_before = read_text_file(cfg.scores_path() / "histogram.json");
    run_pipeline(cfg, {"build-histogram"});
    CHECK(read_text_file(cfg.scores_path() / "histogram.json") == hist_before);
}

TEST_CASE("stage dependencies are enforced with remediation hints") {
    const fs::path root = fresh_root("curator_pipe_deps");
    const PipelineConfig cfg = small_config(root);
    CHECK_THROWS_AS(run_pipeline(cfg, {"build-index"}), DependencyError);
    run_pipeline(cfg, {"gen"});
    try {
        run_pipeline(cfg, {"build-index"});
        FAIL("expected DependencyError");
    } catch (const DependencyError& e) {
        CHECK(std::string(e.what()).find("score-heuristic") != std::string::npos);
    }
    CHECK_THROWS_AS(run_pipeline(cfg, {"score-rarity"}), DependencyError);
    CHECK_THROWS_AS(run_pipeline(cfg, {"report"}), DependencyError);
    CHECK_THROWS_AS(run_pipeline(cfg, {"no-such-stage"}), ConfigError);
}

TEST_CASE("worker count does not change any pipeline output") {
    const fs::path root1 = fresh_root("curator_pipe_w1");
    const fs::path root8 = fresh_root("curator_pipe_w8");
    PipelineConfig cfg1 = small_config(root1);
    PipelineConfig cfg8 = small_config(root8);
    cfg8.num_workers = 8;
    const std::vector<std::string> stages{"gen",          "score-heuristic", "build-histogram",
                                          "score-rarity", "train-scouts",    "score-uncertainty",
                                          "aggregate",    "build-index"};
    run_pipeline(cfg1, stages);
    run_pipeline(cfg8, stages);
    CHECK(slurp_dir(root1) == slurp_dir(root8));
}

TEST_CASE("report: metrics table covers two strategies with identical CSV/JSON numbers") {
    const fs::path root = fresh_root("curator_pipe_report");
    const PipelineConfig cfg = small_config(root);
    run_pipeline(cfg, {"gen"});
    stage_eval(cfg, "expert", "expert");
    stage_eval(cfg, "constant:0,0", "constant");
    // Aggregates feed score distributions; build them first.
    run_pipeline(cfg, {"score-heuristic", "build-histogram", "score-rarity", "train-scouts",
                       "score-uncertainty", "aggregate"});
    stage_report(cfg);

    const CsvTable csv = read_csv(cfg.reports_path() / "report.csv");
    REQUIRE(csv.header.size() == 3);  // metric + 2 strategies
    CHECK(csv.rows.size() == 9);

    const auto doc = nlohmann::json::parse(read_text_file(cfg.reports_path() / "report.json"));
    for (const auto& row : csv.rows) {
        const std::string metric = row[0];
        for (std::size_t c = 1; c < csv.header.size(); ++c) {
            const double js = doc.at("metrics").at(metric).at(csv.header[c]).get<double>();
            CHECK(parse_double(row[c]) == js);
        }
    }
    CHECK(doc.contains("score_distributions"));
}

TEST_CASE("config parsing: overrides, fallbacks, and validation errors") {
    const std::string text = R"({
        "num_workers": 2,
        "seed": 9,
        "features": {"num_agents": 8},
        "scoring": {
            "heuristic": {"weights": {"volatility": 0.5, "lane_deviation": 0.37}},
            "ensemble": {"num_folds": 3, "hidden_layers": [32, 16]}
        },
        "sampler": {"epsilon": 0.05},
        "gen": {"num_scenarios": 4, "num_timesteps": 21,
                 "event_mix": {"cut_in": 0.5}, "road_kinds": ["straight"]}
    })";
    const PipelineConfig cfg = PipelineConfig::from_json_text(text, "test");
    CHECK(cfg.num_workers == 2);
    CHECK(cfg.seed == 9);
    CHECK(cfg.features.num_agents == 8);
    CHECK(cfg.heuristic_weights.volatility == 0.5);
    CHECK(cfg.heuristic_weights.lane_dev == 0.37);
    CHECK(cfg.ensemble.num_folds == 3);
    CHECK(cfg.ensemble.train.hidden == std::vector<int>{32, 16});
    CHECK(cfg.sampler_epsilon == 0.05);
    CHECK(cfg.gen.event_mix.at(EventKind::cut_in) == 0.5);
    CHECK(cfg.gen.seed == 9);

    // Weights that no longer sum to 1.
    CHECK_THROWS_AS(PipelineConfig::from_json_text(
                        R"({"scoring": {"heuristic": {"weights": {"volatility": 0.9}}}})", "t"),
                    ConfigError);
    CHECK_THROWS_AS(PipelineConfig::from_json_text("{ bad", "t"), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::from_json_text(
                        R"({"gen": {"event_mix": {"warp_drive": 1.0}}})", "t"),
                    ConfigError);
}
