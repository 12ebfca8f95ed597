#include "curator/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "curator/errors.hpp"
#include "curator/io_util.hpp"

namespace curator {

using json = nlohmann::json;

namespace {

template <class T>
void read_if(const json& j, const char* key, T& out) {
    auto it = j.find(key);
    if (it != j.end()) out = it->get<T>();
}

void read_path(const json& j, const char* key, std::filesystem::path& out) {
    auto it = j.find(key);
    if (it != j.end()) out = it->get<std::string>();
}

}  // namespace

void PipelineConfig::validate() const {
    try {
        heuristic_weights.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    if (ensemble.num_folds < 2) throw ConfigError("ensemble.num_folds must be >= 2");
    if (ensemble.train.learning_rate <= 0.0 || ensemble.train.batch_size <= 0 ||
        ensemble.train.num_epochs <= 0 || ensemble.k_samples_per_scenario <= 0) {
        throw ConfigError("ensemble training parameters must be positive");
    }
    if (rarity_alpha <= 0.0) throw ConfigError("rarity smoothing_alpha must be positive");
    if (sampler_epsilon <= 0.0) throw ConfigError("sampler epsilon must be positive");
    if (num_workers < 1) throw ConfigError("num_workers must be >= 1");
    if (features.num_agents <= 0 || features.num_map_polylines <= 0 ||
        features.map_points_per_polyline < 2 || features.num_goal_points <= 0) {
        throw ConfigError("feature dimensions must be positive (P >= 2)");
    }
    try {
        gen.validate();
    } catch (const SpecError& e) {
        throw ConfigError(e.what());
    }
}

PipelineConfig PipelineConfig::from_json_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    PipelineConfig cfg;
    try {
        read_if(doc, "num_workers", cfg.num_workers);
        read_if(doc, "seed", cfg.seed);
        if (doc.contains("paths")) {
            const json& p = doc["paths"];
            read_path(p, "corpus", cfg.corpus_dir);
            read_path(p, "scores", cfg.scores_dir);
            read_path(p, "index", cfg.index_dir);
            read_path(p, "checkpoints", cfg.checkpoints_dir);
            read_path(p, "reports", cfg.reports_dir);
        }
        if (doc.contains("features")) {
            const json& f = doc["features"];
            read_if(f, "num_agents", cfg.features.num_agents);
            read_if(f, "num_map_polylines", cfg.features.num_map_polylines);
            read_if(f, "map_points_per_polyline", cfg.features.map_points_per_polyline);
            read_if(f, "num_goal_points", cfg.features.num_goal_points);
            read_if(f, "tl_lookahead_m", cfg.features.tl_lookahead_m);
        }
        if (doc.contains("action_space")) {
            const json& a = doc["action_space"];
            read_if(a, "max_accel", cfg.action_space.max_accel);
            read_if(a, "min_accel", cfg.action_space.min_accel);
            read_if(a, "max_yaw_rate", cfg.action_space.max_yaw_rate);
        }
        if (doc.contains("scoring")) {
            const json& s = doc["scoring"];
            if (s.contains("heuristic")) {
                const json& h = s["heuristic"];
                if (h.contains("weights")) {
                    const json& w = h["weights"];
                    read_if(w, "volatility", cfg.heuristic_weights.volatility);
                    read_if(w, "interaction", cfg.heuristic_weights.interaction);
                    read_if(w, "off_road", cfg.heuristic_weights.off_road);
                    read_if(w, "lane_deviation", cfg.heuristic_weights.lane_dev);
                    read_if(w, "density", cfg.heuristic_weights.density);
                }
                if (h.contains("constants")) {
                    const json& c = h["constants"];
                    read_if(c, "jerk_norm", cfg.heuristic_constants.jerk_norm);
                    read_if(c, "yaw_accel_norm", cfg.heuristic_constants.yaw_accel_norm);
                    read_if(c, "interaction_norm", cfg.heuristic_constants.interaction_norm);
                    read_if(c, "offroad_thresh", cfg.heuristic_constants.offroad_thresh);
                    read_if(c, "lane_dev_norm", cfg.heuristic_constants.lane_dev_norm);
                    read_if(c, "density_norm", cfg.heuristic_constants.density_norm);
                }
            }
            if (s.contains("ensemble")) {
                const json& e = s["ensemble"];
                read_if(e, "num_folds", cfg.ensemble.num_folds);
                read_if(e, "hidden_layers", cfg.ensemble.train.hidden);
                read_if(e, "learning_rate", cfg.ensemble.train.learning_rate);
                read_if(e, "weight_decay", cfg.ensemble.train.weight_decay);
                read_if(e, "batch_size", cfg.ensemble.train.batch_size);
                read_if(e, "num_epochs", cfg.ensemble.train.num_epochs);
                read_if(e, "k_samples_per_scenario", cfg.ensemble.k_samples_per_scenario);
            }
            if (s.contains("rarity")) {
                read_if(s["rarity"], "smoothing_alpha", cfg.rarity_alpha);
            }
        }
        if (doc.contains("reward")) {
            const json& r = doc["reward"];
            read_if(r, "progress", cfg.reward_weights.progress);
            read_if(r, "safety", cfg.reward_weights.safety);
            read_if(r, "accel_comfort", cfg.reward_weights.accel_comfort);
            read_if(r, "jerk_comfort", cfg.reward_weights.jerk_comfort);
            read_if(r, "lane", cfg.reward_weights.lane);
            read_if(r, "red_light", cfg.reward_weights.red_light);
        }
        if (doc.contains("sampler")) {
            read_if(doc["sampler"], "epsilon", cfg.sampler_epsilon);
        }
        if (doc.contains("gen")) {
            const json& g = doc["gen"];
            read_if(g, "num_scenarios", cfg.gen.num_scenarios);
            read_if(g, "num_timesteps", cfg.gen.num_timesteps);
            if (g.contains("event_mix")) {
                cfg.gen.event_mix.clear();
                for (const auto& [key, value] : g["event_mix"].items()) {
                    cfg.gen.event_mix[event_kind_from_string(key)] = value.get<double>();
                }
            }
            if (g.contains("road_kinds")) {
                cfg.gen.road_kinds.clear();
                for (const auto& rk : g["road_kinds"]) {
                    cfg.gen.road_kinds.insert(road_kind_from_string(rk.get<std::string>()));
                }
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    } catch (const SpecError& e) {
        throw ConfigError(origin + ": " + std::string(e.what()));
    }
    cfg.gen.seed = cfg.seed;
    cfg.ensemble.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return from_json_text(text, path.string());
}

namespace {

void require_artifact(const std::filesystem::path& p, const std::string& producer) {
    if (!std::filesystem::exists(p)) {
        throw DependencyError("missing " + p.string() + "; run 'curator " + producer + "' first");
    }
}

Corpus load_corpus_checked(const PipelineConfig& cfg) {
    require_artifact(cfg.corpus_path(), "gen");
    Corpus corpus = load_corpus(cfg.corpus_path());
    if (corpus.scenarios.empty()) {
        throw DependencyError("corpus at " + cfg.corpus_path().string() + " is empty; run 'curator gen'");
    }
    return corpus;
}

}  // namespace

void save_transition_scores(const std::filesystem::path& dir, const TransitionScoreTable& table) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    for (std::size_t i = 0; i < table.scenario_ids.size(); ++i) {
        CsvTable csv;
        csv.header = {"t", "raw", "score"};
        for (std::size_t k = 0; k < table.transitions[i].size(); ++k) {
            csv.rows.push_back({std::to_string(table.transitions[i][k]),
                                format_double(table.raw[i][k]), format_double(table.score[i][k])});
        }
        write_csv(dir / (table.scenario_ids[i] + ".csv"), csv);
    }
    json meta;
    meta["p99_raw"] = table.p99_raw;
    write_text_file(dir / "meta.json", meta.dump(1) + "\n");
}

StrategyScores load_transition_scores(const std::filesystem::path& dir,
                                      const std::vector<std::string>& scenario_ids) {
    StrategyScores out;
    for (const std::string& id : scenario_ids) {
        const std::filesystem::path p = dir / (id + ".csv");
        if (!std::filesystem::exists(p)) continue;  // caller reports missing scenarios
        const CsvTable csv = read_csv(p);
        StrategyScores::Entry e;
        for (const auto& row : csv.rows) {
            e.t.push_back(static_cast<int>(parse_int(row[0])));
            e.score.push_back(parse_double(row[2]));
            e.defined.push_back(1);
        }
        out.per_scenario[id] = std::move(e);
    }
    return out;
}

void stage_gen(const PipelineConfig& cfg) {
    CorpusSpec spec = cfg.gen;
    spec.seed = cfg.seed;
    generate_corpus(spec, cfg.corpus_path(), cfg.num_workers);
}

void stage_score_heuristic(const PipelineConfig& cfg) {
    const Corpus corpus = load_corpus_checked(cfg);
    const auto tables =
        score_corpus_heuristic(corpus, cfg.heuristic_constants, cfg.heuristic_weights,
                               cfg.num_workers);
    const std::filesystem::path dir = cfg.scores_path() / "heuristic";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    for (std::size_t i = 0; i < corpus.scenarios.size(); ++i) {
        save_score_table(dir / (corpus.scenarios[i].id + ".csv"), tables[i]);
    }
}

void stage_build_histogram(const PipelineConfig& cfg) {
    const Corpus corpus = load_corpus_checked(cfg);
    ActionHistogram h = build_corpus_histogram(corpus, cfg.action_space, cfg.num_workers);
    h.smoothing_alpha = cfg.rarity_alpha;
    std::error_code ec;
    std::filesystem::create_directories(cfg.scores_path(), ec);
    save_histogram(cfg.scores_path() / "histogram.json", h);
}

void stage_score_rarity(const PipelineConfig& cfg) {
    const Corpus corpus = load_corpus_checked(cfg);
    require_artifact(cfg.scores_path() / "histogram.json", "build-histogram");
    const ActionHistogram h = load_histogram(cfg.scores_path() / "histogram.json");
    const TransitionScoreTable table =
        score_corpus_rarity(corpus, h, cfg.action_space, cfg.num_workers);
    save_transition_scores(cfg.scores_path() / "rarity", table);
}

void stage_train_scouts(const PipelineConfig& cfg) {
    const Corpus corpus = load_corpus_checked(cfg);
    EnsembleSpec spec = cfg.ensemble;
    spec.seed = cfg.seed;
    const EnsembleResult result =
        train_ensemble(corpus, spec, cfg.features, cfg.action_space, cfg.num_workers);
    std::error_code ec;
    std::filesystem::create_directories(cfg.checkpoints_path(), ec);
    for (std::size_t k = 0; k < result.scouts.size(); ++k) {
        save_scout(cfg.checkpoints_path() / ("scout_" + std::to_string(k) + ".json"),
                   result.scouts[k]);
    }
    json meta;
    meta["final_losses"] = result.final_losses;
    json folds = json::object();
    for (std::size_t i = 0; i < corpus.scenarios.size(); ++i) {
        folds[corpus.scenarios[i].id] = result.fold_of_scenario[i];
    }
    meta["fold_of_scenario"] = std::move(folds);
    write_text_file(cfg.checkpoints_path() / "ensemble_meta.json", meta.dump(1) + "\n");
}

std::vector<ScoutModel> load_scout_checkpoints(const std::filesystem::path& dir) {
    std::vector<ScoutModel> scouts;
    for (int k = 0;; ++k) {
        const std::filesystem::path p = dir / ("scout_" + std::to_string(k) + ".json");
        if (!std::filesystem::exists(p)) break;
        scouts.push_back(load_scout(p));
    }
    return scouts;
}

void stage_score_uncertainty(const PipelineConfig& cfg) {
    const Corpus corpus = load_corpus_checked(cfg);
    require_artifact(cfg.checkpoints_path() / "scout_0.json", "train-scouts");
    const std::vector<ScoutModel> scouts = load_scout_checkpoints(cfg.checkpoints_path());
    const TransitionScoreTable table =
        score_corpus_uncertainty(corpus, scouts, cfg.features, cfg.num_workers);
    save_transition_scores(cfg.scores_path() / "uncertainty", table);
}

TimestepScores load_heuristic_table(const PipelineConfig& cfg, const std::string& scenario_id) {
    const std::filesystem::path p = cfg.scores_path() / "heuristic" / (scenario_id + ".csv");
    require_artifact(p, "score-heuristic");
    return load_score_table(p);
}

void stage_aggregate(const PipelineConfig& cfg) {
    const Corpus corpus = load_corpus_checked(cfg);
    std::vector<std::string> ids;
    for (const Scenario& s : corpus.scenarios) ids.push_back(s.id);

    require_artifact(cfg.scores_path() / "heuristic", "score-heuristic");
    require_artifact(cfg.scores_path() / "rarity", "score-rarity");
    require_artifact(cfg.scores_path() / "uncertainty", "score-uncertainty");
    const StrategyScores rarity = load_transition_scores(cfg.scores_path() / "rarity", ids);
    const StrategyScores uncert = load_transition_scores(cfg.scores_path() / "uncertainty", ids);

    ScenarioScoreTable table;
    for (const std::string& id : ids) {
        const TimestepScores hs = load_heuristic_table(cfg, id);
        auto rit = rarity.per_scenario.find(id);
        auto uit = uncert.per_scenario.find(id);
        if (rit == rarity.per_scenario.end()) {
            throw MissingScores("aggregate: no rarity scores for " + id);
        }
        if (uit == uncert.per_scenario.end()) {
            throw MissingScores("aggregate: no uncertainty scores for " + id);
        }
        table.scenario_ids.push_back(id);
        table.heuristic.push_back(aggregate_heuristic_scenario(hs, cfg.heuristic_weights));
        table.ensemble.push_back(aggregate_percentile_scenario(uit->second.score, 99.0));
        table.rarity.push_back(aggregate_percentile_scenario(rit->second.score, 95.0));
    }
    save_scenario_scores(cfg.scores_path() / "scenario_scores.csv", table);
}

void stage_build_index(const PipelineConfig& cfg) {
    const Corpus corpus = load_corpus_checked(cfg);
    std::vector<std::string> ids;
    for (const Scenario& s : corpus.scenarios) ids.push_back(s.id);

    require_artifact(cfg.scores_path() / "heuristic", "score-heuristic");
    require_artifact(cfg.scores_path() / "rarity", "score-rarity");
    require_artifact(cfg.scores_path() / "uncertainty", "score-uncertainty");

    std::vector<TimestepScores> heuristic_tables;
    for (const std::string& id : ids) heuristic_tables.push_back(load_heuristic_table(cfg, id));

    std::map<std::string, StrategyScores> strategies;
    strategies["H"] = heuristic_strategy_scores(corpus, heuristic_tables);
    strategies["AR"] = load_transition_scores(cfg.scores_path() / "rarity", ids);
    strategies["E"] = load_transition_scores(cfg.scores_path() / "uncertainty", ids);

    const MasterIndex idx =
        build_master_index(corpus, strategies, cfg.sampler_epsilon, cfg.num_workers);
    std::error_code ec;
    std::filesystem::create_directories(cfg.index_path(), ec);
    save_master_index(cfg.index_path() / "master_index.csv", idx);
}

PolicyFactory make_policy_factory(const PipelineConfig& cfg, const std::string& policy_spec) {
    if (policy_spec == "expert") return expert_replay_policy(cfg.action_space);
    if (policy_spec.rfind("constant:", 0) == 0) {
        const std::string args = policy_spec.substr(9);
        const std::size_t comma = args.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("constant policy expects 'constant:accel,yaw_rate'");
        }
        Action a;
        a.accel = parse_double(args.substr(0, comma));
        a.yaw_rate = parse_double(args.substr(comma + 1));
        if (!cfg.action_space.contains(a.accel, a.yaw_rate)) {
            throw ConfigError("constant policy action outside limits");
        }
        return constant_policy(a);
    }
    // Otherwise a scout checkpoint path.
    require_artifact(policy_spec, "train-scouts");
    return mlp_policy(load_scout(policy_spec), cfg.features, cfg.action_space);
}

namespace {

json metrics_to_json(const EvalMetrics& m) {
    json j;
    j["collision_rate"] = m.collision_rate;
    j["offroad_rate"] = m.offroad_rate;
    j["success_rate"] = m.success_rate;
    j["red_light_violation_rate"] = m.red_light_violation_rate;
    j["progression_m"] = m.progression_m;
    j["dist_to_goal_m"] = m.dist_to_goal_m;
    j["route_adherence_m"] = m.route_adherence_m;
    j["max_jerk"] = m.max_jerk;
    j["max_lat_accel"] = m.max_lat_accel;
    return j;
}

const std::vector<std::string> kMetricNames = {
    "collision_rate", "offroad_rate",      "success_rate",
    "red_light_violation_rate",            "progression_m",
    "dist_to_goal_m", "route_adherence_m", "max_jerk",
    "max_lat_accel"};

}  // namespace

void save_eval_report(const std::filesystem::path& csv_path,
                      const std::filesystem::path& json_path, const EvalReport& report) {
    CsvTable csv;
    csv.header = {"scenario_id", "collision",       "offroad",       "success",
                  "red_light_violation", "progression_m", "dist_to_goal_m",
                  "route_adherence_m",   "max_jerk",      "max_lat_accel",
                  "mean_reward"};
    for (const ScenarioMetrics& m : report.per_scenario) {
        csv.rows.push_back({m.scenario_id, m.collision ? "1" : "0", m.offroad ? "1" : "0",
                            m.success ? "1" : "0", m.red_light_violation ? "1" : "0",
                            format_double(m.progression_m), format_double(m.dist_to_goal_m),
                            format_double(m.route_adherence_m), format_double(m.max_jerk),
                            format_double(m.max_lat_accel), format_double(m.mean_reward)});
    }
    const EvalMetrics& a = report.aggregate;
    csv.rows.push_back({"aggregate", format_double(a.collision_rate),
                        format_double(a.offroad_rate), format_double(a.success_rate),
                        format_double(a.red_light_violation_rate), format_double(a.progression_m),
                        format_double(a.dist_to_goal_m), format_double(a.route_adherence_m),
                        format_double(a.max_jerk), format_double(a.max_lat_accel), ""});
    write_csv(csv_path, csv);

    json doc;
    doc["aggregate"] = metrics_to_json(report.aggregate);
    json rows = json::array();
    for (const ScenarioMetrics& m : report.per_scenario) {
        json r;
        r["scenario_id"] = m.scenario_id;
        r["collision"] = m.collision;
        r["offroad"] = m.offroad;
        r["success"] = m.success;
        r["red_light_violation"] = m.red_light_violation;
        r["progression_m"] = m.progression_m;
        r["dist_to_goal_m"] = m.dist_to_goal_m;
        r["route_adherence_m"] = m.route_adherence_m;
        r["max_jerk"] = m.max_jerk;
        r["max_lat_accel"] = m.max_lat_accel;
        r["mean_reward"] = m.mean_reward;
        rows.push_back(std::move(r));
    }
    doc["per_scenario"] = std::move(rows);
    write_text_file(json_path, doc.dump(1) + "\n");
}

void stage_eval(const PipelineConfig& cfg, const std::string& policy_spec,
                const std::string& label) {
    const Corpus corpus = load_corpus_checked(cfg);
    const PolicyFactory factory = make_policy_factory(cfg, policy_spec);
    const EvalReport report =
        evaluate(corpus, factory, cfg.features, cfg.action_space, cfg.reward_weights,
                 cfg.reward_params, cfg.eval_params, cfg.num_workers);
    std::error_code ec;
    std::filesystem::create_directories(cfg.reports_path(), ec);
    save_eval_report(cfg.reports_path() / ("eval_" + label + ".csv"),
                     cfg.reports_path() / ("eval_" + label + ".json"), report);
}

void stage_report(const PipelineConfig& cfg) {
    // Collect eval_<label>.json emissions.
    std::vector<std::pair<std::string, json>> evals;
    if (std::filesystem::exists(cfg.reports_path())) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(cfg.reports_path())) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("eval_", 0) == 0 && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            const std::string name = f.filename().string();
            const std::string label = name.substr(5, name.size() - 5 - 5);
            evals.push_back({label, json::parse(read_text_file(f))});
        }
    }
    if (evals.empty()) {
        throw DependencyError("no eval outputs under " + cfg.reports_path().string() +
                              "; run 'curator eval' first");
    }

    CsvTable csv;
    csv.header = {"metric"};
    for (const auto& [label, _] : evals) csv.header.push_back(label);
    json metrics = json::object();
    for (const std::string& metric : kMetricNames) {
        std::vector<std::string> row{metric};
        json per_label = json::object();
        for (const auto& [label, doc] : evals) {
            const double v = doc.at("aggregate").at(metric).get<double>();
            if (!std::isfinite(v)) throw DataError("report: non-finite metric " + metric);
            row.push_back(format_double(v));
            per_label[label] = v;
        }
        csv.rows.push_back(std::move(row));
        metrics[metric] = std::move(per_label);
    }
    write_csv(cfg.reports_path() / "report.csv", csv);

    json doc;
    doc["metrics"] = std::move(metrics);

    // Score-distribution summaries per strategy, when aggregates exist.
    const std::filesystem::path scores_csv = cfg.scores_path() / "scenario_scores.csv";
    if (std::filesystem::exists(scores_csv)) {
        const ScenarioScoreTable t = load_scenario_scores(scores_csv);
        auto summarize = [](const std::vector<double>& v) {
            json s;
            s["count"] = v.size();
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= v.empty() ? 1.0 : static_cast<double>(v.size());
            s["mean"] = mean;
            if (!v.empty()) {
                s["p50"] = percentile(v, 50.0);
                s["p99"] = percentile(v, 99.0);
                s["max"] = *std::max_element(v.begin(), v.end());
            }
            return s;
        };
        json dist;
        dist["HS"] = summarize(t.heuristic);
        dist["ES"] = summarize(t.ensemble);
        dist["ARS"] = summarize(t.rarity);
        doc["score_distributions"] = std::move(dist);

        CsvTable dcsv;
        dcsv.header = {"strategy", "count", "mean", "p50", "p99", "max"};
        for (const std::string& name : {std::string("HS"), std::string("ES"), std::string("ARS")}) {
            const json& s = doc["score_distributions"][name];
            dcsv.rows.push_back({name, std::to_string(s["count"].get<std::size_t>()),
                                 format_double(s["mean"].get<double>()),
                                 format_double(s["p50"].get<double>()),
                                 format_double(s["p99"].get<double>()),
                                 format_double(s["max"].get<double>())});
        }
        write_csv(cfg.reports_path() / "score_distributions.csv", dcsv);
    }
    write_text_file(cfg.reports_path() / "report.json", doc.dump(1) + "\n");
}

void run_pipeline(const PipelineConfig& cfg, const std::vector<std::string>& stages) {
    cfg.validate();
    for (const std::string& stage : stages) {
        const auto start = std::chrono::steady_clock::now();
        if (stage == "gen") stage_gen(cfg);
        else if (stage == "score-heuristic") stage_score_heuristic(cfg);
        else if (stage == "build-histogram") stage_build_histogram(cfg);
        else if (stage == "score-rarity") stage_score_rarity(cfg);
        else if (stage == "train-scouts") stage_train_scouts(cfg);
        else if (stage == "score-uncertainty") stage_score_uncertainty(cfg);
        else if (stage == "aggregate") stage_aggregate(cfg);
        else if (stage == "build-index") stage_build_index(cfg);
        else if (stage == "eval") stage_eval(cfg, "expert", "expert");
        else if (stage == "report") stage_report(cfg);
        else throw ConfigError("unknown stage '" + stage + "'");
        const auto end = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(end - start).count();
        std::fprintf(stderr, "[curator] stage %-17s %8.2fs\n", stage.c_str(), secs);
    }
}

}  // namespace curator
