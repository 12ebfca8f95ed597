#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "curator/errors.hpp"
#include "curator/eval.hpp"
#include "curator/heuristics.hpp"
#include "curator/io_util.hpp"
#include "curator/synth.hpp"

using namespace curator;
namespace fs = std::filesystem;

namespace {

Scenario straight_scene(int T = 91, double v = 10.0) {
    Scenario s;
    s.id = "rw";
    s.dt = 0.1;
    s.num_timesteps = T;
    s.sdc_index = 0;
    AgentTrack sdc;
    sdc.type = AgentType::vehicle;
    sdc.length = 4.8;
    sdc.width = 2.0;
    for (int t = 0; t < T; ++t) {
        AgentState st;
        st.valid = true;
        st.x = v * 0.1 * static_cast<double>(t);
        st.y = 0.0;
        st.yaw = 0.0;
        st.vx = v;
        st.vy = 0.0;
        sdc.states.push_back(st);
    }
    s.agents.push_back(sdc);
    s.map.push_back({PolylineKind::lane_center, {{-50.0, 0.0}, {500.0, 0.0}}});
    s.map.push_back({PolylineKind::road_edge, {{500.0, 4.0}, {-50.0, 4.0}}});
    s.map.push_back({PolylineKind::road_edge, {{-50.0, -4.0}, {500.0, -4.0}}});
    s.traffic_lights.assign(static_cast<std::size_t>(T), {});
    s.route = {{0.0, 0.0}, {v * 0.1 * (T - 1), 0.0}};
    return s;
}

fs::path temp_corpus(const std::string& name, const CorpusSpec& spec) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    generate_corpus(spec, dir);
    return dir;
}

}  // namespace

TEST_CASE("reward: clean cruising toward the goal pays exactly the speed") {
    const Scenario s = straight_scene();
    RewardContext ctx;
    ctx.scenario = &s;
    ctx.t = 1;
    ctx.state = {1.0, 0.0, 0.0, 10.0};
    ctx.action = {0.0, 0.0};
    ctx.jerk = 0.0;
    ctx.sdc_length = 4.8;
    ctx.sdc_width = 2.0;
    CHECK(compute_reward(ctx, RewardWeights{}) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("reward: zero bounding-box gap costs the full safety weight") {
    Scenario s = straight_scene(3);
    AgentTrack other = s.agents[0];
    for (auto& st : other.states) {
        st.x = 4.8;  // boxes touch bumper-to-bumper at gap 0
        st.vx = 10.0;
    }
    s.agents.push_back(other);

    RewardContext ctx;
    ctx.scenario = &s;
    ctx.t = 0;
    ctx.state = {0.0, 0.0, 0.0, 0.0};  // zero speed isolates the safety term
    ctx.action = {0.0, 0.0};
    ctx.sdc_length = 4.8;
    ctx.sdc_width = 2.0;
    CHECK(compute_reward(ctx, RewardWeights{}) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("reward: moving near a red stop line costs the rule weight") {
    Scenario s = straight_scene(3, 2.0);
    for (auto& step : s.traffic_lights) step.push_back({{1.0, 0.0}, LightState::red});
    RewardContext ctx;
    ctx.scenario = &s;
    ctx.t = 0;
    ctx.state = {0.0, 0.0, 0.0, 2.0};
    ctx.action = {0.0, 0.0};
    ctx.sdc_length = 4.8;
    ctx.sdc_width = 2.0;
    const double r = compute_reward(ctx, RewardWeights{});
    // progress 2.0 plus the -5.0 red-light penalty.
    CHECK(r == doctest::Approx(2.0 - 5.0).epsilon(1e-9));

    // Stationary at the line: no violation.
    ctx.state.v = 0.0;
    CHECK(compute_reward(ctx, RewardWeights{}) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("reward: safety term is monotone in the gap; comfort in |jerk|") {
    Scenario s = straight_scene(3);
    AgentTrack other = s.agents[0];
    s.agents.push_back(other);
    RewardContext ctx;
    ctx.scenario = &s;
    ctx.t = 0;
    ctx.state = {0.0, 0.0, 0.0, 0.0};
    ctx.action = {0.0, 0.0};
    ctx.sdc_length = 4.8;
    ctx.sdc_width = 2.0;

    double prev = -1e9;
    for (double x = 5.0; x <= 12.0; x += 0.25) {
        for (auto& st : s.agents[1].states) st.x = x;
        const double r = compute_reward(ctx, RewardWeights{});
        CHECK(r >= prev - 1e-12);
        prev = r;
    }

    for (auto& st : s.agents[1].states) st.x = 500.0;
    prev = 1e9;
    for (double j = 0.0; j < 12.0; j += 0.5) {
        ctx.jerk = j;
        const double r = compute_reward(ctx, RewardWeights{});
        CHECK(r <= prev + 1e-12);
        prev = r;
    }
}

TEST_CASE("collision_check: trivial overlap cases") {
    const Obb a{{0, 0}, 0.0, 4.0, 2.0};
    std::vector<Obb> others{{{10, 0}, 0.0, 4.0, 2.0}};
    CHECK_FALSE(collision_check(a, others));
    others.push_back(a);
    CHECK(collision_check(a, others));
}

TEST_CASE("rollout: expert replay reproduces the log to 1e-6 over 90 steps") {
    CorpusSpec spec;
    spec.num_scenarios = 5;
    spec.num_timesteps = 91;
    spec.seed = 77;
    spec.event_mix = {{EventKind::hard_brake, 0.4}};
    const fs::path dir = temp_corpus("curator_eval_replay", spec);
    const Corpus corpus = load_corpus(dir);
    const FeatureConfig cfg;
    for (const Scenario& s : corpus.scenarios) {
        auto pi = expert_replay_policy(ActionLimits{})(s);
        const RolloutResult roll = rollout(s, *pi, s.num_timesteps - 1, cfg);
        const AgentState& logged = s.sdc().states.back();
        const KinState& sim = roll.states.back();
        CHECK(std::abs(sim.x - logged.x) < 1e-6);
        CHECK(std::abs(sim.y - logged.y) < 1e-6);
    }
}

TEST_CASE("rollout: full brake from rest never moves") {
    const Scenario s = straight_scene(20, 0.0);
    auto pi = constant_policy({-10.0, 0.0})(s);
    const RolloutResult roll = rollout(s, *pi, 19, FeatureConfig{});
    for (const KinState& st : roll.states) {
        CHECK(st.x == 0.0);
        CHECK(st.v == 0.0);
    }
}

TEST_CASE("rollout: determinism and policy error handling") {
    const Scenario s = straight_scene(30);
    const FeatureConfig cfg;
    auto p1 = constant_policy({0.5, 0.01})(s);
    auto p2 = constant_policy({0.5, 0.01})(s);
    const RolloutResult a = rollout(s, *p1, 29, cfg);
    const RolloutResult b = rollout(s, *p2, 29, cfg);
    for (std::size_t k = 0; k < a.states.size(); ++k) {
        CHECK(a.states[k].x == b.states[k].x);
        CHECK(a.states[k].y == b.states[k].y);
    }

    class NanPolicy final : public Policy {
    public:
        Action act(const StateFeatures&, int) override {
            return {std::numeric_limits<double>::quiet_NaN(), 0.0};
        }
    };
    NanPolicy nan_pi;
    CHECK_THROWS_AS(rollout(s, nan_pi, 5, cfg), PolicyError);
    auto ok = constant_policy({0.0, 0.0})(s);
    CHECK_THROWS_AS(rollout(s, *ok, 100, cfg), InvalidTimestep);
}

TEST_CASE("evaluate: expert replay is clean; stationary policy goes nowhere") {
    CorpusSpec spec;
    spec.num_scenarios = 10;
    spec.num_timesteps = 91;
    spec.seed = 123;
    spec.event_mix = {{EventKind::hard_brake, 0.2}, {EventKind::cut_in, 0.2}};
    const fs::path dir = temp_corpus("curator_eval_clean", spec);
    const Corpus corpus = load_corpus(dir);
    const FeatureConfig cfg;

    const EvalReport expert = evaluate(corpus, expert_replay_policy(ActionLimits{}), cfg);
    CHECK(expert.aggregate.collision_rate == 0.0);
    CHECK(expert.aggregate.offroad_rate == 0.0);
    CHECK(expert.aggregate.success_rate == 1.0);
    CHECK(expert.aggregate.progression_m > 10.0);

    const EvalReport idle = evaluate(corpus, constant_policy({0.0, 0.0}), cfg);
    // A stationary SDC with the goal 50 m out never progresses or succeeds.
    Corpus parked;
    parked.scenarios.push_back(straight_scene(91, 0.0));
    parked.scenarios[0].route = {{0.0, 0.0}, {50.0, 0.0}};
    const EvalReport still = evaluate(parked, constant_policy({0.0, 0.0}), cfg);
    CHECK(still.aggregate.progression_m == 0.0);
    CHECK(still.aggregate.success_rate == 0.0);
    (void)idle;
}

TEST_CASE("evaluate: planted lead-vehicle events collide exactly for a non-braking policy") {
    CorpusSpec spec;
    spec.num_scenarios = 20;
    spec.num_timesteps = 91;
    spec.seed = 321;
    spec.event_mix = {{EventKind::hard_brake, 0.25}};
    const fs::path dir = temp_corpus("curator_eval_planted", spec);
    const Corpus corpus = load_corpus(dir);
    const auto events = load_ledger(dir / "ledger.csv");

    // The expert's own speed, but never braking: plows into every planted lead.
    const EvalReport report = evaluate(corpus, constant_policy({0.0, 0.0}), FeatureConfig{});
    int collided = 0;
    for (const auto& m : report.per_scenario) {
        if (m.collision) ++collided;
    }
    CHECK(collided == static_cast<int>(events.size()));
    CHECK(report.aggregate.collision_rate ==
          doctest::Approx(static_cast<double>(events.size()) / 20.0));
}

TEST_CASE("evaluate: parallel equals serial") {
    CorpusSpec spec;
    spec.num_scenarios = 8;
    spec.num_timesteps = 61;
    spec.seed = 5;
    spec.event_mix = {{EventKind::lane_change, 0.5}};
    const fs::path dir = temp_corpus("curator_eval_par", spec);
    const Corpus corpus = load_corpus(dir);
    const FeatureConfig cfg;
    const EvalReport a =
        evaluate(corpus, expert_replay_policy(ActionLimits{}), cfg, {}, {}, {}, {}, 1);
    const EvalReport b =
        evaluate(corpus, expert_replay_policy(ActionLimits{}), cfg, {}, {}, {}, {}, 8);
    REQUIRE(a.per_scenario.size() == b.per_scenario.size());
    for (std::size_t i = 0; i < a.per_scenario.size(); ++i) {
        CHECK(a.per_scenario[i].progression_m == b.per_scenario[i].progression_m);
        CHECK(a.per_scenario[i].route_adherence_m == b.per_scenario[i].route_adherence_m);
        CHECK(a.per_scenario[i].max_jerk == b.per_scenario[i].max_jerk);
    }
}

TEST_CASE("evaluate: steering across a road edge flags off-road on either side") {
    for (double yaw_rate : {0.3, -0.3}) {
        Scenario s = straight_scene(91, 10.0);
        Corpus corpus;
        corpus.scenarios.push_back(s);
        const EvalReport r = evaluate(corpus, constant_policy({0.0, yaw_rate}), FeatureConfig{});
        CHECK(r.aggregate.offroad_rate == 1.0);
        CHECK(r.aggregate.success_rate == 0.0);
    }
    // Staying on the lane never flags.
    Scenario s = straight_scene(91, 10.0);
    Corpus corpus;
    corpus.scenarios.push_back(s);
    const EvalReport r = evaluate(corpus, constant_policy({0.0, 0.0}), FeatureConfig{});
    CHECK(r.aggregate.offroad_rate == 0.0);
}

TEST_CASE("evaluate: driving through a red stop line counts as a violation") {
    Scenario s = straight_scene(91, 10.0);
    for (auto& step : s.traffic_lights) step.push_back({{20.0, 0.0}, LightState::red});
    Corpus corpus;
    corpus.scenarios.push_back(s);
    const EvalReport moving = evaluate(corpus, constant_policy({0.0, 0.0}), FeatureConfig{});
    CHECK(moving.aggregate.red_light_violation_rate == 1.0);

    // Stopped 10 m short of the line: no violation.
    Scenario stopped = straight_scene(91, 0.0);
    stopped.agents[0].states[0].x = 10.0;
    for (auto& step : stopped.traffic_lights) step.push_back({{20.0, 0.0}, LightState::red});
    Corpus parked;
    parked.scenarios.push_back(stopped);
    const EvalReport idle = evaluate(parked, constant_policy({0.0, 0.0}), FeatureConfig{});
    CHECK(idle.aggregate.red_light_violation_rate == 0.0);

    // Same pass on a green light: no violation.
    Scenario green = straight_scene(91, 10.0);
    for (auto& step : green.traffic_lights) step.push_back({{20.0, 0.0}, LightState::green});
    Corpus green_corpus;
    green_corpus.scenarios.push_back(green);
    const EvalReport ok = evaluate(green_corpus, constant_policy({0.0, 0.0}), FeatureConfig{});
    CHECK(ok.aggregate.red_light_violation_rate == 0.0);
}

TEST_CASE("reward is invariant under rigid transforms of the scene") {
    Scenario s = straight_scene(5);
    AgentTrack other = s.agents[0];
    for (auto& st : other.states) {
        st.x += 7.0;
        st.y += 1.0;
    }
    s.agents.push_back(other);
    s.traffic_lights[1].push_back({{2.5, 0.0}, LightState::red});

    RewardContext ctx;
    ctx.scenario = &s;
    ctx.t = 1;
    ctx.state = {1.0, 0.0, 0.0, 10.0};
    ctx.action = {0.3, 0.1};
    ctx.jerk = 3.0;
    ctx.sdc_length = 4.8;
    ctx.sdc_width = 2.0;
    const double base = compute_reward(ctx, RewardWeights{});

    const double ang = 1.1;
    const Vec2 shift{250.0, -80.0};
    Scenario moved = s;
    auto xf = [&](Vec2 p) { return rotate(p, ang) + shift; };
    for (AgentTrack& a : moved.agents) {
        for (AgentState& st : a.states) {
            const Vec2 p = xf({st.x, st.y});
            const Vec2 v = rotate({st.vx, st.vy}, ang);
            st.x = p.x;
            st.y = p.y;
            st.yaw = wrap_angle(st.yaw + ang);
            st.vx = v.x;
            st.vy = v.y;
        }
    }
    for (MapPolyline& p : moved.map) {
        for (Vec2& pt : p.points) pt = xf(pt);
    }
    for (auto& step : moved.traffic_lights) {
        for (TrafficLight& tl : step) tl.stop_line = xf(tl.stop_line);
    }
    for (Vec2& pt : moved.route) pt = xf(pt);

    RewardContext mctx = ctx;
    mctx.scenario = &moved;
    const Vec2 mp = xf({ctx.state.x, ctx.state.y});
    mctx.state = {mp.x, mp.y, wrap_angle(ctx.state.yaw + ang), ctx.state.v};
    CHECK(compute_reward(mctx, RewardWeights{}) == doctest::Approx(base).epsilon(1e-9));
}
