#include "curator/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curator/errors.hpp"
#include "curator/heuristics.hpp"
#include "curator/parallel.hpp"
#include "curator/scoring.hpp"

namespace curator {

namespace {

class ExpertReplay final : public Policy {
public:
    ExpertReplay(const Scenario& s, const ActionLimits& limits) {
        for (int t = 0; t + 1 < s.num_timesteps; ++t) {
            const AgentTrack& sdc = s.sdc();
            if (sdc.states[static_cast<std::size_t>(t)].valid &&
                sdc.states[static_cast<std::size_t>(t) + 1].valid) {
                actions_.push_back(expert_action(s, t, limits));
            } else {
                actions_.push_back(Action{});
            }
        }
    }

    Action act(const StateFeatures&, int t) override {
        if (t < 0 || t >= static_cast<int>(actions_.size())) return Action{};
        return actions_[static_cast<std::size_t>(t)];
    }

private:
    std::vector<Action> actions_;
};

class ConstantPolicy final : public Policy {
public:
    explicit ConstantPolicy(Action a) : action_(a) {}
    Action act(const StateFeatures&, int) override { return action_; }

private:
    Action action_;
};

class MlpDrivingPolicy final : public Policy {
public:
    MlpDrivingPolicy(const ScoutModel& scout, const FeatureConfig& cfg, const ActionLimits& limits)
        : scout_(&scout), cfg_(cfg), limits_(limits) {}

    Action act(const StateFeatures& f, int) override {
        const std::vector<double> x = flatten(f, cfg_);
        return denormalize_action(scout_->predict(x), limits_);
    }

private:
    const ScoutModel* scout_;
    FeatureConfig cfg_;
    ActionLimits limits_;
};

}  // namespace

PolicyFactory expert_replay_policy(const ActionLimits& limits) {
    return [limits](const Scenario& s) -> std::unique_ptr<Policy> {
        return std::make_unique<ExpertReplay>(s, limits);
    };
}

PolicyFactory constant_policy(Action a) {
    return [a](const Scenario&) -> std::unique_ptr<Policy> {
        return std::make_unique<ConstantPolicy>(a);
    };
}

PolicyFactory mlp_policy(ScoutModel scout, const FeatureConfig& cfg, const ActionLimits& limits) {
    auto shared = std::make_shared<ScoutModel>(std::move(scout));
    return [shared, cfg, limits](const Scenario&) -> std::unique_ptr<Policy> {
        return std::make_unique<MlpDrivingPolicy>(*shared, cfg, limits);
    };
}

RolloutResult rollout(const Scenario& s, Policy& pi, int horizon, const FeatureConfig& cfg,
                      const ActionLimits& limits, const RewardWeights& rw,
                      const RewardParams& rp) {
    if (horizon < 0 || horizon > s.num_timesteps - 1) {
        throw InvalidTimestep("rollout: horizon must be in [0, T-1]");
    }
    const AgentState& init = s.sdc().states[0];
    if (!init.valid) throw InvalidTimestep("rollout: SDC invalid at t=0");

    RolloutResult out;
    KinState cur{init.x, init.y, init.yaw, std::hypot(init.vx, init.vy)};
    out.states.push_back(cur);

    double prev_accel = 0.0;
    bool have_prev_accel = false;
    for (int t = 0; t < horizon; ++t) {
        const SdcPose pose{cur.x, cur.y, cur.yaw,
                           cur.v * std::cos(cur.yaw), cur.v * std::sin(cur.yaw)};
        const StateFeatures f = extract_state(s, t, cfg, &pose);
        Action a = pi.act(f, t);
        if (!std::isfinite(a.accel) || !std::isfinite(a.yaw_rate)) {
            throw PolicyError("rollout: policy returned a non-finite action at t=" +
                              std::to_string(t));
        }
        const KinState next = forward_step(cur, a, s.dt, limits);

        // Realized jerk: the speed floor can truncate the commanded accel.
        const double accel = (next.v - cur.v) / s.dt;
        const double jerk = have_prev_accel ? (accel - prev_accel) / s.dt : 0.0;
        prev_accel = accel;
        have_prev_accel = true;

        RewardContext ctx;
        ctx.scenario = &s;
        ctx.t = t + 1;
        ctx.state = next;
        ctx.action = a;
        ctx.jerk = jerk;
        ctx.sdc_length = s.sdc().length;
        ctx.sdc_width = s.sdc().width;
        out.rewards.push_back(compute_reward(ctx, rw, rp));

        out.actions.push_back(a);
        out.states.push_back(next);
        cur = next;
    }
    return out;
}

bool collision_check(const Obb& sdc_box, std::span<const Obb> other_boxes) {
    for (const Obb& other : other_boxes) {
        if (obb_overlap(sdc_box, other)) return true;
    }
    return false;
}

namespace {

// True when the corner sits on the non-drivable side of the nearest road
// edge. Road edges are oriented with the drivable area on their left.
bool corner_offroad(const Scenario& s, Vec2 corner) {
    double best = std::numeric_limits<double>::infinity();
    bool offroad = false;
    bool any_edge = false;
    for (const MapPolyline& p : s.map) {
        if (p.kind != PolylineKind::road_edge) continue;
        any_edge = true;
        const PolylineHit hit = point_polyline_distance(corner, p.points);
        if (hit.dist < best) {
            best = hit.dist;
            const Vec2 a = p.points[static_cast<std::size_t>(hit.segment)];
            const Vec2 b = p.points[static_cast<std::size_t>(hit.segment) + 1];
            offroad = side_of_segment(corner, a, b) < 0.0;
        }
    }
    return any_edge && offroad;
}

}  // namespace

ScenarioMetrics evaluate_scenario(const Scenario& s, Policy& pi, const FeatureConfig& cfg,
                                  const ActionLimits& limits, const RewardWeights& rw,
                                  const RewardParams& rp, const EvalParams& ep) {
    const int horizon = s.num_timesteps - 1;
    const RolloutResult roll = rollout(s, pi, horizon, cfg, limits, rw, rp);

    ScenarioMetrics m;
    m.scenario_id = s.id;

    const double sdc_len = s.sdc().length;
    const double sdc_wid = s.sdc().width;
    bool reached_goal = false;

    for (std::size_t k = 0; k < roll.states.size(); ++k) {
        const KinState& st = roll.states[k];
        const int t = static_cast<int>(k);
        const Obb ego_box{{st.x, st.y}, st.yaw, sdc_len, sdc_wid};

        std::vector<Obb> others;
        for (int i = 0; i < static_cast<int>(s.agents.size()); ++i) {
            if (i == s.sdc_index) continue;
            const AgentTrack& track = s.agents[static_cast<std::size_t>(i)];
            if (!track.states[static_cast<std::size_t>(t)].valid) continue;
            others.push_back(agent_obb(track, t));
        }
        if (!m.collision && collision_check(ego_box, others)) m.collision = true;

        if (!m.offroad) {
            for (const Vec2& corner : ego_box.corners()) {
                if (corner_offroad(s, corner)) {
                    m.offroad = true;
                    break;
                }
            }
        }

        if (distance({st.x, st.y}, s.route.back()) <= ep.success_radius_m) reached_goal = true;

        if (!m.red_light_violation && st.v > ep.red_light_speed_ms) {
            const EgoFrame frame{{st.x, st.y}, st.yaw};
            for (const TrafficLight& tl : s.traffic_lights[static_cast<std::size_t>(t)]) {
                if (tl.state != LightState::red) continue;
                const Vec2 e = frame.to_ego(tl.stop_line);
                if (std::abs(e.x) <= ep.red_light_window_m &&
                    std::abs(e.y) < ep.red_light_lane_halfwidth_m) {
                    m.red_light_violation = true;
                    break;
                }
            }
        }

        m.route_adherence_m += point_polyline_distance({st.x, st.y}, s.route).dist;
        if (k > 0) {
            const KinState& prev = roll.states[k - 1];
            m.progression_m += std::hypot(st.x - prev.x, st.y - prev.y);
        }
    }
    m.route_adherence_m /= static_cast<double>(roll.states.size());
    m.success = reached_goal && !m.collision && !m.offroad;
    const KinState& last = roll.states.back();
    m.dist_to_goal_m = distance({last.x, last.y}, s.route.back());

    // Comfort metrics from the simulated kinematic chain.
    std::vector<double> speed, yaw;
    std::vector<std::uint8_t> valid;
    for (const KinState& st : roll.states) {
        speed.push_back(st.v);
        yaw.push_back(st.yaw);
        valid.push_back(1);
    }
    if (speed.size() >= 3) {
        const KinematicChain chain = kinematic_chain(speed, yaw, valid, s.dt);
        for (std::size_t t = 0; t < speed.size(); ++t) {
            if (chain.second_order_defined[t]) {
                m.max_jerk = std::max(m.max_jerk, std::abs(chain.jerk[t]));
            }
            if (chain.first_order_defined[t]) {
                m.max_lat_accel =
                    std::max(m.max_lat_accel, std::abs(chain.speed[t] * chain.yaw_rate[t]));
            }
        }
    }

    if (!roll.rewards.empty()) {
        double sum = 0.0;
        for (double r : roll.rewards) sum += r;
        m.mean_reward = sum / static_cast<double>(roll.rewards.size());
    }
    return m;
}

EvalReport evaluate(const Corpus& corpus, const PolicyFactory& make_policy,
                    const FeatureConfig& cfg, const ActionLimits& limits,
                    const RewardWeights& rw, const RewardParams& rp, const EvalParams& ep,
                    int workers) {
    if (corpus.scenarios.empty()) throw EmptyInput("evaluate: empty corpus");
    EvalReport report;
    report.per_scenario.resize(corpus.scenarios.size());
    parallel_for(corpus.scenarios.size(), workers, [&](std::size_t i) {
        const Scenario& s = corpus.scenarios[i];
        auto pi = make_policy(s);
        report.per_scenario[i] = evaluate_scenario(s, *pi, cfg, limits, rw, rp, ep);
    });

    EvalMetrics& agg = report.aggregate;
    const double n = static_cast<double>(report.per_scenario.size());
    for (const ScenarioMetrics& m : report.per_scenario) {
        agg.collision_rate += m.collision ? 1.0 : 0.0;
        agg.offroad_rate += m.offroad ? 1.0 : 0.0;
        agg.success_rate += m.success ? 1.0 : 0.0;
        agg.red_light_violation_rate += m.red_light_violation ? 1.0 : 0.0;
        agg.progression_m += m.progression_m;
        agg.dist_to_goal_m += m.dist_to_goal_m;
        agg.route_adherence_m += m.route_adherence_m;
        agg.max_jerk += m.max_jerk;
        agg.max_lat_accel += m.max_lat_accel;
    }
    agg.collision_rate /= n;
    agg.offroad_rate /= n;
    agg.success_rate /= n;
    agg.red_light_violation_rate /= n;
    agg.progression_m /= n;
    agg.dist_to_goal_m /= n;
    agg.route_adherence_m /= n;
    agg.max_jerk /= n;
    agg.max_lat_accel /= n;
    return report;
}

}  // namespace curator
