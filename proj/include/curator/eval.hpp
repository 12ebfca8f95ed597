#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "curator/features.hpp"
#include "curator/reward.hpp"
#include "curator/scenario.hpp"
#include "curator/scouts.hpp"

namespace curator {

// A driving policy: ego-centric state in, bounded action out.
class Policy {
public:
    virtual ~Policy() = default;
    virtual Action act(const StateFeatures& f, int t) = 0;
};

// Builds a fresh policy per scenario so rollouts stay independent across
// parallel workers.
using PolicyFactory = std::function<std::unique_ptr<Policy>(const Scenario&)>;

PolicyFactory expert_replay_policy(const ActionLimits& limits = {});
PolicyFactory constant_policy(Action a);
PolicyFactory mlp_policy(ScoutModel scout, const FeatureConfig& cfg,
                         const ActionLimits& limits = {});

struct RolloutResult {
    std::vector<KinState> states;   // horizon + 1 entries
    std::vector<Action> actions;    // horizon entries
    std::vector<double> rewards;    // horizon entries
};

// Closed-loop rollout: the SDC advances via forward_step from the policy's
// actions while every other agent replays its log. Features are re-extracted
// each step against the simulated ego pose. Throws PolicyError on non-finite
// actions.
RolloutResult rollout(const Scenario& s, Policy& pi, int horizon, const FeatureConfig& cfg,
                      const ActionLimits& limits = {}, const RewardWeights& rw = {},
                      const RewardParams& rp = {});

// True iff the SDC box overlaps any of the other boxes (separating-axis test).
bool collision_check(const Obb& sdc_box, std::span<const Obb> other_boxes);

struct ScenarioMetrics {
    std::string scenario_id;
    bool collision = false;
    bool offroad = false;
    bool success = false;
    bool red_light_violation = false;
    double progression_m = 0.0;
    double dist_to_goal_m = 0.0;
    double route_adherence_m = 0.0;
    double max_jerk = 0.0;
    double max_lat_accel = 0.0;
    double mean_reward = 0.0;
};

struct EvalMetrics {
    double collision_rate = 0.0;
    double offroad_rate = 0.0;
    double success_rate = 0.0;
    double red_light_violation_rate = 0.0;
    double progression_m = 0.0;
    double dist_to_goal_m = 0.0;
    double route_adherence_m = 0.0;
    double max_jerk = 0.0;
    double max_lat_accel = 0.0;
};

struct EvalReport {
    std::vector<ScenarioMetrics> per_scenario;
    EvalMetrics aggregate;
};

// Success radius around the final route waypoint and the red-light-violation
// window of the evaluation metrics.
struct EvalParams {
    double success_radius_m = 3.0;
    double red_light_window_m = 2.0;
    double red_light_speed_ms = 0.5;
    double red_light_lane_halfwidth_m = 3.0;
};

EvalReport evaluate(const Corpus& corpus, const PolicyFactory& make_policy,
                    const FeatureConfig& cfg, const ActionLimits& limits = {},
                    const RewardWeights& rw = {}, const RewardParams& rp = {},
                    const EvalParams& ep = {}, int workers = 1);

ScenarioMetrics evaluate_scenario(const Scenario& s, Policy& pi, const FeatureConfig& cfg,
                                  const ActionLimits& limits = {}, const RewardWeights& rw = {},
                                  const RewardParams& rp = {}, const EvalParams& ep = {});

}  // namespace curator
