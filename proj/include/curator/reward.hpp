#pragma once

#include "curator/dynamics.hpp"
#include "curator/scenario.hpp"

namespace curator {

struct RewardWeights {
    double progress = 1.0;
    double safety = -1.0;
    double accel_comfort = -0.1;  // lateral acceleration
    double jerk_comfort = -0.2;
    double lane = -0.5;
    double red_light = -5.0;
};

// Constants of the shaped reward. Comfort norms reuse the heuristic scoring
// constants; the safety margin is the bounding-box gap below which the
// quadratic penalty engages.
struct RewardParams {
    double safety_margin_m = 2.0;
    double lat_accel_norm = 3.0;
    double jerk_norm = 8.0;
    double red_light_dist_m = 3.0;
    double red_light_speed_ms = 0.5;
    double red_light_lane_halfwidth_m = 3.0;
};

// One simulated transition, evaluated at the arrival state. `t` indexes the
// scenario's logged agents and lights at arrival; `jerk` comes from the
// simulated kinematic chain (0 when history is too short).
struct RewardContext {
    const Scenario* scenario = nullptr;
    int t = 0;
    KinState state;  // arrival SDC state
    Action action;   // action that produced it
    double jerk = 0.0;
    double sdc_length = 0.0;
    double sdc_width = 0.0;
};

double compute_reward(const RewardContext& ctx, const RewardWeights& w,
                      const RewardParams& p = {});

}  // namespace curator
