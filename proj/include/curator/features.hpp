#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "curator/geometry.hpp"
#include "curator/scenario.hpp"

namespace curator {

struct FeatureConfig {
    int num_agents = 16;             // N
    int num_map_polylines = 64;      // M
    int map_points_per_polyline = 10;  // P
    int num_goal_points = 5;         // G
    double tl_lookahead_m = 50.0;
    double tl_lane_halfwidth_m = 3.0;

    // [ego | agents N x 10 | map M x 2P | traffic light 2 | goal G x 2]
    int flat_size() const {
        return 1 + num_agents * 10 + num_map_polylines * 2 * map_points_per_polyline + 2 +
               num_goal_points * 2;
    }
};

inline constexpr int kAgentFeatureDim = 10;

// Pose defining the ego-centric frame: the SDC sits at the origin facing +x.
struct EgoFrame {
    Vec2 origin{};
    double yaw = 0.0;

    Vec2 to_ego(Vec2 p_world) const { return rotate(p_world - origin, -yaw); }
    Vec2 to_world(Vec2 p_ego) const { return origin + rotate(p_ego, yaw); }
    // Directions (velocities) rotate without translation.
    Vec2 vec_to_ego(Vec2 v_world) const { return rotate(v_world, -yaw); }
};

// Structured ego-centric observation. Padded rows are all-zero with mask 0.
struct StateFeatures {
    double ego_speed = 0.0;
    std::vector<std::array<double, kAgentFeatureDim>> agents;  // N rows
    std::vector<std::uint8_t> agent_mask;
    std::vector<std::vector<double>> map_rows;  // M rows of 2P values
    std::vector<std::uint8_t> map_mask;
    std::array<double, 2> traffic_light{0.0, 0.0};  // [is_red_ahead, distance]
    std::vector<Vec2> goal;                         // G ego-frame waypoints
};

// SDC pose/velocity override used by the closed-loop rollout, where the
// simulated ego replaces the logged track.
struct SdcPose {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;
    double vx = 0.0;
    double vy = 0.0;
};

// Builds the ego-centric state at timestep t. Throws InvalidTimestep when the
// SDC is not valid at t (unless an override pose is supplied).
StateFeatures extract_state(const Scenario& s, int t, const FeatureConfig& cfg,
                            const SdcPose* ego_override = nullptr);

// Deterministic concatenation; length == cfg.flat_size().
std::vector<double> flatten(const StateFeatures& f, const FeatureConfig& cfg);

}  // namespace curator
