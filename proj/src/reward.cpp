#include "curator/reward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curator/features.hpp"
#include "curator/heuristics.hpp"

namespace curator {

double compute_reward(const RewardContext& ctx, const RewardWeights& w, const RewardParams& p) {
    const Scenario& s = *ctx.scenario;
    const std::size_t ts = static_cast<std::size_t>(ctx.t);
    const KinState& st = ctx.state;
    const Vec2 pos{st.x, st.y};
    const Vec2 vel{st.v * std::cos(st.yaw), st.v * std::sin(st.yaw)};

    // Goal progress: velocity projected onto the direction of the final
    // route waypoint.
    double progress = 0.0;
    const Vec2 goal_dir = s.route.back() - pos;
    const double goal_dist = norm(goal_dir);
    if (goal_dist > 1e-9) progress = dot(vel, goal_dir * (1.0 / goal_dist));

    // Safety: quadratic in the bounding-box gap shortfall below the margin.
    double q_safety = 0.0;
    const Obb ego_box{pos, st.yaw, ctx.sdc_length, ctx.sdc_width};
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(s.agents.size()); ++i) {
        if (i == s.sdc_index) continue;
        const AgentTrack& other = s.agents[static_cast<std::size_t>(i)];
        if (!other.states[ts].valid) continue;
        min_gap = std::min(min_gap, obb_gap(ego_box, agent_obb(other, ctx.t)));
    }
    if (min_gap < p.safety_margin_m) {
        const double shortfall = (p.safety_margin_m - min_gap) / p.safety_margin_m;
        q_safety = std::min(1.0, shortfall * shortfall);
    }

    // Comfort: squared normalized lateral acceleration and jerk, capped at 1.
    const double a_lat = st.v * ctx.action.yaw_rate;
    const double lat_term = std::min(1.0, (a_lat / p.lat_accel_norm) * (a_lat / p.lat_accel_norm));
    const double jerk_term = std::min(1.0, (ctx.jerk / p.jerk_norm) * (ctx.jerk / p.jerk_norm));

    // Path adherence: lateral distance to the nearest lane centerline.
    double d_lane = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const MapPolyline& poly : s.map) {
        if (poly.kind != PolylineKind::lane_center) continue;
        best = std::min(best, point_polyline_distance(pos, poly.points).dist);
    }
    if (std::isfinite(best)) d_lane = best;

    // Rule compliance: in motion near a red stop line in the ego corridor.
    double red = 0.0;
    if (st.v > p.red_light_speed_ms) {
        const EgoFrame frame{pos, st.yaw};
        for (const TrafficLight& tl : s.traffic_lights[ts]) {
            if (tl.state != LightState::red) continue;
            const Vec2 e = frame.to_ego(tl.stop_line);
            if (std::abs(e.y) < p.red_light_lane_halfwidth_m && norm(e) < p.red_light_dist_m) {
                red = 1.0;
                break;
            }
        }
    }

    return w.progress * progress + w.safety * q_safety + w.accel_comfort * lat_term +
           w.jerk_comfort * jerk_term + w.lane * d_lane + w.red_light * red;
}

}  // namespace curator
