#include "curator/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curator/errors.hpp"

namespace curator {

namespace {

struct Ranked {
    double dist;
    int index;
    bool operator<(const Ranked& o) const {
        return dist != o.dist ? dist < o.dist : index < o.index;
    }
};

}  // namespace

StateFeatures extract_state(const Scenario& s, int t, const FeatureConfig& cfg,
                            const SdcPose* ego_override) {
    if (t < 0 || t >= s.num_timesteps) {
        throw InvalidTimestep("extract_state: t=" + std::to_string(t) + " out of range");
    }
    const std::size_t ts = static_cast<std::size_t>(t);

    SdcPose ego;
    if (ego_override) {
        ego = *ego_override;
    } else {
        const AgentState& st = s.sdc().states[ts];
        if (!st.valid) {
            throw InvalidTimestep("extract_state: SDC invalid at t=" + std::to_string(t));
        }
        ego = {st.x, st.y, st.yaw, st.vx, st.vy};
    }
    const EgoFrame frame{{ego.x, ego.y}, ego.yaw};

    StateFeatures f;
    f.ego_speed = std::hypot(ego.vx, ego.vy);

    // N nearest valid non-SDC agents, ties broken by agent index.
    std::vector<Ranked> agent_rank;
    for (int i = 0; i < static_cast<int>(s.agents.size()); ++i) {
        if (i == s.sdc_index) continue;
        const AgentState& st = s.agents[static_cast<std::size_t>(i)].states[ts];
        if (!st.valid) continue;
        agent_rank.push_back({distance({st.x, st.y}, frame.origin), i});
    }
    std::sort(agent_rank.begin(), agent_rank.end());

    f.agents.assign(static_cast<std::size_t>(cfg.num_agents), {});
    f.agent_mask.assign(static_cast<std::size_t>(cfg.num_agents), 0);
    const int n_agents = std::min<int>(cfg.num_agents, static_cast<int>(agent_rank.size()));
    for (int k = 0; k < n_agents; ++k) {
        const AgentTrack& track = s.agents[static_cast<std::size_t>(agent_rank[k].index)];
        const AgentState& st = track.states[ts];
        const Vec2 rel_pos = frame.to_ego({st.x, st.y});
        const Vec2 rel_vel = frame.vec_to_ego({st.vx - ego.vx, st.vy - ego.vy});
        const double rel_yaw = wrap_angle(st.yaw - ego.yaw);
        auto& row = f.agents[static_cast<std::size_t>(k)];
        row[0] = rel_pos.x;
        row[1] = rel_pos.y;
        row[2] = rel_vel.x;
        row[3] = rel_vel.y;
        row[4] = std::cos(rel_yaw);
        row[5] = std::sin(rel_yaw);
        row[6] = track.length;
        row[7] = track.width;
        row[8] = track.type == AgentType::vehicle ? 1.0 : 0.0;
        row[9] = track.type == AgentType::vehicle ? 0.0 : 1.0;
        f.agent_mask[static_cast<std::size_t>(k)] = 1;
    }

    // M nearest lane centerlines, each resampled to P points by arc length.
    std::vector<Ranked> lane_rank;
    for (int i = 0; i < static_cast<int>(s.map.size()); ++i) {
        const MapPolyline& p = s.map[static_cast<std::size_t>(i)];
        if (p.kind != PolylineKind::lane_center) continue;
        lane_rank.push_back({point_polyline_distance(frame.origin, p.points).dist, i});
    }
    std::sort(lane_rank.begin(), lane_rank.end());

    const int row_len = 2 * cfg.map_points_per_polyline;
    f.map_rows.assign(static_cast<std::size_t>(cfg.num_map_polylines),
                      std::vector<double>(static_cast<std::size_t>(row_len), 0.0));
    f.map_mask.assign(static_cast<std::size_t>(cfg.num_map_polylines), 0);
    const int n_lanes = std::min<int>(cfg.num_map_polylines, static_cast<int>(lane_rank.size()));
    for (int k = 0; k < n_lanes; ++k) {
        const MapPolyline& p = s.map[static_cast<std::size_t>(lane_rank[k].index)];
        const std::vector<Vec2> pts = resample_polyline(p.points, cfg.map_points_per_polyline);
        auto& row = f.map_rows[static_cast<std::size_t>(k)];
        for (int j = 0; j < cfg.map_points_per_polyline; ++j) {
            const Vec2 e = frame.to_ego(pts[static_cast<std::size_t>(j)]);
            row[static_cast<std::size_t>(2 * j)] = e.x;
            row[static_cast<std::size_t>(2 * j + 1)] = e.y;
        }
        f.map_mask[static_cast<std::size_t>(k)] = 1;
    }

    // Most relevant red light: nearest red stop line ahead (positive ego-x)
    // within the lookahead and inside the lane corridor. Distance saturates
    // at the lookahead when no light qualifies.
    f.traffic_light = {0.0, cfg.tl_lookahead_m};
    double best_tl = std::numeric_limits<double>::infinity();
    for (const TrafficLight& tl : s.traffic_lights[ts]) {
        if (tl.state != LightState::red) continue;
        const Vec2 e = frame.to_ego(tl.stop_line);
        if (e.x <= 0.0) continue;
        if (std::abs(e.y) >= cfg.tl_lane_halfwidth_m) continue;
        const double d = norm(e);
        if (d < cfg.tl_lookahead_m && d < best_tl) {
            best_tl = d;
            f.traffic_light = {1.0, d};
        }
    }

    // G future waypoints after the SDC's projection onto the route; the last
    // waypoint repeats once the route is exhausted.
    int nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(s.route.size()); ++i) {
        const double d = distance(s.route[static_cast<std::size_t>(i)], frame.origin);
        if (d < nearest_d) {
            nearest_d = d;
            nearest = i;
        }
    }
    f.goal.reserve(static_cast<std::size_t>(cfg.num_goal_points));
    for (int k = 1; k <= cfg.num_goal_points; ++k) {
        const int idx = std::min<int>(nearest + k, static_cast<int>(s.route.size()) - 1);
        f.goal.push_back(frame.to_ego(s.route[static_cast<std::size_t>(idx)]));
    }

    return f;
}

std::vector<double> flatten(const StateFeatures& f, const FeatureConfig& cfg) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(cfg.flat_size()));
    out.push_back(f.ego_speed);
    for (const auto& row : f.agents) out.insert(out.end(), row.begin(), row.end());
    for (const auto& row : f.map_rows) out.insert(out.end(), row.begin(), row.end());
    out.push_back(f.traffic_light[0]);
    out.push_back(f.traffic_light[1]);
    for (const Vec2& g : f.goal) {
        out.push_back(g.x);
        out.push_back(g.y);
    }
    if (out.size() != static_cast<std::size_t>(cfg.flat_size())) {
        throw DimensionMismatch("flatten: feature shape does not match config");
    }
    return out;
}

}  // namespace curator
