#include "curator/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curator/errors.hpp"
#include "curator/io_util.hpp"
#include "curator/parallel.hpp"

namespace curator {

namespace {

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void HeuristicWeights::validate() const {
    const double vals[] = {volatility, interaction, off_road, lane_dev, density};
    double sum = 0.0;
    for (double v : vals) {
        if (v < 0.0) throw ValidationError("heuristic weights must be nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("heuristic weights must sum to 1");
    }
}

std::vector<double> score_volatility(const KinematicChain& chain, const HeuristicConstants& c) {
    std::vector<double> out(chain.speed.size(), 0.0);
    for (std::size_t t = 0; t < out.size(); ++t) {
        if (!chain.second_order_defined[t]) continue;
        out[t] = std::max(clip01(std::abs(chain.jerk[t]) / c.jerk_norm),
                          clip01(std::abs(chain.yaw_accel[t]) / c.yaw_accel_norm));
    }
    return out;
}

double score_interaction(const Scenario& s, int t, const HeuristicConstants& c) {
    const std::size_t ts = static_cast<std::size_t>(t);
    const AgentState& ego = s.sdc().states[ts];
    double max_risk = 0.0;
    for (int i = 0; i < static_cast<int>(s.agents.size()); ++i) {
        if (i == s.sdc_index) continue;
        const AgentState& other = s.agents[static_cast<std::size_t>(i)].states[ts];
        if (!other.valid) continue;
        const Vec2 p_rel{other.x - ego.x, other.y - ego.y};
        const Vec2 v_rel{other.vx - ego.vx, other.vy - ego.vy};
        const double risk = -std::min(0.0, dot(p_rel, v_rel));
        max_risk = std::max(max_risk, risk);
    }
    return clip01(max_risk / c.interaction_norm);
}

Obb agent_obb(const AgentTrack& track, int t) {
    const AgentState& st = track.states[static_cast<std::size_t>(t)];
    return Obb{{st.x, st.y}, st.yaw, track.length, track.width};
}

double score_offroad(const Scenario& s, int t, const HeuristicConstants& c) {
    bool has_edge = false;
    double min_d = std::numeric_limits<double>::infinity();
    const auto corners = agent_obb(s.sdc(), t).corners();
    for (const MapPolyline& p : s.map) {
        if (p.kind != PolylineKind::road_edge) continue;
        has_edge = true;
        for (const Vec2& corner : corners) {
            min_d = std::min(min_d, point_polyline_distance(corner, p.points).dist);
        }
    }
    if (!has_edge) return 0.0;
    return clip01(1.0 - min_d / c.offroad_thresh);
}

double score_lanedev(const Scenario& s, int t, const HeuristicConstants& c) {
    const AgentState& ego = s.sdc().states[static_cast<std::size_t>(t)];
    double min_d = std::numeric_limits<double>::infinity();
    bool has_lane = false;
    for (const MapPolyline& p : s.map) {
        if (p.kind != PolylineKind::lane_center) continue;
        has_lane = true;
        min_d = std::min(min_d, point_polyline_distance({ego.x, ego.y}, p.points).dist);
    }
    if (!has_lane) throw NoLaneError("score_lanedev: scene has no lane_center polylines");
    return clip01(min_d / c.lane_dev_norm);
}

double score_density(const Scenario& s, int t, const HeuristicConstants& c) {
    int count = 0;
    for (const AgentTrack& a : s.agents) {
        if (a.states[static_cast<std::size_t>(t)].valid) ++count;
    }
    return clip01(static_cast<double>(count) / c.density_norm);
}

std::vector<double> combine(const TimestepScores& raw, const HeuristicWeights& w) {
    std::vector<double> out(raw.volatility.size(), 0.0);
    for (std::size_t t = 0; t < out.size(); ++t) {
        if (!raw.combined_defined[t]) continue;
        out[t] = w.volatility * raw.volatility[t] + w.interaction * raw.interaction[t] +
                 w.off_road * raw.off_road[t] + w.lane_dev * raw.lane_dev[t] +
                 w.density * raw.density[t];
    }
    return out;
}

TimestepScores score_scenario(const Scenario& s, const HeuristicConstants& c,
                              const HeuristicWeights& w) {
    const std::size_t T = static_cast<std::size_t>(s.num_timesteps);
    const AgentTrack& sdc = s.sdc();

    std::vector<double> speed(T, 0.0), yaw(T, 0.0);
    std::vector<std::uint8_t> valid(T, 0);
    for (std::size_t t = 0; t < T; ++t) {
        const AgentState& st = sdc.states[t];
        valid[t] = st.valid ? 1 : 0;
        if (st.valid) {
            speed[t] = std::hypot(st.vx, st.vy);
            yaw[t] = st.yaw;
        }
    }
    const KinematicChain chain = kinematic_chain(speed, yaw, valid, s.dt);

    TimestepScores out;
    out.volatility = score_volatility(chain, c);
    out.interaction.assign(T, 0.0);
    out.off_road.assign(T, 0.0);
    out.lane_dev.assign(T, 0.0);
    out.density.assign(T, 0.0);
    out.base_defined.assign(T, 0);
    out.vol_defined.assign(T, 0);
    out.combined_defined.assign(T, 0);

    for (std::size_t t = 0; t < T; ++t) {
        if (!valid[t]) continue;
        const int ti = static_cast<int>(t);
        out.base_defined[t] = 1;
        out.interaction[t] = score_interaction(s, ti, c);
        out.off_road[t] = score_offroad(s, ti, c);
        out.lane_dev[t] = score_lanedev(s, ti, c);
        out.density[t] = score_density(s, ti, c);
        out.vol_defined[t] = chain.second_order_defined[t];
        out.combined_defined[t] = out.vol_defined[t];
    }
    out.combined = combine(out, w);
    return out;
}

// Rows exist only for timesteps with a valid SDC; the explicit t column
// keeps indexing intact across gaps. The defined flag marks derivative
// history (volatility / combined).
void save_score_table(const std::filesystem::path& path, const TimestepScores& scores) {
    CsvTable table;
    table.header = {"t", "s_vol", "s_int", "s_off", "s_lane", "s_den", "s_comb", "defined"};
    for (std::size_t t = 0; t < scores.volatility.size(); ++t) {
        if (!scores.base_defined[t]) continue;
        table.rows.push_back({std::to_string(t), format_double(scores.volatility[t]),
                              format_double(scores.interaction[t]),
                              format_double(scores.off_road[t]),
                              format_double(scores.lane_dev[t]),
                              format_double(scores.density[t]),
                              format_double(scores.combined[t]),
                              scores.combined_defined[t] ? "1" : "0"});
    }
    write_csv(path, table);
}

TimestepScores load_score_table(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    TimestepScores s;
    auto grow_to = [&s](std::size_t n) {
        s.volatility.resize(n, 0.0);
        s.interaction.resize(n, 0.0);
        s.off_road.resize(n, 0.0);
        s.lane_dev.resize(n, 0.0);
        s.density.resize(n, 0.0);
        s.combined.resize(n, 0.0);
        s.base_defined.resize(n, 0);
        s.vol_defined.resize(n, 0);
        s.combined_defined.resize(n, 0);
    };
    for (const auto& row : table.rows) {
        if (row.size() != 8) throw SchemaError(path.string() + ": bad score row arity");
        const std::size_t t = static_cast<std::size_t>(parse_int(row[0]));
        if (t >= s.volatility.size()) grow_to(t + 1);
        s.volatility[t] = parse_double(row[1]);
        s.interaction[t] = parse_double(row[2]);
        s.off_road[t] = parse_double(row[3]);
        s.lane_dev[t] = parse_double(row[4]);
        s.density[t] = parse_double(row[5]);
        s.combined[t] = parse_double(row[6]);
        const std::uint8_t defined = row[7] == "1" ? 1 : 0;
        s.base_defined[t] = 1;
        s.vol_defined[t] = defined;
        s.combined_defined[t] = defined;
    }
    return s;
}

std::vector<TimestepScores> score_corpus_heuristic(const Corpus& corpus,
                                                   const HeuristicConstants& c,
                                                   const HeuristicWeights& w, int workers) {
    std::vector<TimestepScores> out(corpus.scenarios.size());
    parallel_for(corpus.scenarios.size(), workers, [&](std::size_t i) {
        out[i] = score_scenario(corpus.scenarios[i], c, w);
    });
    return out;
}

}  // namespace curator
