#include "curator/synth.hpp"

#include <algorithm>
#include <cmath>

#include "curator/errors.hpp"
#include "curator/io_util.hpp"
#include "curator/parallel.hpp"

namespace curator {

namespace {

constexpr double kLaneHalfWidth = 2.0;
constexpr double kEdgeOffset = 4.0;  // lane half-width + 2 m shoulder
constexpr double kRoadStart = -30.0;
constexpr double kRoadEnd = 160.0;
constexpr double kSdcLength = 4.8;
constexpr double kSdcWidth = 2.0;
constexpr double kCrosserLateralStart = 12.0;
// Longitudinal half-extent sum of the SDC box and a perpendicular crosser.
constexpr double kCorridorReach = kSdcLength / 2.0 + kSdcWidth / 2.0 + 1.0;

}  // namespace

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::hard_brake: return "hard_brake";
        case EventKind::cut_in: return "cut_in";
        case EventKind::near_boundary: return "near_boundary";
        case EventKind::lane_change: return "lane_change";
        case EventKind::dense_traffic: return "dense_traffic";
    }
    return "hard_brake";
}

std::string to_string(RoadKind k) {
    switch (k) {
        case RoadKind::straight: return "straight";
        case RoadKind::curve: return "curve";
        case RoadKind::merge: return "merge";
    }
    return "straight";
}

EventKind event_kind_from_string(const std::string& s) {
    if (s == "hard_brake") return EventKind::hard_brake;
    if (s == "cut_in") return EventKind::cut_in;
    if (s == "near_boundary") return EventKind::near_boundary;
    if (s == "lane_change") return EventKind::lane_change;
    if (s == "dense_traffic") return EventKind::dense_traffic;
    throw SpecError("unknown event kind '" + s + "'");
}

RoadKind road_kind_from_string(const std::string& s) {
    if (s == "straight") return RoadKind::straight;
    if (s == "curve") return RoadKind::curve;
    if (s == "merge") return RoadKind::merge;
    throw SpecError("unknown road kind '" + s + "'");
}

void CorpusSpec::validate() const {
    if (num_scenarios < 1) throw SpecError("CorpusSpec: num_scenarios must be >= 1");
    if (num_timesteps < 10) throw SpecError("CorpusSpec: num_timesteps must be >= 10");
    if (road_kinds.empty()) throw SpecError("CorpusSpec: road_kinds must be nonempty");
    double sum = 0.0;
    for (const auto& [kind, p] : event_mix) {
        if (p < 0.0 || p > 1.0) {
            throw SpecError("CorpusSpec: probability for " + to_string(kind) + " not in [0, 1]");
        }
        sum += p;
    }
    if (sum > 1.0 + 1e-12) throw SpecError("CorpusSpec: event probabilities sum above 1");
}

namespace {

struct RoadShape {
    RoadKind kind = RoadKind::straight;
    double radius = 0.0;  // curves only

    Vec2 point_at(double s) const {
        if (kind == RoadKind::curve) {
            const double phi = s / radius;
            return {radius * std::sin(phi), radius * (1.0 - std::cos(phi))};
        }
        return {s, 0.0};
    }

    double heading_at(double s) const {
        return kind == RoadKind::curve ? s / radius : 0.0;
    }

    // Positive lat is left of travel (toward the curve center).
    Vec2 offset_point(double s, double lat) const {
        if (kind == RoadKind::curve) {
            const double phi = s / radius;
            const double r = radius - lat;
            return {r * std::sin(phi), radius - r * std::cos(phi)};
        }
        return {s, lat};
    }

    double curvature() const { return kind == RoadKind::curve ? 1.0 / radius : 0.0; }
};

double merge_ramp_y(double x) {
    if (x >= 40.0) return 0.0;
    const double f = (40.0 - x) / 70.0;
    return -7.0 * f * f;
}

std::vector<Vec2> sample_line(const RoadShape& shape, double lat, double s0, double s1,
                              bool reversed) {
    std::vector<Vec2> pts;
    const int n = static_cast<int>(std::ceil(s1 - s0)) + 1;
    for (int i = 0; i < n; ++i) {
        const double s = std::min(s0 + static_cast<double>(i), s1);
        pts.push_back(shape.offset_point(s, lat));
    }
    if (reversed) std::reverse(pts.begin(), pts.end());
    return pts;
}

RoadShape road_shape(const RoadModel& road) {
    RoadShape shape;
    shape.kind = road.kind;
    shape.radius = road.curvature > 0.0 ? 1.0 / road.curvature : 0.0;
    return shape;
}

}  // namespace

RoadModel RoadModel::make(RoadKind kind, Rng& rng) {
    RoadModel road;
    road.kind = kind;
    RoadShape shape;
    shape.kind = kind;
    if (kind == RoadKind::curve) {
        shape.radius = rng.uniform(150.0, 300.0);
        road.curvature = 1.0 / shape.radius;
    }

    road.reference = sample_line(shape, 0.0, kRoadStart, kRoadEnd, false);
    road.map.push_back({PolylineKind::lane_center, road.reference});

    // Edges keep the drivable area on their left: the left edge runs against
    // travel, the right edge with it.
    road.map.push_back(
        {PolylineKind::road_edge, sample_line(shape, kEdgeOffset, kRoadStart, kRoadEnd, true)});
    if (kind == RoadKind::merge) {
        std::vector<Vec2> ramp_lane, ramp_edge;
        for (double x = kRoadStart; x <= kRoadEnd; x += 1.0) {
            if (x <= 40.0) ramp_lane.push_back({x, merge_ramp_y(x)});
            ramp_edge.push_back({x, merge_ramp_y(x) - kEdgeOffset});
        }
        ramp_lane.push_back({41.0, 0.0});
        road.map.push_back({PolylineKind::lane_center, std::move(ramp_lane)});
        road.map.push_back({PolylineKind::road_edge, std::move(ramp_edge)});
    } else {
        road.map.push_back({PolylineKind::road_edge,
                            sample_line(shape, -kEdgeOffset, kRoadStart, kRoadEnd, false)});
    }
    return road;
}

namespace {

// Forward-simulates a yaw-rate pulse and returns the peak distance from the
// reference line. Used to calibrate maneuver amplitudes.
double simulate_pulse_offset(const RoadShape& shape, const KinState& start, double amplitude,
                             int pulse_steps, double sign, double dt,
                             const std::vector<Vec2>& reference, const ActionLimits& limits) {
    KinState s = start;
    double peak = 0.0;
    for (int k = 0; k < pulse_steps; ++k) {
        Action a;
        a.accel = 0.0;
        const double pulse =
            amplitude * std::sin(2.0 * M_PI * static_cast<double>(k) / pulse_steps);
        a.yaw_rate = std::clamp(shape.curvature() * s.v + sign * pulse, -limits.max_yaw_rate,
                                limits.max_yaw_rate);
        s = forward_step(s, a, dt, limits);
        peak = std::max(peak, point_polyline_distance({s.x, s.y}, reference).dist);
    }
    return peak;
}

double calibrate_pulse(const RoadShape& shape, const KinState& start, double target_offset,
                       int pulse_steps, double sign, double dt,
                       const std::vector<Vec2>& reference, const ActionLimits& limits) {
    double lo = 0.0, hi = 0.9;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double peak =
            simulate_pulse_offset(shape, start, mid, pulse_steps, sign, dt, reference, limits);
        if (peak < target_offset) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ScriptResult script_expert(ManeuverKind kind, const RoadModel& road, int T, double dt, Rng& rng,
                           const ActionLimits& limits) {
    const RoadShape shape = road_shape(road);
    ScriptResult r;

    auto base_yaw = [&](double v) { return shape.curvature() * v; };

    switch (kind) {
        case ManeuverKind::cruise:
        case ManeuverKind::dense_traffic: {
            r.v0 = rng.uniform(7.0, 12.0);
            break;
        }
        case ManeuverKind::hard_brake: {
            r.v0 = rng.uniform(5.5, 7.5);
            break;
        }
        case ManeuverKind::cut_in: {
            r.v0 = rng.uniform(10.0, 12.0);
            break;
        }
        case ManeuverKind::near_boundary:
        case ManeuverKind::lane_change: {
            r.v0 = rng.uniform(8.0, 10.0);
            break;
        }
    }

    KinState state{0.0, 0.0, 0.0, r.v0};
    r.states.push_back(state);

    // Per-step yaw-rate offsets on top of the base curvature tracking, and a
    // per-step accel schedule. Defaults are straight cruising.
    std::vector<double> accel(static_cast<std::size_t>(T - 1), 0.0);
    std::vector<double> pulse(static_cast<std::size_t>(T - 1), 0.0);

    if (kind == ManeuverKind::hard_brake) {
        // A lead vehicle cruising ahead at the same speed brakes to a stop;
        // the expert reacts after a short delay with a three-phase
        // deceleration (-b, -2b/3, -b/3) whose phase changes are saturated
        // jerk steps. Gap and lead-deceleration spreads vary the required
        // response strength. Peak convergence risk stays below the cut-in
        // interaction band: (gap + 4.8) * v0 <= (12 + 4.8) * 7.5 = 126.
        const int t_ev = std::max(5, std::min(25 + static_cast<int>(rng.uniform_int(10)), T - 45));
        const double gap0 = rng.uniform(7.0, 12.0);
        const double b_lead = rng.uniform(3.5, 5.5);
        r.t_start = t_ev;
        r.lead_gap = gap0;
        r.lead_brake = b_lead;

        // The lead's travel past t_ev extends the available stopping room.
        double lead_travel = 0.0;
        for (double vl = r.v0; vl > 0.0;) {
            lead_travel += vl * dt;
            vl = vl - b_lead * dt >= b_lead * dt ? vl - b_lead * dt : 0.0;
        }
        const int delay = 3;
        const double avail = gap0 + lead_travel - r.v0 * dt * delay - 1.5;
        const double b_floor = 0.72 * r.v0 * r.v0 / avail;
        const double b = rng.uniform(std::max(5.5, b_floor), std::max(5.6, b_floor) + 1.2);

        double v = r.v0;
        int t = t_ev + delay;
        auto run_phase = [&](double decel, double v_exit) {
            while (t < T - 1 && v - decel * dt >= v_exit) {
                accel[static_cast<std::size_t>(t)] = -decel;
                v -= decel * dt;
                ++t;
            }
        };
        run_phase(b, 2.0 * r.v0 / 3.0);
        run_phase(2.0 * b / 3.0, r.v0 / 3.0);
        run_phase(b / 3.0, 0.0);
        // Stopping steps mirroring forward_step's arithmetic exactly; the
        // residual reaches 0.0 within a couple of iterations.
        for (int guard = 0; t < T - 1 && v > 0.0 && guard < 5; ++guard) {
            const double a = -v / dt;
            accel[static_cast<std::size_t>(t)] = a;
            v = std::max(0.0, v + a * dt);
            ++t;
        }
        r.t_end = std::min(t + 2, T - 1);
    } else if (kind == ManeuverKind::cut_in) {
        const int t_app = std::max(5, std::min(25 + static_cast<int>(rng.uniform_int(14)), T - 25));
        r.t_start = t_app;
        r.cross_speed = rng.uniform(4.0, 5.0);
        r.cross_buffer = rng.uniform(4.4, 5.4);
        r.t_end = std::min(
            t_app + static_cast<int>(std::ceil(kCrosserLateralStart / r.cross_speed / dt)), T - 1);
    } else if (kind == ManeuverKind::near_boundary || kind == ManeuverKind::lane_change) {
        const bool nb = kind == ManeuverKind::near_boundary;
        const double target = nb ? rng.uniform(2.55, 2.95) : rng.uniform(1.7, 2.2);
        const double sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
        const int pulse_steps = 25;
        const int hold_steps = 10;
        int t0 = 10 + static_cast<int>(rng.uniform_int(6));
        const int total = 2 * pulse_steps + hold_steps;
        if (t0 + total > T - 2) t0 = std::max(1, T - 2 - total);

        // Roll the nominal segment to the pulse start, then calibrate the
        // amplitude against the reference centerline.
        KinState at_start = state;
        for (int t = 0; t < t0; ++t) {
            Action a{0.0, base_yaw(at_start.v)};
            at_start = forward_step(at_start, a, dt, limits);
        }
        const double amp = calibrate_pulse(shape, at_start, target, pulse_steps, sign, dt,
                                           road.reference, limits);
        for (int k = 0; k < pulse_steps; ++k) {
            const int t = t0 + k;
            if (t >= T - 1) break;
            pulse[static_cast<std::size_t>(t)] =
                sign * amp * std::sin(2.0 * M_PI * static_cast<double>(k) / pulse_steps);
        }
        for (int k = 0; k < pulse_steps; ++k) {
            const int t = t0 + pulse_steps + hold_steps + k;
            if (t >= T - 1) break;
            pulse[static_cast<std::size_t>(t)] =
                -sign * amp * std::sin(2.0 * M_PI * static_cast<double>(k) / pulse_steps);
        }
        r.t_start = t0;
        r.t_end = std::min(t0 + total + 2, T - 1);
    }
    if (kind == ManeuverKind::dense_traffic) {
        r.t_start = 0;
        r.t_end = T - 1;
    }

    for (int t = 0; t < T - 1; ++t) {
        Action a;
        a.accel = accel[static_cast<std::size_t>(t)];
        a.yaw_rate = std::clamp(base_yaw(state.v) + pulse[static_cast<std::size_t>(t)],
                                -limits.max_yaw_rate, limits.max_yaw_rate);
        state = forward_step(state, a, dt, limits);
        r.actions.push_back(a);
        r.states.push_back(state);
    }
    return r;
}

namespace {

AgentState state_from_kin(const KinState& s) {
    AgentState a;
    a.valid = true;
    a.x = s.x;
    a.y = s.y;
    a.yaw = s.yaw;
    a.vx = s.v * std::cos(s.yaw);
    a.vy = s.v * std::sin(s.yaw);
    return a;
}

// Background vehicle following the road at a per-step speed profile and
// fixed lateral offset.
AgentTrack road_follower_profile(const RoadShape& shape, double s0, double lat,
                                 std::span<const double> speeds, int T, double dt) {
    AgentTrack track;
    track.type = AgentType::vehicle;
    track.length = kSdcLength;
    track.width = kSdcWidth;
    double s = s0;
    for (int t = 0; t < T; ++t) {
        const double speed = speeds[static_cast<std::size_t>(t)];
        AgentState st;
        st.valid = true;
        const Vec2 p = shape.offset_point(s, lat);
        const double h = shape.heading_at(s);
        st.x = p.x;
        st.y = p.y;
        st.yaw = wrap_angle(h);
        st.vx = speed * std::cos(h);
        st.vy = speed * std::sin(h);
        track.states.push_back(st);
        s += speed * dt;
    }
    return track;
}

AgentTrack road_follower(const RoadShape& shape, double s0, double lat, double speed, int T,
                         double dt) {
    const std::vector<double> speeds(static_cast<std::size_t>(T), speed);
    return road_follower_profile(shape, s0, lat, speeds, T, dt);
}

AgentTrack invalid_track(int T) {
    AgentTrack track;
    track.type = AgentType::vehicle;
    track.length = kSdcLength;
    track.width = kSdcWidth;
    track.states.assign(static_cast<std::size_t>(T), AgentState{});
    return track;
}

ManeuverKind to_maneuver(EventKind k) {
    switch (k) {
        case EventKind::hard_brake: return ManeuverKind::hard_brake;
        case EventKind::cut_in: return ManeuverKind::cut_in;
        case EventKind::near_boundary: return ManeuverKind::near_boundary;
        case EventKind::lane_change: return ManeuverKind::lane_change;
        case EventKind::dense_traffic: return ManeuverKind::dense_traffic;
    }
    return ManeuverKind::cruise;
}

}  // namespace

Scenario build_scenario(const std::string& id, const CorpusSpec& spec,
                        std::optional<EventKind> event, std::uint64_t scenario_seed,
                        std::vector<PlantedEvent>& events_out) {
    Rng rng(scenario_seed);
    const int T = spec.num_timesteps;
    const double dt = 0.1;

    std::vector<RoadKind> kinds(spec.road_kinds.begin(), spec.road_kinds.end());
    RoadKind road_kind = kinds[rng.uniform_int(kinds.size())];
    // Events whose geometry assumes a single straight corridor force the
    // road: braking leads and crossers are placed along +x, and offset
    // maneuvers need an unambiguous nearest centerline.
    if (event == EventKind::hard_brake || event == EventKind::cut_in) {
        road_kind = RoadKind::straight;
    }
    if ((event == EventKind::near_boundary || event == EventKind::lane_change) &&
        road_kind == RoadKind::merge) {
        road_kind = RoadKind::straight;
    }

    const RoadModel road = RoadModel::make(road_kind, rng);
    const RoadShape shape = road_shape(road);
    const ManeuverKind maneuver = event ? to_maneuver(*event) : ManeuverKind::cruise;
    const ScriptResult script = script_expert(maneuver, road, T, dt, rng);

    Scenario s;
    s.id = id;
    s.dt = dt;
    s.num_timesteps = T;
    s.sdc_index = 0;

    AgentTrack sdc;
    sdc.type = AgentType::vehicle;
    sdc.length = kSdcLength;
    sdc.width = kSdcWidth;
    for (const KinState& k : script.states) sdc.states.push_back(state_from_kin(k));
    s.agents.push_back(std::move(sdc));

    if (maneuver == ManeuverKind::hard_brake) {
        // Lead cruising a bumper gap ahead at the same speed; it brakes to a
        // stop from t_start and holds.
        AgentTrack lead;
        lead.type = AgentType::vehicle;
        lead.length = kSdcLength;
        lead.width = kSdcWidth;
        KinState ls{script.lead_gap + kSdcLength, 0.0, 0.0, script.v0};
        for (int t = 0; t < T; ++t) {
            lead.states.push_back(state_from_kin(ls));
            double a = 0.0;
            if (t >= script.t_start && ls.v > 0.0) {
                a = ls.v - script.lead_brake * dt >= 0.0 ? -script.lead_brake : -ls.v / dt;
            }
            ls = forward_step(ls, {a, 0.0}, dt);
        }
        s.agents.push_back(std::move(lead));
        s.agents.push_back(road_follower(shape, 80.0, 0.0, script.v0, T, dt));
    } else if (maneuver == ManeuverKind::cut_in) {
        // Crosser timed so the SDC clears the corridor before it arrives.
        const double vy = script.cross_speed;
        const double x_app = script.states[static_cast<std::size_t>(script.t_start)].x;
        const double dx_app =
            script.v0 * (kCrosserLateralStart - kCorridorReach) / vy - script.cross_buffer;
        const double cross_x = x_app + dx_app;
        AgentTrack crosser = invalid_track(T);
        for (int t = script.t_start; t < T; ++t) {
            AgentState st;
            st.valid = true;
            st.x = cross_x;
            st.y = kCrosserLateralStart - vy * dt * static_cast<double>(t - script.t_start);
            st.yaw = -M_PI / 2.0;
            st.vx = 0.0;
            st.vy = -vy;
            crosser.states[static_cast<std::size_t>(t)] = st;
        }
        s.agents.push_back(std::move(crosser));
        s.agents.push_back(road_follower(shape, 75.0, 0.0, script.v0, T, dt));
    } else if (maneuver == ManeuverKind::dense_traffic) {
        const int n_bg = 13 + static_cast<int>(rng.uniform_int(7));
        for (int k = 0; k < n_bg; ++k) {
            const double lat = (k % 2 == 0) ? 3.0 : -3.0;
            const double s0 = -36.0 + 12.0 * static_cast<double>(k / 2) +
                              rng.uniform(-2.0, 2.0);
            s.agents.push_back(road_follower(shape, s0, lat, script.v0, T, dt));
        }
    } else {
        // Most nominal scenes carry a benign lead at hard-brake-like gaps.
        // Half of those leads "feint": they shed 1-2 m/s and recover, which
        // the expert ignores. Spatial proximity and mild closing speeds are
        // therefore never sufficient braking cues on their own.
        if (maneuver == ManeuverKind::cruise && rng.uniform() < 0.7) {
            const double gap = rng.uniform(7.0, 18.0);
            std::vector<double> speeds(static_cast<std::size_t>(T), script.v0);
            if (rng.uniform() < 0.5) {
                const double dv = rng.uniform(1.0, 2.0);
                const int t_f = 15 + static_cast<int>(rng.uniform_int(std::max(1, T - 50)));
                for (int t = 0; t < T; ++t) {
                    const int k = t - t_f;
                    double v = script.v0;
                    if (k >= 0 && k < 10) v -= dv * (k + 1) / 10.0;
                    else if (k >= 10 && k < 20) v -= dv;
                    else if (k >= 20 && k < 30) v -= dv * (30 - k) / 10.0;
                    speeds[static_cast<std::size_t>(t)] = v;
                }
            } else {
                const double closing = rng.uniform(0.0, 0.6);
                std::fill(speeds.begin(), speeds.end(), script.v0 - closing);
            }
            s.agents.push_back(
                road_follower_profile(shape, gap + kSdcLength, 0.0, speeds, T, dt));
        }
        const int n_bg = static_cast<int>(rng.uniform_int(4));
        for (int k = 0; k < n_bg; ++k) {
            const double ahead = rng.uniform(40.0, 90.0) * (rng.uniform() < 0.7 ? 1.0 : -1.0);
            s.agents.push_back(road_follower(shape, ahead, 0.0, script.v0, T, dt));
        }
    }

    s.map = road.map;
    s.traffic_lights.assign(static_cast<std::size_t>(T), {});

    // Route: the expert's own path sampled every 8 m plus the final position.
    s.route.push_back({script.states.front().x, script.states.front().y});
    double since = 0.0;
    for (std::size_t k = 1; k < script.states.size(); ++k) {
        const Vec2 prev{script.states[k - 1].x, script.states[k - 1].y};
        const Vec2 cur{script.states[k].x, script.states[k].y};
        since += distance(prev, cur);
        if (since >= 8.0) {
            s.route.push_back(cur);
            since = 0.0;
        }
    }
    const Vec2 last{script.states.back().x, script.states.back().y};
    if (s.route.empty() || !(s.route.back() == last)) {
        if (distance(s.route.back(), last) > 1e-9) s.route.push_back(last);
    }

    if (event) {
        events_out.push_back({*event, id, script.t_start, script.t_end});
    }
    return s;
}

std::vector<PlantedEvent> generate_corpus(const CorpusSpec& spec,
                                          const std::filesystem::path& out_dir, int workers) {
    spec.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    // Deterministic quotas: round(p * N) scenarios per kind, assigned by a
    // seeded shuffle of scenario slots.
    const int n = spec.num_scenarios;
    std::vector<std::optional<EventKind>> assignment(static_cast<std::size_t>(n));
    {
        std::vector<int> slots(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) slots[static_cast<std::size_t>(i)] = i;
        Rng assign_rng(sub_seed(spec.seed, 0xA551u));
        assign_rng.shuffle(slots);
        std::size_t cursor = 0;
        for (const auto& [kind, p] : spec.event_mix) {
            const int quota = static_cast<int>(std::llround(p * static_cast<double>(n)));
            for (int k = 0; k < quota && cursor < slots.size(); ++k, ++cursor) {
                assignment[static_cast<std::size_t>(slots[cursor])] = kind;
            }
        }
    }

    std::vector<std::vector<PlantedEvent>> event_slots(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
        char name[32];
        std::snprintf(name, sizeof(name), "scn_%05zu", i);
        const Scenario s = build_scenario(name, spec, assignment[i], sub_seed(spec.seed, i),
                                          event_slots[i]);
        save_scenario(s, out_dir / (std::string(name) + ".json"));
    });

    std::vector<PlantedEvent> events;
    for (const auto& slot : event_slots) {
        events.insert(events.end(), slot.begin(), slot.end());
    }
    save_ledger(out_dir / "ledger.csv", events);
    return events;
}

void save_ledger(const std::filesystem::path& path, const std::vector<PlantedEvent>& events) {
    CsvTable table;
    table.header = {"scenario_id", "kind", "t_start", "t_end"};
    for (const PlantedEvent& e : events) {
        table.rows.push_back(
            {e.scenario_id, to_string(e.kind), std::to_string(e.t_start), std::to_string(e.t_end)});
    }
    write_csv(path, table);
}

std::vector<PlantedEvent> load_ledger(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    std::vector<PlantedEvent> events;
    for (const auto& row : table.rows) {
        if (row.size() != 4) throw SchemaError(path.string() + ": bad ledger row");
        events.push_back({event_kind_from_string(row[1]), row[0],
                          static_cast<int>(parse_int(row[2])),
                          static_cast<int>(parse_int(row[3]))});
    }
    return events;
}

}  // namespace curator
