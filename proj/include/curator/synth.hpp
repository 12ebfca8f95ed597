#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "curator/dynamics.hpp"
#include "curator/rng.hpp"
#include "curator/scenario.hpp"

namespace curator {

enum class EventKind { hard_brake, cut_in, near_boundary, lane_change, dense_traffic };
enum class RoadKind { straight, curve, merge };

std::string to_string(EventKind k);
std::string to_string(RoadKind k);
EventKind event_kind_from_string(const std::string& s);
RoadKind road_kind_from_string(const std::string& s);

struct CorpusSpec {
    int num_scenarios = 100;
    int num_timesteps = 91;
    std::uint64_t seed = 0;
    std::map<EventKind, double> event_mix;  // kind -> fraction of scenarios
    std::set<RoadKind> road_kinds{RoadKind::straight, RoadKind::curve};

    void validate() const;  // throws SpecError
};

struct PlantedEvent {
    EventKind kind;
    std::string scenario_id;
    int t_start = 0;
    int t_end = 0;
};

// Analytic road: a main reference centerline (plus a ramp lane on merge
// roads) with parallel road edges 2 m outside the 2 m lane half-width, all
// densified to <= 1 m point spacing. Road edges are oriented with the
// drivable area on their left.
struct RoadModel {
    RoadKind kind = RoadKind::straight;
    double curvature = 0.0;  // of the main centerline (1/R for curves)
    std::vector<MapPolyline> map;
    std::vector<Vec2> reference;  // main centerline points

    static RoadModel make(RoadKind kind, Rng& rng);
};

// Maneuver scripting: the planted event kinds plus nominal cruise.
enum class ManeuverKind { cruise, hard_brake, cut_in, near_boundary, lane_change, dense_traffic };

struct ScriptResult {
    std::vector<Action> actions;   // T-1 actions
    std::vector<KinState> states;  // T simulated states (bicycle-consistent)
    int t_start = -1;              // event window; -1 for cruise
    int t_end = -1;
    double v0 = 0.0;
    // Scene-coupling parameters consumed by the corpus builder.
    double lead_gap = 0.0;      // hard_brake: bumper gap to the lead at t=0
    double lead_brake = 0.0;    // hard_brake: lead deceleration from t_start
    double cross_speed = 0.0;   // cut_in: crosser lateral speed (m/s)
    double cross_buffer = 0.0;  // cut_in: clearance when the crosser reaches the corridor
};

// Deterministic per-step (accel, yaw rate) sequence for the maneuver, within
// the action limits; states come from forward-simulating those actions.
ScriptResult script_expert(ManeuverKind kind, const RoadModel& road, int T, double dt, Rng& rng,
                           const ActionLimits& limits = {});

// Builds one full scenario (SDC + background agents + map + route).
Scenario build_scenario(const std::string& id, const CorpusSpec& spec,
                        std::optional<EventKind> event, std::uint64_t scenario_seed,
                        std::vector<PlantedEvent>& events_out);

// Writes spec.num_scenarios scenario files plus the planted-event ledger
// (ledger.csv) into out_dir. Event counts are deterministic quotas
// round(p * N) assigned by a seeded shuffle. Returns the ledger.
std::vector<PlantedEvent> generate_corpus(const CorpusSpec& spec,
                                          const std::filesystem::path& out_dir, int workers = 1);

void save_ledger(const std::filesystem::path& path, const std::vector<PlantedEvent>& events);
std::vector<PlantedEvent> load_ledger(const std::filesystem::path& path);

}  // namespace curator
