#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "curator/geometry.hpp"

namespace curator {

inline constexpr int kScenarioSchemaVersion = 1;

enum class AgentType { vehicle, pedestrian, cyclist };
enum class PolylineKind { lane_center, road_edge };
enum class LightState { red, green, unknown };

std::string to_string(AgentType t);
std::string to_string(PolylineKind k);
std::string to_string(LightState s);

// Per-timestep agent record. Invalid steps keep sentinel values that are
// never read while valid == false.
struct AgentState {
    bool valid = false;
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;
    double vx = 0.0;
    double vy = 0.0;
};

struct AgentTrack {
    AgentType type = AgentType::vehicle;
    double length = 0.0;
    double width = 0.0;
    std::vector<AgentState> states;  // exactly T entries
};

struct MapPolyline {
    PolylineKind kind = PolylineKind::lane_center;
    std::vector<Vec2> points;  // >= 2, consecutive points distinct
};

struct TrafficLight {
    Vec2 stop_line{};
    LightState state = LightState::unknown;
};

// A complete multi-agent driving log in world-frame coordinates.
struct Scenario {
    std::string id;
    double dt = 0.1;
    int num_timesteps = 0;
    int sdc_index = 0;
    std::vector<AgentTrack> agents;
    std::vector<MapPolyline> map;
    std::vector<std::vector<TrafficLight>> traffic_lights;  // one list per timestep
    std::vector<Vec2> route;  // >= 1 waypoint

    const AgentTrack& sdc() const { return agents[static_cast<std::size_t>(sdc_index)]; }
};

// Throws ValidationError (with a field path) on any invariant violation.
void validate(const Scenario& s);

// Throws ParseError / SchemaError / ValidationError.
Scenario load_scenario(const std::filesystem::path& path);

// Deterministic serialization: saving the same scenario twice produces
// identical bytes, and load(save(s)) == s field for field.
void save_scenario(const Scenario& s, const std::filesystem::path& path);

std::string serialize_scenario(const Scenario& s);
Scenario deserialize_scenario(const std::string& text, const std::string& origin = "");

// Timesteps t with the SDC valid at both t and t+1, ascending.
std::vector<int> enumerate_transitions(const Scenario& s);

// Whole corpus held in memory, scenarios sorted by id.
struct Corpus {
    std::vector<Scenario> scenarios;

    const Scenario* find(const std::string& id) const;
};

Corpus load_corpus(const std::filesystem::path& dir);

}  // namespace curator
