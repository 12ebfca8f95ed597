#include "curator/scenario.hpp"

#include <cmath>
#include <json.hpp>

#include "curator/errors.hpp"
#include "curator/io_util.hpp"

namespace curator {

using json = nlohmann::json;

std::string to_string(AgentType t) {
    switch (t) {
        case AgentType::vehicle: return "vehicle";
        case AgentType::pedestrian: return "pedestrian";
        case AgentType::cyclist: return "cyclist";
    }
    return "vehicle";
}

std::string to_string(PolylineKind k) {
    return k == PolylineKind::lane_center ? "lane_center" : "road_edge";
}

std::string to_string(LightState s) {
    switch (s) {
        case LightState::red: return "red";
        case LightState::green: return "green";
        case LightState::unknown: return "unknown";
    }
    return "unknown";
}

namespace {

AgentType agent_type_from_string(const std::string& s, const std::string& path) {
    if (s == "vehicle") return AgentType::vehicle;
    if (s == "pedestrian") return AgentType::pedestrian;
    if (s == "cyclist") return AgentType::cyclist;
    throw SchemaError(path + ": unknown agent type '" + s + "'");
}

PolylineKind polyline_kind_from_string(const std::string& s, const std::string& path) {
    if (s == "lane_center") return PolylineKind::lane_center;
    if (s == "road_edge") return PolylineKind::road_edge;
    throw SchemaError(path + ": unknown polyline kind '" + s + "'");
}

LightState light_state_from_string(const std::string& s, const std::string& path) {
    if (s == "red") return LightState::red;
    if (s == "green") return LightState::green;
    if (s == "unknown") return LightState::unknown;
    throw SchemaError(path + ": unknown light state '" + s + "'");
}

const json& require(const json& p, const char* key, const std::string& path) {
    auto it = p.find(key);
    if (it == p.end()) throw SchemaError(path + ": missing field '" + key + "'");
    return *it;
}

double require_number(const json& p, const char* key, const std::string& path) {
    const json& v = require(p, key, path);
    if (!v.is_number()) throw SchemaError(path + "." + key + ": expected a number");
    return v.get<double>();
}

long long require_integer(const json& p, const char* key, const std::string& path) {
    const json& v = require(p, key, path);
    if (!v.is_number_integer()) throw SchemaError(path + "." + key + ": expected an integer");
    return v.get<long long>();
}

std::string require_string(const json& p, const char* key, const std::string& path) {
    const json& v = require(p, key, path);
    if (!v.is_string()) throw SchemaError(path + "." + key + ": expected a string");
    return v.get<std::string>();
}

bool require_bool(const json& p, const char* key, const std::string& path) {
    const json& v = require(p, key, path);
    if (!v.is_boolean()) throw SchemaError(path + "." + key + ": expected a boolean");
    return v.get<bool>();
}

const json& require_array(const json& p, const char* key, const std::string& path) {
    const json& v = require(p, key, path);
    if (!v.is_array()) throw SchemaError(path + "." + key + ": expected an array");
    return v;
}

Vec2 parse_point(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw SchemaError(path + ": expected a point [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

void check_finite(double v, const std::string& path) {
    if (!std::isfinite(v)) throw ValidationError(path + ": not finite");
}

}  // namespace

void validate(const Scenario& s) {
    if (!(s.dt > 0.0) || !std::isfinite(s.dt)) throw ValidationError("dt: must be > 0 and finite");
    if (s.num_timesteps < 1) throw ValidationError("num_timesteps: must be >= 1");
    if (s.agents.empty()) throw ValidationError("agents: must be nonempty");
    if (s.sdc_index < 0 || s.sdc_index >= static_cast<int>(s.agents.size())) {
        throw ValidationError("sdc_index: out of range");
    }
    const std::size_t T = static_cast<std::size_t>(s.num_timesteps);
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
        const AgentTrack& a = s.agents[i];
        const std::string path = "agents[" + std::to_string(i) + "]";
        if (!(a.length > 0.0) || !std::isfinite(a.length)) {
            throw ValidationError(path + ".length: must be > 0 and finite");
        }
        if (!(a.width > 0.0) || !std::isfinite(a.width)) {
            throw ValidationError(path + ".width: must be > 0 and finite");
        }
        if (a.states.size() != T) {
            throw SchemaError(path + ".states: has " + std::to_string(a.states.size()) +
                              " records, expected num_timesteps = " + std::to_string(T));
        }
        for (std::size_t t = 0; t < a.states.size(); ++t) {
            const AgentState& st = a.states[t];
            if (!st.valid) continue;
            const std::string sp = path + ".states[" + std::to_string(t) + "]";
            check_finite(st.x, sp + ".x");
            check_finite(st.y, sp + ".y");
            check_finite(st.yaw, sp + ".yaw");
            check_finite(st.vx, sp + ".vx");
            check_finite(st.vy, sp + ".vy");
        }
    }
    for (std::size_t i = 0; i < s.map.size(); ++i) {
        const MapPolyline& p = s.map[i];
        const std::string path = "map[" + std::to_string(i) + "]";
        if (p.points.size() < 2) throw ValidationError(path + ".points: needs >= 2 points");
        for (std::size_t k = 0; k + 1 < p.points.size(); ++k) {
            if (p.points[k] == p.points[k + 1]) {
                throw ValidationError(path + ".points[" + std::to_string(k + 1) +
                                      "]: duplicate consecutive point");
            }
        }
    }
    if (s.traffic_lights.size() != T) {
        throw SchemaError("traffic_lights: has " + std::to_string(s.traffic_lights.size()) +
                          " timesteps, expected " + std::to_string(T));
    }
    for (std::size_t t = 0; t < s.traffic_lights.size(); ++t) {
        for (std::size_t k = 0; k < s.traffic_lights[t].size(); ++k) {
            const TrafficLight& tl = s.traffic_lights[t][k];
            const std::string path =
                "traffic_lights[" + std::to_string(t) + "][" + std::to_string(k) + "]";
            check_finite(tl.stop_line.x, path + ".stop_line.x");
            check_finite(tl.stop_line.y, path + ".stop_line.y");
        }
    }
    if (s.route.empty()) throw ValidationError("route: needs >= 1 waypoint");
    for (std::size_t i = 0; i < s.route.size(); ++i) {
        check_finite(s.route[i].x, "route[" + std::to_string(i) + "].x");
        check_finite(s.route[i].y, "route[" + std::to_string(i) + "].y");
    }
}

std::string serialize_scenario(const Scenario& s) {
    json doc;
    doc["schema_version"] = kScenarioSchemaVersion;
    doc["id"] = s.id;
    doc["dt"] = s.dt;
    doc["num_timesteps"] = s.num_timesteps;
    doc["sdc_index"] = s.sdc_index;

    json agents = json::array();
    for (const AgentTrack& a : s.agents) {
        json ja;
        ja["type"] = to_string(a.type);
        ja["length"] = a.length;
        ja["width"] = a.width;
        json states = json::array();
        for (const AgentState& st : a.states) {
            json js;
            js["valid"] = st.valid;
            js["x"] = st.x;
            js["y"] = st.y;
            js["yaw"] = st.yaw;
            js["vx"] = st.vx;
            js["vy"] = st.vy;
            states.push_back(std::move(js));
        }
        ja["states"] = std::move(states);
        agents.push_back(std::move(ja));
    }
    doc["agents"] = std::move(agents);

    json map = json::array();
    for (const MapPolyline& p : s.map) {
        json jp;
        jp["kind"] = to_string(p.kind);
        json pts = json::array();
        for (const Vec2& v : p.points) pts.push_back(json::array({v.x, v.y}));
        jp["points"] = std::move(pts);
        map.push_back(std::move(jp));
    }
    doc["map"] = std::move(map);

    json lights = json::array();
    for (const auto& step : s.traffic_lights) {
        json jstep = json::array();
        for (const TrafficLight& tl : step) {
            json jl;
            jl["stop_line"] = json::array({tl.stop_line.x, tl.stop_line.y});
            jl["state"] = to_string(tl.state);
            jstep.push_back(std::move(jl));
        }
        lights.push_back(std::move(jstep));
    }
    doc["traffic_lights"] = std::move(lights);

    json route = json::array();
    for (const Vec2& v : s.route) route.push_back(json::array({v.x, v.y}));
    doc["route"] = std::move(route);

    return doc.dump(1) + "\n";
}

Scenario deserialize_scenario(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw SchemaError(origin + ": top level must be an object");

    const std::string root = origin.empty() ? "scenario" : origin;
    const long long version = require_integer(doc, "schema_version", root);
    if (version != kScenarioSchemaVersion) {
        throw SchemaError(root + ": unsupported schema_version " + std::to_string(version));
    }

    Scenario s;
    s.id = require_string(doc, "id", root);
    s.dt = require_number(doc, "dt", root);
    s.num_timesteps = static_cast<int>(require_integer(doc, "num_timesteps", root));
    s.sdc_index = static_cast<int>(require_integer(doc, "sdc_index", root));

    const json& agents = require_array(doc, "agents", root);
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string path = "agents[" + std::to_string(i) + "]";
        const json& ja = agents[i];
        if (!ja.is_object()) throw SchemaError(path + ": expected an object");
        AgentTrack track;
        track.type = agent_type_from_string(require_string(ja, "type", path), path);
        track.length = require_number(ja, "length", path);
        track.width = require_number(ja, "width", path);
        const json& states = require_array(ja, "states", path);
        for (std::size_t t = 0; t < states.size(); ++t) {
            const std::string sp = path + ".states[" + std::to_string(t) + "]";
            const json& js = states[t];
            if (!js.is_object()) throw SchemaError(sp + ": expected an object");
            AgentState st;
            st.valid = require_bool(js, "valid", sp);
            st.x = require_number(js, "x", sp);
            st.y = require_number(js, "y", sp);
            st.yaw = require_number(js, "yaw", sp);
            st.vx = require_number(js, "vx", sp);
            st.vy = require_number(js, "vy", sp);
            track.states.push_back(st);
        }
        s.agents.push_back(std::move(track));
    }

    const json& map = require_array(doc, "map", root);
    for (std::size_t i = 0; i < map.size(); ++i) {
        const std::string path = "map[" + std::to_string(i) + "]";
        const json& jp = map[i];
        if (!jp.is_object()) throw SchemaError(path + ": expected an object");
        MapPolyline poly;
        poly.kind = polyline_kind_from_string(require_string(jp, "kind", path), path);
        const json& pts = require_array(jp, "points", path);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            poly.points.push_back(parse_point(pts[k], path + ".points[" + std::to_string(k) + "]"));
        }
        s.map.push_back(std::move(poly));
    }

    const json& lights = require_array(doc, "traffic_lights", root);
    for (std::size_t t = 0; t < lights.size(); ++t) {
        const std::string path = "traffic_lights[" + std::to_string(t) + "]";
        if (!lights[t].is_array()) throw SchemaError(path + ": expected an array");
        std::vector<TrafficLight> step;
        for (std::size_t k = 0; k < lights[t].size(); ++k) {
            const std::string lp = path + "[" + std::to_string(k) + "]";
            const json& jl = lights[t][k];
            if (!jl.is_object()) throw SchemaError(lp + ": expected an object");
            TrafficLight tl;
            tl.stop_line = parse_point(require(jl, "stop_line", lp), lp + ".stop_line");
            tl.state = light_state_from_string(require_string(jl, "state", lp), lp);
            step.push_back(tl);
        }
        s.traffic_lights.push_back(std::move(step));
    }

    const json& route = require_array(doc, "route", root);
    for (std::size_t i = 0; i < route.size(); ++i) {
        s.route.push_back(parse_point(route[i], "route[" + std::to_string(i) + "]"));
    }

    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    return deserialize_scenario(read_text_file(path), path.filename().string());
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    validate(s);
    write_text_file(path, serialize_scenario(s));
}

std::vector<int> enumerate_transitions(const Scenario& s) {
    std::vector<int> out;
    const AgentTrack& sdc = s.sdc();
    for (int t = 0; t + 1 < s.num_timesteps; ++t) {
        if (sdc.states[static_cast<std::size_t>(t)].valid &&
            sdc.states[static_cast<std::size_t>(t) + 1].valid) {
            out.push_back(t);
        }
    }
    return out;
}

const Scenario* Corpus::find(const std::string& id) const {
    for (const Scenario& s : scenarios) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

Corpus load_corpus(const std::filesystem::path& dir) {
    Corpus c;
    for (const auto& file : list_scenario_files(dir)) {
        c.scenarios.push_back(load_scenario(file));
    }
    return c;
}

}  // namespace curator
