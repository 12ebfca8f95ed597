#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "curator/dynamics.hpp"
#include "curator/scenario.hpp"

namespace curator {

// Normalization constants of the five heuristic scores.
struct HeuristicConstants {
    double jerk_norm = 8.0;          // m/s^3
    double yaw_accel_norm = 3.0;     // rad/s^2
    double interaction_norm = 200.0;
    double offroad_thresh = 2.0;     // m
    double lane_dev_norm = 1.5;      // m
    double density_norm = 20.0;      // agents
};

struct HeuristicWeights {
    double volatility = 0.40;
    double interaction = 0.05;
    double off_road = 0.05;
    double lane_dev = 0.47;
    double density = 0.03;

    void validate() const;  // nonnegative, sum == 1 within 1e-9
};

// Per-timestep score table for one scenario. `base_defined` marks timesteps
// with a valid SDC; `vol_defined` additionally requires two steps of valid
// derivative history. Entries outside their mask are zero and never read.
struct TimestepScores {
    std::vector<double> volatility;
    std::vector<double> interaction;
    std::vector<double> off_road;
    std::vector<double> lane_dev;
    std::vector<double> density;
    std::vector<double> combined;
    std::vector<std::uint8_t> base_defined;
    std::vector<std::uint8_t> vol_defined;
    std::vector<std::uint8_t> combined_defined;
};

// max(clip(|jerk|/jerk_norm), clip(|yaw_accel|/yaw_accel_norm)) per timestep;
// undefined entries follow chain.second_order_defined.
std::vector<double> score_volatility(const KinematicChain& chain, const HeuristicConstants& c);

// Peak convergence risk over other valid agents, -min(0, p_rel . v_rel),
// normalized by interaction_norm. Zero when no other agents are present.
double score_interaction(const Scenario& s, int t, const HeuristicConstants& c);

// clip(1 - d/offroad_thresh) with d the minimum distance from the SDC's four
// bounding-box corners to any road_edge polyline; 0 when the map has none.
double score_offroad(const Scenario& s, int t, const HeuristicConstants& c);

// clip(d/lane_dev_norm) with d the SDC center distance to the nearest lane
// centerline. Throws NoLaneError when the scene has no lane_center polylines.
double score_lanedev(const Scenario& s, int t, const HeuristicConstants& c);

// clip(valid agent count / density_norm); the SDC counts as an agent.
double score_density(const Scenario& s, int t, const HeuristicConstants& c);

// Weighted sum of the five scores at timesteps where all five are defined.
std::vector<double> combine(const TimestepScores& raw, const HeuristicWeights& w);

TimestepScores score_scenario(const Scenario& s, const HeuristicConstants& c,
                              const HeuristicWeights& w);

// Table file: columns (t, s_vol, s_int, s_off, s_lane, s_den, s_comb, defined).
void save_score_table(const std::filesystem::path& path, const TimestepScores& scores);
TimestepScores load_score_table(const std::filesystem::path& path);

// Oriented rectangle of an agent at timestep t.
Obb agent_obb(const AgentTrack& track, int t);

// Scores every scenario of the corpus; slot-per-scenario writes keep the
// result identical for any worker count.
std::vector<TimestepScores> score_corpus_heuristic(const Corpus& corpus,
                                                   const HeuristicConstants& c,
                                                   const HeuristicWeights& w, int workers);

}  // namespace curator
