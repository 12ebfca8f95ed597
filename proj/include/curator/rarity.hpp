#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "curator/dynamics.hpp"

namespace curator {

// Global 2D histogram over the action space (acceleration x yaw rate) with
// non-uniform bins: geometric doubling away from the origin so near-zero
// actions keep high resolution.
struct ActionHistogram {
    std::vector<double> accel_edges;  // strictly increasing, covers the accel range
    std::vector<double> yaw_edges;
    std::vector<std::int64_t> counts;  // row-major [accel_bin][yaw_bin]
    std::int64_t total = 0;
    double smoothing_alpha = 1.0;

    int accel_bins() const { return static_cast<int>(accel_edges.size()) - 1; }
    int yaw_bins() const { return static_cast<int>(yaw_edges.size()) - 1; }
    int num_bins() const { return accel_bins() * yaw_bins(); }

    // Flat bin index of a (clipped) action. Bins are half-open [e_i, e_{i+1})
    // with the last bin closed, so every in-range action maps to exactly one.
    int bin_index(const Action& a) const;

    void add(const Action& a);
    void merge(const ActionHistogram& other);  // shard accumulation
};

// Symmetric geometric boundaries {0} u {+-w 2^i} inside the action range,
// plus the range bounds themselves. Accel base width 0.05 m/s^2, yaw base
// width 0.01 rad/s.
std::pair<std::vector<double>, std::vector<double>> default_edges(const ActionLimits& limits = {});

ActionHistogram make_histogram(std::vector<double> accel_edges, std::vector<double> yaw_edges,
                               double smoothing_alpha = 1.0);

ActionHistogram build_histogram(std::span<const Action> actions,
                                const ActionLimits& limits = {});

// Smoothed inverse frequency 1/p with Laplace-smoothed bin probability
// p = (count + alpha) / (total + alpha * num_bins).
double rarity_raw(const ActionHistogram& h, const Action& a);

struct RarityScores {
    std::vector<double> raw;
    std::vector<double> score;  // clip(raw / p99_raw, 0, 1)
    double p99_raw = 0.0;
};

// Throws EmptyInput on an empty raw list.
RarityScores normalize_rarity(std::span<const double> raws);

void save_histogram(const std::filesystem::path& path, const ActionHistogram& h);
ActionHistogram load_histogram(const std::filesystem::path& path);

}  // namespace curator
