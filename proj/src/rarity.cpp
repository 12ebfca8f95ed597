#include "curator/rarity.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "curator/errors.hpp"
#include "curator/io_util.hpp"

namespace curator {

namespace {

// Boundaries {lo} u {-w 2^i} u {0} u {+w 2^i} u {hi}, doubling while the
// magnitude stays inside the range.
std::vector<double> geometric_edges(double lo, double hi, double base_width) {
    std::vector<double> mags;
    for (double m = base_width; m < hi || m < -lo; m *= 2.0) mags.push_back(m);
    std::vector<double> edges;
    edges.push_back(lo);
    for (auto it = mags.rbegin(); it != mags.rend(); ++it) {
        if (-*it > lo) edges.push_back(-*it);
    }
    edges.push_back(0.0);
    for (double m : mags) {
        if (m < hi) edges.push_back(m);
    }
    edges.push_back(hi);
    return edges;
}

int axis_bin(const std::vector<double>& edges, double v) {
    // upper_bound gives the first edge > v; the preceding interval holds v.
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    int idx = static_cast<int>(it - edges.begin()) - 1;
    return std::clamp(idx, 0, static_cast<int>(edges.size()) - 2);
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> default_edges(const ActionLimits& limits) {
    return {geometric_edges(limits.min_accel, limits.max_accel, 0.05),
            geometric_edges(-limits.max_yaw_rate, limits.max_yaw_rate, 0.01)};
}

int ActionHistogram::bin_index(const Action& a) const {
    const double accel = std::clamp(a.accel, accel_edges.front(), accel_edges.back());
    const double yaw = std::clamp(a.yaw_rate, yaw_edges.front(), yaw_edges.back());
    return axis_bin(accel_edges, accel) * yaw_bins() + axis_bin(yaw_edges, yaw);
}

void ActionHistogram::add(const Action& a) {
    ++counts[static_cast<std::size_t>(bin_index(a))];
    ++total;
}

void ActionHistogram::merge(const ActionHistogram& other) {
    if (other.counts.size() != counts.size()) {
        throw DimensionMismatch("histogram merge: bin grids differ");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
}

ActionHistogram make_histogram(std::vector<double> accel_edges, std::vector<double> yaw_edges,
                               double smoothing_alpha) {
    ActionHistogram h;
    h.accel_edges = std::move(accel_edges);
    h.yaw_edges = std::move(yaw_edges);
    h.smoothing_alpha = smoothing_alpha;
    h.counts.assign(static_cast<std::size_t>(h.num_bins()), 0);
    return h;
}

ActionHistogram build_histogram(std::span<const Action> actions, const ActionLimits& limits) {
    auto [accel_edges, yaw_edges] = default_edges(limits);
    ActionHistogram h = make_histogram(std::move(accel_edges), std::move(yaw_edges));
    for (const Action& a : actions) h.add(a);
    return h;
}

double rarity_raw(const ActionHistogram& h, const Action& a) {
    const double alpha = h.smoothing_alpha;
    const double count = static_cast<double>(h.counts[static_cast<std::size_t>(h.bin_index(a))]);
    const double p = (count + alpha) / (static_cast<double>(h.total) + alpha * h.num_bins());
    return 1.0 / p;
}

RarityScores normalize_rarity(std::span<const double> raws) {
    if (raws.empty()) throw EmptyInput("normalize_rarity: no raw scores");
    std::vector<double> sorted(raws.begin(), raws.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = 0.99 * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    double p99 = sorted[lo];
    if (lo + 1 < sorted.size()) p99 += frac * (sorted[lo + 1] - sorted[lo]);

    RarityScores out;
    out.p99_raw = p99;
    out.raw.assign(raws.begin(), raws.end());
    out.score.reserve(raws.size());
    for (double r : raws) {
        out.score.push_back(p99 > 0.0 ? std::clamp(r / p99, 0.0, 1.0) : 0.0);
    }
    return out;
}

void save_histogram(const std::filesystem::path& path, const ActionHistogram& h) {
    nlohmann::json doc;
    doc["accel_edges"] = h.accel_edges;
    doc["yaw_edges"] = h.yaw_edges;
    doc["counts"] = h.counts;
    doc["total"] = h.total;
    doc["smoothing_alpha"] = h.smoothing_alpha;
    write_text_file(path, doc.dump(1) + "\n");
}

ActionHistogram load_histogram(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    ActionHistogram h;
    try {
        h.accel_edges = doc.at("accel_edges").get<std::vector<double>>();
        h.yaw_edges = doc.at("yaw_edges").get<std::vector<double>>();
        h.counts = doc.at("counts").get<std::vector<std::int64_t>>();
        h.total = doc.at("total").get<std::int64_t>();
        h.smoothing_alpha = doc.at("smoothing_alpha").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    if (h.counts.size() != static_cast<std::size_t>(h.num_bins())) {
        throw SchemaError(path.string() + ": counts grid does not match edges");
    }
    return h;
}

}  // namespace curator
