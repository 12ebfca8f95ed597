#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "curator/errors.hpp"
#include "curator/rarity.hpp"
#include "curator/rng.hpp"

using namespace curator;

namespace {

// Brute-force bin lookup: linear scan over the half-open intervals.
int linear_bin(const std::vector<double>& edges, double v) {
    v = std::clamp(v, edges.front(), edges.back());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const bool last = i + 2 == edges.size();
        if (v >= edges[i] && (v < edges[i + 1] || (last && v <= edges[i + 1]))) {
            return static_cast<int>(i);
        }
    }
    return static_cast<int>(edges.size()) - 2;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            return v[x] < v[y];
        });
        std::vector<double> r(v.size());
        for (std::size_t pos = 0; pos < idx.size();) {
            std::size_t end = pos;
            while (end < idx.size() && v[idx[end]] == v[idx[pos]]) ++end;
            const double avg = 0.5 * (static_cast<double>(pos) + static_cast<double>(end - 1));
            for (std::size_t k = pos; k < end; ++k) r[idx[k]] = avg;
            pos = end;
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= static_cast<double>(ra.size());
    mb /= static_cast<double>(rb.size());
    double num = 0, da = 0, db = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    return num / std::sqrt(da * db);
}

}  // namespace

TEST_CASE("default edges: 18 x 16 grid with doubling widths") {
    const auto [accel, yaw] = default_edges();
    CHECK(accel.size() == 19);
    CHECK(yaw.size() == 17);
    const ActionHistogram h = make_histogram(accel, yaw);
    CHECK(h.accel_bins() == 18);
    CHECK(h.yaw_bins() == 16);
    CHECK(h.num_bins() == 288);

    // Innermost accel bins are 0.05 wide on each side of zero.
    const auto z = std::find(accel.begin(), accel.end(), 0.0);
    REQUIRE(z != accel.end());
    CHECK(*(z + 1) == doctest::Approx(0.05));
    CHECK(*(z - 1) == doctest::Approx(-0.05));
    CHECK(accel.front() == -10.0);
    CHECK(accel.back() == 8.0);
    CHECK(yaw.front() == -1.0);
    CHECK(yaw.back() == 1.0);
    for (std::size_t i = 0; i + 1 < accel.size(); ++i) CHECK(accel[i] < accel[i + 1]);
    for (std::size_t i = 0; i + 1 < yaw.size(); ++i) CHECK(yaw[i] < yaw[i + 1]);
}

TEST_CASE("binning is a partition matching a linear-scan oracle") {
    const auto [accel, yaw] = default_edges();
    const ActionHistogram h = make_histogram(accel, yaw);
    Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
        const Action a{rng.uniform(-10.0, 8.0), rng.uniform(-1.0, 1.0)};
        const int got = h.bin_index(a);
        const int expected = linear_bin(accel, a.accel) * h.yaw_bins() + linear_bin(yaw, a.yaw_rate);
        CHECK(got == expected);
        CHECK(got >= 0);
        CHECK(got < h.num_bins());
    }
    // Boundary actions map into the grid too.
    CHECK(h.bin_index({8.0, 1.0}) == h.num_bins() - 1);
    CHECK(h.bin_index({-10.0, -1.0}) == 0);
    CHECK(h.bin_index({0.0, 0.0}) ==
          linear_bin(accel, 0.0) * h.yaw_bins() + linear_bin(yaw, 0.0));
}

TEST_CASE("histogram build: point mass and empty stream") {
    std::vector<Action> actions;
    ActionHistogram h = build_histogram(actions);
    CHECK(h.total == 0);
    for (auto c : h.counts) CHECK(c == 0);

    actions.assign(100, Action{0.0, 0.0});
    h = build_histogram(actions);
    CHECK(h.total == 100);
    CHECK(h.counts[static_cast<std::size_t>(h.bin_index({0.0, 0.0}))] == 100);
}

TEST_CASE("shard merge equals the histogram of the concatenated stream") {
    Rng rng(5);
    std::vector<Action> a, b;
    for (int i = 0; i < 500; ++i) a.push_back({rng.uniform(-10, 8), rng.uniform(-1, 1)});
    for (int i = 0; i < 700; ++i) b.push_back({rng.uniform(-10, 8), rng.uniform(-1, 1)});
    ActionHistogram ha = build_histogram(a);
    const ActionHistogram hb = build_histogram(b);
    std::vector<Action> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const ActionHistogram hboth = build_histogram(both);
    ha.merge(hb);
    CHECK(ha.total == hboth.total);
    CHECK(ha.counts == hboth.counts);
}

TEST_CASE("rarity_raw: Laplace-smoothed inverse frequency") {
    auto [accel, yaw] = default_edges();
    ActionHistogram h = make_histogram(accel, yaw);
    REQUIRE(h.num_bins() == 288);
    // total=100 with 1 count in the probe bin: p = 2/388 -> raw = 194.
    const Action probe{0.0, 0.0};
    h.counts[static_cast<std::size_t>(h.bin_index(probe))] = 1;
    const Action elsewhere{-9.0, 0.9};
    h.counts[static_cast<std::size_t>(h.bin_index(elsewhere))] = 99;
    h.total = 100;
    CHECK(rarity_raw(h, probe) == doctest::Approx(194.0).epsilon(1e-12));

    // Empty histogram: uniform Laplace limit, raw = B for every action.
    const ActionHistogram empty = make_histogram(accel, yaw);
    CHECK(rarity_raw(empty, probe) == doctest::Approx(288.0));
    CHECK(rarity_raw(empty, elsewhere) == doctest::Approx(288.0));

    // More counts in the bin means strictly lower rarity.
    double prev = rarity_raw(h, probe);
    for (int add = 0; add < 5; ++add) {
        h.counts[static_cast<std::size_t>(h.bin_index(probe))] += 10;
        h.total += 10;
        const double cur = rarity_raw(h, probe);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("normalize_rarity: P99 with linear interpolation") {
    std::vector<double> raws;
    for (int i = 1; i <= 100; ++i) raws.push_back(static_cast<double>(i));
    const RarityScores s = normalize_rarity(raws);
    CHECK(s.p99_raw == doctest::Approx(99.01).epsilon(1e-12));
    CHECK(s.score[49] == doctest::Approx(50.0 / 99.01).epsilon(1e-12));
    CHECK(s.score[99] == 1.0);  // above P99 clips to exactly 1

    const std::vector<double> equal(10, 3.5);
    const RarityScores se = normalize_rarity(equal);
    for (double v : se.score) CHECK(v == doctest::Approx(1.0));

    CHECK_THROWS_AS(normalize_rarity(std::vector<double>{}), EmptyInput);
}

TEST_CASE("rarity ranking tracks inverse empirical frequency (Spearman >= 0.99)") {
    // Mixture: heavy mass near zero, light mass in a few coarse bins, with
    // every occupied bin collecting at least ~20 samples.
    Rng rng(404);
    std::vector<Action> actions;
    for (int i = 0; i < 20000; ++i) {
        actions.push_back({rng.uniform(-0.04, 0.04), rng.uniform(-0.008, 0.008)});
    }
    for (int i = 0; i < 2000; ++i) actions.push_back({rng.uniform(-4.0, -2.0), 0.0});
    for (int i = 0; i < 400; ++i) actions.push_back({rng.uniform(6.5, 7.9), 0.0});
    for (int i = 0; i < 100; ++i) actions.push_back({0.0, rng.uniform(0.7, 0.99)});
    const ActionHistogram h = build_histogram(actions);

    // Distinct probe actions, one per occupied bin.
    std::map<int, Action> probes;
    for (const Action& a : actions) probes.emplace(h.bin_index(a), a);
    std::vector<double> rarity, inv_freq;
    for (const auto& [bin, a] : probes) {
        REQUIRE(h.counts[static_cast<std::size_t>(bin)] >= 20);
        rarity.push_back(rarity_raw(h, a));
        inv_freq.push_back(static_cast<double>(h.total) /
                           static_cast<double>(h.counts[static_cast<std::size_t>(bin)]));
    }
    CHECK(spearman(rarity, inv_freq) >= 0.99);
}
