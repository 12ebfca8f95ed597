#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "curator/errors.hpp"
#include "curator/scouts.hpp"
#include "curator/synth.hpp"

using namespace curator;

namespace {

FeatureConfig small_features() {
    FeatureConfig cfg;
    cfg.num_agents = 2;
    cfg.num_map_polylines = 2;
    cfg.map_points_per_polyline = 5;
    cfg.num_goal_points = 2;
    return cfg;
}

Corpus tiny_corpus(int n, std::uint64_t seed) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("curator_scouts_" + std::to_string(seed));
    std::filesystem::remove_all(dir);
    CorpusSpec spec;
    spec.num_scenarios = n;
    spec.num_timesteps = 31;
    spec.seed = seed;
    spec.event_mix = {{EventKind::hard_brake, 0.3}};
    generate_corpus(spec, dir);
    return load_corpus(dir);
}

}  // namespace

TEST_CASE("forward pass: zero weights yield the output bias") {
    Rng rng(1);
    const std::vector<int> sizes{4, 3, 2};
    Mlp net = Mlp::make(sizes, rng);
    for (auto& l : net.layers) std::fill(l.w.begin(), l.w.end(), 0.0);
    std::fill(net.layers[0].b.begin(), net.layers[0].b.end(), 0.0);
    net.layers[1].b = {0.25, -0.5};
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const auto y = net.forward(x);
    CHECK(y[0] == 0.25);
    CHECK(y[1] == -0.5);

    const auto y2 = net.forward(x);
    CHECK(y == y2);

    CHECK_THROWS_AS(net.forward(std::vector<double>{1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("analytic gradients match central finite differences to 1e-5 relative") {
    Rng rng(42);
    const std::vector<int> sizes{5, 7, 4, 2};
    Mlp net = Mlp::make(sizes, rng);
    const int batch = 3;
    std::vector<double> x, y;
    for (int i = 0; i < batch * 5; ++i) x.push_back(rng.uniform(-2.0, 2.0));
    for (int i = 0; i < batch * 2; ++i) y.push_back(rng.uniform(-1.0, 1.0));

    MlpGradients grads = MlpGradients::zeros_like(net);
    mlp_loss_and_grad(net, x, y, batch, grads);

    const double eps = 1e-6;
    MlpGradients scratch = MlpGradients::zeros_like(net);
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        for (std::size_t i = 0; i < net.layers[li].w.size(); i += 7) {
            const double orig = net.layers[li].w[i];
            net.layers[li].w[i] = orig + eps;
            const double lp = mlp_loss_and_grad(net, x, y, batch, scratch);
            net.layers[li].w[i] = orig - eps;
            const double lm = mlp_loss_and_grad(net, x, y, batch, scratch);
            net.layers[li].w[i] = orig;
            const double numeric = (lp - lm) / (2.0 * eps);
            const double analytic = grads.w[li][i];
            const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
            CHECK(std::abs(numeric - analytic) / denom <= 1e-5);
        }
        for (std::size_t i = 0; i < net.layers[li].b.size(); i += 3) {
            const double orig = net.layers[li].b[i];
            net.layers[li].b[i] = orig + eps;
            const double lp = mlp_loss_and_grad(net, x, y, batch, scratch);
            net.layers[li].b[i] = orig - eps;
            const double lm = mlp_loss_and_grad(net, x, y, batch, scratch);
            net.layers[li].b[i] = orig;
            const double numeric = (lp - lm) / (2.0 * eps);
            const double analytic = grads.b[li][i];
            const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
            CHECK(std::abs(numeric - analytic) / denom <= 1e-5);
        }
    }
}

TEST_CASE("disagreement: exact zeros, hand variances, invariances") {
    std::vector<std::array<double, 2>> same(5, {0.123456789, -0.987654321});
    CHECK(disagreement(same) == 0.0);

    std::vector<std::array<double, 2>> two{{1.0, 0.0}, {-1.0, 0.0}};
    CHECK(disagreement(two) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<std::array<double, 2>> five{{0, 0}, {0, 0}, {0, 0}, {0, 0}, {5, 0}};
    CHECK(disagreement(five) == doctest::Approx(4.0).epsilon(1e-12));

    // Permutation invariance.
    std::vector<std::array<double, 2>> perm{{5, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}};
    CHECK(disagreement(perm) == doctest::Approx(disagreement(five)).epsilon(1e-12));

    // Translation invariance.
    std::vector<std::array<double, 2>> shifted = five;
    for (auto& p : shifted) {
        p[0] += 17.5;
        p[1] -= 3.25;
    }
    CHECK(disagreement(shifted) == doctest::Approx(disagreement(five)).epsilon(1e-9));

    std::vector<std::array<double, 2>> one{{1.0, 1.0}};
    CHECK_THROWS_AS(disagreement(one), TooFewModels);
}

TEST_CASE("disagreement: shifting one model's accel by sigma adds sigma^2 (K-1)/K^2") {
    // Population-variance shift, verified numerically across K and sigma.
    Rng rng(29);
    for (int k = 2; k <= 7; ++k) {
        const double base = rng.uniform(-1.0, 1.0);
        std::vector<std::array<double, 2>> preds(static_cast<std::size_t>(k), {base, 0.3});
        const double before = disagreement(preds);
        const double sigma = rng.uniform(0.1, 3.0);
        preds[0][0] += sigma;
        const double expected = sigma * sigma * (k - 1) / static_cast<double>(k * k);
        CHECK(disagreement(preds) - before == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("training fits a linear synthetic task to near the noise floor") {
    Rng rng(7);
    const int dim = 8, n = 2000;
    const double noise = 0.05;
    std::vector<double> w_true;
    for (int i = 0; i < 2 * dim; ++i) w_true.push_back(rng.uniform(-0.5, 0.5));

    Dataset data;
    data.dim = dim;
    for (int i = 0; i < n; ++i) {
        std::vector<double> x;
        for (int d = 0; d < dim; ++d) x.push_back(rng.uniform(-1.0, 1.0));
        for (int o = 0; o < 2; ++o) {
            double y = noise * rng.normal();
            for (int d = 0; d < dim; ++d) y += w_true[static_cast<std::size_t>(o * dim + d)] *
                                               x[static_cast<std::size_t>(d)];
            data.y.push_back(y);
        }
        data.x.insert(data.x.end(), x.begin(), x.end());
    }

    TrainParams p;
    p.hidden = {32};
    p.learning_rate = 3e-3;
    p.weight_decay = 1e-6;
    p.batch_size = 64;
    p.num_epochs = 100;
    const std::vector<int> sizes{dim, 32, 2};
    const TrainResult r = train_mlp(data, sizes, p, 11);
    CHECK(r.final_loss <= 2.0 * noise * noise);
}

TEST_CASE("ensemble: fold arithmetic and deterministic retraining") {
    const Corpus corpus = tiny_corpus(10, 91);
    EnsembleSpec spec;
    spec.num_folds = 5;
    spec.train.hidden = {16, 8};
    spec.train.num_epochs = 2;
    spec.train.batch_size = 16;
    spec.k_samples_per_scenario = 2;
    spec.seed = 3;
    const FeatureConfig cfg = small_features();

    const EnsembleResult a = train_ensemble(corpus, spec, cfg, ActionLimits{});
    REQUIRE(a.scouts.size() == 5);
    // Each fold holds exactly 2 of the 10 scenarios.
    std::vector<int> fold_count(5, 0);
    for (int f : a.fold_of_scenario) fold_count[static_cast<std::size_t>(f)]++;
    for (int c : fold_count) CHECK(c == 2);

    const EnsembleResult b = train_ensemble(corpus, spec, cfg, ActionLimits{});
    CHECK(a.fold_of_scenario == b.fold_of_scenario);
    for (std::size_t k = 0; k < 5; ++k) {
        for (std::size_t li = 0; li < a.scouts[k].net.layers.size(); ++li) {
            CHECK(a.scouts[k].net.layers[li].w == b.scouts[k].net.layers[li].w);
            CHECK(a.scouts[k].net.layers[li].b == b.scouts[k].net.layers[li].b);
        }
    }

    // Parallel fold training gives identical scouts.
    const EnsembleResult c = train_ensemble(corpus, spec, cfg, ActionLimits{}, 8);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(a.scouts[k].net.layers[0].w == c.scouts[k].net.layers[0].w);
    }
}

TEST_CASE("ensemble requires at least K scenarios") {
    const Corpus corpus = tiny_corpus(3, 17);
    EnsembleSpec spec;
    spec.num_folds = 5;
    CHECK_THROWS_AS(train_ensemble(corpus, spec, small_features(), ActionLimits{}),
                    CorpusTooSmall);
}

TEST_CASE("checkpoints round-trip exactly") {
    Rng rng(13);
    const std::vector<int> sizes{6, 5, 2};
    ScoutModel scout;
    scout.net = Mlp::make(sizes, rng);
    scout.stand.mean.assign(6, 0.5);
    scout.stand.stdev.assign(6, 2.0);

    const auto path = std::filesystem::temp_directory_path() / "curator_scout_rt.json";
    save_scout(path, scout);
    const ScoutModel back = load_scout(path);
    REQUIRE(back.net.layers.size() == scout.net.layers.size());
    for (std::size_t li = 0; li < back.net.layers.size(); ++li) {
        CHECK(back.net.layers[li].w == scout.net.layers[li].w);
        CHECK(back.net.layers[li].b == scout.net.layers[li].b);
    }
    CHECK(back.stand.mean == scout.stand.mean);
    CHECK(back.stand.stdev == scout.stand.stdev);

    std::vector<double> x(6, 0.3);
    CHECK(back.predict(x)[0] == scout.predict(x)[0]);
    std::vector<double> bad(4, 0.0);
    CHECK_THROWS_AS(scout.predict(bad), DimensionMismatch);
}

TEST_CASE("action normalization round-trips within the limits") {
    const ActionLimits limits;
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        const Action a{rng.uniform(-10.0, 8.0), rng.uniform(-1.0, 1.0)};
        const Action back = denormalize_action(normalize_action(a, limits), limits);
        CHECK(back.accel == doctest::Approx(a.accel).epsilon(1e-12));
        CHECK(back.yaw_rate == doctest::Approx(a.yaw_rate).epsilon(1e-12));
    }
    CHECK(normalize_action({8.0, 1.0}, limits)[0] == doctest::Approx(1.0));
    CHECK(normalize_action({-10.0, -1.0}, limits)[0] == doctest::Approx(-1.0));
}
