#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "curator/dynamics.hpp"
#include "curator/features.hpp"
#include "curator/rng.hpp"
#include "curator/scenario.hpp"

namespace curator {

// Fully-connected net, ReLU hidden layers, identity output. All math in
// double so gradient checks hold at 1e-5 relative.
struct Mlp {
    struct Layer {
        int in = 0;
        int out = 0;
        std::vector<double> w;  // row-major, out x in
        std::vector<double> b;
    };
    std::vector<Layer> layers;

    int input_dim() const { return layers.front().in; }
    int output_dim() const { return layers.back().out; }

    // Uniform fan-in init: U(-1/sqrt(in), 1/sqrt(in)), seeded.
    static Mlp make(std::span<const int> layer_sizes, Rng& rng);

    std::vector<double> forward(std::span<const double> x) const;
};

struct MlpGradients {
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;

    static MlpGradients zeros_like(const Mlp& net);
};

// Mean-squared-error loss over a batch (mean over batch and output dims);
// analytic gradients accumulated into `grads` (overwritten).
double mlp_loss_and_grad(const Mlp& net, std::span<const double> x_batch,
                         std::span<const double> y_batch, int batch, MlpGradients& grads);

// Adaptive-moment optimizer with decoupled weight decay.
class AdamW {
public:
    AdamW(const Mlp& net, double lr, double weight_decay);
    void step(Mlp& net, const MlpGradients& grads);

private:
    double lr_;
    double wd_;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    long long t_ = 0;
    std::vector<std::vector<double>> mw_, vw_, mb_, vb_;
};

// Per-dimension feature standardization fitted on training data.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stdev;  // floored at 1e-8

    static Standardizer fit(std::span<const double> x, int batch, int dim);
    void apply(std::span<double> x) const;
};

struct TrainParams {
    std::vector<int> hidden = {256, 128};
    double learning_rate = 1e-4;
    double weight_decay = 1e-5;
    int batch_size = 256;
    int num_epochs = 20;
};

struct EnsembleSpec {
    int num_folds = 5;
    TrainParams train;
    int k_samples_per_scenario = 2;
    std::uint64_t seed = 0;
};

// Expert actions in normalized units: accel maps [min, max] -> [-1, 1], yaw
// rate maps [-max, max] -> [-1, 1].
std::array<double, 2> normalize_action(const Action& a, const ActionLimits& limits = {});
Action denormalize_action(std::array<double, 2> n, const ActionLimits& limits = {});

// A trained scout: standardizer + net, predicting normalized actions from
// raw flattened features.
struct ScoutModel {
    Mlp net;
    Standardizer stand;

    std::array<double, 2> predict(std::span<const double> x_raw) const;
};

struct Dataset {
    std::vector<double> x;  // batch-major flat, n * dim
    std::vector<double> y;  // n * 2
    int dim = 0;
    int size() const { return dim == 0 ? 0 : static_cast<int>(x.size()) / dim; }
};

struct TrainResult {
    Mlp net;
    double final_loss = 0.0;  // mean MSE over the last epoch
};

// Plain supervised training loop: seeded shuffle each epoch, fixed batch
// order, AdamW updates. Deterministic given (data, params, seed).
TrainResult train_mlp(const Dataset& data, std::span<const int> layer_sizes,
                      const TrainParams& p, std::uint64_t seed);

struct EnsembleResult {
    std::vector<ScoutModel> scouts;
    std::vector<int> fold_of_scenario;  // parallel to corpus.scenarios
    std::vector<double> final_losses;
};

// K-fold scout training: scout k trains on every fold but k; each epoch
// draws k_samples_per_scenario random valid transitions per training
// scenario. Throws CorpusTooSmall when there are fewer scenarios than folds.
// Fold jobs are independent; `workers` only changes wall time, not results.
EnsembleResult train_ensemble(const Corpus& corpus, const EnsembleSpec& spec,
                              const FeatureConfig& cfg, const ActionLimits& limits,
                              int workers = 1);

// Trace of the (population) covariance of K predictions: the sum over the
// two action dims of the 1/K variance. Exactly 0 for identical predictions.
double disagreement(std::span<const std::array<double, 2>> preds);

void save_scout(const std::filesystem::path& path, const ScoutModel& scout);
ScoutModel load_scout(const std::filesystem::path& path);

}  // namespace curator
