#include "curator/scouts.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "curator/errors.hpp"
#include "curator/io_util.hpp"
#include "curator/parallel.hpp"

namespace curator {

Mlp Mlp::make(std::span<const int> layer_sizes, Rng& rng) {
    if (layer_sizes.size() < 2) throw DimensionMismatch("Mlp: need at least 2 layer sizes");
    Mlp net;
    for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
        Layer layer;
        layer.in = layer_sizes[i];
        layer.out = layer_sizes[i + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        layer.w.resize(static_cast<std::size_t>(layer.in) * layer.out);
        layer.b.resize(static_cast<std::size_t>(layer.out));
        for (double& v : layer.w) v = rng.uniform(-bound, bound);
        for (double& v : layer.b) v = rng.uniform(-bound, bound);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != input_dim()) {
        throw DimensionMismatch("Mlp::forward: input has " + std::to_string(x.size()) +
                                " dims, net expects " + std::to_string(input_dim()));
    }
    std::vector<double> cur(x.begin(), x.end());
    for (std::size_t li = 0; li < layers.size(); ++li) {
        const Layer& l = layers[li];
        std::vector<double> next(static_cast<std::size_t>(l.out));
        for (int o = 0; o < l.out; ++o) {
            double acc = l.b[static_cast<std::size_t>(o)];
            const double* wrow = l.w.data() + static_cast<std::size_t>(o) * l.in;
            for (int i = 0; i < l.in; ++i) acc += wrow[i] * cur[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(o)] = acc;
        }
        if (li + 1 < layers.size()) {
            for (double& v : next) v = std::max(0.0, v);  // ReLU on hidden layers
        }
        cur = std::move(next);
    }
    return cur;
}

MlpGradients MlpGradients::zeros_like(const Mlp& net) {
    MlpGradients g;
    for (const auto& l : net.layers) {
        g.w.emplace_back(l.w.size(), 0.0);
        g.b.emplace_back(l.b.size(), 0.0);
    }
    return g;
}

double mlp_loss_and_grad(const Mlp& net, std::span<const double> x_batch,
                         std::span<const double> y_batch, int batch, MlpGradients& grads) {
    const int in_dim = net.input_dim();
    const int out_dim = net.output_dim();
    if (x_batch.size() != static_cast<std::size_t>(batch) * in_dim ||
        y_batch.size() != static_cast<std::size_t>(batch) * out_dim) {
        throw DimensionMismatch("mlp_loss_and_grad: batch shapes do not match net");
    }
    const std::size_t n_layers = net.layers.size();

    // Forward with cached post-activation values per layer.
    std::vector<std::vector<double>> acts(n_layers + 1);
    acts[0].assign(x_batch.begin(), x_batch.end());
    for (std::size_t li = 0; li < n_layers; ++li) {
        const Mlp::Layer& l = net.layers[li];
        acts[li + 1].assign(static_cast<std::size_t>(batch) * l.out, 0.0);
        const bool hidden = li + 1 < n_layers;
        for (int bi = 0; bi < batch; ++bi) {
            const double* xin = acts[li].data() + static_cast<std::size_t>(bi) * l.in;
            double* xout = acts[li + 1].data() + static_cast<std::size_t>(bi) * l.out;
            for (int o = 0; o < l.out; ++o) {
                double acc = l.b[static_cast<std::size_t>(o)];
                const double* wrow = l.w.data() + static_cast<std::size_t>(o) * l.in;
                for (int i = 0; i < l.in; ++i) acc += wrow[i] * xin[i];
                xout[o] = hidden ? std::max(0.0, acc) : acc;
            }
        }
    }

    // Loss and output delta: L = mean((pred - y)^2) over batch * out_dim.
    const double scale = 1.0 / (static_cast<double>(batch) * out_dim);
    double loss = 0.0;
    std::vector<double> delta(static_cast<std::size_t>(batch) * out_dim);
    for (std::size_t i = 0; i < delta.size(); ++i) {
        const double diff = acts[n_layers][i] - y_batch[i];
        loss += diff * diff * scale;
        delta[i] = 2.0 * diff * scale;
    }

    for (auto& g : grads.w) std::fill(g.begin(), g.end(), 0.0);
    for (auto& g : grads.b) std::fill(g.begin(), g.end(), 0.0);

    // Backward pass.
    for (std::size_t li = n_layers; li-- > 0;) {
        const Mlp::Layer& l = net.layers[li];
        std::vector<double> prev_delta;
        if (li > 0) prev_delta.assign(static_cast<std::size_t>(batch) * l.in, 0.0);
        for (int bi = 0; bi < batch; ++bi) {
            const double* xin = acts[li].data() + static_cast<std::size_t>(bi) * l.in;
            const double* d = delta.data() + static_cast<std::size_t>(bi) * l.out;
            for (int o = 0; o < l.out; ++o) {
                const double dv = d[o];
                if (dv == 0.0) continue;
                double* gw = grads.w[li].data() + static_cast<std::size_t>(o) * l.in;
                for (int i = 0; i < l.in; ++i) gw[i] += dv * xin[i];
                grads.b[li][static_cast<std::size_t>(o)] += dv;
                if (li > 0) {
                    double* pd = prev_delta.data() + static_cast<std::size_t>(bi) * l.in;
                    const double* wrow = l.w.data() + static_cast<std::size_t>(o) * l.in;
                    for (int i = 0; i < l.in; ++i) pd[i] += dv * wrow[i];
                }
            }
        }
        if (li > 0) {
            // ReLU mask of the previous layer's activations.
            for (std::size_t i = 0; i < prev_delta.size(); ++i) {
                if (acts[li][i] <= 0.0) prev_delta[i] = 0.0;
            }
            delta = std::move(prev_delta);
        }
    }
    return loss;
}

AdamW::AdamW(const Mlp& net, double lr, double weight_decay) : lr_(lr), wd_(weight_decay) {
    for (const auto& l : net.layers) {
        mw_.emplace_back(l.w.size(), 0.0);
        vw_.emplace_back(l.w.size(), 0.0);
        mb_.emplace_back(l.b.size(), 0.0);
        vb_.emplace_back(l.b.size(), 0.0);
    }
}

void AdamW::step(Mlp& net, const MlpGradients& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        auto update = [&](std::vector<double>& p, const std::vector<double>& g,
                          std::vector<double>& m, std::vector<double>& v, bool decay) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
                v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
                const double mhat = m[i] / bc1;
                const double vhat = v[i] / bc2;
                p[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
                if (decay) p[i] -= lr_ * wd_ * p[i];
            }
        };
        update(net.layers[li].w, grads.w[li], mw_[li], vw_[li], true);
        update(net.layers[li].b, grads.b[li], mb_[li], vb_[li], false);
    }
}

Standardizer Standardizer::fit(std::span<const double> x, int batch, int dim) {
    Standardizer s;
    s.mean.assign(static_cast<std::size_t>(dim), 0.0);
    s.stdev.assign(static_cast<std::size_t>(dim), 1.0);
    if (batch == 0) return s;
    for (int bi = 0; bi < batch; ++bi) {
        const double* row = x.data() + static_cast<std::size_t>(bi) * dim;
        for (int i = 0; i < dim; ++i) s.mean[static_cast<std::size_t>(i)] += row[i];
    }
    for (double& m : s.mean) m /= static_cast<double>(batch);
    std::vector<double> var(static_cast<std::size_t>(dim), 0.0);
    for (int bi = 0; bi < batch; ++bi) {
        const double* row = x.data() + static_cast<std::size_t>(bi) * dim;
        for (int i = 0; i < dim; ++i) {
            const double d = row[i] - s.mean[static_cast<std::size_t>(i)];
            var[static_cast<std::size_t>(i)] += d * d;
        }
    }
    for (int i = 0; i < dim; ++i) {
        s.stdev[static_cast<std::size_t>(i)] =
            std::max(1e-8, std::sqrt(var[static_cast<std::size_t>(i)] / batch));
    }
    return s;
}

void Standardizer::apply(std::span<double> x) const {
    const std::size_t dim = mean.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t d = i % dim;
        x[i] = (x[i] - mean[d]) / stdev[d];
    }
}

std::array<double, 2> normalize_action(const Action& a, const ActionLimits& limits) {
    const double mid = 0.5 * (limits.max_accel + limits.min_accel);
    const double half = 0.5 * (limits.max_accel - limits.min_accel);
    return {(a.accel - mid) / half, a.yaw_rate / limits.max_yaw_rate};
}

Action denormalize_action(std::array<double, 2> n, const ActionLimits& limits) {
    const double mid = 0.5 * (limits.max_accel + limits.min_accel);
    const double half = 0.5 * (limits.max_accel - limits.min_accel);
    Action a;
    a.accel = std::clamp(mid + n[0] * half, limits.min_accel, limits.max_accel);
    a.yaw_rate = std::clamp(n[1] * limits.max_yaw_rate, -limits.max_yaw_rate, limits.max_yaw_rate);
    return a;
}

std::array<double, 2> ScoutModel::predict(std::span<const double> x_raw) const {
    if (static_cast<int>(x_raw.size()) != net.input_dim()) {
        throw DimensionMismatch("ScoutModel::predict: feature size mismatch");
    }
    std::vector<double> x(x_raw.begin(), x_raw.end());
    stand.apply(x);
    const std::vector<double> out = net.forward(x);
    return {out[0], out[1]};
}

TrainResult train_mlp(const Dataset& data, std::span<const int> layer_sizes,
                      const TrainParams& p, std::uint64_t seed) {
    const int n = data.size();
    if (n == 0) throw EmptyInput("train_mlp: empty dataset");
    Rng rng(seed);
    Mlp net = Mlp::make(layer_sizes, rng);
    AdamW opt(net, p.learning_rate, p.weight_decay);
    MlpGradients grads = MlpGradients::zeros_like(net);

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

    std::vector<double> xb, yb;
    double last_epoch_loss = 0.0;
    for (int epoch = 0; epoch < p.num_epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        int batches = 0;
        for (int start = 0; start < n; start += p.batch_size) {
            const int bs = std::min(p.batch_size, n - start);
            xb.assign(static_cast<std::size_t>(bs) * data.dim, 0.0);
            yb.assign(static_cast<std::size_t>(bs) * 2, 0.0);
            for (int bi = 0; bi < bs; ++bi) {
                const int src = order[static_cast<std::size_t>(start + bi)];
                std::copy_n(data.x.begin() + static_cast<std::size_t>(src) * data.dim, data.dim,
                            xb.begin() + static_cast<std::size_t>(bi) * data.dim);
                std::copy_n(data.y.begin() + static_cast<std::size_t>(src) * 2, 2,
                            yb.begin() + static_cast<std::size_t>(bi) * 2);
            }
            epoch_loss += mlp_loss_and_grad(net, xb, yb, bs, grads);
            opt.step(net, grads);
            ++batches;
        }
        last_epoch_loss = batches > 0 ? epoch_loss / batches : 0.0;
    }
    return {std::move(net), last_epoch_loss};
}

namespace {

// Expert action of transition t, normalized.
std::array<double, 2> expert_target(const Scenario& s, int t, const ActionLimits& limits) {
    const AgentTrack& sdc = s.sdc();
    const AgentState& a = sdc.states[static_cast<std::size_t>(t)];
    const AgentState& b = sdc.states[static_cast<std::size_t>(t) + 1];
    const KinState s0{a.x, a.y, a.yaw, std::hypot(a.vx, a.vy)};
    const KinState s1{b.x, b.y, b.yaw, std::hypot(b.vx, b.vy)};
    return normalize_action(inverse_action(s0, s1, s.dt, limits).action, limits);
}

}  // namespace

EnsembleResult train_ensemble(const Corpus& corpus, const EnsembleSpec& spec,
                              const FeatureConfig& cfg, const ActionLimits& limits,
                              int workers) {
    const int n_scen = static_cast<int>(corpus.scenarios.size());
    if (n_scen < spec.num_folds) {
        throw CorpusTooSmall("train_ensemble: " + std::to_string(n_scen) +
                             " scenarios for K=" + std::to_string(spec.num_folds) + " folds");
    }

    // Deterministic fold assignment: seeded shuffle then round-robin.
    std::vector<int> perm(static_cast<std::size_t>(n_scen));
    for (int i = 0; i < n_scen; ++i) perm[static_cast<std::size_t>(i)] = i;
    Rng fold_rng(sub_seed(spec.seed, 0));
    fold_rng.shuffle(perm);
    std::vector<int> fold_of(static_cast<std::size_t>(n_scen), 0);
    for (int pos = 0; pos < n_scen; ++pos) {
        fold_of[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)])] =
            pos % spec.num_folds;
    }

    // Cache transitions once; featurization happens at draw time.
    std::vector<std::vector<int>> transitions(static_cast<std::size_t>(n_scen));
    for (int i = 0; i < n_scen; ++i) {
        transitions[static_cast<std::size_t>(i)] =
            enumerate_transitions(corpus.scenarios[static_cast<std::size_t>(i)]);
    }

    EnsembleResult result;
    result.fold_of_scenario = fold_of;
    result.scouts.resize(static_cast<std::size_t>(spec.num_folds));
    result.final_losses.assign(static_cast<std::size_t>(spec.num_folds), 0.0);

    const int dim = cfg.flat_size();
    std::vector<int> layer_sizes;
    layer_sizes.push_back(dim);
    for (int h : spec.train.hidden) layer_sizes.push_back(h);
    layer_sizes.push_back(2);

    parallel_for(static_cast<std::size_t>(spec.num_folds), workers, [&](std::size_t kf) {
        const int k = static_cast<int>(kf);
        std::vector<int> train_scen;
        for (int i = 0; i < n_scen; ++i) {
            if (fold_of[static_cast<std::size_t>(i)] != k &&
                !transitions[static_cast<std::size_t>(i)].empty()) {
                train_scen.push_back(i);
            }
        }

        auto draw_samples = [&](Rng& rng, Dataset& out) {
            for (int si : train_scen) {
                const Scenario& scen = corpus.scenarios[static_cast<std::size_t>(si)];
                const auto& trans = transitions[static_cast<std::size_t>(si)];
                for (int j = 0; j < spec.k_samples_per_scenario; ++j) {
                    const int t = trans[rng.uniform_int(trans.size())];
                    const std::vector<double> x = flatten(extract_state(scen, t, cfg), cfg);
                    out.x.insert(out.x.end(), x.begin(), x.end());
                    const auto y = expert_target(scen, t, limits);
                    out.y.push_back(y[0]);
                    out.y.push_back(y[1]);
                }
            }
        };

        // Standardizer from a dedicated sampling pass over the training folds.
        Rng stand_rng(sub_seed(spec.seed, 100 + static_cast<std::uint64_t>(k)));
        Dataset stand_set;
        stand_set.dim = dim;
        draw_samples(stand_rng, stand_set);
        const Standardizer stand = Standardizer::fit(stand_set.x, stand_set.size(), dim);

        Rng train_rng(sub_seed(spec.seed, 200 + static_cast<std::uint64_t>(k)));
        Mlp net = Mlp::make(layer_sizes, train_rng);
        AdamW opt(net, spec.train.learning_rate, spec.train.weight_decay);
        MlpGradients grads = MlpGradients::zeros_like(net);

        double last_epoch_loss = 0.0;
        std::vector<double> xb, yb;
        for (int epoch = 0; epoch < spec.train.num_epochs; ++epoch) {
            Dataset epoch_set;
            epoch_set.dim = dim;
            draw_samples(train_rng, epoch_set);
            const int n = epoch_set.size();
            std::vector<int> order(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
            train_rng.shuffle(order);

            double epoch_loss = 0.0;
            int batches = 0;
            for (int start = 0; start < n; start += spec.train.batch_size) {
                const int bs = std::min(spec.train.batch_size, n - start);
                xb.assign(static_cast<std::size_t>(bs) * dim, 0.0);
                yb.assign(static_cast<std::size_t>(bs) * 2, 0.0);
                for (int bi = 0; bi < bs; ++bi) {
                    const int src = order[static_cast<std::size_t>(start + bi)];
                    std::copy_n(epoch_set.x.begin() + static_cast<std::size_t>(src) * dim, dim,
                                xb.begin() + static_cast<std::size_t>(bi) * dim);
                    std::copy_n(epoch_set.y.begin() + static_cast<std::size_t>(src) * 2, 2,
                                yb.begin() + static_cast<std::size_t>(bi) * 2);
                }
                stand.apply(std::span<double>(xb));
                epoch_loss += mlp_loss_and_grad(net, xb, yb, bs, grads);
                opt.step(net, grads);
                ++batches;
            }
            last_epoch_loss = batches > 0 ? epoch_loss / batches : 0.0;
        }

        result.scouts[kf] = ScoutModel{std::move(net), stand};
        result.final_losses[kf] = last_epoch_loss;
    });

    return result;
}

double disagreement(std::span<const std::array<double, 2>> preds) {
    if (preds.size() < 2) throw TooFewModels("disagreement: need K >= 2 predictions");
    const double k = static_cast<double>(preds.size());
    double trace = 0.0;
    for (int d = 0; d < 2; ++d) {
        // Shift by the first prediction so identical inputs give exactly 0
        // and the statistic is translation-invariant in floating point too.
        const double ref = preds[0][static_cast<std::size_t>(d)];
        double mean = 0.0;
        for (const auto& p : preds) mean += p[static_cast<std::size_t>(d)] - ref;
        mean /= k;
        double var = 0.0;
        for (const auto& p : preds) {
            const double dev = (p[static_cast<std::size_t>(d)] - ref) - mean;
            var += dev * dev;
        }
        trace += var / k;
    }
    return trace;
}

void save_scout(const std::filesystem::path& path, const ScoutModel& scout) {
    nlohmann::json doc;
    std::vector<int> sizes;
    sizes.push_back(scout.net.input_dim());
    for (const auto& l : scout.net.layers) sizes.push_back(l.out);
    doc["layer_sizes"] = sizes;
    nlohmann::json weights = nlohmann::json::array();
    nlohmann::json biases = nlohmann::json::array();
    for (const auto& l : scout.net.layers) {
        weights.push_back(l.w);
        biases.push_back(l.b);
    }
    doc["weights"] = std::move(weights);
    doc["biases"] = std::move(biases);
    doc["feat_mean"] = scout.stand.mean;
    doc["feat_std"] = scout.stand.stdev;
    write_text_file(path, doc.dump() + "\n");
}

ScoutModel load_scout(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    ScoutModel scout;
    try {
        const auto sizes = doc.at("layer_sizes").get<std::vector<int>>();
        const auto weights = doc.at("weights").get<std::vector<std::vector<double>>>();
        const auto biases = doc.at("biases").get<std::vector<std::vector<double>>>();
        if (sizes.size() < 2 || weights.size() != sizes.size() - 1 ||
            biases.size() != sizes.size() - 1) {
            throw SchemaError(path.string() + ": inconsistent checkpoint shapes");
        }
        for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
            Mlp::Layer l;
            l.in = sizes[i];
            l.out = sizes[i + 1];
            l.w = weights[i];
            l.b = biases[i];
            if (l.w.size() != static_cast<std::size_t>(l.in) * l.out ||
                l.b.size() != static_cast<std::size_t>(l.out)) {
                throw SchemaError(path.string() + ": layer " + std::to_string(i) +
                                  " has wrong weight arity");
            }
            scout.net.layers.push_back(std::move(l));
        }
        scout.stand.mean = doc.at("feat_mean").get<std::vector<double>>();
        scout.stand.stdev = doc.at("feat_std").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    if (scout.stand.mean.size() != static_cast<std::size_t>(scout.net.input_dim()) ||
        scout.stand.stdev.size() != scout.stand.mean.size()) {
        throw SchemaError(path.string() + ": standardizer size mismatch");
    }
    return scout;
}

}  // namespace curator
