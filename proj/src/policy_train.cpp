#include "curator/policy_train.hpp"

#include <cmath>
#include <map>

#include "curator/errors.hpp"
#include "curator/scoring.hpp"

namespace curator {

Standardizer fit_standardizer_uniform(const Corpus& corpus, const FeatureConfig& cfg,
                                      int num_samples, std::uint64_t seed) {
    std::vector<std::pair<const Scenario*, int>> all;
    for (const Scenario& s : corpus.scenarios) {
        for (int t : enumerate_transitions(s)) all.push_back({&s, t});
    }
    if (all.empty()) throw EmptyInput("fit_standardizer_uniform: corpus has no transitions");

    Rng rng(seed);
    const int dim = cfg.flat_size();
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(num_samples) * dim);
    for (int i = 0; i < num_samples; ++i) {
        const auto& [s, t] = all[rng.uniform_int(all.size())];
        const std::vector<double> f = flatten(extract_state(*s, t, cfg), cfg);
        x.insert(x.end(), f.begin(), f.end());
    }
    return Standardizer::fit(x, num_samples, dim);
}

ScoutModel train_policy(const Corpus& corpus, TimestepSampler& sampler,
                        const PolicyTrainSpec& spec, const FeatureConfig& cfg,
                        const ActionLimits& limits, const Standardizer& stand) {
    std::map<std::string, const Scenario*> by_id;
    for (const Scenario& s : corpus.scenarios) by_id[s.id] = &s;

    const int dim = cfg.flat_size();
    std::vector<int> sizes;
    sizes.push_back(dim);
    for (int h : spec.train.hidden) sizes.push_back(h);
    sizes.push_back(2);

    Rng init_rng(spec.seed);
    Mlp net = Mlp::make(sizes, init_rng);
    AdamW opt(net, spec.train.learning_rate, spec.train.weight_decay);
    MlpGradients grads = MlpGradients::zeros_like(net);

    const int bs = spec.train.batch_size;
    std::vector<double> xb(static_cast<std::size_t>(bs) * dim);
    std::vector<double> yb(static_cast<std::size_t>(bs) * 2);
    for (int batch = 0; batch < spec.num_batches; ++batch) {
        for (int bi = 0; bi < bs; ++bi) {
            const IndexEntry& e = sampler.next();
            auto it = by_id.find(e.scenario_id);
            if (it == by_id.end()) {
                throw MissingScores("train_policy: sampled scenario not in corpus: " +
                                    e.scenario_id);
            }
            const std::vector<double> f = flatten(extract_state(*it->second, e.t, cfg), cfg);
            std::copy(f.begin(), f.end(), xb.begin() + static_cast<std::ptrdiff_t>(bi) * dim);
            const auto target =
                normalize_action(expert_action(*it->second, e.t, limits), limits);
            yb[static_cast<std::size_t>(bi) * 2] = target[0];
            yb[static_cast<std::size_t>(bi) * 2 + 1] = target[1];
        }
        stand.apply(xb);
        mlp_loss_and_grad(net, xb, yb, bs, grads);
        opt.step(net, grads);
    }
    return ScoutModel{std::move(net), stand};
}

}  // namespace curator
