#pragma once

#include <cstdint>

#include "curator/curation.hpp"
#include "curator/features.hpp"
#include "curator/scouts.hpp"

namespace curator {

struct PolicyTrainSpec {
    TrainParams train;
    int num_batches = 500;
    std::uint64_t seed = 0;
};

// Feature standardizer fitted on uniformly drawn transitions; sharing one
// standardizer across sampling strategies keeps policy comparisons clean.
Standardizer fit_standardizer_uniform(const Corpus& corpus, const FeatureConfig& cfg,
                                      int num_samples, std::uint64_t seed);

// Behavioral cloning of the expert actions on transitions drawn from the
// sampler stream. The network initialization depends only on spec.seed, so
// two policies trained from different samplers start identical.
ScoutModel train_policy(const Corpus& corpus, TimestepSampler& sampler,
                        const PolicyTrainSpec& spec, const FeatureConfig& cfg,
                        const ActionLimits& limits, const Standardizer& stand);

}  // namespace curator
