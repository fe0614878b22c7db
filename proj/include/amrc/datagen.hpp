#pragma once

#include "amrc/common.hpp"
#include "amrc/feature_map.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace amrc {

/// Two-class stream whose class-conditional Gaussian means rotate on the
/// radius-4 circle with angle pi((cos(omega t) - 3)/2 + y).
struct SyntheticConfig {
    double omega = 0.1;
    double noise_std = std::sqrt(2.0);
    std::int64_t steps = 10000;
    std::uint64_t seed = 0;
};

struct Sample {
    Vector x;
    Label y = 1;
};

inline constexpr int kSyntheticClasses = 2;
inline constexpr Index kSyntheticDim = 2;

/// Noise-free class-conditional mean at time t.
Vector synthetic_class_mean(const SyntheticConfig& config, double t, Label y);

/// Draw at time t >= 1 using the caller's generator.
Sample synth_step(const SyntheticConfig& config, std::int64_t t, std::mt19937_64& rng);

/// Draw at time t determined by (seed, t) only.
Sample synth_step(const SyntheticConfig& config, std::int64_t t);

/// Analytic mean vector E[Phi(x, y)] at time t. Requires a linear map.
Vector true_tau(const SyntheticConfig& config, std::int64_t t, const FeatureMap& fm);

/// Label distribution a rule assigns to an instance; a deterministic rule
/// returns a point mass.
using ProbabilisticRule = std::function<Vector(const Vector&)>;

/// Monte-Carlo estimate of the error probability of `rule` at time t:
/// mean over `trials` fresh samples of 1 - rule(x)[y].
double true_error(const SyntheticConfig& config, std::int64_t t, const ProbabilisticRule& rule,
                  int trials, std::mt19937_64& rng);

}  // namespace amrc
