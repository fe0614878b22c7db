#pragma once

#include "amrc/common.hpp"
#include "amrc/feature_map.hpp"
#include "amrc/optimizer.hpp"

#include <random>

namespace amrc {

struct PredictionDistribution {
    Vector probs;
    double normalizer = 0.0;  // c_x
    double varphi = 0.0;
};

/// Randomized minimax rule h(y|x) = (Phi(x,y)'mu - phi(mu))_+ / c_x, uniform
/// when c_x = 0. phi is evaluated over the cached rows plus the subset rows
/// of x itself.
PredictionDistribution predict_probs(const FeatureMap& fm, const Vector& mu,
                                     const SubgradientCache& cache, const Vector& x);

/// Same, from a precomputed Psi(x).
PredictionDistribution predict_probs_psi(const FeatureMap& fm, const Vector& mu,
                                         const SubgradientCache& cache, const Vector& psi_x);

/// argmax_y Phi(x,y)'mu, lowest label on ties.
Label predict_deterministic(const FeatureMap& fm, const Vector& mu, const Vector& x);
Label predict_deterministic_psi(const FeatureMap& fm, const Vector& mu, const Vector& psi_x);

/// Draws a label from the distribution by inversion of one uniform variate.
Label sample_label(const PredictionDistribution& dist, std::mt19937_64& rng);

}  // namespace amrc
