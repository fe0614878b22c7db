#pragma once

#include "amrc/classifier.hpp"
#include "amrc/feature_map.hpp"
#include "amrc/optimizer.hpp"
#include "amrc/tracker.hpp"

#include <functional>
#include <random>

namespace amrc {

enum class TrackingMode { multidimensional, unidimensional };

struct LearnerConfig {
    TrackerConfig tracker;
    OptimizerConfig optimizer;
    TrackingMode mode = TrackingMode::multidimensional;
};

/// Adaptive minimax risk classifier for one stream: tracks the mean vector,
/// re-solves for mu after every revealed label, and predicts with the
/// resulting randomized or deterministic rule.
///
/// Prediction never mutates state; `learn` is the only mutator, so a label
/// cannot influence the prediction made for its own instance.
class Learner {
public:
    /// Hook to replace (tau_hat, lambda) before the optimization step. The
    /// argument is the number of samples learned so far, including the new one.
    using UncertaintyAdjuster = std::function<void(std::int64_t, UncertaintyModel&)>;

    Learner(FeatureMap fm, LearnerConfig config = {});

    PredictionDistribution predict_probs(const Vector& x) const;
    Label predict(const Vector& x) const;
    Label sample(const Vector& x, std::mt19937_64& rng) const;

    /// Incorporates the revealed pair (x, y): tracking step then optimization.
    void learn(const Vector& x, Label y, const UncertaintyAdjuster& adjust = {});

    const FeatureMap& feature_map() const noexcept { return fm_; }
    const LearnerConfig& config() const noexcept { return config_; }
    const MeanTracker& tracker() const noexcept { return tracker_; }
    const Vector& mu() const noexcept { return mu_; }
    const SubgradientCache& cache() const noexcept { return cache_; }

    /// Uncertainty set used to obtain the current mu (empty before the first label).
    const UncertaintyModel& uncertainty() const noexcept { return uncertainty_; }

    /// Minimax risk of the current rule; 1 - 1/|Y| before any label (mu = 0).
    double minimax_risk() const noexcept { return risk_; }
    double best_objective() const noexcept { return best_objective_; }
    Index working_rows() const noexcept { return working_rows_; }
    std::int64_t samples_seen() const noexcept { return seen_; }

private:
    FeatureMap fm_;
    LearnerConfig config_;
    MeanTracker tracker_;
    Vector mu_;
    SubgradientCache cache_;
    UncertaintyModel uncertainty_;
    double risk_;
    double best_objective_;
    Index working_rows_ = 0;
    std::int64_t seen_ = 0;
};

}  // namespace amrc
