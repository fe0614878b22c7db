#include "amrc/learner.hpp"

namespace amrc {

Learner::Learner(FeatureMap fm, LearnerConfig config)
    : fm_(std::move(fm)),
      config_(config),
      tracker_(fm_.n_classes(), fm_.d(), config.tracker),
      mu_(Vector::Zero(fm_.m())),
      risk_(1.0 - 1.0 / fm_.n_classes()),
      best_objective_(risk_) {
    cache_.capacity = config.optimizer.cache_capacity;
    cache_.F.resize(0, fm_.m());
    cache_.h.resize(0);
}

PredictionDistribution Learner::predict_probs(const Vector& x) const {
    return amrc::predict_probs(fm_, mu_, cache_, x);
}

Label Learner::predict(const Vector& x) const { return predict_deterministic(fm_, mu_, x); }

Label Learner::sample(const Vector& x, std::mt19937_64& rng) const {
    return sample_label(predict_probs(x), rng);
}

void Learner::learn(const Vector& x, Label y, const UncertaintyAdjuster& adjust) {
    const Vector psi = fm_.psi(x);
    UncertaintyModel u = config_.mode == TrackingMode::multidimensional
                             ? tracker_.step(psi, y)
                             : tracker_.step_unidimensional(psi, y);
    ++seen_;
    if (adjust) adjust(seen_, u);

    ClassifierState next = optimize(mu_, u, fm_, psi, cache_, config_.optimizer);
    mu_ = std::move(next.mu);
    cache_ = std::move(next.cache);
    risk_ = next.minimax_risk;
    best_objective_ = next.best_objective;
    working_rows_ = next.working_rows;
    uncertainty_ = std::move(u);
}

}  // namespace amrc
