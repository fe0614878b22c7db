#include "amrc/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace amrc {

Matrix transition_matrix(const KinematicModel& model) {
    if (model.order < 0) throw InputError("kinematic order must be nonnegative");
    if (!(model.dt > 0.0)) throw InputError("time increment must be positive");
    const Index n = model.order + 1;
    Matrix H = Matrix::Identity(n, n);
    double coeff = 1.0;
    for (int s = 1; s <= model.order; ++s) {
        coeff *= model.dt / s;  // dt^s / s!
        for (Index r = 0; r + s < n; ++r) H(r, r + s) = coeff;
    }
    return H;
}

ComponentTracker ComponentTracker::initial(const TrackerConfig& config, int label, Index feature) {
    const Index n = config.model.order + 1;
    ComponentTracker tr;
    tr.eta = Vector::Zero(n);
    tr.sigma = config.initial_variance * Matrix::Identity(n, n);
    tr.q = config.initial_process_noise * Matrix::Identity(n, n);
    tr.r2 = config.initial_observation_noise;
    tr.label = label;
    tr.feature = feature;
    return tr;
}

Vector observation_gain(const ComponentTracker& tracker, const Matrix& H) {
    const double denom = tracker.sigma(0, 0) + tracker.r2;
    if (!(denom > 0.0))
        throw DegenerateVarianceError("innovation variance is zero (Sigma_11 + r^2 = 0)");
    return H * tracker.sigma.col(0) / denom;
}

void update_component_with_gain(ComponentTracker& tracker, const Matrix& H,
                                std::optional<double> observation, const Vector& gain) {
    const Matrix HS = H * tracker.sigma;
    Matrix sigma = HS * H.transpose() + tracker.q;
    Vector eta = H * tracker.eta;
    if (observation) {
        eta -= (tracker.gamma() - *observation) * gain;
        // gain * e1' Sigma H'
        sigma.noalias() -= gain * (H * tracker.sigma.col(0)).transpose();
    }
    // Symmetrize against rounding drift.
    tracker.sigma = 0.5 * (sigma + sigma.transpose());
    tracker.eta = std::move(eta);
}

void update_component(ComponentTracker& tracker, const Matrix& H,
                      std::optional<double> observation) {
    if (!observation) {
        update_component_with_gain(tracker, H, std::nullopt, Vector::Zero(tracker.eta.size()));
        return;
    }
    update_component_with_gain(tracker, H, observation, observation_gain(tracker, H));
}

void estimate_noise(ComponentTracker& tracker, const Matrix& H, double innovation,
                    double forgetting, double floor) {
    const Vector gd = observation_gain(tracker, H) * innovation;
    const double residual = std::max(innovation * innovation - tracker.sigma(0, 0), floor);
    tracker.r2 = forgetting * tracker.r2 + (1.0 - forgetting) * residual;
    tracker.q = forgetting * tracker.q + (1.0 - forgetting) * (gd * gd.transpose());
}

LabelWindow::LabelWindow(int capacity, int n_classes)
    : capacity_(capacity), counts_(static_cast<std::size_t>(n_classes), 0) {
    if (capacity <= 0) throw InputError("label window length must be positive");
    if (n_classes <= 0) throw InputError("label window needs at least one class");
}

Vector LabelWindow::push(Label y) {
    if (y < 1 || y > n_classes())
        throw InputError("label " + std::to_string(y) + " outside 1.." + std::to_string(n_classes()));
    if (static_cast<int>(buffer_.size()) == capacity_) {
        --counts_[static_cast<std::size_t>(buffer_.front() - 1)];
        buffer_.pop_front();
    }
    buffer_.push_back(y);
    ++counts_[static_cast<std::size_t>(y - 1)];
    return probabilities();
}

Vector LabelWindow::probabilities() const {
    Vector p = Vector::Zero(n_classes());
    if (buffer_.empty()) return p;
    const double n = static_cast<double>(buffer_.size());
    for (int j = 0; j < n_classes(); ++j) p(j) = counts_[static_cast<std::size_t>(j)] / n;
    return p;
}

UncertaintyModel assemble_tau_lambda(const Vector& label_probs,
                                     std::span<const ComponentTracker> trackers,
                                     double lambda_floor) {
    const Index m = static_cast<Index>(trackers.size());
    UncertaintyModel u{Vector(m), Vector(m)};
    for (Index i = 0; i < m; ++i) {
        const ComponentTracker& tr = trackers[static_cast<std::size_t>(i)];
        if (tr.label < 1 || tr.label > label_probs.size())
            throw InputError("component label outside the probability vector");
        const double p = label_probs(tr.label - 1);
        const double g = tr.gamma();
        const double radicand = p * (g * g * (1.0 - p) + tr.sigma(0, 0));
        if (radicand < 0.0 || !std::isfinite(radicand))
            throw InternalError("negative confidence radicand for component " + std::to_string(i));
        u.tau(i) = p * g;
        u.lambda(i) = std::max(std::sqrt(radicand), lambda_floor);
    }
    return u;
}

MeanTracker::MeanTracker(int n_classes, Index d, TrackerConfig config)
    : config_(config),
      n_classes_(n_classes),
      d_(d),
      H_(transition_matrix(config.model)),
      window_(config.window, n_classes) {
    if (d <= 0) throw InputError("tracker needs a positive feature dimension");
    if (config.adapt_noise && !(config.forgetting > 0.0 && config.forgetting < 1.0))
        throw InputError("noise forgetting factor must lie in (0, 1)");
    components_.reserve(static_cast<std::size_t>(n_classes * d));
    for (int j = 1; j <= n_classes; ++j)
        for (Index r = 0; r < d; ++r) components_.push_back(ComponentTracker::initial(config_, j, r));
}

void MeanTracker::check_sample(const Vector& psi_prev, Label y_prev) const {
    if (psi_prev.size() != d_) throw InputError("tracker: Psi(x) has wrong dimension");
    if (y_prev < 1 || y_prev > n_classes_) throw InputError("tracker: label out of range");
}

void MeanTracker::adapt_noise(ComponentTracker& tracker, double innovation) {
    if (config_.adapt_noise)
        estimate_noise(tracker, H_, innovation, config_.forgetting, config_.noise_floor);
}

UncertaintyModel MeanTracker::step(const Vector& psi_prev, Label y_prev) {
    check_sample(psi_prev, y_prev);
    window_.push(y_prev);
    for (ComponentTracker& tr : components_) {
        if (tr.label != y_prev) {
            update_component(tr, H_, std::nullopt);
            continue;
        }
        const double obs = psi_prev(tr.feature);
        const double innovation = obs - tr.gamma();
        if (config_.noise_timing == NoiseTiming::before_update) adapt_noise(tr, innovation);
        update_component(tr, H_, obs);
        if (config_.noise_timing == NoiseTiming::after_update) adapt_noise(tr, innovation);
    }
    return current();
}

UncertaintyModel MeanTracker::step_unidimensional(const Vector& psi_prev, Label y_prev) {
    check_sample(psi_prev, y_prev);
    window_.push(y_prev);

    // Noise estimates first (when configured), then the gains they imply.
    std::vector<double> innovations(components_.size(), 0.0);
    for (std::size_t i = 0; i < components_.size(); ++i) {
        ComponentTracker& tr = components_[i];
        if (tr.label != y_prev) continue;
        innovations[i] = psi_prev(tr.feature) - tr.gamma();
        if (config_.noise_timing == NoiseTiming::before_update) adapt_noise(tr, innovations[i]);
    }
    Vector mean_gain = Vector::Zero(H_.rows());
    for (const ComponentTracker& tr : components_)
        if (tr.label == y_prev) mean_gain += observation_gain(tr, H_);
    mean_gain /= static_cast<double>(components_.size());

    for (std::size_t i = 0; i < components_.size(); ++i) {
        ComponentTracker& tr = components_[i];
        if (tr.label != y_prev) {
            update_component(tr, H_, std::nullopt);
            continue;
        }
        update_component_with_gain(tr, H_, psi_prev(tr.feature), mean_gain);
        if (config_.noise_timing == NoiseTiming::after_update) adapt_noise(tr, innovations[i]);
    }
    return current();
}

UncertaintyModel MeanTracker::current() const {
    return assemble_tau_lambda(window_.probabilities(), components_, config_.lambda_floor);
}

}  // namespace amrc
