#pragma once

#include "amrc/common.hpp"

#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace amrc {

/// Kinematic state model of order k: the state stacks a quantity and its
/// first k time derivatives.
struct KinematicModel {
    int order = 1;
    double dt = 1.0;
};

/// (k+1)x(k+1) unit upper-triangular transition matrix with dt^s / s! on the
/// s-th upper diagonal.
Matrix transition_matrix(const KinematicModel& model);

enum class NoiseTiming { before_update, after_update };

struct TrackerConfig {
    KinematicModel model;
    int window = 200;
    double initial_variance = 1.0;          // Sigma_0 = initial_variance * I
    double initial_process_noise = 0.01;    // Q_0 = initial_process_noise * I
    double initial_observation_noise = 1.0; // r^2_0
    bool adapt_noise = true;
    double forgetting = 0.3;  // rho in (0, 1)
    double noise_floor = 1e-8;
    NoiseTiming noise_timing = NoiseTiming::before_update;
    double lambda_floor = 0.0;
};

/// Kalman state for one mean-vector component (label j, feature r).
struct ComponentTracker {
    Vector eta;    // [gamma, gamma', ..., gamma^(k)]
    Matrix sigma;  // MSE matrix of eta
    Matrix q;      // process-noise covariance
    double r2 = 1.0;
    int label = 1;    // 1-based
    Index feature = 0;  // 0-based position inside the label block

    static ComponentTracker initial(const TrackerConfig& config, int label, Index feature);

    double gamma() const { return eta(0); }
    double variance() const { return sigma(0, 0); }
};

/// Gain H Sigma e1 / (e1' Sigma e1 + r^2) for an observation step.
Vector observation_gain(const ComponentTracker& tracker, const Matrix& H);

/// One recursion of the tracker. With an observation the gain is
/// observation_gain(); without one the gain is zero and this reduces to
/// eta <- H eta, Sigma <- H Sigma H' + Q.
void update_component(ComponentTracker& tracker, const Matrix& H,
                      std::optional<double> observation);

/// Same recursion with a caller-supplied gain (used by the scalar-rate variant).
void update_component_with_gain(ComponentTracker& tracker, const Matrix& H,
                                std::optional<double> observation, const Vector& gain);

/// Residual-based forgetting-factor estimate of r^2 and Q from the innovation
/// d = observation - gamma:
///   r^2 <- rho r^2 + (1 - rho) max(d^2 - Sigma_11, floor)
///   Q   <- rho Q + (1 - rho) (g d)(g d)'
/// where g is the observation gain at the current state.
void estimate_noise(ComponentTracker& tracker, const Matrix& H, double innovation,
                    double forgetting, double floor);

/// Ring buffer of the most recent labels.
class LabelWindow {
public:
    LabelWindow(int capacity, int n_classes);

    /// Pushes a label (evicting the oldest when full) and returns the
    /// updated probabilities.
    Vector push(Label y);

    /// count(j) / current length; all zero while empty.
    Vector probabilities() const;

    std::size_t size() const noexcept { return buffer_.size(); }
    int capacity() const noexcept { return capacity_; }
    int n_classes() const noexcept { return static_cast<int>(counts_.size()); }

private:
    int capacity_;
    std::deque<Label> buffer_;
    std::vector<int> counts_;
};

/// Mean estimate tau and confidence lambda defining the uncertainty set.
struct UncertaintyModel {
    Vector tau;
    Vector lambda;
};

/// tau_i = p_j gamma_i and lambda_i = sqrt(p_j (gamma_i^2 (1 - p_j) + Sigma_i,11)),
/// floored at lambda_floor.
UncertaintyModel assemble_tau_lambda(const Vector& label_probs,
                                     std::span<const ComponentTracker> trackers,
                                     double lambda_floor = 0.0);

/// Tracks every component of the mean vector for a one-hot feature mapping
/// with `n_classes` blocks of `d` instance features.
class MeanTracker {
public:
    MeanTracker(int n_classes, Index d, TrackerConfig config = {});

    /// Incorporates the latest revealed pair, given as (Psi(x), y), and
    /// returns the new uncertainty set. Each component has its own gain.
    UncertaintyModel step(const Vector& psi_prev, Label y_prev);

    /// Scalar-rate variant: every observed component uses the average of
    /// the m per-component gains (unobserved ones contribute zero).
    UncertaintyModel step_unidimensional(const Vector& psi_prev, Label y_prev);

    /// Uncertainty set for the current state without consuming a sample.
    UncertaintyModel current() const;

    const std::vector<ComponentTracker>& components() const noexcept { return components_; }
    const LabelWindow& labels() const noexcept { return window_; }
    const TrackerConfig& config() const noexcept { return config_; }
    const Matrix& transition() const noexcept { return H_; }
    int n_classes() const noexcept { return n_classes_; }
    Index d() const noexcept { return d_; }
    Index m() const noexcept { return d_ * n_classes_; }

private:
    void check_sample(const Vector& psi_prev, Label y_prev) const;
    void adapt_noise(ComponentTracker& tracker, double innovation);

    TrackerConfig config_;
    int n_classes_;
    Index d_;
    Matrix H_;
    LabelWindow window_;
    std::vector<ComponentTracker> components_;
};

}  // namespace amrc
