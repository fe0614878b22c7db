#pragma once

#include "amrc/common.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace amrc {

enum class InstanceMapKind { linear, rff };

/// Instance representation Psi: raw instance (dimension `input_dim`) to a
/// d-vector. Either the identity, or random Fourier features built from D
/// Gaussian directions u_1..u_D ~ N(0, scale * I):
///
///   Psi(x) = [cos(u_1'x), ..., cos(u_D'x), sin(u_1'x), ..., sin(u_D'x)]
///
/// The directions are drawn once at construction and never change.
class InstanceMap {
public:
    static InstanceMap linear(Index input_dim);
    static InstanceMap rff(Index input_dim, Index rff_dim, double scale, std::uint64_t seed);

    InstanceMapKind kind() const noexcept { return kind_; }
    Index input_dim() const noexcept { return input_dim_; }
    Index output_dim() const noexcept;
    Index rff_dim() const noexcept { return directions_.rows(); }
    double rff_scale() const noexcept { return scale_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// D x input_dim matrix whose rows are the random directions (empty for linear).
    const Matrix& rff_vectors() const noexcept { return directions_; }

    Vector operator()(const Vector& x) const;

private:
    InstanceMap() = default;

    InstanceMapKind kind_ = InstanceMapKind::linear;
    Index input_dim_ = 0;
    double scale_ = 0.0;
    std::uint64_t seed_ = 0;
    Matrix directions_;
};

/// Median-distance default for the RFF scale: 1 / (2 s^2) with s the median
/// pairwise Euclidean distance among the first min(max_points, n) instances.
/// Falls back to 1 when fewer than two instances or all distances vanish.
double median_heuristic_scale(std::span<const Vector> instances, std::size_t max_points = 50);

/// One (instance, label subset) affine piece of phi: value f'mu - h.
struct SubsetRow {
    Vector f;
    double h = 0.0;
};

/// Feature mapping Phi(x, y) = e_y (x) Psi(x) with block layout: the block of
/// label j (1-based) occupies entries [(j-1) d, j d).
class FeatureMap {
public:
    FeatureMap(InstanceMap instance_map, int n_classes);

    const InstanceMap& instance_map() const noexcept { return map_; }
    int n_classes() const noexcept { return n_classes_; }
    Index d() const noexcept { return d_; }
    Index m() const noexcept { return d_ * n_classes_; }

    Vector psi(const Vector& x) const { return map_(x); }
    Vector phi(const Vector& x, Label y) const;
    SubsetRow subset_row(const Vector& x, std::span<const Label> subset) const;

    /// Appends one row per nonempty subset of labels (ordered by bitmask,
    /// optionally restricted to |C| <= max_subset_size when that is > 0).
    void append_subset_rows(const Vector& psi_x, Matrix& F, Vector& h,
                            int max_subset_size = 0) const;

    /// Number of rows append_subset_rows adds.
    Index subset_row_count(int max_subset_size = 0) const;

    /// Phi(x, y)' mu for every label, from a precomputed Psi(x).
    Vector label_scores(const Vector& psi_x, const Vector& mu) const;

private:
    void check_label(Label y) const;

    InstanceMap map_;
    int n_classes_;
    Index d_;
};

}  // namespace amrc
