#include "amrc/feature_map.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

namespace amrc {

InstanceMap InstanceMap::linear(Index input_dim) {
    if (input_dim <= 0) throw InputError("linear map: input dimension must be positive");
    InstanceMap map;
    map.kind_ = InstanceMapKind::linear;
    map.input_dim_ = input_dim;
    return map;
}

InstanceMap InstanceMap::rff(Index input_dim, Index rff_dim, double scale, std::uint64_t seed) {
    if (input_dim <= 0) throw InputError("rff map: input dimension must be positive");
    if (rff_dim <= 0) throw InputError("rff map: number of random features must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw InputError("rff map: scale must be positive");

    InstanceMap map;
    map.kind_ = InstanceMapKind::rff;
    map.input_dim_ = input_dim;
    map.scale_ = scale;
    map.seed_ = seed;
    map.directions_.resize(rff_dim, input_dim);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(scale));
    // Row-major fill so the draw order does not depend on Eigen's storage.
    for (Index i = 0; i < rff_dim; ++i)
        for (Index j = 0; j < input_dim; ++j) map.directions_(i, j) = normal(rng);
    return map;
}

Index InstanceMap::output_dim() const noexcept {
    return kind_ == InstanceMapKind::linear ? input_dim_ : 2 * directions_.rows();
}

Vector InstanceMap::operator()(const Vector& x) const {
    if (x.size() != input_dim_)
        throw InputError("instance has dimension " + std::to_string(x.size()) + ", expected " +
                         std::to_string(input_dim_));
    if (kind_ == InstanceMapKind::linear) return x;

    const Index D = directions_.rows();
    const Vector proj = directions_ * x;
    Vector out(2 * D);
    out.head(D) = proj.array().cos();
    out.tail(D) = proj.array().sin();
    return out;
}

double median_heuristic_scale(std::span<const Vector> instances, std::size_t max_points) {
    const std::size_t n = std::min(instances.size(), max_points);
    std::vector<double> dist;
    dist.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist.push_back((instances[i] - instances[j]).norm());
    if (dist.empty()) return 1.0;

    const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
    std::nth_element(dist.begin(), mid, dist.end());
    double median = *mid;
    if (dist.size() % 2 == 0) {
        const double lower = *std::max_element(dist.begin(), mid);
        median = 0.5 * (median + lower);
    }
    if (!(median > 0.0)) return 1.0;
    return 1.0 / (2.0 * median * median);
}

FeatureMap::FeatureMap(InstanceMap instance_map, int n_classes)
    : map_(std::move(instance_map)), n_classes_(n_classes), d_(map_.output_dim()) {
    if (n_classes < 2) throw InputError("feature map needs at least two classes");
    if (n_classes > 30) throw InputError("feature map supports at most 30 classes");
}

void FeatureMap::check_label(Label y) const {
    if (y < 1 || y > n_classes_)
        throw InputError("label " + std::to_string(y) + " outside 1.." + std::to_string(n_classes_));
}

Vector FeatureMap::phi(const Vector& x, Label y) const {
    check_label(y);
    Vector out = Vector::Zero(m());
    out.segment((y - 1) * d_, d_) = psi(x);
    return out;
}

SubsetRow FeatureMap::subset_row(const Vector& x, std::span<const Label> subset) const {
    if (subset.empty()) throw InputError("label subset must be nonempty");
    std::uint32_t mask = 0;
    for (Label y : subset) {
        check_label(y);
        mask |= 1u << (y - 1);
    }
    const int size = std::popcount(mask);
    const Vector p = psi(x);
    SubsetRow row{Vector::Zero(m()), 1.0 / size};
    for (int j = 0; j < n_classes_; ++j)
        if (mask & (1u << j)) row.f.segment(j * d_, d_) = p / size;
    return row;
}

Index FeatureMap::subset_row_count(int max_subset_size) const {
    const std::uint32_t full = (1u << n_classes_) - 1;
    if (max_subset_size <= 0 || max_subset_size >= n_classes_) return full;
    Index count = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask)
        if (std::popcount(mask) <= max_subset_size) ++count;
    return count;
}

void FeatureMap::append_subset_rows(const Vector& psi_x, Matrix& F, Vector& h,
                                    int max_subset_size) const {
    if (psi_x.size() != d_) throw InputError("append_subset_rows: Psi(x) has wrong dimension");
    if (F.rows() != h.size() || (F.rows() > 0 && F.cols() != m()))
        throw InputError("append_subset_rows: F and h are inconsistent");

    const Index added = subset_row_count(max_subset_size);
    const Index start = F.rows();
    F.conservativeResize(start + added, m());
    h.conservativeResize(start + added);

    const std::uint32_t full = (1u << n_classes_) - 1;
    Index r = start;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const int size = std::popcount(mask);
        if (max_subset_size > 0 && size > max_subset_size) continue;
        F.row(r).setZero();
        for (int j = 0; j < n_classes_; ++j)
            if (mask & (1u << j)) F.row(r).segment(j * d_, d_) = psi_x.transpose() / size;
        h(r) = 1.0 / size;
        ++r;
    }
}

Vector FeatureMap::label_scores(const Vector& psi_x, const Vector& mu) const {
    if (mu.size() != m()) throw InputError("parameter vector has wrong dimension");
    Vector scores(n_classes_);
    for (int j = 0; j < n_classes_; ++j) scores(j) = mu.segment(j * d_, d_).dot(psi_x);
    return scores;
}

}  // namespace amrc
