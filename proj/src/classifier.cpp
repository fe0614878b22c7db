#include "amrc/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>

namespace amrc {

PredictionDistribution predict_probs_psi(const FeatureMap& fm, const Vector& mu,
                                         const SubgradientCache& cache, const Vector& psi_x) {
    const Vector scores = fm.label_scores(psi_x, mu);
    const int n = fm.n_classes();

    // Subset rows of x only depend on the label scores: mean over C minus 1/|C|.
    double varphi = cache.rows() > 0 ? varphi_local(cache.F, cache.h, mu).value
                                     : -std::numeric_limits<double>::infinity();
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const int size = std::popcount(mask);
        double sum = 0.0;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) sum += scores(j);
        varphi = std::max(varphi, (sum - 1.0) / size);
    }

    PredictionDistribution dist;
    dist.varphi = varphi;
    dist.probs = (scores.array() - varphi).cwiseMax(0.0).matrix();
    dist.normalizer = dist.probs.sum();
    if (dist.normalizer == 0.0)
        dist.probs.setConstant(1.0 / n);
    else
        dist.probs /= dist.normalizer;
    return dist;
}

PredictionDistribution predict_probs(const FeatureMap& fm, const Vector& mu,
                                     const SubgradientCache& cache, const Vector& x) {
    return predict_probs_psi(fm, mu, cache, fm.psi(x));
}

Label predict_deterministic_psi(const FeatureMap& fm, const Vector& mu, const Vector& psi_x) {
    const Vector scores = fm.label_scores(psi_x, mu);
    Index best = 0;
    for (Index j = 1; j < scores.size(); ++j)
        if (scores(j) > scores(best)) best = j;
    return static_cast<Label>(best + 1);
}

Label predict_deterministic(const FeatureMap& fm, const Vector& mu, const Vector& x) {
    return predict_deterministic_psi(fm, mu, fm.psi(x));
}

Label sample_label(const PredictionDistribution& dist, std::mt19937_64& rng) {
    if (dist.probs.size() == 0) throw InputError("empty distribution");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    double acc = 0.0;
    Index last_positive = 0;
    for (Index j = 0; j < dist.probs.size(); ++j) {
        if (dist.probs(j) <= 0.0) continue;
        last_positive = j;
        acc += dist.probs(j);
        if (u < acc) return static_cast<Label>(j + 1);
    }
    return static_cast<Label>(last_positive + 1);
}

}  // namespace amrc
