#include "amrc/datagen.hpp"

#include <numbers>

namespace amrc {

Vector synthetic_class_mean(const SyntheticConfig& config, double t, Label y) {
    if (y < 1 || y > kSyntheticClasses) throw InputError("synthetic labels are 1 or 2");
    const double angle = std::numbers::pi * ((std::cos(config.omega * t) - 3.0) / 2.0 + y);
    Vector mean(2);
    mean << 4.0 * std::cos(angle), 4.0 * std::sin(angle);
    return mean;
}

Sample synth_step(const SyntheticConfig& config, std::int64_t t, std::mt19937_64& rng) {
    if (t < 1) throw InputError("synthetic time index starts at 1");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, config.noise_std);
    Sample s;
    s.y = unit(rng) < 0.5 ? 1 : 2;
    s.x = synthetic_class_mean(config, static_cast<double>(t), s.y);
    s.x(0) += noise(rng);
    s.x(1) += noise(rng);
    return s;
}

Sample synth_step(const SyntheticConfig& config, std::int64_t t) {
    const auto ut = static_cast<std::uint64_t>(t);
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(ut), static_cast<std::uint32_t>(ut >> 32)};
    std::mt19937_64 rng(seq);
    return synth_step(config, t, rng);
}

Vector true_tau(const SyntheticConfig& config, std::int64_t t, const FeatureMap& fm) {
    if (fm.instance_map().kind() != InstanceMapKind::linear)
        throw UnsupportedError("analytic mean vector requires the linear instance map");
    if (fm.n_classes() != kSyntheticClasses || fm.d() != kSyntheticDim)
        throw InputError("feature map does not match the synthetic stream");
    Vector tau(fm.m());
    for (Label y = 1; y <= kSyntheticClasses; ++y)
        tau.segment((y - 1) * fm.d(), fm.d()) = 0.5 * synthetic_class_mean(config, static_cast<double>(t), y);
    return tau;
}

double true_error(const SyntheticConfig& config, std::int64_t t, const ProbabilisticRule& rule,
                  int trials, std::mt19937_64& rng) {
    if (trials < 1) throw InputError("need at least one trial");
    double miss = 0.0;
    for (int i = 0; i < trials; ++i) {
        const Sample s = synth_step(config, t, rng);
        const Vector probs = rule(s.x);
        miss += 1.0 - probs(s.y - 1);
    }
    return miss / trials;
}

}  // namespace amrc
