#include "amrc/guarantees.hpp"

#include <cmath>
#include <numeric>

namespace amrc {

namespace {

void check_dims(const Vector& a, const Vector& b, const Vector& c, const Vector& d) {
    if (a.size() != b.size() || a.size() != c.size() || a.size() != d.size())
        throw InputError("bound arguments must share a dimension");
}

}  // namespace

bool lambda_covers(const Vector& tau_true, const Vector& tau_hat, const Vector& lambda) {
    return ((tau_true - tau_hat).cwiseAbs().array() <= lambda.array()).all();
}

double alpha_bound(const Vector& tau_true, const Vector& tau_hat, const Vector& lambda,
                   const Vector& mu) {
    check_dims(tau_true, tau_hat, lambda, mu);
    if (lambda_covers(tau_true, tau_hat, lambda)) return 0.0;
    const double excess = ((tau_true - tau_hat).cwiseAbs() - lambda).lpNorm<Eigen::Infinity>();
    return excess * mu.lpNorm<1>();
}

double beta_bound(const Vector& tau_true, const Vector& tau_hat, const Vector& lambda,
                  const Vector& mu, const Vector& mu_inf) {
    check_dims(tau_true, tau_hat, lambda, mu);
    if (mu_inf.size() != mu.size()) throw InputError("bound arguments must share a dimension");
    const double lambda_inf = lambda.size() ? lambda.lpNorm<Eigen::Infinity>() : 0.0;
    if (lambda_covers(tau_true, tau_hat, lambda)) return 2.0 * lambda_inf * mu_inf.lpNorm<1>();
    const double err_inf = (tau_true - tau_hat).lpNorm<Eigen::Infinity>();
    return (err_inf + lambda_inf) * (mu_inf - mu).lpNorm<1>();
}

double azuma_slack(std::size_t steps, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
    return std::sqrt(2.0 * static_cast<double>(steps) * std::log(1.0 / delta));
}

double mistake_bound(std::span<const double> risks, double delta) {
    if (risks.empty()) throw InputError("mistake bound needs at least one step");
    const double slack = azuma_slack(risks.size(), delta);
    return std::accumulate(risks.begin(), risks.end(), 0.0) + slack;
}

double mistake_bound_per_step(std::span<const double> risks, double delta) {
    return mistake_bound(risks, delta) / static_cast<double>(risks.size());
}

}  // namespace amrc
