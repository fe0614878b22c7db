#include "amrc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amrc {

namespace {

Vector sign(const Vector& v) {
    return v.unaryExpr([](double a) { return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); });
}

RowMax row_max(const Vector& values) {
    RowMax best{values(0), 0};
    for (Index i = 1; i < values.size(); ++i)
        if (values(i) > best.value) best = {values(i), i};
    return best;
}

void check_rows(const Matrix& F, const Vector& h, const Vector& mu) {
    if (F.rows() == 0) throw StateError("phi approximation has no rows");
    if (F.rows() != h.size()) throw InputError("F and h have different row counts");
    if (F.cols() != mu.size()) throw InputError("F columns do not match the parameter dimension");
}

}  // namespace

RowMax varphi_local(const Matrix& F, const Vector& h, const Vector& mu) {
    check_rows(F, h, mu);
    return row_max(F * mu - h);
}

double mrc_objective(const Vector& tau, const Vector& lambda, const Matrix& F, const Vector& h,
                     const Vector& mu) {
    return 1.0 - tau.dot(mu) + varphi_local(F, h, mu).value + lambda.dot(mu.cwiseAbs());
}

AsmStep asm_step(const Vector& mu, const Vector& mu_bar, const Vector& tau, const Vector& lambda,
                 const Matrix& F, const Vector& h, int l) {
    if (l < 1) throw InputError("iteration index starts at 1");
    const RowMax top = varphi_local(F, h, mu);
    const double a = std::pow(l + 1.0, -1.5);
    const double theta = 2.0 / (l + 1.0);
    const double theta_next = 2.0 / (l + 2.0);

    AsmStep step;
    step.used_row = top.row;
    step.mu_bar = mu + a * (tau - F.row(top.row).transpose() - lambda.cwiseProduct(sign(mu)));
    step.mu = step.mu_bar + theta_next * (1.0 / theta - 1.0) * (step.mu_bar - mu_bar);
    return step;
}

AsmRun run_asm(const Vector& mu0, const Vector& tau, const Vector& lambda, const Matrix& F,
               const Vector& h, int iterations) {
    if (iterations < 1) throw InputError("iteration count must be at least 1");
    check_rows(F, h, mu0);
    if (tau.size() != mu0.size() || lambda.size() != mu0.size())
        throw InputError("tau, lambda and mu must share a dimension");

    AsmRun run;
    run.used_rows.reserve(static_cast<std::size_t>(iterations));
    run.best_objective = std::numeric_limits<double>::infinity();

    Vector mu = mu0;
    Vector mu_bar = mu0;
    Vector scores(F.rows());
    for (int l = 1; l <= iterations; ++l) {
        scores.noalias() = F * mu;
        scores -= h;
        const RowMax top = row_max(scores);
        run.best_objective = std::min(run.best_objective,
                                      1.0 - tau.dot(mu) + top.value + lambda.dot(mu.cwiseAbs()));
        run.used_rows.push_back(top.row);

        const double a = std::pow(l + 1.0, -1.5);
        const double momentum = (2.0 / (l + 2.0)) * ((l + 1.0) / 2.0 - 1.0);
        Vector next_bar =
            mu + a * (tau - F.row(top.row).transpose() - lambda.cwiseProduct(sign(mu)));
        mu = next_bar + momentum * (next_bar - mu_bar);
        mu_bar = std::move(next_bar);
    }
    run.mu = std::move(mu);
    return run;
}

SubgradientCache trim_cache(const Matrix& F, const Vector& h, const std::vector<Index>& used_rows,
                            Index capacity) {
    std::vector<Index> keep;
    std::vector<bool> seen(static_cast<std::size_t>(F.rows()), false);
    auto same_as_kept = [&](Index i) {
        for (Index k : keep)
            if (h(k) == h(i) && F.row(k) == F.row(i)) return true;
        return false;
    };
    for (auto it = used_rows.rbegin(); it != used_rows.rend(); ++it) {
        if (static_cast<Index>(keep.size()) >= capacity) break;
        if (seen[static_cast<std::size_t>(*it)]) continue;
        seen[static_cast<std::size_t>(*it)] = true;
        // Exact duplicates collapse to their most recent use.
        if (same_as_kept(*it)) continue;
        keep.push_back(*it);
    }
    std::reverse(keep.begin(), keep.end());

    SubgradientCache out;
    out.capacity = capacity;
    out.F.resize(static_cast<Index>(keep.size()), F.cols());
    out.h.resize(static_cast<Index>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
        out.F.row(static_cast<Index>(r)) = F.row(keep[r]);
        out.h(static_cast<Index>(r)) = h(keep[r]);
    }
    return out;
}

ClassifierState optimize(const Vector& mu_prev, const UncertaintyModel& uncertainty,
                         const FeatureMap& fm, const Vector& psi_prev,
                         const SubgradientCache& cache, const OptimizerConfig& config) {
    if (config.iterations < 1) throw InputError("iteration count must be at least 1");
    if (config.cache_capacity < 1) throw InputError("cache capacity must be at least 1");
    if (mu_prev.size() != fm.m()) throw InputError("mu has wrong dimension");

    Matrix F = cache.rows() > 0 ? cache.F : Matrix(0, fm.m());
    Vector h = cache.h;
    fm.append_subset_rows(psi_prev, F, h, config.max_subset_size);

    AsmRun run = run_asm(mu_prev, uncertainty.tau, uncertainty.lambda, F, h, config.iterations);

    ClassifierState state;
    state.minimax_risk = mrc_objective(uncertainty.tau, uncertainty.lambda, F, h, run.mu);
    state.best_objective = std::min(run.best_objective, state.minimax_risk);
    state.working_rows = F.rows();
    state.cache = trim_cache(F, h, run.used_rows, config.cache_capacity);
    state.mu = std::move(run.mu);
    return state;
}

MinimaxSolution oracle_minimax(const Vector& tau_true, const Matrix& F_full, const Vector& h_full,
                               int iterations, const Vector& mu0) {
    const Vector start = mu0.size() == 0 ? Vector::Zero(tau_true.size()) : mu0;
    const Vector no_slack = Vector::Zero(tau_true.size());
    AsmRun run = run_asm(start, tau_true, no_slack, F_full, h_full, iterations);
    MinimaxSolution sol;
    sol.risk = mrc_objective(tau_true, no_slack, F_full, h_full, run.mu);
    sol.mu = std::move(run.mu);
    return sol;
}

}  // namespace amrc
