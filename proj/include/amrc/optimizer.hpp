#pragma once

#include "amrc/common.hpp"
#include "amrc/feature_map.hpp"
#include "amrc/tracker.hpp"

#include <vector>

namespace amrc {

/// Rows (f_i', h_i) of the local polyhedral approximation
/// phi(mu) ~= max_i { f_i' mu - h_i }.
struct SubgradientCache {
    Matrix F;
    Vector h;
    Index capacity = 100;

    Index rows() const noexcept { return F.rows(); }
    bool empty() const noexcept { return F.rows() == 0; }
};

struct RowMax {
    double value = 0.0;
    Index row = 0;  // first row attaining the max
};

/// max_i (F mu - h)_i and the first index attaining it. Throws StateError when F is empty.
RowMax varphi_local(const Matrix& F, const Vector& h, const Vector& mu);

/// 1 - tau' mu + max(F mu - h) + lambda' |mu|.
double mrc_objective(const Vector& tau, const Vector& lambda, const Matrix& F, const Vector& h,
                     const Vector& mu);

struct AsmStep {
    Vector mu_bar;  // mu_bar^(l+1)
    Vector mu;      // mu^(l+1)
    Index used_row = 0;
};

/// One accelerated subgradient iteration (l >= 1) with step a_l = (l+1)^(-3/2)
/// and extrapolation weight theta_{l+1} (1/theta_l - 1), theta_l = 2/(l+1).
AsmStep asm_step(const Vector& mu, const Vector& mu_bar, const Vector& tau, const Vector& lambda,
                 const Matrix& F, const Vector& h, int l);

struct AsmRun {
    Vector mu;                     // final iterate mu^(K+1)
    double best_objective = 0.0;   // best objective over iterates seen (diagnostic)
    std::vector<Index> used_rows;  // argmax row of each iteration, in order
};

/// K iterations started at mu_bar^(1) = mu^(1) = mu0.
AsmRun run_asm(const Vector& mu0, const Vector& tau, const Vector& lambda, const Matrix& F,
               const Vector& h, int iterations);

struct OptimizerConfig {
    int iterations = 2000;   // K
    Index cache_capacity = 100;  // N
    int max_subset_size = 0;  // 0: all nonempty subsets
};

struct ClassifierState {
    Vector mu;
    double minimax_risk = 0.0;
    SubgradientCache cache;
    double best_objective = 0.0;
    Index working_rows = 0;  // rows of (F, h) during the step
};

/// Learning step for mu_t: appends the subset rows of x_prev to the cached
/// rows, runs the subgradient method warm-started at mu_prev, evaluates the
/// minimax risk on the working rows, and keeps the N most recently used rows
/// (duplicates collapsed to their latest use) as the next cache.
ClassifierState optimize(const Vector& mu_prev, const UncertaintyModel& uncertainty,
                         const FeatureMap& fm, const Vector& psi_prev,
                         const SubgradientCache& cache, const OptimizerConfig& config);

/// N most recently used distinct rows, in order of last use.
SubgradientCache trim_cache(const Matrix& F, const Vector& h, const std::vector<Index>& used_rows,
                            Index capacity);

struct MinimaxSolution {
    Vector mu;
    double risk = 0.0;
};

/// Minimax rule for an exactly known mean vector (lambda = 0) over a fixed
/// row pool: same subgradient method with a large iteration count.
MinimaxSolution oracle_minimax(const Vector& tau_true, const Matrix& F_full, const Vector& h_full,
                               int iterations, const Vector& mu0 = Vector());

}  // namespace amrc
