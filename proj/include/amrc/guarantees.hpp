#pragma once

#include "amrc/common.hpp"

#include <span>

namespace amrc {

/// Excess of the instantaneous error bound over the minimax risk:
/// || |tau - tau_hat| - lambda ||_inf * ||mu||_1, and 0 when lambda already
/// covers the estimation error componentwise.
double alpha_bound(const Vector& tau_true, const Vector& tau_hat, const Vector& lambda,
                   const Vector& mu);

/// Gap to the optimal minimax risk. General case:
/// (||tau - tau_hat||_inf + ||lambda||_inf) * ||mu_inf - mu||_1.
/// When lambda covers the estimation error: 2 ||lambda||_inf ||mu_inf||_1.
double beta_bound(const Vector& tau_true, const Vector& tau_hat, const Vector& lambda,
                  const Vector& mu, const Vector& mu_inf);

/// True when lambda >= |tau_true - tau_hat| componentwise.
bool lambda_covers(const Vector& tau_true, const Vector& tau_hat, const Vector& lambda);

/// Accumulated-mistake bound holding with probability at least 1 - delta:
/// sum_t R_t + sqrt(2 T log(1/delta)).
double mistake_bound(std::span<const double> risks, double delta);

/// mistake_bound / T.
double mistake_bound_per_step(std::span<const double> risks, double delta);

/// Azuma slack sqrt(2 T log(1/delta)) alone.
double azuma_slack(std::size_t steps, double delta);

}  // namespace amrc
