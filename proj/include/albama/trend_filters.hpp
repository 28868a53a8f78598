#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "albama/time_series.hpp"

namespace albama {

// Hodrick-Prescott smoother: solves (I + lambda D'D) x = y with the order-2
// difference operator via a banded Cholesky factorization.
std::vector<double> hp_smooth(const TimeSeries& y, double lambda);

struct BoostedHpResult {
  std::vector<double> trend;
  int m_stop = 0;                // iterations actually used
  std::vector<double> bic_path;  // BIC per executed iteration (1-based m)
};

// Iterated HP filter: f_m = f_{m-1} + S(y - f_{m-1}), i.e. B_m = I-(I-S)^m.
// Stops at the first m where BIC(m) > BIC(m-1) and returns f_{m-1}; runs to
// max_iter otherwise. BIC(m) = ln(SSR_m/T) + tr(B_m) ln(T)/T, with tr(B_m)
// accumulated from banded solves against the identity columns.
BoostedHpResult boosted_hp(const TimeSeries& y, double lambda, int max_iter,
                           bool early_stop = true);

struct L1TrendResult {
  std::vector<double> trend;
  double lambda = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
};

// l1 trend filtering: argmin 0.5||y - x||^2 + lambda ||D x||_1 with the
// order-`diff_order` difference operator, solved by ADMM on the split
// z = D x (banded x-solve, soft-threshold z-update, dual ascent). The step
// parameter starts at 1.0 and is rebalanced when the primal and dual
// residuals drift apart; once the threshold support stabilizes, an
// equality-constrained polish solves the identified pattern exactly and
// accepts it when its own KKT check passes. Convergence means both residual
// norms fall below 1e-8 * max(1, ||y||) (or an accepted polish);
// non-convergence is reported via the flag.
// `objective_path`, when given, records the objective at each iteration.
L1TrendResult l1_trend_filter(const TimeSeries& y, double lambda,
                              int diff_order = 4,
                              std::vector<double>* objective_path = nullptr);

struct KktCheck {
  double max_abs_multiplier = 0.0;    // ||u||_inf of the least-norm multiplier
  double stationarity_residual = 0.0; // ||D'u - (y - trend)||_inf
};

// Recovers the dual multiplier u from y - trend = D'u by a least-squares
// solve against DD'. An optimal trend has a small stationarity residual and
// ||u||_inf <= lambda.
KktCheck l1_kkt_certificate(const TimeSeries& y,
                            std::span<const double> trend, int diff_order);

// Hold-out cross-validation for the l1 penalty: every fifth observation is
// removed (its fidelity weight set to zero), the trend is refit, and the
// held-out points are predicted by linear interpolation between the fitted
// trend at their observed neighbors. Returns the grid value with the lowest
// mean squared error; near-ties go to the larger (smoother) lambda.
double select_lambda_cv(const TimeSeries& y, int diff_order,
                        std::span<const double> grid);

// z-update of the ADMM iteration, kept visible for unit testing.
inline double soft_threshold(double v, double k) {
  if (v > k) return v - k;
  if (v < -k) return v + k;
  return 0.0;
}

}  // namespace albama
