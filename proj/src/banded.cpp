#include "albama/banded.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "albama/error.hpp"

namespace albama::linalg {

DifferenceOperator::DifferenceOperator(int order, int n)
    : order_(order), n_(n) {
  if (order < 1) throw Error(ErrorKind::bad_param, "difference order must be >= 1");
  if (n <= order)
    throw Error(ErrorKind::too_short,
                "series must be longer than the difference order");
  // Pascal triangle row with alternating signs.
  stencil_.assign(static_cast<std::size_t>(order) + 1, 0.0);
  stencil_[0] = 1.0;
  for (int r = 1; r <= order; ++r) {
    for (int j = r; j > 0; --j) stencil_[j] -= stencil_[j - 1];
  }
  // The recurrence above builds (1-x)^order coefficients: 1, -order, ...
}

std::vector<double> DifferenceOperator::apply(std::span<const double> x) const {
  std::vector<double> out(static_cast<std::size_t>(rows()), 0.0);
  for (int i = 0; i < rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j <= order_; ++j)
      acc += stencil_[static_cast<std::size_t>(j)] *
             x[static_cast<std::size_t>(i + j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

std::vector<double> DifferenceOperator::apply_transpose(
    std::span<const double> v) const {
  std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < rows(); ++i) {
    for (int j = 0; j <= order_; ++j)
      out[static_cast<std::size_t>(i + j)] +=
          stencil_[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<std::vector<double>> DifferenceOperator::gram_bands() const {
  std::vector<std::vector<double>> bands(static_cast<std::size_t>(order_) + 1);
  for (int d = 0; d <= order_; ++d)
    bands[static_cast<std::size_t>(d)].assign(
        static_cast<std::size_t>(n_ - d), 0.0);
  // (D'D)(a, a+d) = sum_i D(i,a) D(i,a+d); row i touches column a iff
  // a-order <= i <= a, clipped to valid rows.
  for (int a = 0; a < n_; ++a) {
    for (int d = 0; d <= order_ && a + d < n_; ++d) {
      double acc = 0.0;
      const int i_lo = std::max(0, std::max(a - order_, a + d - order_));
      const int i_hi = std::min(rows() - 1, a);
      for (int i = i_lo; i <= i_hi; ++i)
        acc += stencil_[static_cast<std::size_t>(a - i)] *
               stencil_[static_cast<std::size_t>(a + d - i)];
      bands[static_cast<std::size_t>(d)][static_cast<std::size_t>(a)] = acc;
    }
  }
  return bands;
}

std::vector<std::vector<double>> DifferenceOperator::outer_gram_bands() const {
  // (DD')(r, r+d) = sum_m s_m s_{m-d}: the stencil autocorrelation, the same
  // for every interior row because rows of D are shifted copies.
  std::vector<std::vector<double>> bands(static_cast<std::size_t>(order_) + 1);
  for (int d = 0; d <= order_; ++d) {
    double acc = 0.0;
    for (int m = d; m <= order_; ++m)
      acc += stencil_[static_cast<std::size_t>(m)] *
             stencil_[static_cast<std::size_t>(m - d)];
    bands[static_cast<std::size_t>(d)].assign(
        static_cast<std::size_t>(rows() - d), acc);
  }
  return bands;
}

BandCholesky::BandCholesky(const std::vector<std::vector<double>>& bands) {
  if (bands.empty()) throw Error(ErrorKind::bad_param, "empty band matrix");
  n_ = static_cast<int>(bands[0].size());
  bw_ = static_cast<int>(bands.size()) - 1;
  low_.assign(static_cast<std::size_t>(bw_) + 1,
              std::vector<double>(static_cast<std::size_t>(n_), 0.0));

  // Column-by-column band Cholesky: L(j,j) first, then the column below it.
  for (int j = 0; j < n_; ++j) {
    double diag = bands[0][static_cast<std::size_t>(j)];
    for (int d = 1; d <= bw_ && j - d >= 0; ++d) {
      const double ljd = low_[static_cast<std::size_t>(d)]
                             [static_cast<std::size_t>(j)];
      diag -= ljd * ljd;
    }
    if (!(diag > 0.0))
      throw Error(ErrorKind::bad_param,
                  "band matrix is not positive definite");
    const double ljj = std::sqrt(diag);
    low_[0][static_cast<std::size_t>(j)] = ljj;

    for (int i = j + 1; i <= j + bw_ && i < n_; ++i) {
      const int d = i - j;
      double acc = bands[static_cast<std::size_t>(d)]
                        [static_cast<std::size_t>(j)];  // A(j, i) = A(i, j)
      // sum_k L(i,k) L(j,k) over k < j within both bands
      for (int k = std::max(0, i - bw_); k < j; ++k) {
        acc -= low_[static_cast<std::size_t>(i - k)]
                   [static_cast<std::size_t>(i)] *
               low_[static_cast<std::size_t>(j - k)]
                   [static_cast<std::size_t>(j)];
      }
      low_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)] =
          acc / ljj;
    }
  }
}

void BandCholesky::solve_in_place(std::span<double> x) const {
  // L z = b
  for (int i = 0; i < n_; ++i) {
    double acc = x[static_cast<std::size_t>(i)];
    for (int d = 1; d <= bw_ && i - d >= 0; ++d)
      acc -= low_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)] *
             x[static_cast<std::size_t>(i - d)];
    x[static_cast<std::size_t>(i)] = acc / low_[0][static_cast<std::size_t>(i)];
  }
  // L' x = z
  for (int i = n_ - 1; i >= 0; --i) {
    double acc = x[static_cast<std::size_t>(i)];
    for (int d = 1; d <= bw_ && i + d < n_; ++d)
      acc -= low_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i + d)] *
             x[static_cast<std::size_t>(i + d)];
    x[static_cast<std::size_t>(i)] = acc / low_[0][static_cast<std::size_t>(i)];
  }
}

std::vector<double> BandCholesky::solve(std::vector<double> b) const {
  solve_in_place(b);
  return b;
}

}  // namespace albama::linalg
