#pragma once

#include <vector>

#include "albama/time_series.hpp"

namespace albama {

// Filter values aligned with the input series. Entries where the window does
// not fit are reported through defined_mask (value 0.0, never read) instead
// of sentinel padding.
struct FilterOutput {
  std::vector<double> values;
  std::vector<bool> defined;

  std::size_t size() const { return values.size(); }
};

// Equal-weight trailing mean over k observations; defined from t = k-1.
FilterOutput ma_one_sided(const TimeSeries& y, int k);

// Centered equal-weight mean over 2k+1 observations (k on each side).
FilterOutput ma_two_sided(const TimeSeries& y, int k);

// Exponential moving average with alpha = 2/(k+1), EMA_0 = y_0.
FilterOutput ema(const TimeSeries& y, int k);

// Savitzky-Golay convolution weights: c_i for i = -(window-1)/2 ..
// (window-1)/2 reproducing p(0) for every polynomial p of degree <= order.
std::vector<double> sg_coefficients(int window, int order);

// Centered Savitzky-Golay smoother. Interior points use the convolution;
// near the boundaries the polynomial is refit on the available truncated
// window, so the output is defined everywhere.
FilterOutput sg_two_sided(const TimeSeries& y, int window, int order);

// Trailing-window Savitzky-Golay: least-squares polynomial on
// y[t-window+1..t] evaluated at the right endpoint; defined from t = window-1.
FilterOutput sg_one_sided(const TimeSeries& y, int window, int order);

namespace linalg {
// Gaussian elimination with partial pivoting on a row-major n x n system.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b);
}  // namespace linalg

}  // namespace albama
