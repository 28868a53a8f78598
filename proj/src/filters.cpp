#include "albama/filters.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "albama/error.hpp"

namespace albama {

namespace linalg {

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n)
    throw Error(ErrorKind::bad_param, "solve_dense: shape mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (a[pivot * n + col] == 0.0)
      throw Error(ErrorKind::bad_param, "solve_dense: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c)
        std::swap(a[pivot * n + c], a[col * n + c]);
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ri = n; ri-- > 0;) {
    double acc = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) acc -= a[ri * n + c] * x[c];
    x[ri] = acc / a[ri * n + ri];
  }
  return x;
}

}  // namespace linalg

namespace {

// Least-squares polynomial of degree `order` over abscissae `xs` / data `ys`,
// evaluated at x = 0. Shared by the SG boundary refits and the one-sided SG.
double polyfit_at_zero(std::span<const double> xs, std::span<const double> ys,
                       int order) {
  // With fewer points than coefficients the normal equations go singular;
  // drop the degree to what the points can support.
  const int degree =
      std::min<int>(order, static_cast<int>(xs.size()) - 1);
  const std::size_t m = static_cast<std::size_t>(degree) + 1;
  std::vector<double> gram(m * m, 0.0), rhs(m, 0.0);
  for (std::size_t p = 0; p < xs.size(); ++p) {
    std::vector<double> powers(2 * m - 1);
    powers[0] = 1.0;
    for (std::size_t j = 1; j < 2 * m - 1; ++j) powers[j] = powers[j - 1] * xs[p];
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) gram[r * m + c] += powers[r + c];
      rhs[r] += powers[r] * ys[p];
    }
  }
  const std::vector<double> beta = linalg::solve_dense(std::move(gram), rhs);
  return beta[0];
}

}  // namespace

FilterOutput ma_one_sided(const TimeSeries& y, int k) {
  const std::size_t n = y.size();
  if (k < 1) throw Error(ErrorKind::bad_param, "ma_one_sided: k must be >= 1");
  if (static_cast<std::size_t>(k) > n)
    throw Error(ErrorKind::bad_param, "ma_one_sided: k exceeds series length");
  FilterOutput out{std::vector<double>(n, 0.0), std::vector<bool>(n, false)};
  for (std::size_t t = static_cast<std::size_t>(k) - 1; t < n; ++t) {
    double sum = 0.0;
    for (int i = 0; i < k; ++i) sum += y.value(t - static_cast<std::size_t>(i));
    out.values[t] = sum / static_cast<double>(k);
    out.defined[t] = true;
  }
  return out;
}

FilterOutput ma_two_sided(const TimeSeries& y, int k) {
  const std::size_t n = y.size();
  if (k < 0) throw Error(ErrorKind::bad_param, "ma_two_sided: k must be >= 0");
  const std::size_t width = 2 * static_cast<std::size_t>(k) + 1;
  if (width > n)
    throw Error(ErrorKind::bad_param,
                "ma_two_sided: window 2k+1 exceeds series length");
  FilterOutput out{std::vector<double>(n, 0.0), std::vector<bool>(n, false)};
  for (std::size_t t = static_cast<std::size_t>(k);
       t + static_cast<std::size_t>(k) < n; ++t) {
    double sum = 0.0;
    for (int i = -k; i <= k; ++i)
      sum += y.value(static_cast<std::size_t>(static_cast<std::int64_t>(t) + i));
    out.values[t] = sum / static_cast<double>(width);
    out.defined[t] = true;
  }
  return out;
}

FilterOutput ema(const TimeSeries& y, int k) {
  if (k < 1) throw Error(ErrorKind::bad_param, "ema: k must be >= 1");
  const double alpha = 2.0 / (static_cast<double>(k) + 1.0);
  const std::size_t n = y.size();
  FilterOutput out{std::vector<double>(n, 0.0), std::vector<bool>(n, true)};
  out.values[0] = y.value(0);
  for (std::size_t t = 1; t < n; ++t)
    out.values[t] = alpha * y.value(t) + (1.0 - alpha) * out.values[t - 1];
  return out;
}

std::vector<double> sg_coefficients(int window, int order) {
  if (window < 1 || window % 2 == 0)
    throw Error(ErrorKind::bad_param, "sg_coefficients: window must be odd");
  if (order < 0 || order >= window)
    throw Error(ErrorKind::bad_param,
                "sg_coefficients: order must satisfy 0 <= order < window");
  const int half = (window - 1) / 2;
  const std::size_t m = static_cast<std::size_t>(order) + 1;

  // Normal equations on the integer design i = -half..half; the weight for
  // position i is the fitted value at 0 when y is the unit vector at i,
  // i.e. c_i = sum_j beta_j i^j with G beta = e_0.
  std::vector<double> gram(m * m, 0.0);
  for (int i = -half; i <= half; ++i) {
    std::vector<double> powers(2 * m - 1);
    powers[0] = 1.0;
    for (std::size_t j = 1; j < 2 * m - 1; ++j)
      powers[j] = powers[j - 1] * static_cast<double>(i);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) gram[r * m + c] += powers[r + c];
  }
  std::vector<double> rhs(m, 0.0);
  rhs[0] = 1.0;
  const std::vector<double> beta = linalg::solve_dense(std::move(gram), rhs);

  std::vector<double> coeffs(static_cast<std::size_t>(window));
  for (int i = -half; i <= half; ++i) {
    double acc = 0.0, power = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += beta[j] * power;
      power *= static_cast<double>(i);
    }
    coeffs[static_cast<std::size_t>(i + half)] = acc;
  }
  return coeffs;
}

FilterOutput sg_two_sided(const TimeSeries& y, int window, int order) {
  const std::size_t n = y.size();
  if (static_cast<std::size_t>(window) > n)
    throw Error(ErrorKind::bad_param, "sg_two_sided: window exceeds length");
  const std::vector<double> coeffs = sg_coefficients(window, order);
  const int half = (window - 1) / 2;

  FilterOutput out{std::vector<double>(n, 0.0), std::vector<bool>(n, true)};
  for (std::size_t t = 0; t < n; ++t) {
    const std::int64_t ti = static_cast<std::int64_t>(t);
    if (ti >= half && ti + half < static_cast<std::int64_t>(n)) {
      double acc = 0.0;
      for (int i = -half; i <= half; ++i)
        acc += coeffs[static_cast<std::size_t>(i + half)] *
               y.value(static_cast<std::size_t>(ti + i));
      out.values[t] = acc;
    } else {
      // Truncated-window refit at the boundary: same degree, fewer points.
      std::vector<double> xs, ys;
      for (std::int64_t s = std::max<std::int64_t>(0, ti - half);
           s <= std::min<std::int64_t>(static_cast<std::int64_t>(n) - 1,
                                       ti + half);
           ++s) {
        xs.push_back(static_cast<double>(s - ti));
        ys.push_back(y.value(static_cast<std::size_t>(s)));
      }
      out.values[t] = polyfit_at_zero(xs, ys, order);
    }
  }
  return out;
}

FilterOutput sg_one_sided(const TimeSeries& y, int window, int order) {
  const std::size_t n = y.size();
  if (window < 1) throw Error(ErrorKind::bad_param, "sg_one_sided: window < 1");
  if (static_cast<std::size_t>(window) > n)
    throw Error(ErrorKind::bad_param, "sg_one_sided: window exceeds length");
  if (order < 0 || order >= window)
    throw Error(ErrorKind::bad_param,
                "sg_one_sided: order must satisfy 0 <= order < window");

  // Endpoint-evaluation weights for the trailing design i = -(window-1)..0.
  std::vector<double> xs(static_cast<std::size_t>(window));
  for (int i = 0; i < window; ++i)
    xs[static_cast<std::size_t>(i)] = static_cast<double>(i - (window - 1));

  FilterOutput out{std::vector<double>(n, 0.0), std::vector<bool>(n, false)};
  std::vector<double> ys(static_cast<std::size_t>(window));
  for (std::size_t t = static_cast<std::size_t>(window) - 1; t < n; ++t) {
    for (int i = 0; i < window; ++i)
      ys[static_cast<std::size_t>(i)] =
          y.value(t - static_cast<std::size_t>(window - 1 - i));
    out.values[t] = polyfit_at_zero(xs, ys, order);
    out.defined[t] = true;
  }
  return out;
}

}  // namespace albama
